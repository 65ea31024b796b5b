// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lilguard/campaign.hpp"
#include "lilguard/entropy.hpp"
#include "lilguard/error.hpp"
#include "lilguard/guardian.hpp"
#include "lilguard/lz77.hpp"

#ifndef LILGUARD_DEFAULT_CORPUS
#define LILGUARD_DEFAULT_CORPUS "data/countdown.txt"
#endif

namespace lilguard::cli {

namespace {

using json = nlohmann::ordered_json;

/// Failure to open, read or write a file or stream.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Flag values that parse but make no sense together.
class UsageError : public Error {
 public:
  using Error::Error;
};

lz77::Bytes read_all(std::istream& in, const std::string& what) {
  lz77::Bytes data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("failed reading " + what);
  return data;
}

lz77::Bytes read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_all(in, "standard input");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return read_all(f, path);
}

void write_output(const std::string& path, std::ostream& out, lz77::ByteView data) {
  auto put = [&](std::ostream& s, const std::string& what) {
    s.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    s.flush();
    if (!s) throw IoError("failed writing " + what);
  };
  if (path.empty() || path == "-") return put(out, "standard output");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot create " + path);
  put(f, path);
}

std::optional<std::size_t> env_size(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) {
    throw UsageError(std::string(name) + " must be a positive integer, got '" + raw + "'");
  }
  return static_cast<std::size_t>(v);
}

/// Flags beat environment variables, which beat the built-in geometry.
lz77::WindowConfig geometry(lz77::WindowConfig base, std::size_t window_flag,
                            std::size_t lookahead_flag) {
  if (auto n = env_size("LILGUARD_WINDOW")) base.window_len = *n;
  if (auto l = env_size("LILGUARD_LOOKAHEAD")) base.lookahead_len = *l;
  if (window_flag != 0) base.window_len = window_flag;
  if (lookahead_flag != 0) base.lookahead_len = lookahead_flag;
  base.validate();
  return base;
}

struct GeometryFlags {
  std::size_t window = 0;
  std::size_t lookahead = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--window", window, "Window length n (search + look-ahead)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lookahead", lookahead, "Look-ahead length L_s")->check(CLI::PositiveNumber);
  }
};

// compress / decompress ---------------------------------------------------

struct CompressArgs {
  std::string input;
  std::string output;
  GeometryFlags geom;
  std::optional<int> fill;
};

int cmd_compress(const CompressArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  lz77::WindowConfig config = geometry(lz77::WindowConfig::gzip_like(), a.geom.window,
                                       a.geom.lookahead);
  if (a.fill) config.initial_fill = static_cast<std::uint8_t>(*a.fill);
  const lz77::Bytes data = read_input(a.input, in);
  const lz77::Bytes container = lz77::serialize(lz77::compress(data, config));
  write_output(a.output, out, container);
  err << "compressed " << data.size() << " -> " << container.size() << " bytes\n";
  return kExitOk;
}

struct DecompressArgs {
  std::string input;
  std::string output;
};

int cmd_decompress(const DecompressArgs& a, std::istream& in, std::ostream& out, std::ostream&) {
  const lz77::Bytes container = read_input(a.input, in);
  const lz77::Bytes data = lz77::decompress(lz77::deserialize(container));
  write_output(a.output, out, data);
  return kExitOk;
}

// monitor -----------------------------------------------------------------

struct MonitorArgs {
  std::size_t freq = 250;
  std::size_t threshold = 20;
  std::string unit = "line";
  std::string prefill;
  GeometryFlags geom;
};

/// 0 for line mode, otherwise the chunk size.
std::size_t parse_unit(const std::string& unit) {
  if (unit == "line") return 0;
  constexpr std::string_view prefix = "chunk:";
  if (unit.rfind(prefix, 0) == 0) {
    const std::string n = unit.substr(prefix.size());
    if (!n.empty() && std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c); })) {
      const unsigned long long v = std::stoull(n);
      if (v > 0) return static_cast<std::size_t>(v);
    }
  }
  throw UsageError("--unit must be 'line' or 'chunk:N' with N >= 1, got '" + unit + "'");
}

bool next_unit(std::istream& in, std::size_t chunk, std::string& token) {
  token.clear();
  if (chunk == 0) {
    if (!std::getline(in, token)) return false;
    if (!in.eof()) token.push_back('\n');
    return true;
  }
  token.resize(chunk);
  in.read(token.data(), static_cast<std::streamsize>(chunk));
  token.resize(static_cast<std::size_t>(in.gcount()));
  return !token.empty();
}

int cmd_monitor(const MonitorArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  const std::size_t chunk = parse_unit(a.unit);
  guardian::GuardianConfig config;
  config.check_freq = a.freq;
  config.threshold = a.threshold;
  config.compressor = geometry(lz77::WindowConfig::monitor_default(), a.geom.window,
                               a.geom.lookahead);
  lz77::Bytes prefill;
  if (!a.prefill.empty()) {
    std::ifstream f(a.prefill, std::ios::binary);
    if (!f) throw IoError("cannot open prefill " + a.prefill);
    prefill = read_all(f, a.prefill);
  }
  const auto advice = guardian::advise_threshold(config.check_freq, config.threshold);
  if (!advice.in_window) err << "warning: " << advice.message << '\n';

  guardian::GuardianState state(prefill, config);
  std::string token;
  while (next_unit(in, chunk, token)) {
    const auto decision = state.observe(token);
    if (!decision.checkpoint) continue;
    json ev;
    ev["event"] = decision.stopped() ? "stop" : "check";
    ev["tokens"] = decision.checkpoint->token_count;
    ev["compressed"] = decision.checkpoint->compressed_len;
    ev["delta"] = decision.checkpoint->delta;
    if (decision.stopped()) ev["reason"] = to_string(*decision.reason);
    out << ev.dump() << '\n' << std::flush;
    if (decision.stopped()) {
      err << "plateau at " << state.token_count() << " tokens (delta "
          << decision.checkpoint->delta << " < " << config.threshold << ")\n";
      in.ignore(std::numeric_limits<std::streamsize>::max());
      return kExitPlateau;
    }
  }
  if (in.bad()) throw IoError("failed reading standard input");
  json ev;
  ev["event"] = "eos";
  ev["tokens"] = state.token_count();
  ev["compressed"] = lz77::compressed_size(state.buffer(), config.compressor);
  out << ev.dump() << '\n' << std::flush;
  return kExitOk;
}

// simulate / curve --------------------------------------------------------

struct SimulateArgs {
  std::vector<std::string> budgets{"unlimited"};
  std::size_t seeds = 20;
  std::uint64_t first_seed = 0;
  std::size_t order = 12;
  std::string corpus = LILGUARD_DEFAULT_CORPUS;
  std::string out = "-";
  std::size_t max_len = 4000;
  std::size_t prompt_len = 5;
  std::size_t freq = 250;
  std::size_t threshold = 20;
  double temperature = 0.6;
  double top_p = 0.95;
};

std::optional<std::size_t> parse_budget(const std::string& b) {
  if (b == "unlimited") return std::nullopt;
  if (!b.empty() && std::all_of(b.begin(), b.end(), [](unsigned char c) { return std::isdigit(c); })) {
    const unsigned long long v = std::stoull(b);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  throw UsageError("--budget must be 'unlimited' or a positive integer, got '" + b + "'");
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  simulator::CampaignConfig config;
  config.order = a.order;
  config.budgets.clear();
  for (const auto& b : a.budgets) config.budgets.push_back(parse_budget(b));
  config.seeds = a.seeds;
  config.first_seed = a.first_seed;
  config.prompt_len = a.prompt_len;
  config.sim.max_len = a.max_len;
  config.sim.temperature = a.temperature;
  config.sim.top_p = a.top_p;
  config.guard.check_freq = a.freq;
  config.guard.threshold = a.threshold;
  config.guard.compressor = geometry(config.guard.compressor, 0, 0);
  config.validate();

  const auto corpus = simulator::load_corpus(a.corpus);
  const auto model = simulator::train(corpus, a.order);
  const auto result = simulator::run_campaign(model, corpus, config);

  if (a.out.empty() || a.out == "-") {
    simulator::write_trace_csv(out, result);
    out.flush();
    if (!out) throw IoError("failed writing standard output");
  } else {
    std::ofstream f(a.out, std::ios::trunc);
    if (!f) throw IoError("cannot create " + a.out);
    simulator::write_trace_csv(f, result);
    f.flush();
    if (!f) throw IoError("failed writing " + a.out);
  }
  err << std::fixed << std::setprecision(1);
  for (const auto& s : result.summaries) {
    err << "budget=" << simulator::budget_label(s.budget) << " runs=" << s.runs
        << " mean_unguarded=" << s.mean_unguarded_tokens
        << " mean_guarded=" << s.mean_guarded_tokens << " mean_savings=" << s.mean_savings
        << "% plateau_stops=" << s.plateau_stops << '\n';
  }
  return kExitOk;
}

// bench -------------------------------------------------------------------

struct BenchArgs {
  std::size_t size = 512 * 1024;
  std::uint64_t seed = 1;
  GeometryFlags geom;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const lz77::WindowConfig config = geometry(lz77::WindowConfig::gzip_like(), a.geom.window,
                                             a.geom.lookahead);
  std::mt19937_64 rng(a.seed);
  lz77::Bytes data(a.size);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng() >> 56);

  const auto start = std::chrono::steady_clock::now();
  const auto compressed = lz77::compress(data, config);
  const std::size_t bytes_out = lz77::serialized_size(compressed);
  const auto stop = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(stop - start).count();

  json report;
  report["size"] = a.size;
  report["seed"] = a.seed;
  report["window_len"] = config.window_len;
  report["lookahead_len"] = config.lookahead_len;
  report["compressed_len"] = bytes_out;
  report["triples"] = compressed.triples.size();
  report["ratio"] = static_cast<double>(bytes_out) / static_cast<double>(a.size);
  report["wall_ms"] = ms;
  report["throughput_mib_s"] = ms > 0.0 ? (static_cast<double>(a.size) / (1024.0 * 1024.0)) / (ms / 1000.0) : 0.0;
  out << report.dump() << '\n';
  err << std::fixed << std::setprecision(2) << "compressed " << a.size << " bytes in " << ms
      << " ms\n";
  return kExitOk;
}

// bound -------------------------------------------------------------------

struct BoundArgs {
  std::string source = "golden-mean";
  std::size_t lookahead = 8;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
};

int cmd_bound(const BoundArgs& a, std::ostream& out, std::ostream& err) {
  entropy::ConstrainedSource source;
  if (a.source == "golden-mean") {
    source = entropy::ConstrainedSource::golden_mean();
  } else if (a.source == "unconstrained-binary") {
    source = entropy::ConstrainedSource::unconstrained_binary();
  } else {
    throw UsageError("--source must be golden-mean or unconstrained-binary");
  }
  const auto report = entropy::verify_entropy_bound(source, a.lookahead, a.samples, a.seed);
  out << report.to_json() << '\n';
  err << "max rho " << report.rho_max << (report.upper_bound_holds ? " <= " : " > ")
      << report.h + report.epsilon << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"LZ77 information-gain monitor for token streams", "lilguard"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("lilguard 0.1.0"));

  CompressArgs ca;
  auto* compress = app.add_subcommand("compress", "Write an LZ77 container");
  compress->add_option("input", ca.input, "Input file, '-' for standard input");
  compress->add_option("-o,--output", ca.output, "Output file, '-' for standard output");
  ca.geom.add(compress);
  compress->add_option("--fill", ca.fill, "Pre-fill the search buffer with this byte value")
      ->check(CLI::Range(0, 255));

  DecompressArgs da;
  auto* decompress = app.add_subcommand("decompress", "Restore the bytes of a container");
  decompress->add_option("input", da.input, "Container file, '-' for standard input");
  decompress->add_option("-o,--output", da.output, "Output file, '-' for standard output");

  MonitorArgs ma;
  auto* monitor = app.add_subcommand("monitor", "Watch standard input for an information plateau");
  monitor->add_option("--freq", ma.freq, "Check every f observations")->check(CLI::PositiveNumber);
  monitor->add_option("--threshold", ma.threshold, "Stop when a check adds fewer than t bytes")
      ->check(CLI::PositiveNumber);
  monitor->add_option("--unit", ma.unit, "Observation unit: line or chunk:N");
  monitor->add_option("--prefill", ma.prefill, "File compressed together with the stream");
  ma.geom.add(monitor);

  SimulateArgs sa;
  auto add_simulate = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--budget", sa.budgets, "Context budget(s): N or unlimited")->expected(1, -1);
    cmd->add_option("--seeds", sa.seeds, "Seeds per budget")->check(CLI::PositiveNumber);
    cmd->add_option("--first-seed", sa.first_seed, "First seed");
    cmd->add_option("--order", sa.order, "n-gram order")->check(CLI::PositiveNumber);
    cmd->add_option("--corpus", sa.corpus, "Whitespace-tokenized training corpus");
    cmd->add_option("--out", sa.out, "CSV destination, '-' for standard output");
    cmd->add_option("--max-len", sa.max_len, "Generation cap in tokens")->check(CLI::PositiveNumber);
    cmd->add_option("--prompt-len", sa.prompt_len, "Prompt tokens taken from a document start")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--freq", sa.freq, "Guard check frequency")->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", sa.threshold, "Guard threshold in bytes")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--temperature", sa.temperature, "Sampling temperature")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--top-p", sa.top_p, "Nucleus mass")->check(CLI::Range(0.0, 1.0));
    return cmd;
  };
  auto* simulate = add_simulate("simulate", "Paired guarded/unguarded generation campaign");
  auto* curve = add_simulate("curve", "Same campaign, for compressed-length curves");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time compression of seeded random bytes");
  bench->add_option("--size", ba.size, "Input bytes")->check(CLI::PositiveNumber);
  bench->add_option("--seed", ba.seed, "Generator seed");
  ba.geom.add(bench);

  BoundArgs bo;
  auto* bound = app.add_subcommand("bound", "Check the compression-ratio entropy bound");
  bound->add_option("--source", bo.source, "golden-mean or unconstrained-binary");
  bound->add_option("--lookahead", bo.lookahead, "Look-ahead length L_s")
      ->check(CLI::Range(std::size_t{2}, std::size_t{24}));
  bound->add_option("--samples", bo.samples, "Sampled strings")->check(CLI::PositiveNumber);
  bound->add_option("--seed", bo.seed, "Sampler seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compress) return cmd_compress(ca, in, out, err);
    if (*decompress) return cmd_decompress(da, in, out, err);
    if (*monitor) return cmd_monitor(ma, in, out, err);
    if (*simulate || *curve) return cmd_simulate(sa, out, err);
    if (*bench) return cmd_bench(ba, out, err);
    if (*bound) return cmd_bound(bo, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace lilguard::cli
