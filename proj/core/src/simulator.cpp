// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "lilguard/error.hpp"

namespace lilguard::simulator {

namespace {

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void append(lz77::Bytes& buffer, std::string_view text) {
  buffer.insert(buffer.end(), text.begin(), text.end());
}

}  // namespace

void SimConfig::validate() const {
  if (context_budget && *context_budget == 0) throw ConfigError("context_budget must be at least 1");
  if (max_len == 0) throw ConfigError("max_len must be at least 1");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be a finite non-negative number");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must lie in (0, 1]");
  unguarded_checkpoints.validate();
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::end_of_sequence:
      return "end_of_sequence";
    case StopReason::max_length:
      return "max_length";
    case StopReason::information_plateau:
      return "information_plateau";
    case StopReason::context_limit:
      return "context_limit";
  }
  return "unknown";
}

TokenId sample_token(const Distribution& dist, double temperature, double top_p,
                     std::mt19937_64& rng) {
  const auto& p = dist.probs;
  if (p.empty()) throw SamplingError("empty distribution");
  if (temperature == 0.0) {
    auto best = std::max_element(p.begin(), p.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    return best->first;
  }

  double peak = 0.0;
  for (const auto& e : p) peak = std::max(peak, e.second);
  const double log_peak = std::log(peak);
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    w[i] = std::exp((std::log(p[i].second) - log_peak) / temperature);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  std::size_t keep = 0;
  double mass = 0.0;
  while (keep < order.size()) {
    mass += w[order[keep]];
    ++keep;
    if (mass >= top_p * total) break;
  }
  while (keep < order.size() && w[order[keep]] == w[order[keep - 1]]) {
    mass += w[order[keep]];
    ++keep;
  }

  double u = unit(rng) * mass;
  for (std::size_t i = 0; i < keep; ++i) {
    const double wi = w[order[i]];
    if (u < wi) return p[order[i]].first;
    u -= wi;
  }
  return p[order[keep - 1]].first;
}

GenerationTrace generate(const NGramModel& model, const std::vector<std::string>& prompt,
                         const SimConfig& sim,
                         const std::optional<guardian::GuardianConfig>& guard) {
  sim.validate();
  if (prompt.empty()) throw DataError("prompt must contain at least one token");

  lz77::Bytes prefix;
  std::vector<TokenId> history;
  history.reserve(prompt.size() + sim.max_len);
  for (const auto& tok : prompt) {
    append(prefix, tok);
    append(prefix, sim.joiner);
    history.push_back(model.id(tok));
  }

  GenerationTrace trace;
  std::optional<guardian::GuardianState> state;
  lz77::Bytes buffer;
  const auto& cadence = sim.unguarded_checkpoints;
  if (guard) {
    state.emplace(prefix, *guard);
    trace.checkpoints.push_back({prefix.size(), state->last_compress()});
  } else {
    buffer = prefix;
    trace.checkpoints.push_back({buffer.size(), lz77::compressed_size(buffer, cadence.compressor)});
  }

  const TokenId eos = model.id(sim.eos_symbol);
  const std::size_t visible = std::min(model.order(), sim.context_budget.value_or(model.order()));
  std::mt19937_64 rng(sim.seed);
  std::string piece;

  while (true) {
    if (trace.token_count >= sim.max_len) {
      trace.stop_reason = StopReason::max_length;
      break;
    }
    if (guard && prompt.size() + trace.token_count >= guard->max_context) {
      trace.stop_reason = StopReason::context_limit;
      break;
    }
    const std::size_t c = std::min(visible, history.size());
    const Distribution* dist =
        model.lookup(std::span<const TokenId>(history.data() + history.size() - c, c));
    if (dist == nullptr) {
      trace.stop_reason = StopReason::end_of_sequence;
      break;
    }
    const TokenId next = sample_token(*dist, sim.temperature, sim.top_p, rng);
    if (next == eos) {
      trace.stop_reason = StopReason::end_of_sequence;
      break;
    }
    history.push_back(next);
    trace.tokens.push_back(model.token(next));
    ++trace.token_count;
    piece = model.token(next);
    piece += sim.joiner;

    if (state) {
      const auto decision = state->observe(piece);
      if (decision.checkpoint) {
        trace.checkpoints.push_back({decision.checkpoint->original_len,
                                     decision.checkpoint->compressed_len});
      }
      if (decision.stopped()) {
        trace.stop_reason = StopReason::information_plateau;
        break;
      }
    } else {
      append(buffer, piece);
      if (trace.token_count % cadence.check_freq == 0) {
        trace.checkpoints.push_back(
            {buffer.size(), lz77::compressed_size(buffer, cadence.compressor)});
      }
    }
  }
  return trace;
}

std::vector<CurvePoint> ratio_curve(const GenerationTrace& trace) {
  const auto& cp = trace.checkpoints;
  if (cp.size() < 2) {
    throw DataError("a ratio curve needs at least two checkpoints, got " +
                    std::to_string(cp.size()));
  }
  std::vector<CurvePoint> out;
  out.reserve(cp.size() - 1);
  for (std::size_t i = 1; i < cp.size(); ++i) {
    const double dx = static_cast<double>(cp[i].original_len) -
                      static_cast<double>(cp[i - 1].original_len);
    const double dy = static_cast<double>(cp[i].compressed_len) -
                      static_cast<double>(cp[i - 1].compressed_len);
    out.push_back({cp[i].original_len, cp[i].compressed_len, dx > 0.0 ? dy / dx : 0.0});
  }
  return out;
}

std::optional<Knee> find_knee(const std::vector<CurvePoint>& curve, double early, double late) {
  // The latest index at which the tail is entirely flat; any later split only
  // pulls flat slopes into the early mean.
  std::size_t j = curve.size();
  while (j > 0 && curve[j - 1].slope < late) --j;
  if (j == 0 || j == curve.size()) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < j; ++i) sum += curve[i].slope;
  Knee knee;
  knee.index = j;
  knee.early_mean_slope = sum / static_cast<double>(j);
  knee.late_max_slope = curve[j].slope;
  for (std::size_t i = j; i < curve.size(); ++i) {
    knee.late_max_slope = std::max(knee.late_max_slope, curve[i].slope);
  }
  if (!(knee.early_mean_slope > early)) return std::nullopt;
  return knee;
}

double repetition_rate(const std::vector<std::string>& tokens, std::size_t n) {
  if (n == 0) throw DomainError("n-gram size must be positive");
  if (tokens.size() < n) return 0.0;
  std::unordered_set<std::string> seen;
  std::size_t repeated = 0;
  const std::size_t total = tokens.size() - n + 1;
  std::string key;
  for (std::size_t i = 0; i < total; ++i) {
    key.clear();
    for (std::size_t k = 0; k < n; ++k) {
      key += tokens[i + k];
      key += '\x1f';
    }
    if (!seen.insert(key).second) ++repeated;
  }
  return static_cast<double>(repeated) / static_cast<double>(total);
}

double jct(double ttft, double decode_len, double tbt) {
  if (ttft < 0.0 || decode_len < 0.0 || tbt < 0.0) {
    throw DomainError("jct inputs must be non-negative");
  }
  return ttft + decode_len * tbt;
}

}  // namespace lilguard::simulator
