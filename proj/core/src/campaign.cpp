// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "lilguard/error.hpp"

namespace lilguard::simulator {

std::vector<std::string> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw DataError("failed reading corpus " + path.string());
  auto tokens = tokenize_words(text.str());
  if (tokens.empty()) throw DataError("corpus " + path.string() + " is empty");
  return tokens;
}

std::vector<std::string> prompt_for_seed(const std::vector<std::string>& corpus,
                                         const std::string& eos, std::size_t prompt_len,
                                         std::uint64_t seed) {
  if (prompt_len == 0) throw ConfigError("prompt_len must be positive");
  std::vector<std::size_t> starts;
  bool at_start = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i] == eos) {
      at_start = true;
      continue;
    }
    if (at_start && i + prompt_len <= corpus.size()) starts.push_back(i);
    at_start = false;
  }
  if (starts.empty()) throw DataError("corpus has no document long enough for a prompt");
  std::mt19937_64 rng(seed);
  const std::size_t start = starts[rng() % starts.size()];
  return {corpus.begin() + static_cast<std::ptrdiff_t>(start),
          corpus.begin() + static_cast<std::ptrdiff_t>(start + prompt_len)};
}

void CampaignConfig::validate() const {
  if (order == 0) throw ConfigError("order must be positive");
  if (seeds == 0) throw ConfigError("seeds must be positive");
  if (budgets.empty()) throw ConfigError("at least one budget is required");
  for (const auto& b : budgets) {
    if (b && *b == 0) throw ConfigError("budgets must be at least 1");
  }
  if (prompt_len == 0) throw ConfigError("prompt_len must be positive");
  sim.validate();
  guard.validate();
}

std::string budget_label(const std::optional<std::size_t>& budget) {
  return budget ? std::to_string(*budget) : "unlimited";
}

CampaignResult run_campaign(const NGramModel& model, const std::vector<std::string>& corpus,
                            const CampaignConfig& config) {
  config.validate();
  CampaignResult result;
  result.runs.resize(config.budgets.size() * config.seeds);

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t job = next++; job < result.runs.size(); job = next++) try {
      PairedRun& run = result.runs[job];
      run.budget = config.budgets[job / config.seeds];
      run.seed = config.first_seed + job % config.seeds;
      SimConfig sim = config.sim;
      sim.context_budget = run.budget;
      sim.seed = run.seed;
      sim.unguarded_checkpoints = config.guard;
      const auto prompt = prompt_for_seed(corpus, sim.eos_symbol, config.prompt_len, run.seed);
      run.unguarded = generate(model, prompt, sim);
      run.guarded = generate(model, prompt, sim, config.guard);
      run.savings = run.unguarded.token_count == 0
                        ? 0.0
                        : guardian::savings(run.unguarded.token_count, run.guarded.token_count);
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, result.runs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t b = 0; b < config.budgets.size(); ++b) {
    BudgetSummary s;
    s.budget = config.budgets[b];
    for (std::size_t k = 0; k < config.seeds; ++k) {
      const PairedRun& run = result.runs[b * config.seeds + k];
      ++s.runs;
      s.mean_unguarded_tokens += static_cast<double>(run.unguarded.token_count);
      s.mean_guarded_tokens += static_cast<double>(run.guarded.token_count);
      s.mean_savings += run.savings;
      if (run.guarded.stop_reason == StopReason::information_plateau) ++s.plateau_stops;
    }
    const auto n = static_cast<double>(s.runs);
    s.mean_unguarded_tokens /= n;
    s.mean_guarded_tokens /= n;
    s.mean_savings /= n;
    result.summaries.push_back(s);
  }
  return result;
}

void write_trace_csv(std::ostream& out, const CampaignResult& result) {
  out << "run_id,seed,budget,checkpoint_index,original_len,compressed_len,slope,stop_reason,"
         "token_count\n";
  auto emit = [&](const PairedRun& run, const GenerationTrace& trace, const char* mode) {
    const std::string budget = budget_label(run.budget);
    const std::string run_id = "b" + budget + "-s" + std::to_string(run.seed) + "-" + mode;
    for (std::size_t i = 0; i < trace.checkpoints.size(); ++i) {
      const auto& cp = trace.checkpoints[i];
      out << run_id << ',' << run.seed << ',' << budget << ',' << i << ',' << cp.original_len
          << ',' << cp.compressed_len << ',';
      if (i > 0) {
        const auto& prev = trace.checkpoints[i - 1];
        const double dx = static_cast<double>(cp.original_len) -
                          static_cast<double>(prev.original_len);
        const double dy = static_cast<double>(cp.compressed_len) -
                          static_cast<double>(prev.compressed_len);
        out << std::setprecision(6) << (dx > 0.0 ? dy / dx : 0.0);
      }
      out << ',' << to_string(trace.stop_reason) << ',' << trace.token_count << '\n';
    }
  };
  for (const auto& run : result.runs) {
    emit(run, run.unguarded, "unguarded");
    emit(run, run.guarded, "guarded");
  }
}

}  // namespace lilguard::simulator
