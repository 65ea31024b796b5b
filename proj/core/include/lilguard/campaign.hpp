// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lilguard/guardian.hpp"
#include "lilguard/ngram.hpp"
#include "lilguard/simulator.hpp"

namespace lilguard::simulator {

/// Reads a whitespace-tokenized corpus. Throws DataError when the file is
/// missing, unreadable or empty.
std::vector<std::string> load_corpus(const std::filesystem::path& path);

/// The first `prompt_len` tokens of a document chosen by `seed`. Documents are
/// the runs of tokens between `eos` markers.
std::vector<std::string> prompt_for_seed(const std::vector<std::string>& corpus,
                                         const std::string& eos, std::size_t prompt_len,
                                         std::uint64_t seed);

struct CampaignConfig {
  std::size_t order = 12;
  /// nullopt entries are unlimited.
  std::vector<std::optional<std::size_t>> budgets{std::nullopt};
  std::size_t seeds = 20;
  std::uint64_t first_seed = 0;
  std::size_t prompt_len = 5;
  SimConfig sim;
  guardian::GuardianConfig guard;

  void validate() const;
};

/// One seed at one budget, generated once without and once with the guard.
struct PairedRun {
  std::optional<std::size_t> budget;
  std::uint64_t seed = 0;
  GenerationTrace unguarded;
  GenerationTrace guarded;
  double savings = 0.0;  // percent, guarded against unguarded
};

struct BudgetSummary {
  std::optional<std::size_t> budget;
  std::size_t runs = 0;
  double mean_unguarded_tokens = 0.0;
  double mean_guarded_tokens = 0.0;
  double mean_savings = 0.0;
  std::size_t plateau_stops = 0;
};

struct CampaignResult {
  std::vector<PairedRun> runs;  // budget-major, then seed
  std::vector<BudgetSummary> summaries;
};

/// Runs every (budget, seed) pair. Seeds fan out across threads; results are
/// merged in (budget, seed) order, so output is independent of scheduling.
CampaignResult run_campaign(const NGramModel& model, const std::vector<std::string>& corpus,
                            const CampaignConfig& config);

std::string budget_label(const std::optional<std::size_t>& budget);

/// CSV with header run_id,seed,budget,checkpoint_index,original_len,
/// compressed_len,slope,stop_reason,token_count. Checkpoint 0 has no slope.
void write_trace_csv(std::ostream& out, const CampaignResult& result);

}  // namespace lilguard::simulator
