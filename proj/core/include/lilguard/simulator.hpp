// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lilguard/guardian.hpp"
#include "lilguard/ngram.hpp"

namespace lilguard::simulator {

struct SimConfig {
  /// Most recent tokens the generator may condition on; nullopt is unlimited.
  std::optional<std::size_t> context_budget;
  std::size_t max_len = 4096;
  std::uint64_t seed = 0;
  std::string eos_symbol = "<eos>";
  /// 0 selects the most likely token.
  double temperature = 0.6;
  double top_p = 0.95;
  /// Appended to each token's text before it reaches the compressor.
  std::string joiner = " ";
  /// Checkpoint cadence and compressor for runs without a guard.
  guardian::GuardianConfig unguarded_checkpoints;

  void validate() const;
};

enum class StopReason { end_of_sequence, max_length, information_plateau, context_limit };

std::string_view to_string(StopReason reason);

struct TracePoint {
  std::uint64_t original_len = 0;
  std::uint64_t compressed_len = 0;
};

struct GenerationTrace {
  std::vector<std::string> tokens;  // generated only, the prompt excluded
  /// Index 0 measures the prompt; one more entry per checkpoint.
  std::vector<TracePoint> checkpoints;
  StopReason stop_reason = StopReason::end_of_sequence;
  std::uint64_t token_count = 0;
};

/// Samples one token. Reweights by p^(1/temperature), keeps the smallest
/// most-likely set whose mass reaches top_p (ties at the cut are kept), then
/// draws from the renormalized remainder.
TokenId sample_token(const Distribution& dist, double temperature, double top_p,
                     std::mt19937_64& rng);

/// Autoregressive generation from `prompt`. Conditions on the last
/// min(order, budget) tokens; an unseen context ends the run as
/// end_of_sequence. With a guard, every check goes through GuardianState.
GenerationTrace generate(const NGramModel& model, const std::vector<std::string>& prompt,
                         const SimConfig& sim,
                         const std::optional<guardian::GuardianConfig>& guard = std::nullopt);

struct CurvePoint {
  std::uint64_t original_len = 0;
  std::uint64_t compressed_len = 0;
  double slope = 0.0;  // against the previous checkpoint
};

/// One point per checkpoint after the first. Throws DataError on fewer than
/// two checkpoints.
std::vector<CurvePoint> ratio_curve(const GenerationTrace& trace);

struct Knee {
  std::size_t index = 0;  // first plateau point in the curve
  double early_mean_slope = 0.0;
  double late_max_slope = 0.0;
};

/// Finds an index j with mean slope before j above `early` and every slope
/// from j on below `late`. Both sides must be non-empty.
std::optional<Knee> find_knee(const std::vector<CurvePoint>& curve, double early = 0.5,
                              double late = 0.02);

/// Fraction of n-grams that already occurred earlier in `tokens`.
double repetition_rate(const std::vector<std::string>& tokens, std::size_t n = 8);

/// ttft + decode_len * tbt. Throws DomainError on negative inputs.
double jct(double ttft, double decode_len, double tbt);

}  // namespace lilguard::simulator
