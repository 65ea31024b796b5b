// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lilguard/lz77.hpp"

namespace lilguard::guardian {

struct GuardianConfig {
  std::size_t check_freq = 250;  // f
  std::size_t threshold = 20;    // t, bytes
  std::size_t max_context = 131072;
  lz77::WindowConfig compressor = lz77::WindowConfig::monitor_default();

  /// Throws ConfigError when f or t is zero, max_context is zero, or the
  /// compressor geometry cannot be serialized.
  void validate() const;

  /// Defaults with the compressor geometry taken from LILGUARD_WINDOW and
  /// LILGUARD_LOOKAHEAD when those are set.
  static GuardianConfig from_env();
};

enum class StopReason { information_plateau, end_of_sequence, context_limit };

std::string_view to_string(StopReason reason);

/// One recompression of the full buffer.
struct Checkpoint {
  std::uint64_t token_count = 0;
  std::uint64_t original_len = 0;  // buffer bytes at the check
  std::uint64_t compressed_len = 0;
  std::int64_t delta = 0;  // compressed_len - last_compress before the check
};

struct StopDecision {
  enum class Kind { proceed, stop };

  Kind kind = Kind::proceed;
  std::optional<StopReason> reason;
  std::optional<std::int64_t> checkpoint_delta;
  /// Present whenever this call recompressed the buffer.
  std::optional<Checkpoint> checkpoint;

  bool stopped() const { return kind == Kind::stop; }
};

/// Checking state for a single stream. Single writer: observe
/// calls must arrive in token order.
class GuardianState {
 public:
  GuardianState(lz77::ByteView prefill, GuardianConfig config);

  /// Appends one token's text and runs the check pass. Throws StateError once
  /// a stop has been returned.
  StopDecision observe(lz77::ByteView token_text);
  StopDecision observe(std::string_view token_text) {
    return observe(lz77::as_bytes(token_text));
  }

  const GuardianConfig& config() const { return config_; }
  std::uint64_t cnt() const { return cnt_; }
  std::uint64_t last_compress() const { return last_compress_; }
  std::uint64_t cur_compress() const { return cur_compress_; }
  std::uint64_t token_count() const { return token_count_; }
  const lz77::Bytes& buffer() const { return buffer_; }
  bool finalized() const { return finalized_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

 private:
  GuardianConfig config_;
  std::uint64_t cnt_ = 1;
  std::uint64_t last_compress_ = 0;
  std::uint64_t cur_compress_ = 0;
  std::uint64_t token_count_ = 0;
  lz77::Bytes buffer_;
  bool finalized_ = false;
  std::vector<Checkpoint> checkpoints_;
};

GuardianState init(lz77::ByteView prefill, const GuardianConfig& config);
inline GuardianState init(std::string_view prefill, const GuardianConfig& config) {
  return init(lz77::as_bytes(prefill), config);
}

/// Returns the next token's text, or nullopt for the end-of-sequence marker.
using TokenSupplier = std::function<std::optional<std::string>()>;

struct Transcript {
  lz77::Bytes buffer;  // prefill plus every accepted token
  StopReason reason = StopReason::end_of_sequence;
  std::uint64_t token_count = 0;
  std::vector<Checkpoint> checkpoints;
};

/// Drives the decode loop: stops on the end marker, when prefill_tokens +
/// token_count reaches max_context, or on a plateau. The token whose check
/// fires the plateau stop is part of the transcript.
Transcript run_generation(const TokenSupplier& next_token, lz77::ByteView prefill,
                          const GuardianConfig& config,
                          std::uint64_t prefill_tokens = 0);

/// 100 * (baseline - guarded) / baseline. Signed; throws DomainError on a zero
/// baseline.
double savings(std::uint64_t baseline_tokens, std::uint64_t guarded_tokens);

struct ThresholdAdvice {
  double ratio = 0.0;  // t / f
  bool in_window = false;
  std::string message;
};

inline constexpr double kPlateauSlope = 0.02;
inline constexpr double kGrowthSlope = 1.0;
inline constexpr double kRecommendedRatio = 0.08;

/// Checks t / f against the slope window: above the plateau slope so a flat
/// curve stops, below the growth slope so fresh text never does.
ThresholdAdvice advise_threshold(std::size_t check_freq, std::size_t threshold);

}  // namespace lilguard::guardian
