// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/guardian.hpp"

#include <cstdlib>
#include <sstream>

#include "lilguard/error.hpp"

namespace lilguard::guardian {

namespace {

std::optional<std::size_t> env_size(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) {
    throw ConfigError(std::string(name) + " must be a positive integer, got '" + raw + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void GuardianConfig::validate() const {
  if (check_freq == 0) throw ConfigError("check_freq must be at least 1");
  if (threshold == 0) throw ConfigError("threshold must be at least 1");
  if (max_context == 0) throw ConfigError("max_context must be at least 1");
  compressor.validate();
  if (compressor.search_len() > 65536 || compressor.lookahead_len > 65536) {
    throw ConfigError("compressor geometry exceeds the container's 16-bit fields");
  }
}

GuardianConfig GuardianConfig::from_env() {
  GuardianConfig config;
  if (auto n = env_size("LILGUARD_WINDOW")) config.compressor.window_len = *n;
  if (auto l = env_size("LILGUARD_LOOKAHEAD")) config.compressor.lookahead_len = *l;
  config.compressor.validate();
  return config;
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::information_plateau:
      return "information_plateau";
    case StopReason::end_of_sequence:
      return "end_of_sequence";
    case StopReason::context_limit:
      return "context_limit";
  }
  return "unknown";
}

GuardianState::GuardianState(lz77::ByteView prefill, GuardianConfig config)
    : config_(std::move(config)), buffer_(prefill.begin(), prefill.end()) {
  config_.validate();
  last_compress_ = lz77::compressed_size(buffer_, config_.compressor);
  cur_compress_ = last_compress_;
}

StopDecision GuardianState::observe(lz77::ByteView token_text) {
  if (finalized_) throw StateError("observe called after a stop decision");
  buffer_.insert(buffer_.end(), token_text.begin(), token_text.end());
  ++token_count_;

  StopDecision decision;
  if (cnt_ % config_.check_freq == 0) {
    cur_compress_ = lz77::compressed_size(buffer_, config_.compressor);
    if (cur_compress_ < last_compress_) {
      throw StateError("compressed size shrank from " + std::to_string(last_compress_) +
                       " to " + std::to_string(cur_compress_) + " bytes");
    }
    const auto delta = static_cast<std::int64_t>(cur_compress_ - last_compress_);
    Checkpoint cp{token_count_, buffer_.size(), cur_compress_, delta};
    checkpoints_.push_back(cp);
    decision.checkpoint = cp;
    decision.checkpoint_delta = delta;
    if (cur_compress_ - last_compress_ < config_.threshold) {
      decision.kind = StopDecision::Kind::stop;
      decision.reason = StopReason::information_plateau;
      finalized_ = true;
    } else {
      last_compress_ = cur_compress_;
    }
  }
  ++cnt_;
  return decision;
}

GuardianState init(lz77::ByteView prefill, const GuardianConfig& config) {
  return GuardianState(prefill, config);
}

Transcript run_generation(const TokenSupplier& next_token, lz77::ByteView prefill,
                          const GuardianConfig& config, std::uint64_t prefill_tokens) {
  GuardianState state(prefill, config);
  Transcript out;
  while (true) {
    if (prefill_tokens + state.token_count() >= config.max_context) {
      out.reason = StopReason::context_limit;
      break;
    }
    std::optional<std::string> y = next_token();
    if (!y) {
      out.reason = StopReason::end_of_sequence;
      break;
    }
    if (state.observe(*y).stopped()) {
      out.reason = StopReason::information_plateau;
      break;
    }
  }
  out.buffer = state.buffer();
  out.token_count = state.token_count();
  out.checkpoints = state.checkpoints();
  return out;
}

double savings(std::uint64_t baseline_tokens, std::uint64_t guarded_tokens) {
  if (baseline_tokens == 0) throw DomainError("savings undefined for a zero baseline");
  return 100.0 * (static_cast<double>(baseline_tokens) - static_cast<double>(guarded_tokens)) /
         static_cast<double>(baseline_tokens);
}

ThresholdAdvice advise_threshold(std::size_t check_freq, std::size_t threshold) {
  if (check_freq == 0) throw ConfigError("check_freq must be at least 1");
  ThresholdAdvice advice;
  advice.ratio = static_cast<double>(threshold) / static_cast<double>(check_freq);
  advice.in_window = advice.ratio > kPlateauSlope && advice.ratio < kGrowthSlope;
  std::ostringstream msg;
  msg << "t/f = " << advice.ratio;
  if (advice.ratio <= kPlateauSlope) {
    msg << " is at or below the plateau slope " << kPlateauSlope
        << "; plateaus may never trigger a stop";
  } else if (advice.ratio >= kGrowthSlope) {
    msg << " is at or above the growth slope " << kGrowthSlope
        << "; fresh text may trigger a stop";
  } else {
    msg << " lies inside (" << kPlateauSlope << ", " << kGrowthSlope << "); recommended "
        << kRecommendedRatio;
  }
  advice.message = msg.str();
  return advice;
}

}  // namespace lilguard::guardian
