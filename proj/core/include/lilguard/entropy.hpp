// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace lilguard::entropy {

/// A finite-alphabet source: all strings over `alphabet` that contain none of
/// the `forbidden` strings as a substring.
struct ConstrainedSource {
  std::string name;
  std::string alphabet;
  std::vector<std::string> forbidden;

  /// Throws ConfigError on fewer than two distinct symbols or on forbidden
  /// strings that are empty or use symbols outside the alphabet.
  void validate() const;

  /// True when `s` uses only alphabet symbols and avoids every forbidden string.
  bool admits(std::string_view s) const;

  std::size_t alphabet_size() const { return alphabet.size(); }

  static ConstrainedSource unconstrained_binary();
  /// Binary strings without two adjacent ones.
  static ConstrainedSource golden_mean();
};

struct EntropyEstimate {
  std::size_t k = 0;
  std::uint64_t count = 0;
  double h = 0.0;  // log_{|A|}(count) / k
};

/// Largest |A|^k that enumerate_sigma will walk.
inline constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 24;

/// |sigma{k}|: number of length-k strings the source admits. Exhaustive.
std::uint64_t enumerate_sigma(const ConstrainedSource& source, std::size_t k);

/// Throws DomainError when sigma{k} is empty.
EntropyEstimate per_symbol_entropy(const ConstrainedSource& source,
                                   std::size_t k);

/// (3 + 3 log(L_s - 1) + log(L_s / 2)) / (L_s - 1), logarithms in base
/// `alphabet_size`.
double epsilon(std::size_t lookahead_len, std::size_t alphabet_size);

/// Window length n that makes the compression-ratio bound hold for
/// look-ahead `lookahead_len`.
std::uint64_t recommended_window(const ConstrainedSource& source,
                                 std::size_t lookahead_len);

/// Every admitted string of length k < max_k extends by one symbol to an
/// admitted string of length k + 1.
bool is_extension_closed(const ConstrainedSource& source, std::size_t max_k);

/// Uniform sampler over sigma{length}. Counts completions per automaton state
/// (the last max|forbidden|-1 symbols) and draws symbol by symbol, so it stays
/// exact at lengths where rejection sampling would never accept.
class UniformSampler {
 public:
  UniformSampler(const ConstrainedSource& source, std::size_t length);

  std::string operator()(std::mt19937_64& rng) const;

  std::size_t length() const { return length_; }

 private:
  std::string alphabet_;
  std::size_t length_ = 0;
  std::size_t start_ = 0;
  // next_[state * |A| + a]: successor state, or npos when a is forbidden.
  std::vector<std::size_t> next_;
  // weight_[r * states + s]: completions of length r from s, scaled per r.
  std::vector<double> weight_;
  std::size_t states_ = 0;
};

/// Draws uniform strings until one is admitted. Throws SamplingError after
/// `max_attempts` rejections.
std::string sample_rejection(const ConstrainedSource& source, std::size_t length,
                             std::mt19937_64& rng,
                             std::uint64_t max_attempts = 1'000'000);

struct BoundReport {
  std::string source;
  std::size_t alphabet_size = 0;
  std::size_t lookahead_len = 0;
  std::uint64_t n = 0;
  double h = 0.0;        // h(L_s - 1)
  double epsilon = 0.0;  // epsilon(L_s)
  double rho_min = 0.0;
  double rho_mean = 0.0;
  double rho_max = 0.0;
  bool upper_bound_holds = false;

  std::string to_json() const;
};

/// Samples `samples` strings of length n - L_s from the source, compresses
/// each with window (n, L_s), and compares rho = L_c * N / (n - L_s) against
/// h(L_s - 1) + epsilon(L_s).
BoundReport verify_entropy_bound(const ConstrainedSource& source,
                                 std::size_t lookahead_len, std::size_t samples,
                                 std::uint64_t seed);

/// rho of one string under window (n, L_s) with fixed-width codewords.
double fixed_width_ratio(std::string_view message, std::size_t window_len,
                         std::size_t lookahead_len, std::size_t alphabet_size);

}  // namespace lilguard::entropy
