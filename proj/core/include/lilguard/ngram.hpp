// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lilguard::simulator {

using TokenId = std::uint32_t;
inline constexpr TokenId kUnknownToken = std::numeric_limits<TokenId>::max();

/// Splits on ASCII whitespace.
std::vector<std::string> tokenize_words(std::string_view text);
/// One token per byte.
std::vector<std::string> tokenize_chars(std::string_view text);

/// Next-token distribution, entries sorted by token id.
struct Distribution {
  std::vector<std::pair<TokenId, double>> probs;
  std::uint64_t total = 0;  // training occurrences of the context

  double prob(TokenId id) const;
};

/// Maximum-likelihood n-gram model. Keeps one table per context length
/// 1..order so a generator can condition on any suffix up to `order` tokens.
class NGramModel {
 public:
  std::size_t order() const { return order_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::string& token(TokenId id) const { return vocab_.at(id); }
  /// kUnknownToken for symbols absent from training.
  TokenId id(std::string_view token) const;

  /// Distribution after `context` (1 <= size <= order), or nullptr when the
  /// context never occurred in training.
  const Distribution* lookup(std::span<const TokenId> context) const;

  /// Number of distinct contexts stored for a given context length.
  std::size_t context_count(std::size_t length) const;

  friend NGramModel train(const std::vector<std::string>& corpus, std::size_t order);

 private:
  std::size_t order_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> ids_;
  // tables_[c - 1] maps a packed c-token context to its distribution.
  std::vector<std::unordered_map<std::string, Distribution>> tables_;
};

/// Throws DataError when order is zero or the corpus has order tokens or fewer.
NGramModel train(const std::vector<std::string>& corpus, std::size_t order);

}  // namespace lilguard::simulator
