// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/ngram.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>

#include "lilguard/error.hpp"

namespace lilguard::simulator {

namespace {

std::string pack(std::span<const TokenId> ids) {
  std::string key(ids.size() * sizeof(TokenId), '\0');
  std::memcpy(key.data(), ids.data(), key.size());
  return key;
}

}  // namespace

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> tokenize_chars(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  for (char c : text) out.emplace_back(1, c);
  return out;
}

double Distribution::prob(TokenId id) const {
  auto it = std::lower_bound(probs.begin(), probs.end(), id,
                             [](const auto& e, TokenId v) { return e.first < v; });
  return it != probs.end() && it->first == id ? it->second : 0.0;
}

TokenId NGramModel::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnknownToken : it->second;
}

const Distribution* NGramModel::lookup(std::span<const TokenId> context) const {
  if (context.empty() || context.size() > order_) return nullptr;
  const auto& table = tables_[context.size() - 1];
  auto it = table.find(pack(context));
  return it == table.end() ? nullptr : &it->second;
}

std::size_t NGramModel::context_count(std::size_t length) const {
  if (length == 0 || length > order_) return 0;
  return tables_[length - 1].size();
}

NGramModel train(const std::vector<std::string>& corpus, std::size_t order) {
  if (order == 0) throw DataError("n-gram order must be positive");
  if (corpus.size() <= order) {
    throw DataError("corpus of " + std::to_string(corpus.size()) +
                    " tokens is too short for order " + std::to_string(order));
  }
  NGramModel model;
  model.order_ = order;
  std::vector<TokenId> seq;
  seq.reserve(corpus.size());
  for (const auto& tok : corpus) {
    auto [it, fresh] = model.ids_.emplace(tok, static_cast<TokenId>(model.vocab_.size()));
    if (fresh) model.vocab_.push_back(tok);
    seq.push_back(it->second);
  }

  model.tables_.resize(order);
  std::vector<std::unordered_map<std::string, std::map<TokenId, std::uint64_t>>> counts(order);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    for (std::size_t c = 1; c <= order && c <= i; ++c) {
      const std::span<const TokenId> ctx(seq.data() + i - c, c);
      ++counts[c - 1][pack(ctx)][seq[i]];
    }
  }
  for (std::size_t c = 0; c < order; ++c) {
    auto& table = model.tables_[c];
    table.reserve(counts[c].size());
    for (auto& [key, next] : counts[c]) {
      Distribution d;
      for (const auto& [tok, n] : next) d.total += n;
      d.probs.reserve(next.size());
      for (const auto& [tok, n] : next) {
        d.probs.emplace_back(tok, static_cast<double>(n) / static_cast<double>(d.total));
      }
      table.emplace(key, std::move(d));
    }
    counts[c].clear();
  }
  return model;
}

}  // namespace lilguard::simulator
