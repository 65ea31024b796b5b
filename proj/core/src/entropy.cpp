// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include <json.hpp>

#include "lilguard/error.hpp"
#include "lilguard/lz77.hpp"

namespace lilguard::entropy {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

bool ends_with_forbidden(std::string_view s,
                         const std::vector<std::string>& forbidden) {
  for (const auto& f : forbidden) {
    if (s.size() >= f.size() && s.substr(s.size() - f.size()) == f) return true;
  }
  return false;
}

void check_enumerable(const ConstrainedSource& source, std::size_t k) {
  if (k == 0) throw DomainError("string length k must be positive");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    total *= source.alphabet_size();
    if (total > kEnumerationLimit) {
      throw EnumerationTooLarge("|A|^k exceeds 2^24 for k = " + std::to_string(k));
    }
  }
}

// Depth-first walk over admitted prefixes. `visit` sees every admitted string
// of exactly length k.
template <typename Visit>
void walk(const ConstrainedSource& source, std::size_t k, Visit&& visit) {
  std::string buf;
  buf.reserve(k);
  std::vector<std::size_t> choice;
  choice.reserve(k + 1);
  choice.push_back(0);
  const std::size_t a = source.alphabet_size();
  while (!choice.empty()) {
    std::size_t& c = choice.back();
    if (c == a) {
      choice.pop_back();
      if (!buf.empty()) buf.pop_back();
      continue;
    }
    buf.push_back(source.alphabet[c++]);
    if (ends_with_forbidden(buf, source.forbidden)) {
      buf.pop_back();
      continue;
    }
    if (buf.size() == k) {
      visit(std::string_view(buf));
      buf.pop_back();
      continue;
    }
    choice.push_back(0);
  }
}

std::size_t ceil_log(std::uint64_t base, std::uint64_t x) {
  std::size_t d = 0;
  std::uint64_t p = 1;
  while (p < x) {
    p *= base;
    ++d;
  }
  return d;
}

double log_base(double x, double base) { return std::log(x) / std::log(base); }

}  // namespace

void ConstrainedSource::validate() const {
  std::string sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("alphabet symbols must be distinct");
  }
  if (alphabet.size() < 2) throw ConfigError("alphabet needs at least two symbols");
  for (const auto& f : forbidden) {
    if (f.empty()) throw ConfigError("forbidden strings must be non-empty");
    for (char c : f) {
      if (alphabet.find(c) == std::string::npos) {
        throw ConfigError("forbidden string '" + f + "' uses a symbol outside the alphabet");
      }
    }
  }
}

bool ConstrainedSource::admits(std::string_view s) const {
  for (char c : s) {
    if (alphabet.find(c) == std::string::npos) return false;
  }
  for (const auto& f : forbidden) {
    if (s.find(f) != std::string_view::npos) return false;
  }
  return true;
}

ConstrainedSource ConstrainedSource::unconstrained_binary() {
  return {"unconstrained-binary", "01", {}};
}

ConstrainedSource ConstrainedSource::golden_mean() {
  return {"golden-mean", "01", {"11"}};
}

std::uint64_t enumerate_sigma(const ConstrainedSource& source, std::size_t k) {
  source.validate();
  check_enumerable(source, k);
  std::uint64_t count = 0;
  walk(source, k, [&](std::string_view) { ++count; });
  return count;
}

EntropyEstimate per_symbol_entropy(const ConstrainedSource& source,
                                   std::size_t k) {
  EntropyEstimate e;
  e.k = k;
  e.count = enumerate_sigma(source, k);
  if (e.count == 0) {
    throw DomainError("sigma{" + std::to_string(k) + "} is empty; entropy undefined");
  }
  e.h = log_base(static_cast<double>(e.count),
                 static_cast<double>(source.alphabet_size())) /
        static_cast<double>(k);
  return e;
}

double epsilon(std::size_t lookahead_len, std::size_t alphabet_size) {
  if (lookahead_len < 2) throw DomainError("epsilon needs lookahead_len >= 2");
  if (alphabet_size < 2) throw DomainError("epsilon needs alphabet_size >= 2");
  const double base = static_cast<double>(alphabet_size);
  const double l = static_cast<double>(lookahead_len - 1);
  const double ls = static_cast<double>(lookahead_len);
  return (3.0 + 3.0 * log_base(l, base) + log_base(ls / 2.0, base)) / l;
}

std::uint64_t recommended_window(const ConstrainedSource& source,
                                 std::size_t lookahead_len) {
  if (lookahead_len < 2) throw DomainError("recommended_window needs lookahead_len >= 2");
  const std::uint64_t l = lookahead_len - 1;
  const std::uint64_t a = source.alphabet_size();
  const std::uint64_t sigma_l = enumerate_sigma(source, l);
  if (sigma_l == 0) throw DomainError("sigma{L_s - 1} is empty");
  const std::size_t lambda = ceil_log(a, sigma_l);
  if (lambda == 0) {
    throw DomainError("source admits a single string per length; window formula degenerates");
  }

  std::uint64_t direct = 0;  // sum m|A|^m + sum m|sigma{m}|
  std::uint64_t inner = 1;   // sum (l-m)|A|^m + sum (l-m)|sigma{m}| + 1
  std::uint64_t power = 1;
  for (std::uint64_t m = 1; m <= lambda; ++m) {
    power *= a;
    const std::uint64_t sigma_m = enumerate_sigma(source, m);
    direct += m * power + m * sigma_m;
    inner += (l - m) * power + (l - m) * sigma_m;
  }
  const std::uint64_t n = direct + (l + 1) * inner;
  if (n <= lookahead_len) {
    throw DomainError("window formula produced n <= lookahead_len");
  }
  return n;
}

bool is_extension_closed(const ConstrainedSource& source, std::size_t max_k) {
  source.validate();
  for (std::size_t k = 1; k < max_k; ++k) {
    check_enumerable(source, k + 1);
    bool closed = true;
    walk(source, k, [&](std::string_view s) {
      if (!closed) return;
      std::string ext(s);
      ext.push_back('\0');
      bool any = false;
      for (char c : source.alphabet) {
        ext.back() = c;
        if (!ends_with_forbidden(ext, source.forbidden)) {
          any = true;
          break;
        }
      }
      closed = any;
    });
    if (!closed) return false;
  }
  return true;
}

UniformSampler::UniformSampler(const ConstrainedSource& source,
                               std::size_t length)
    : alphabet_(source.alphabet), length_(length) {
  source.validate();
  std::size_t memory = 0;
  for (const auto& f : source.forbidden) memory = std::max(memory, f.size());
  memory = memory > 0 ? memory - 1 : 0;

  const std::size_t a = alphabet_.size();
  std::map<std::string, std::size_t> ids;
  std::vector<std::string> states;
  std::queue<std::size_t> todo;
  auto intern = [&](const std::string& s) {
    auto [it, fresh] = ids.emplace(s, states.size());
    if (fresh) {
      states.push_back(s);
      next_.resize(states.size() * a, npos);
      todo.push(it->second);
    }
    return it->second;
  };
  start_ = intern("");
  while (!todo.empty()) {
    const std::size_t id = todo.front();
    todo.pop();
    for (std::size_t c = 0; c < a; ++c) {
      std::string w = states[id] + alphabet_[c];
      if (ends_with_forbidden(w, source.forbidden)) continue;
      if (w.size() > memory) w.erase(0, w.size() - memory);
      const std::size_t to = intern(w);
      next_[id * a + c] = to;
    }
  }
  states_ = states.size();

  weight_.assign((length_ + 1) * states_, 0.0);
  std::fill_n(weight_.begin(), states_, 1.0);
  for (std::size_t r = 1; r <= length_; ++r) {
    const double* prev = weight_.data() + (r - 1) * states_;
    double* row = weight_.data() + r * states_;
    double peak = 0.0;
    for (std::size_t s = 0; s < states_; ++s) {
      double w = 0.0;
      for (std::size_t c = 0; c < a; ++c) {
        const std::size_t to = next_[s * a + c];
        if (to != npos) w += prev[to];
      }
      row[s] = w;
      peak = std::max(peak, w);
    }
    if (peak > 0.0) {
      for (std::size_t s = 0; s < states_; ++s) row[s] /= peak;
    }
  }
}

std::string UniformSampler::operator()(std::mt19937_64& rng) const {
  const std::size_t a = alphabet_.size();
  std::string out;
  out.reserve(length_);
  std::size_t state = start_;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t step = 0; step < length_; ++step) {
    const double* row = weight_.data() + (length_ - step - 1) * states_;
    double total = 0.0;
    for (std::size_t c = 0; c < a; ++c) {
      const std::size_t to = next_[state * a + c];
      if (to != npos) total += row[to];
    }
    if (total <= 0.0) throw SamplingError("source admits no string of the requested length");
    double u = unit(rng) * total;
    std::size_t pick = npos;
    for (std::size_t c = 0; c < a; ++c) {
      const std::size_t to = next_[state * a + c];
      if (to == npos || row[to] <= 0.0) continue;
      pick = c;
      if (u < row[to]) break;
      u -= row[to];
    }
    out.push_back(alphabet_[pick]);
    state = next_[state * a + pick];
  }
  return out;
}

std::string sample_rejection(const ConstrainedSource& source, std::size_t length,
                             std::mt19937_64& rng, std::uint64_t max_attempts) {
  source.validate();
  std::uniform_int_distribution<std::size_t> symbol(0, source.alphabet_size() - 1);
  std::string s(length, '\0');
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (auto& c : s) c = source.alphabet[symbol(rng)];
    if (source.admits(s)) return s;
  }
  throw SamplingError("rejection sampling exhausted " + std::to_string(max_attempts) +
                      " attempts for length " + std::to_string(length));
}

double fixed_width_ratio(std::string_view message, std::size_t window_len,
                         std::size_t lookahead_len, std::size_t alphabet_size) {
  if (message.empty()) throw DomainError("ratio is undefined for an empty message");
  const lz77::WindowConfig config{window_len, lookahead_len, std::nullopt};
  const auto compressed = lz77::compress(message, config);
  return static_cast<double>(lz77::encoded_size(compressed, alphabet_size)) /
         static_cast<double>(message.size());
}

BoundReport verify_entropy_bound(const ConstrainedSource& source,
                                 std::size_t lookahead_len, std::size_t samples,
                                 std::uint64_t seed) {
  if (samples == 0) throw DomainError("samples must be positive");
  BoundReport r;
  r.source = source.name;
  r.alphabet_size = source.alphabet_size();
  r.lookahead_len = lookahead_len;
  r.n = recommended_window(source, lookahead_len);
  r.h = per_symbol_entropy(source, lookahead_len - 1).h;
  r.epsilon = epsilon(lookahead_len, source.alphabet_size());

  const std::size_t message_len = r.n - lookahead_len;
  const UniformSampler sampler(source, message_len);
  std::mt19937_64 rng(seed);
  r.rho_min = std::numeric_limits<double>::infinity();
  r.rho_max = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::string m = sampler(rng);
    const lz77::WindowConfig config{r.n, lookahead_len, std::nullopt};
    const auto compressed = lz77::compress(m, config, source.alphabet);
    const double rho = static_cast<double>(lz77::encoded_size(compressed, r.alphabet_size)) /
                       static_cast<double>(message_len);
    r.rho_min = std::min(r.rho_min, rho);
    r.rho_max = std::max(r.rho_max, rho);
    sum += rho;
  }
  r.rho_mean = sum / static_cast<double>(samples);
  r.upper_bound_holds = r.rho_max <= r.h + r.epsilon;
  return r;
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["source"] = source;
  j["alphabet_size"] = alphabet_size;
  j["lookahead_len"] = lookahead_len;
  j["n"] = n;
  j["h"] = h;
  j["epsilon"] = epsilon;
  j["rho_min"] = rho_min;
  j["rho_mean"] = rho_mean;
  j["rho_max"] = rho_max;
  j["upper_bound_holds"] = upper_bound_holds;
  return j.dump();
}

}  // namespace lilguard::entropy
