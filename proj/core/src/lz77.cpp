// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "lilguard/lz77.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "lilguard/error.hpp"

namespace lilguard::lz77 {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'L', 'I', 'L', '1'};
constexpr std::uint8_t kVersionPlain = 1;
constexpr std::uint8_t kVersionFilled = 2;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Positions sharing a key, kept oldest-first so the first acceptable candidate
// is also the one with the smallest offset. Entries that slid out of the
// search buffer are dropped lazily.
class ChainIndex {
 public:
  ChainIndex(std::size_t buckets, std::size_t positions)
      : head_(buckets, kNone), tail_(buckets, kNone), next_(positions, kNone) {}

  void insert(std::uint32_t bucket, std::uint32_t pos) {
    next_[pos] = kNone;
    if (tail_[bucket] == kNone) {
      head_[bucket] = pos;
    } else {
      next_[tail_[bucket]] = pos;
    }
    tail_[bucket] = pos;
  }

  std::uint32_t oldest(std::uint32_t bucket, std::uint32_t lo) {
    std::uint32_t h = head_[bucket];
    while (h != kNone && h < lo) h = next_[h];
    head_[bucket] = h;
    if (h == kNone) tail_[bucket] = kNone;
    return h;
  }

  std::uint32_t next(std::uint32_t pos) const { return next_[pos]; }

 private:
  std::vector<std::uint32_t> head_;
  std::vector<std::uint32_t> tail_;
  std::vector<std::uint32_t> next_;
};

constexpr unsigned kHashBits = 15;

std::uint32_t hash3(const std::uint8_t* p) {
  const std::uint32_t v = (std::uint32_t{p[0]} << 16) |
                          (std::uint32_t{p[1]} << 8) | std::uint32_t{p[2]};
  return (v * 2654435761u) >> (32 - kHashBits);
}

std::uint32_t key2(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 8) | std::uint32_t{p[1]};
}

class MatchFinder {
 public:
  MatchFinder(ByteView data, std::size_t search_len)
      : data_(data),
        search_len_(search_len),
        by3_(std::size_t{1} << kHashBits, data.size()),
        by2_(std::size_t{1} << 16, data.size()),
        by1_(256, data.size()) {}

  void insert(std::uint32_t pos) {
    const std::size_t n = data_.size();
    const std::uint8_t* p = data_.data() + pos;
    by1_.insert(p[0], pos);
    if (pos + 1 < n) by2_.insert(key2(p), pos);
    if (pos + 2 < n) by3_.insert(hash3(p), pos);
  }

  struct Match {
    std::uint32_t pos;
    std::uint32_t length;
  };

  // Longest match for `pos` that is at most `max_len` long; ties go to the
  // oldest candidate. Returns length 0 when nothing matches.
  Match find(std::uint32_t pos, std::uint32_t max_len) {
    const std::uint32_t lo =
        pos >= search_len_ ? static_cast<std::uint32_t>(pos - search_len_) : 0;
    Match best{lo, 0};
    if (max_len == 0 || pos == lo) return best;
    const std::uint8_t* here = data_.data() + pos;

    if (max_len >= 3) {
      for (std::uint32_t q = by3_.oldest(hash3(here), lo); q != kNone && q < pos;
           q = by3_.next(q)) {
        const std::uint32_t len = extend(q, pos, max_len);
        if (len > best.length) {
          best = {q, len};
          if (len == max_len) break;
        }
      }
      if (best.length >= 3) return best;
      best = {lo, 0};
    }
    if (max_len >= 2) {
      const std::uint32_t q = by2_.oldest(key2(here), lo);
      if (q != kNone && q < pos) return {q, 2};
    }
    const std::uint32_t q = by1_.oldest(here[0], lo);
    if (q != kNone && q < pos) return {q, 1};
    return best;
  }

 private:
  std::uint32_t extend(std::uint32_t q, std::uint32_t pos,
                       std::uint32_t max_len) const {
    const std::uint8_t* a = data_.data() + q;
    const std::uint8_t* b = data_.data() + pos;
    std::uint32_t len = 0;
    while (len < max_len && a[len] == b[len]) ++len;
    return len;
  }

  ByteView data_;
  std::size_t search_len_;
  ChainIndex by3_;
  ChainIndex by2_;
  ChainIndex by1_;
};

std::size_t ceil_log(std::size_t base, std::size_t x) {
  // Smallest d with base^d >= x.
  std::size_t d = 0;
  std::size_t p = 1;
  while (p < x) {
    if (p > std::numeric_limits<std::size_t>::max() / base) return d + 1;
    p *= base;
    ++d;
  }
  return d;
}

void put_le(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(ByteView in, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= std::uint64_t{in[at + i]} << (8 * i);
  return v;
}

void check_representable(const WindowConfig& config) {
  if (config.window_len > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("window_len does not fit the container's u32 field");
  }
  if (config.search_len() > 65536 || config.lookahead_len > 65536) {
    throw ConfigError(
        "geometry not representable: offsets and lengths are stored as u16");
  }
}

}  // namespace

void WindowConfig::validate() const {
  if (lookahead_len == 0) throw ConfigError("lookahead_len must be positive");
  if (lookahead_len >= window_len) {
    throw ConfigError("lookahead_len must be smaller than window_len");
  }
}

WindowConfig WindowConfig::gzip_like() { return {32768 + 258, 258, std::nullopt}; }

WindowConfig WindowConfig::monitor_default() {
  return {32768 + 32768, 32768, std::nullopt};
}

CompressedSeq compress(ByteView input, const WindowConfig& config,
                       ByteView alphabet) {
  config.validate();
  if (!alphabet.empty()) {
    std::array<bool, 256> allowed{};
    for (auto s : alphabet) allowed[s] = true;
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (!allowed[input[i]]) {
        throw DomainError("input symbol at position " + std::to_string(i) +
                          " is outside the declared alphabet");
      }
    }
  }

  CompressedSeq out;
  out.original_len = input.size();
  out.config = config;
  if (input.empty()) return out;
  if (input.size() + config.search_len() >= kNone) {
    throw DomainError("input too large for 32-bit positions");
  }

  const std::size_t search = config.search_len();
  Bytes filled;
  ByteView data = input;
  std::uint32_t base = 0;
  if (config.initial_fill) {
    filled.assign(search, *config.initial_fill);
    filled.insert(filled.end(), input.begin(), input.end());
    data = filled;
    base = static_cast<std::uint32_t>(search);
  }

  MatchFinder finder(data, search);
  for (std::uint32_t q = 0; q < base; ++q) finder.insert(q);

  const auto end = static_cast<std::uint32_t>(data.size());
  const auto longest = static_cast<std::uint32_t>(config.lookahead_len - 1);
  out.triples.reserve(input.size() / 4 + 1);
  std::uint32_t pos = base;
  while (pos < end) {
    const std::uint32_t max_len = std::min(longest, end - pos - 1);
    const auto m = finder.find(pos, max_len);
    const std::uint32_t lo =
        pos >= search ? static_cast<std::uint32_t>(pos - search) : 0;
    Triple t;
    t.length = m.length;
    t.offset = m.length == 0 ? 0 : m.pos - lo;
    t.literal = data[pos + m.length];
    out.triples.push_back(t);
    const std::uint32_t next = pos + m.length + 1;
    for (; pos < next; ++pos) finder.insert(pos);
  }
  return out;
}

Bytes decompress(const CompressedSeq& compressed) {
  const WindowConfig& config = compressed.config;
  config.validate();
  const std::size_t search = config.search_len();
  Bytes out;
  std::size_t base = 0;
  if (config.initial_fill) {
    out.assign(search, *config.initial_fill);
    base = search;
  }
  out.reserve(base + compressed.original_len);

  for (std::size_t i = 0; i < compressed.triples.size(); ++i) {
    const Triple& t = compressed.triples[i];
    const std::size_t pos = out.size();
    const std::size_t lo = pos >= search ? pos - search : 0;
    if (t.offset >= search) {
      throw FormatError("triple " + std::to_string(i) + ": offset beyond search buffer");
    }
    if (t.length >= config.lookahead_len) {
      throw FormatError("triple " + std::to_string(i) + ": length beyond look-ahead buffer");
    }
    if (t.length > 0 && lo + t.offset >= pos) {
      throw FormatError("triple " + std::to_string(i) +
                        ": offset references data not yet reconstructed");
    }
    if (pos - base + t.length + 1 > compressed.original_len) {
      throw FormatError("triple " + std::to_string(i) + ": output exceeds original_len");
    }
    const std::size_t from = lo + t.offset;
    for (std::size_t k = 0; k < t.length; ++k) out.push_back(out[from + k]);
    out.push_back(t.literal);
  }
  if (out.size() - base != compressed.original_len) {
    throw FormatError("triples reconstruct fewer symbols than original_len");
  }
  if (base > 0) out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(base));
  return out;
}

std::size_t codeword_length(const WindowConfig& config,
                            std::size_t alphabet_size) {
  if (alphabet_size < 2) throw DomainError("alphabet_size must be at least 2");
  config.validate();
  return ceil_log(alphabet_size, config.lookahead_len) +
         ceil_log(alphabet_size, config.search_len()) + 1;
}

std::size_t encoded_size(const CompressedSeq& compressed,
                         std::size_t alphabet_size) {
  return compressed.triples.size() *
         codeword_length(compressed.config, alphabet_size);
}

std::string encode_fixed_width(const CompressedSeq& compressed,
                               std::string_view alphabet) {
  const std::size_t base = alphabet.size();
  if (base < 2) throw DomainError("alphabet must hold at least 2 symbols");
  const std::size_t offset_digits = ceil_log(base, compressed.config.search_len());
  const std::size_t length_digits = ceil_log(base, compressed.config.lookahead_len);

  auto put = [&](std::string& out, std::size_t value, std::size_t digits) {
    std::string tmp(digits, alphabet[0]);
    for (std::size_t i = digits; i-- > 0;) {
      tmp[i] = alphabet[value % base];
      value /= base;
    }
    if (value != 0) throw DomainError("value does not fit its fixed-width field");
    out += tmp;
  };

  std::string out;
  out.reserve(compressed.triples.size() * (offset_digits + length_digits + 1));
  for (const Triple& t : compressed.triples) {
    if (alphabet.find(static_cast<char>(t.literal)) == std::string_view::npos) {
      throw DomainError("literal outside the encoding alphabet");
    }
    put(out, t.offset, offset_digits);
    put(out, t.length, length_digits);
    out.push_back(static_cast<char>(t.literal));
  }
  return out;
}

std::size_t serialized_size(const CompressedSeq& compressed) {
  const std::size_t header =
      compressed.config.initial_fill ? kFilledHeaderSize : kHeaderSize;
  return header + compressed.triples.size() * kTripleWidth;
}

Bytes serialize(const CompressedSeq& compressed) {
  const WindowConfig& config = compressed.config;
  config.validate();
  check_representable(config);
  Bytes out;
  out.reserve(serialized_size(compressed));
  for (std::uint8_t b : kMagic) out.push_back(b);
  out.push_back(config.initial_fill ? kVersionFilled : kVersionPlain);
  put_le(out, config.window_len, 4);
  put_le(out, config.lookahead_len, 4);
  put_le(out, compressed.original_len, 8);
  if (config.initial_fill) out.push_back(*config.initial_fill);
  for (const Triple& t : compressed.triples) {
    put_le(out, t.offset, 2);
    put_le(out, t.length, 2);
    out.push_back(t.literal);
  }
  return out;
}

CompressedSeq deserialize(ByteView bytes) {
  if (bytes.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("bad magic: not a LIL1 container");
  }
  if (bytes.size() < kHeaderSize) throw FormatError("truncated header");
  const std::uint8_t version = bytes[4];
  if (version != kVersionPlain && version != kVersionFilled) {
    throw FormatError("unsupported container version " + std::to_string(version));
  }
  const std::size_t header = version == kVersionFilled ? kFilledHeaderSize : kHeaderSize;
  if (bytes.size() < header) throw FormatError("truncated header");

  CompressedSeq out;
  out.config.window_len = get_le(bytes, 5, 4);
  out.config.lookahead_len = get_le(bytes, 9, 4);
  out.original_len = get_le(bytes, 13, 8);
  if (version == kVersionFilled) out.config.initial_fill = bytes[21];
  try {
    out.config.validate();
    check_representable(out.config);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("header carries an invalid window: ") + e.what());
  }

  const std::size_t payload = bytes.size() - header;
  if (payload % kTripleWidth != 0) throw FormatError("truncated triple stream");
  const std::size_t count = payload / kTripleWidth;
  if (count > out.original_len) {
    throw FormatError("more triples than original symbols");
  }
  out.triples.reserve(count);
  std::uint64_t covered = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = header + i * kTripleWidth;
    Triple t;
    t.offset = static_cast<std::uint32_t>(get_le(bytes, at, 2));
    t.length = static_cast<std::uint32_t>(get_le(bytes, at + 2, 2));
    t.literal = bytes[at + 4];
    if (t.offset >= out.config.search_len() || t.length >= out.config.lookahead_len) {
      throw FormatError("triple " + std::to_string(i) + " exceeds the header's window");
    }
    covered += t.length + 1;
    out.triples.push_back(t);
  }
  if (covered != out.original_len) {
    throw FormatError("triple stream length disagrees with original_len");
  }
  return out;
}

std::size_t compressed_size(ByteView input, const WindowConfig& config) {
  return serialized_size(compress(input, config));
}

CompressionStats compression_ratio(ByteView input, const WindowConfig& config) {
  if (input.empty()) throw DomainError("compression ratio is undefined for empty input");
  CompressionStats stats;
  stats.compressed_len = compressed_size(input, config);
  stats.ratio = static_cast<double>(stats.compressed_len) /
                static_cast<double>(input.size());
  return stats;
}

}  // namespace lilguard::lz77
