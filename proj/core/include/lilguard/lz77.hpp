// Copyright 2026 The lilguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lilguard::lz77 {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string to_string(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

/// Sliding-window geometry. The window of `window_len` symbols is split into a
/// search buffer of `window_len - lookahead_len` already-encoded symbols and a
/// look-ahead buffer of `lookahead_len` pending symbols.
struct WindowConfig {
  std::size_t window_len = 32768 + 258;
  std::size_t lookahead_len = 258;
  /// When set, the search buffer starts full of this symbol instead of empty.
  std::optional<std::uint8_t> initial_fill;

  std::size_t search_len() const { return window_len - lookahead_len; }

  /// Throws ConfigError unless 0 < lookahead_len < window_len.
  void validate() const;

  /// 32 KiB search buffer, 258-byte look-ahead: the Gzip geometry.
  static WindowConfig gzip_like();

  /// 32 KiB search buffer, 32 KiB look-ahead. Used by the stream monitor so a
  /// fully redundant stream costs one triple per 32 KiB instead of per 258 B.
  static WindowConfig monitor_default();

  friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

/// One codeword (p, l, c): copy `length` symbols starting `offset` positions
/// into the search buffer, then emit `literal`.
struct Triple {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  std::uint8_t literal = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct CompressedSeq {
  std::vector<Triple> triples;
  std::uint64_t original_len = 0;
  WindowConfig config;

  friend bool operator==(const CompressedSeq&, const CompressedSeq&) = default;
};

struct CompressionStats {
  std::size_t compressed_len = 0;  // serialized container bytes
  double ratio = 0.0;              // compressed_len / original bytes
};

// Container layout (little-endian):
//   "LIL1" | version u8 | window_len u32 | lookahead_len u32 | original_len u64
//   [fill u8, version 2 only] | triples: offset u16, length u16, literal u8
inline constexpr std::size_t kHeaderSize = 21;
inline constexpr std::size_t kFilledHeaderSize = kHeaderSize + 1;
inline constexpr std::size_t kTripleWidth = 5;

/// Greedy longest-match parse. Matches may run from the search buffer into the
/// look-ahead buffer; among equally long matches the smallest offset wins.
/// A non-empty `alphabet` restricts the admissible input bytes.
CompressedSeq compress(ByteView input, const WindowConfig& config,
                       ByteView alphabet = {});

inline CompressedSeq compress(std::string_view input,
                              const WindowConfig& config,
                              std::string_view alphabet = {}) {
  return compress(as_bytes(input), config, as_bytes(alphabet));
}

/// Inverse of compress. Throws FormatError on references outside the window.
Bytes decompress(const CompressedSeq& compressed);

/// Fixed codeword width in base-`alphabet_size` digits:
/// ceil(log L_s) + ceil(log (n - L_s)) + 1.
std::size_t codeword_length(const WindowConfig& config,
                            std::size_t alphabet_size);

/// |triples| * codeword_length.
std::size_t encoded_size(const CompressedSeq& compressed,
                         std::size_t alphabet_size);

/// Renders every triple as offset digits, length digits, then the literal,
/// using `alphabet[d]` for digit value d.
std::string encode_fixed_width(const CompressedSeq& compressed,
                               std::string_view alphabet);

Bytes serialize(const CompressedSeq& compressed);
CompressedSeq deserialize(ByteView bytes);

/// Byte length serialize() would produce, without building the buffer.
std::size_t serialized_size(const CompressedSeq& compressed);

/// Serialized size of compress(input, config).
std::size_t compressed_size(ByteView input, const WindowConfig& config);

CompressionStats compression_ratio(ByteView input, const WindowConfig& config);

}  // namespace lilguard::lz77
