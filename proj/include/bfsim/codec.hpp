#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfsim/bitmap.hpp"
#include "bfsim/wah.hpp"

namespace bfsim {

/// Wire codec ids. Every encoded message starts with the id byte followed by
/// the bitmap length as a little-endian u64; the body is codec specific:
///   raw    packed bitmap bytes (ceil(nbits/8))
///   wah    u8 W, u64 word count, words as ceil(W/8) little-endian bytes
///          each, u8 active_len, ceil(active_len/8) active payload bytes
///   sparse u64 count, count little-endian u64 indices (ascending)
///   rle    u64 run count, runs of (u8 length >= 1, u8 value) over the raw
///          packed bytes
/// A message that ends right after the header decodes as an all-zero bitmap
/// of the advertised length. Decoding rejects lengths past the 2^40 vertex
/// id budget.
enum class CodecId : std::uint8_t { raw = 0, wah = 1, sparse = 2, rle = 3 };

inline constexpr std::size_t kMessageHeaderBytes = 9;

struct CodecSpec {
  CodecId id = CodecId::wah;
  unsigned wah_width = 64;

  /// Accepts "raw", "wah", "wah:W", "sparse", "rle".
  static CodecSpec parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const CodecSpec&) const = default;
};

/// 64-bit sparse-vector form of a bitmap: just the set positions.
struct SparseVector {
  std::uint64_t nbits = 0;
  std::vector<std::uint64_t> indices;  // strictly increasing, < nbits
};

SparseVector sparse_encode(const Bitmap& b);
Bitmap sparse_decode(const SparseVector& s);

constexpr std::uint64_t sparse_payload_bytes(std::uint64_t popcount) {
  return 8 * popcount;
}

inline constexpr std::uint64_t kMaxMessageBits = std::uint64_t{1} << 40;

Bytes encode_message(const CodecSpec& codec, const WordView& src);
Bytes encode_message(const CodecSpec& codec, const Bitmap& b);
/// Rejects messages claiming more than max_bits before allocating anything,
/// so receivers expecting a known piece length can pass it here.
Bitmap decode_message(std::span<const std::uint8_t> msg,
                      std::uint64_t max_bits = kMaxMessageBits);

/// Exact serialized message size, header included.
std::uint64_t encoded_size(const CodecSpec& codec, const Bitmap& b);

namespace wire {
void put_u64(Bytes& out, std::uint64_t v);
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t pos);
}  // namespace wire

}  // namespace bfsim
