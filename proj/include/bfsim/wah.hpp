#pragma once

#include <cstdint>
#include <vector>

#include "bfsim/bitmap.hpp"

namespace bfsim {

/// Word-aligned hybrid compressed form of a Bitmap.
///
/// The bitmap is cut into groups of W-1 bits. Each code word is either a
/// literal (top bit 0, the group in the low W-1 payload bits, first group
/// bit at the highest payload position) or a fill (top bit 1, fill value at
/// bit W-2, group count in the low W-2 bits, count >= 1). Trailing bits that
/// do not form a whole group live in the active word, stored here as an
/// LSB-first value plus its length.
struct WahVector {
  unsigned word_width = 64;  // W, 4..64
  std::uint64_t nbits = 0;
  std::vector<std::uint64_t> words;  // low W bits used
  unsigned active_len = 0;           // 0..W-1
  std::uint64_t active_bits = 0;     // low active_len bits

  unsigned group_bits() const { return word_width - 1; }
  std::uint64_t max_fill_count() const {
    return (std::uint64_t{1} << (word_width - 2)) - 1;
  }

  bool is_fill(std::uint64_t w) const {
    return (w >> (word_width - 1)) & 1u;
  }
  bool fill_value(std::uint64_t w) const { return (w >> (word_width - 2)) & 1u; }
  std::uint64_t fill_count(std::uint64_t w) const {
    return w & max_fill_count();
  }
  /// Literal payload as an LSB-first group (bit j = group bit j).
  std::uint64_t literal_group(std::uint64_t w) const;

  static std::uint64_t make_literal(std::uint64_t group_lsb_first, unsigned W);
  static std::uint64_t make_fill(bool value, std::uint64_t count, unsigned W);
};

/// Greedy maximal-run encoding; runs longer than the count field split into
/// consecutive saturated fill words.
WahVector wah_encode(const WordView& src, unsigned word_width = 64);
WahVector wah_encode(const Bitmap& b, unsigned word_width = 64);

/// Exact inverse for any valid word stream, greedy or not. Throws
/// DecodeError on zero fill counts, out-of-width bits, or a stream whose
/// group total does not reproduce nbits.
Bitmap wah_decode(const WahVector& v);

}  // namespace bfsim
