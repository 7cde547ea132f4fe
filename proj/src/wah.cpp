#include "bfsim/wah.hpp"

#include <algorithm>

namespace bfsim {

namespace {

void check_width(unsigned w) {
  if (w < 4 || w > 64)
    throw std::invalid_argument("WAH word width must be in [4, 64]");
}

// Literal payloads store the first group bit at the highest payload
// position, so a group reads the same left to right as the bitmap does.
std::uint64_t reverse_bits(std::uint64_t v, unsigned n) {
  std::uint64_t out = 0;
  for (unsigned j = 0; j < n; ++j) {
    if ((v >> j) & 1u) out |= std::uint64_t{1} << (n - 1 - j);
  }
  return out;
}

}  // namespace

std::uint64_t WahVector::literal_group(std::uint64_t w) const {
  return reverse_bits(w, group_bits());
}

std::uint64_t WahVector::make_literal(std::uint64_t group_lsb_first,
                                      unsigned W) {
  return reverse_bits(group_lsb_first, W - 1);
}

std::uint64_t WahVector::make_fill(bool value, std::uint64_t count,
                                   unsigned W) {
  return (std::uint64_t{1} << (W - 1)) |
         (std::uint64_t{value} << (W - 2)) | count;
}

WahVector wah_encode(const WordView& src, unsigned word_width) {
  check_width(word_width);
  const unsigned g = word_width - 1;
  const std::uint64_t nbits = src.nbits();
  const std::uint64_t ngroups = nbits / g;
  WahVector out;
  out.word_width = word_width;
  out.nbits = nbits;
  out.active_len = static_cast<unsigned>(nbits % g);

  const std::uint64_t ones = (std::uint64_t{1} << g) - 1;
  const std::uint64_t max_count = out.max_fill_count();

  bool pending_value = false;
  std::uint64_t pending_count = 0;
  auto flush_fill = [&] {
    while (pending_count > 0) {
      const std::uint64_t c = std::min(pending_count, max_count);
      out.words.push_back(WahVector::make_fill(pending_value, c, word_width));
      pending_count -= c;
    }
  };

  for (std::uint64_t i = 0; i < ngroups; ++i) {
    const std::uint64_t grp = src.get_bits(i * g, g);
    if (grp == 0 || grp == ones) {
      const bool value = grp != 0;
      if (pending_count > 0 && pending_value != value) flush_fill();
      pending_value = value;
      ++pending_count;
    } else {
      flush_fill();
      out.words.push_back(WahVector::make_literal(grp, word_width));
    }
  }
  flush_fill();

  if (out.active_len > 0)
    out.active_bits = src.get_bits(ngroups * g, out.active_len);
  return out;
}

WahVector wah_encode(const Bitmap& b, unsigned word_width) {
  return wah_encode(WordView(b), word_width);
}

Bitmap wah_decode(const WahVector& v) {
  check_width(v.word_width);
  const unsigned g = v.group_bits();
  if (v.active_len >= v.word_width)
    throw DecodeError("WAH active word longer than word width");
  if (v.active_len < 64 && (v.active_bits >> v.active_len) != 0)
    throw DecodeError("WAH active word has bits past its length");

  const std::uint64_t word_mask =
      v.word_width == 64 ? ~std::uint64_t{0}
                         : (std::uint64_t{1} << v.word_width) - 1;
  std::uint64_t groups = 0;
  for (std::uint64_t w : v.words) {
    if (w & ~word_mask) throw DecodeError("WAH code word exceeds word width");
    if (v.is_fill(w)) {
      const std::uint64_t c = v.fill_count(w);
      if (c == 0) throw DecodeError("WAH fill word with zero count");
      groups += c;
    } else {
      groups += 1;
    }
  }
  if (groups * g + v.active_len != v.nbits)
    throw DecodeError("WAH stream length does not match nbits");

  Bitmap out(v.nbits);
  std::uint64_t pos = 0;
  const std::uint64_t ones = (std::uint64_t{1} << g) - 1;
  for (std::uint64_t w : v.words) {
    if (v.is_fill(w)) {
      std::uint64_t run = v.fill_count(w) * g;
      if (v.fill_value(w)) {
        while (run > 0) {
          const unsigned len = static_cast<unsigned>(std::min<std::uint64_t>(64, run));
          out.or_bits(pos, len, ~std::uint64_t{0});
          pos += len;
          run -= len;
        }
      } else {
        pos += run;
      }
    } else {
      const std::uint64_t grp = v.literal_group(w) & ones;
      out.or_bits(pos, g, grp);
      pos += g;
    }
  }
  if (v.active_len > 0) out.or_bits(pos, v.active_len, v.active_bits);
  return out;
}

}  // namespace bfsim
