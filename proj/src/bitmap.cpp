#include "bfsim/bitmap.hpp"

#include <algorithm>
#include <bit>

namespace bfsim {

std::uint64_t Bitmap::popcount() const {
  std::uint64_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

Bitmap& Bitmap::operator|=(const Bitmap& other) {
  check_same_length(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Bitmap& Bitmap::operator&=(const Bitmap& other) {
  check_same_length(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Bitmap& Bitmap::and_not_assign(const Bitmap& mask) {
  check_same_length(mask);
  // both tails are zero, so the result tail stays zero
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~mask.words_[i];
  return *this;
}

Bitmap bit_and(const Bitmap& a, const Bitmap& b) {
  Bitmap out = a;
  out &= b;
  return out;
}

Bitmap bit_and_not(const Bitmap& a, const Bitmap& mask) {
  Bitmap out = a;
  out.and_not_assign(mask);
  return out;
}

std::uint64_t Bitmap::get_bits(std::uint64_t pos, unsigned len) const {
  if (len == 0 || len > 64 || pos + len > nbits_)
    throw std::out_of_range("Bitmap::get_bits: range out of bounds");
  const std::uint64_t wi = pos >> 6;
  const unsigned off = pos & 63;
  std::uint64_t v = words_[wi] >> off;
  if (off != 0 && off + len > 64) v |= words_[wi + 1] << (64 - off);
  if (len < 64) v &= (std::uint64_t{1} << len) - 1;
  return v;
}

void Bitmap::or_bits(std::uint64_t pos, unsigned len, std::uint64_t value) {
  if (len == 0 || len > 64 || pos + len > nbits_)
    throw std::out_of_range("Bitmap::or_bits: range out of bounds");
  if (len < 64) value &= (std::uint64_t{1} << len) - 1;
  const std::uint64_t wi = pos >> 6;
  const unsigned off = pos & 63;
  words_[wi] |= value << off;
  if (off != 0 && off + len > 64) words_[wi + 1] |= value >> (64 - off);
}

void Bitmap::or_blit(const Bitmap& src, std::uint64_t offset) {
  if (offset + src.nbits() > nbits_)
    throw std::out_of_range("Bitmap::or_blit: source does not fit");
  std::uint64_t remaining = src.nbits();
  std::uint64_t pos = 0;
  for (std::size_t i = 0; remaining > 0; ++i) {
    const unsigned len = static_cast<unsigned>(std::min<std::uint64_t>(64, remaining));
    or_bits(offset + pos, len, src.word(i));
    pos += len;
    remaining -= len;
  }
}

void Bitmap::append_payload(Bytes& out) const {
  const std::uint64_t nbytes = raw_payload_bytes(nbits_);
  out.reserve(out.size() + nbytes);
  for (std::uint64_t b = 0; b < nbytes; ++b) {
    out.push_back(static_cast<std::uint8_t>(words_[b >> 3] >> (8 * (b & 7))));
  }
}

Bitmap Bitmap::from_payload(std::uint64_t nbits,
                            std::span<const std::uint8_t> bytes) {
  if (bytes.size() != raw_payload_bytes(nbits))
    throw DecodeError("raw bitmap payload has wrong length");
  Bitmap out(nbits);
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    out.words_[b >> 3] |= std::uint64_t{bytes[b]} << (8 * (b & 7));
  }
  if (nbits % 64 != 0 && !out.words_.empty()) {
    const std::uint64_t tail_mask = (std::uint64_t{1} << (nbits % 64)) - 1;
    if (out.words_.back() & ~tail_mask)
      throw DecodeError("raw bitmap payload has bits past nbits");
  }
  return out;
}

std::vector<std::uint64_t> Bitmap::set_positions() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      const unsigned b = std::countr_zero(w);
      out.push_back(64 * i + b);
      w &= w - 1;
    }
  }
  return out;
}

std::uint64_t WordView::get_bits(std::uint64_t pos, unsigned len) const {
  if (len == 0 || len > 64 || pos + len > nbits())
    throw std::out_of_range("WordView::get_bits: range out of bounds");
  const std::uint64_t wi = pos >> 6;
  const unsigned off = pos & 63;
  std::uint64_t v = word(wi) >> off;
  if (off != 0 && off + len > 64) v |= word(wi + 1) << (64 - off);
  if (len < 64) v &= (std::uint64_t{1} << len) - 1;
  return v;
}

std::uint64_t WordView::popcount() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < word_count(); ++i) n += std::popcount(word(i));
  return n;
}

}  // namespace bfsim
