#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bfsim/types.hpp"

namespace bfsim {

/// Fixed-length bit vector over vertex ids.
///
/// Storage is packed 64-bit words; bit k lives at bit (k mod 64) of word
/// floor(k/64). The serialized byte stream is little-endian within bytes:
/// bit k of the bitmap is bit (k mod 8) of byte floor(k/8). Bits at
/// positions >= nbits are kept zero in storage.
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(std::uint64_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::uint64_t nbits() const { return nbits_; }
  std::size_t word_count() const { return words_.size(); }
  std::uint64_t word(std::size_t i) const { return words_[i]; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool get_bit(std::uint64_t k) const {
    check_index(k);
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }
  void set_bit(std::uint64_t k) {
    check_index(k);
    words_[k >> 6] |= std::uint64_t{1} << (k & 63);
  }
  void clear_bit(std::uint64_t k) {
    check_index(k);
    words_[k >> 6] &= ~(std::uint64_t{1} << (k & 63));
  }

  std::uint64_t popcount() const;

  Bitmap& operator|=(const Bitmap& other);
  Bitmap& operator&=(const Bitmap& other);
  /// this = this AND NOT mask.
  Bitmap& and_not_assign(const Bitmap& mask);

  friend Bitmap operator|(Bitmap a, const Bitmap& b) { return a |= b; }
  friend Bitmap operator&(Bitmap a, const Bitmap& b) { return a &= b; }

  bool operator==(const Bitmap&) const = default;

  /// Reads len (1..64) bits starting at bit pos, LSB-first. pos+len must not
  /// exceed nbits.
  std::uint64_t get_bits(std::uint64_t pos, unsigned len) const;
  /// ORs the low len bits of value into positions [pos, pos+len).
  void or_bits(std::uint64_t pos, unsigned len, std::uint64_t value);
  /// ORs all of src into this starting at bit offset.
  void or_blit(const Bitmap& src, std::uint64_t offset);

  /// Appends the packed byte serialization (ceil(nbits/8) bytes).
  void append_payload(Bytes& out) const;
  Bytes payload() const {
    Bytes out;
    append_payload(out);
    return out;
  }
  /// Rebuilds a bitmap from its packed byte serialization. Rejects streams
  /// of the wrong length or with nonzero bits past nbits.
  static Bitmap from_payload(std::uint64_t nbits,
                             std::span<const std::uint8_t> bytes);

  /// Positions of set bits, ascending.
  std::vector<std::uint64_t> set_positions() const;

 private:
  void check_index(std::uint64_t k) const {
    if (k >= nbits_) throw std::out_of_range("Bitmap: bit index out of range");
  }
  void check_same_length(const Bitmap& other) const {
    if (nbits_ != other.nbits_)
      throw std::invalid_argument("Bitmap: operand lengths differ");
  }

  std::uint64_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

Bitmap bit_and(const Bitmap& a, const Bitmap& b);
/// Bit k of the result is a_k AND NOT mask_k.
Bitmap bit_and_not(const Bitmap& a, const Bitmap& mask);

/// Bytes of the packed serialization of an nbits-long bitmap.
constexpr std::uint64_t raw_payload_bytes(std::uint64_t nbits) {
  return (nbits + 7) / 8;
}

/// Read-only word stream over a bitmap, optionally AND-masked with a second
/// bitmap of equal length. Lets codecs encode a sieved bitmap without
/// materializing the copy.
class WordView {
 public:
  explicit WordView(const Bitmap& a) : a_(&a), mask_(nullptr) {}
  WordView(const Bitmap& a, const Bitmap& mask) : a_(&a), mask_(&mask) {
    if (a.nbits() != mask.nbits())
      throw std::invalid_argument("WordView: operand lengths differ");
  }

  std::uint64_t nbits() const { return a_->nbits(); }
  std::size_t word_count() const { return a_->word_count(); }
  std::uint64_t word(std::size_t i) const {
    return mask_ ? (a_->word(i) & mask_->word(i)) : a_->word(i);
  }
  std::uint64_t get_bits(std::uint64_t pos, unsigned len) const;
  std::uint64_t popcount() const;

 private:
  const Bitmap* a_;
  const Bitmap* mask_;
};

}  // namespace bfsim
