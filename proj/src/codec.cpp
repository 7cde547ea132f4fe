#include "bfsim/codec.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

namespace bfsim {

namespace wire {

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t pos) {
  if (pos + 8 > in.size()) throw DecodeError("message truncated reading u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{in[pos + i]} << (8 * i);
  return v;
}

}  // namespace wire

CodecSpec CodecSpec::parse(std::string_view text) {
  CodecSpec spec;
  if (text == "raw") {
    spec.id = CodecId::raw;
  } else if (text == "sparse") {
    spec.id = CodecId::sparse;
  } else if (text == "rle") {
    spec.id = CodecId::rle;
  } else if (text == "wah" || text.starts_with("wah:")) {
    spec.id = CodecId::wah;
    if (text.size() > 4) {
      unsigned w = 0;
      auto [p, ec] = std::from_chars(text.data() + 4, text.data() + text.size(), w);
      if (ec != std::errc{} || p != text.data() + text.size() || w < 4 || w > 64)
        throw std::invalid_argument("bad WAH width in codec spec: " + std::string(text));
      spec.wah_width = w;
    }
  } else {
    throw std::invalid_argument("unknown codec: " + std::string(text));
  }
  return spec;
}

std::string CodecSpec::to_string() const {
  switch (id) {
    case CodecId::raw:
      return "raw";
    case CodecId::sparse:
      return "sparse";
    case CodecId::rle:
      return "rle";
    case CodecId::wah:
      return "wah:" + std::to_string(wah_width);
  }
  return "?";
}

SparseVector sparse_encode(const Bitmap& b) {
  return SparseVector{b.nbits(), b.set_positions()};
}

Bitmap sparse_decode(const SparseVector& s) {
  Bitmap out(s.nbits);
  std::uint64_t prev = 0;
  bool first = true;
  for (std::uint64_t idx : s.indices) {
    if (idx >= s.nbits) throw DecodeError("sparse index past nbits");
    if (!first && idx <= prev) throw DecodeError("sparse indices not increasing");
    out.set_bit(idx);
    prev = idx;
    first = false;
  }
  return out;
}

namespace {

constexpr unsigned wah_word_bytes(unsigned w) { return (w + 7) / 8; }

void append_wah_body(Bytes& out, const WahVector& v) {
  out.push_back(static_cast<std::uint8_t>(v.word_width));
  wire::put_u64(out, v.words.size());
  const unsigned wb = wah_word_bytes(v.word_width);
  for (std::uint64_t w : v.words) {
    for (unsigned i = 0; i < wb; ++i)
      out.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
  }
  out.push_back(static_cast<std::uint8_t>(v.active_len));
  for (unsigned i = 0; i < (v.active_len + 7) / 8; ++i)
    out.push_back(static_cast<std::uint8_t>(v.active_bits >> (8 * i)));
}

void append_sparse_body(Bytes& out, const WordView& src) {
  const std::size_t count_pos = out.size();
  wire::put_u64(out, 0);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < src.word_count(); ++i) {
    std::uint64_t w = src.word(i);
    while (w) {
      const unsigned b = std::countr_zero(w);
      wire::put_u64(out, 64 * i + b);
      w &= w - 1;
      ++count;
    }
  }
  for (int i = 0; i < 8; ++i)
    out[count_pos + i] = static_cast<std::uint8_t>(count >> (8 * i));
}

void append_raw_body(Bytes& out, const WordView& src) {
  const std::uint64_t nbytes = raw_payload_bytes(src.nbits());
  for (std::uint64_t b = 0; b < nbytes; ++b)
    out.push_back(static_cast<std::uint8_t>(src.word(b >> 3) >> (8 * (b & 7))));
}

// Walks the raw byte stream once, calling run(length, value) per run.
template <class F>
std::uint64_t for_each_rle_run(const WordView& src, F&& run) {
  const std::uint64_t nbytes = raw_payload_bytes(src.nbits());
  std::uint64_t runs = 0;
  std::uint64_t i = 0;
  while (i < nbytes) {
    const std::uint8_t value =
        static_cast<std::uint8_t>(src.word(i >> 3) >> (8 * (i & 7)));
    std::uint64_t len = 1;
    while (len < 255 && i + len < nbytes &&
           static_cast<std::uint8_t>(src.word((i + len) >> 3) >>
                                     (8 * ((i + len) & 7))) == value) {
      ++len;
    }
    run(static_cast<std::uint8_t>(len), value);
    i += len;
    ++runs;
  }
  return runs;
}

void append_rle_body(Bytes& out, const WordView& src) {
  const std::size_t count_pos = out.size();
  wire::put_u64(out, 0);
  const std::uint64_t runs = for_each_rle_run(src, [&](std::uint8_t len, std::uint8_t value) {
    out.push_back(len);
    out.push_back(value);
  });
  for (int i = 0; i < 8; ++i)
    out[count_pos + i] = static_cast<std::uint8_t>(runs >> (8 * i));
}

}  // namespace

Bytes encode_message(const CodecSpec& codec, const WordView& src) {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(codec.id));
  wire::put_u64(out, src.nbits());
  switch (codec.id) {
    case CodecId::raw:
      append_raw_body(out, src);
      break;
    case CodecId::wah:
      append_wah_body(out, wah_encode(src, codec.wah_width));
      break;
    case CodecId::sparse:
      append_sparse_body(out, src);
      break;
    case CodecId::rle:
      append_rle_body(out, src);
      break;
  }
  return out;
}

Bytes encode_message(const CodecSpec& codec, const Bitmap& b) {
  return encode_message(codec, WordView(b));
}

namespace {

Bitmap decode_wah_body(std::uint64_t nbits, std::span<const std::uint8_t> body) {
  std::size_t pos = 0;
  if (body.size() < 1) throw DecodeError("wah body truncated");
  WahVector v;
  v.nbits = nbits;
  v.word_width = body[pos++];
  if (v.word_width < 4 || v.word_width > 64)
    throw DecodeError("wah word width out of range");
  const std::uint64_t word_count = wire::get_u64(body, pos);
  pos += 8;
  const unsigned wb = wah_word_bytes(v.word_width);
  // divide, never multiply: word_count comes off the wire
  if (word_count > (body.size() - pos) / wb)
    throw DecodeError("wah body truncated");
  if (body.size() < pos + word_count * wb + 1)
    throw DecodeError("wah body truncated");
  v.words.reserve(word_count);
  for (std::uint64_t k = 0; k < word_count; ++k) {
    std::uint64_t w = 0;
    for (unsigned i = 0; i < wb; ++i) w |= std::uint64_t{body[pos + i]} << (8 * i);
    pos += wb;
    v.words.push_back(w);
  }
  v.active_len = body[pos++];
  const unsigned ab = (v.active_len + 7) / 8;
  if (body.size() != pos + ab) throw DecodeError("wah body length mismatch");
  for (unsigned i = 0; i < ab; ++i)
    v.active_bits |= std::uint64_t{body[pos + i]} << (8 * i);
  return wah_decode(v);
}

Bitmap decode_sparse_body(std::uint64_t nbits, std::span<const std::uint8_t> body) {
  const std::uint64_t count = wire::get_u64(body, 0);
  if (count > (body.size() - 8) / 8 || body.size() != 8 + 8 * count)
    throw DecodeError("sparse body length mismatch");
  SparseVector s;
  s.nbits = nbits;
  s.indices.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k)
    s.indices.push_back(wire::get_u64(body, 8 + 8 * k));
  return sparse_decode(s);
}

Bitmap decode_rle_body(std::uint64_t nbits, std::span<const std::uint8_t> body) {
  const std::uint64_t runs = wire::get_u64(body, 0);
  if (runs > (body.size() - 8) / 2 || body.size() != 8 + 2 * runs)
    throw DecodeError("rle body length mismatch");
  Bytes payload;
  payload.reserve(255 * runs);
  for (std::uint64_t k = 0; k < runs; ++k) {
    const std::uint8_t len = body[8 + 2 * k];
    const std::uint8_t value = body[8 + 2 * k + 1];
    if (len == 0) throw DecodeError("rle run of zero length");
    payload.insert(payload.end(), len, value);
  }
  if (payload.size() != raw_payload_bytes(nbits))
    throw DecodeError("rle payload does not expand to nbits");
  return Bitmap::from_payload(nbits, payload);
}

}  // namespace

Bitmap decode_message(std::span<const std::uint8_t> msg, std::uint64_t max_bits) {
  if (msg.size() < kMessageHeaderBytes) throw DecodeError("message shorter than header");
  const std::uint8_t id = msg[0];
  if (id > static_cast<std::uint8_t>(CodecId::rle))
    throw DecodeError("unknown codec id");
  const std::uint64_t nbits = wire::get_u64(msg, 1);
  if (nbits > max_bits || nbits > kMaxMessageBits)
    throw DecodeError("message length exceeds the receive limit");
  const auto body = msg.subspan(kMessageHeaderBytes);
  if (body.empty()) return Bitmap(nbits);  // header-only empty piece
  switch (static_cast<CodecId>(id)) {
    case CodecId::raw:
      return Bitmap::from_payload(nbits, body);
    case CodecId::wah:
      return decode_wah_body(nbits, body);
    case CodecId::sparse:
      return decode_sparse_body(nbits, body);
    case CodecId::rle:
      return decode_rle_body(nbits, body);
  }
  throw DecodeError("unknown codec id");
}

std::uint64_t encoded_size(const CodecSpec& codec, const Bitmap& b) {
  const std::uint64_t header = kMessageHeaderBytes;
  switch (codec.id) {
    case CodecId::raw:
      return header + raw_payload_bytes(b.nbits());
    case CodecId::sparse:
      return header + 8 + sparse_payload_bytes(b.popcount());
    case CodecId::wah: {
      const WahVector v = wah_encode(b, codec.wah_width);
      return header + 1 + 8 + v.words.size() * wah_word_bytes(v.word_width) + 1 +
             (v.active_len + 7) / 8;
    }
    case CodecId::rle: {
      const std::uint64_t runs = for_each_rle_run(WordView(b), [](std::uint8_t, std::uint8_t) {});
      return header + 8 + 2 * runs;
    }
  }
  throw std::invalid_argument("unknown codec id");
}

}  // namespace bfsim
