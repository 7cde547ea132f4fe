#include "bfsim/directory.hpp"

#include <exception>
#include <thread>

namespace bfsim {

DirectoryVector build_directory_vector(const CsrPartition& part, int j) {
  const auto [lo, hi] = part.rank_range(j);
  DirectoryVector dir;
  dir.owner_i = part.rank;
  dir.owner_j = j;
  dir.bits = Bitmap(hi - lo);
  sub_block_columns(part, j).for_each(
      [&](std::uint64_t, std::uint64_t col) { dir.bits.set_bit(col - lo); });
  return dir;
}

CrossDirectory init_cross_directory_rank(const CsrPartition& part,
                                         Fabric& fabric) {
  const int p = part.ranks;
  CrossDirectory cd;
  cd.row.reserve(p);
  std::vector<Bytes> outgoing(p);
  for (int x = 0; x < p; ++x) {
    cd.row.push_back(build_directory_vector(part, x));
    outgoing[x] = encode_message(CodecSpec{CodecId::raw}, cd.row[x].bits);
  }
  auto incoming =
      fabric.alltoallv(part.rank, std::move(outgoing), {-1, Phase::init});
  cd.col.reserve(p);
  for (int x = 0; x < p; ++x) {
    DirectoryVector dir;
    dir.owner_i = x;
    dir.owner_j = part.rank;
    dir.bits = decode_message(incoming[x], part.local_rows());
    if (dir.bits.nbits() != part.local_rows())
      throw DecodeError("directory vector has wrong length");
    cd.col.push_back(std::move(dir));
  }
  return cd;
}

std::vector<CrossDirectory> init_cross_directory(
    std::span<const CsrPartition> parts, Fabric& fabric) {
  if (static_cast<int>(parts.size()) != fabric.ranks())
    throw std::invalid_argument("partition count != fabric rank count");
  const int p = fabric.ranks();
  std::vector<CrossDirectory> result(p);
  std::vector<std::exception_ptr> errors(p);
  std::vector<std::thread> workers;
  workers.reserve(p);
  for (int i = 0; i < p; ++i) {
    workers.emplace_back([&, i] {
      try {
        result[i] = init_cross_directory_rank(parts[i], fabric);
      } catch (...) {
        errors[i] = std::current_exception();
        fabric.abort("rank worker failed during directory init");
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

Bitmap sieve(const Bitmap& frontier, const DirectoryVector& dir) {
  return bit_and(frontier, dir.bits);
}

namespace {

// all-zero pieces ship as the 9-byte header alone
Bytes header_only_message(const CodecSpec& codec, std::uint64_t nbits) {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(codec.id));
  wire::put_u64(out, nbits);
  return out;
}

}  // namespace

Bytes encode_piece(const CodecSpec& codec, const Bitmap& piece) {
  if (piece.popcount() == 0) return header_only_message(codec, piece.nbits());
  return encode_message(codec, piece);
}

Bytes sieve_encode_piece(const CodecSpec& codec, const Bitmap& frontier,
                         const DirectoryVector& dir) {
  WordView masked(frontier, dir.bits);
  if (masked.popcount() == 0) return header_only_message(codec, masked.nbits());
  return encode_message(codec, masked);
}

}  // namespace bfsim
