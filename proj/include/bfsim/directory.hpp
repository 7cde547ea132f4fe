#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bfsim/bitmap.hpp"
#include "bfsim/codec.hpp"
#include "bfsim/fabric.hpp"
#include "bfsim/graph.hpp"

namespace bfsim {

/// Occupancy mask of sub-block A_{i,j}: bit k is set iff column row_lo(j)+k
/// of the sub-block holds at least one nonzero. Length is rank j's row
/// count, so the vector indexes rank j's vertices.
struct DirectoryVector {
  int owner_i = 0;
  int owner_j = 0;
  Bitmap bits;
};

DirectoryVector build_directory_vector(const CsrPartition& part, int j);

/// Rank i's cross directory: its own row of directory vectors {V_{i,x}} and
/// copies of its column {V_{x,i}} received once at initialization. The
/// column copies drive sender-side sieving.
struct CrossDirectory {
  std::vector<DirectoryVector> row;  // row[x] = V_{i,x}
  std::vector<DirectoryVector> col;  // col[x] = V_{x,i}
};

/// Per-rank half of the init exchange; call from inside a rank worker. The
/// exchange ships raw-serialized bitmaps over one alltoallv charged under
/// phase "init", kept out of the per-level traffic.
CrossDirectory init_cross_directory_rank(const CsrPartition& part,
                                         Fabric& fabric);

/// Driver form: spawns one worker per rank and returns all directories.
std::vector<CrossDirectory> init_cross_directory(
    std::span<const CsrPartition> parts, Fabric& fabric);

/// Elementwise AND of an outgoing frontier with the destination's directory
/// vector.
Bitmap sieve(const Bitmap& frontier, const DirectoryVector& dir);

/// Encodes a frontier piece for the wire. An all-zero piece becomes a
/// header-only message so near-empty exchanges cost 9 bytes per peer.
Bytes encode_piece(const CodecSpec& codec, const Bitmap& piece);

/// Fused sieve + encode: streams frontier AND directory through the codec
/// without materializing the sieved copy. Byte-identical to
/// encode_piece(codec, sieve(frontier, dir)).
Bytes sieve_encode_piece(const CodecSpec& codec, const Bitmap& frontier,
                         const DirectoryVector& dir);

}  // namespace bfsim
