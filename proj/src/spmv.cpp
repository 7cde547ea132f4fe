#include "bfsim/spmv.hpp"

namespace bfsim {

Bitmap expand(const CsrPartition& part, const Bitmap& frontier,
              const Bitmap& visited, std::span<VertexId> parents) {
  if (frontier.nbits() != part.n)
    throw std::invalid_argument("expand: frontier length != vertex count");
  if (visited.nbits() != part.local_rows() || parents.size() != part.local_rows())
    throw std::invalid_argument("expand: local state length mismatch");

  Bitmap tentative(part.local_rows());
  for (std::uint64_t r = 0; r < part.local_rows(); ++r) {
    if (visited.get_bit(r)) continue;
    const auto row = part.local_row(r);
    VertexId best = kNoParent;
    for (VertexId u : row) {
      if (frontier.get_bit(u)) best = u;  // columns ascend, last hit is max
    }
    if (best != kNoParent) {
      tentative.set_bit(r);
      parents[r] = best;
    }
  }
  return tentative;
}

Bitmap expand_blocked(const CsrPartition& part, std::span<const Bitmap> pieces,
                      const Bitmap& visited, std::span<VertexId> parents) {
  if (pieces.size() != static_cast<std::size_t>(part.ranks))
    throw std::invalid_argument("expand_blocked: need one piece per rank");
  for (int j = 0; j < part.ranks; ++j) {
    const auto [lo, hi] = part.rank_range(j);
    if (pieces[j].nbits() != hi - lo)
      throw std::invalid_argument("expand_blocked: piece length mismatch");
  }
  if (visited.nbits() != part.local_rows() || parents.size() != part.local_rows())
    throw std::invalid_argument("expand_blocked: local state length mismatch");

  Bitmap tentative(part.local_rows());
  for (std::uint64_t r = 0; r < part.local_rows(); ++r) {
    if (visited.get_bit(r)) continue;
    const auto row = part.local_row(r);
    VertexId best = kNoParent;
    for (VertexId u : row) {
      const int j = part.owner_of(u);
      if (pieces[j].get_bit(u - std::uint64_t(j) * part.block)) best = u;
    }
    if (best != kNoParent) {
      tentative.set_bit(r);
      parents[r] = best;
    }
  }
  return tentative;
}

void update_visited(LevelState& state) {
  state.level += 1;
  for (std::uint64_t pos : state.tentative.set_positions())
    state.levels[pos] = state.level;
  state.visited |= state.tentative;
}

}  // namespace bfsim
