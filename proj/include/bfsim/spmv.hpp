#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bfsim/bitmap.hpp"
#include "bfsim/graph.hpp"

namespace bfsim {

/// Per-rank BFS state for one level. Bitmaps and the parent array are local
/// to the rank's row range; parents hold global ids (kNoParent when unset).
struct LevelState {
  Bitmap visited;    // pi_i
  Bitmap tentative;  // t_i, this level's newly discovered vertices
  std::vector<VertexId> parents;
  std::vector<std::uint32_t> levels;
  std::uint32_t level = 0;

  explicit LevelState(std::uint64_t local_rows)
      : visited(local_rows),
        tentative(local_rows),
        parents(local_rows, kNoParent),
        levels(local_rows, kUnreached) {}
};

/// One level of frontier expansion: t_i(v) is set iff v is unvisited and
/// some frontier vertex u has an edge to v. For each newly discovered v the
/// parent is the highest-labeled frontier neighbor (select-max semiring).
/// frontier is global length; visited and parents are local.
Bitmap expand(const CsrPartition& part, const Bitmap& frontier,
              const Bitmap& visited, std::span<VertexId> parents);

/// Same expansion over per-source-rank frontier pieces (pieces[j] covers
/// rank j's row range). The parent tie-break is taken over the union of all
/// pieces, so the output matches expand() on the concatenated frontier.
Bitmap expand_blocked(const CsrPartition& part, std::span<const Bitmap> pieces,
                      const Bitmap& visited, std::span<VertexId> parents);

/// visited |= tentative, frontier becomes tentative, level advances.
/// Records the level of every newly discovered vertex.
void update_visited(LevelState& state);

}  // namespace bfsim
