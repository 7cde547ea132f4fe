#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfsim/types.hpp"

namespace bfsim {

/// Kronecker (RMAT) generator configuration. N = 2^scale vertices,
/// M = edgefactor * N directed edge tuples before cleaning.
///
/// Generation is a pure function of the config. Randomness comes from a
/// counter-based generator: draw(seed, counter) applies the SplitMix64
/// finalizer to the counter (offset by the SplitMix64 increment), XORs the
/// seed in, and finalizes again. Edge e consumes counters
/// e*scale .. e*scale + scale - 1, one per recursion level.
struct GraphConfig {
  unsigned scale = 16;
  std::uint64_t edgefactor = 16;
  std::uint64_t seed = 1;
  // quadrant probabilities (a, b, c, d); Graph500 reference values
  std::array<double, 4> initiator{0.57, 0.19, 0.19, 0.05};
  // optional deterministic vertex relabeling (Graph500-style permutation)
  bool relabel = false;

  std::uint64_t num_vertices() const { return std::uint64_t{1} << scale; }
  std::uint64_t num_edges() const { return edgefactor << scale; }
  /// Throws std::invalid_argument on bad fields, std::overflow_error when
  /// scale exceeds the 40-bit id budget or M overflows.
  void validate() const;
};

struct EdgeList {
  std::uint64_t num_vertices = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
};

/// Counter-based 64-bit generator used for generation, relabeling and
/// source sampling.
std::uint64_t counter_rand(std::uint64_t seed, std::uint64_t counter);

EdgeList generate_kronecker(const GraphConfig& cfg);

/// Adjacency matrix in CSR, stored pre-transposed: row v lists the sources
/// u of edges (u, v). The benchmark graph is undirected, so after cleaning
/// (symmetrize, dedup, drop self-loops, sort rows) the matrix is symmetric.
struct CsrMatrix {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> row_offsets;  // length n+1
  std::vector<VertexId> column_indices;

  std::span<const VertexId> row(std::uint64_t v) const {
    return {column_indices.data() + row_offsets[v],
            column_indices.data() + row_offsets[v + 1]};
  }
  std::uint64_t entry_count() const { return column_indices.size(); }
  bool has_edge(VertexId u, VertexId v) const;
  std::uint64_t degree(VertexId v) const {
    return row_offsets[v + 1] - row_offsets[v];
  }
};

CsrMatrix build_csr(const EdgeList& edges, std::uint64_t n);

/// One rank's contiguous block of rows [row_lo, row_hi) of the matrix, with
/// ceil(n/p) rows per rank (the last rank possibly short). Column indices
/// stay global; local row r is global row row_lo + r.
struct CsrPartition {
  int rank = 0;
  int ranks = 1;
  std::uint64_t n = 0;
  std::uint64_t block = 0;  // ceil(n/p)
  std::uint64_t row_lo = 0;
  std::uint64_t row_hi = 0;
  std::vector<std::uint64_t> row_offsets;  // local, length local_rows()+1
  std::vector<VertexId> column_indices;

  std::uint64_t local_rows() const { return row_hi - row_lo; }
  std::span<const VertexId> local_row(std::uint64_t r) const {
    return {column_indices.data() + row_offsets[r],
            column_indices.data() + row_offsets[r + 1]};
  }
  int owner_of(VertexId col) const { return static_cast<int>(col / block); }
  std::uint64_t local_index(VertexId global) const { return global - row_lo; }
  /// Row range [lo, hi) of rank j under the same blocking.
  std::pair<std::uint64_t, std::uint64_t> rank_range(int j) const;
};

std::vector<CsrPartition> partition_rows(const CsrMatrix& csr, int p);

/// Read-only view of sub-block A_{i,j}: the partition's entries whose
/// column falls in rank j's row range. No CSR data is copied.
class SubBlockView {
 public:
  SubBlockView(const CsrPartition& part, int j);

  /// Calls f(global_row, global_col) for every entry, rows ascending and
  /// columns ascending within a row.
  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t r = 0; r < part_->local_rows(); ++r) {
      const auto row = part_->local_row(r);
      auto it = std::lower_bound(row.begin(), row.end(), col_lo_);
      for (; it != row.end() && *it < col_hi_; ++it) {
        f(part_->row_lo + r, *it);
      }
    }
  }

  std::uint64_t entry_count() const;
  bool empty() const { return entry_count() == 0; }
  std::uint64_t col_lo() const { return col_lo_; }
  std::uint64_t col_hi() const { return col_hi_; }

 private:
  const CsrPartition* part_;
  std::uint64_t col_lo_;
  std::uint64_t col_hi_;
};

SubBlockView sub_block_columns(const CsrPartition& part, int j);

// Binary edge-list file: magic "KRONEL1\0", u64 vertex count, u64 edge
// count, then (u64 u, u64 v) pairs, all little-endian.
void write_edge_list(const std::string& path, const EdgeList& edges);
EdgeList read_edge_list(const std::string& path);

}  // namespace bfsim
