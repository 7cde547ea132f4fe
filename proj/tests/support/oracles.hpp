#pragma once

// Test-only reference implementations, independent of the library code
// paths they check.

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "bfsim/bitmap.hpp"
#include "bfsim/graph.hpp"
#include "bfsim/types.hpp"
#include "bfsim/wah.hpp"

namespace bfsim::testing {

struct SerialBfs {
  std::vector<std::uint32_t> levels;
  std::vector<VertexId> parents;
  std::uint32_t depth = 0;
};

// Queue-based BFS with the select-max parent rule: parent(v) is the
// largest neighbor one level above v.
inline SerialBfs serial_bfs(const CsrMatrix& csr, VertexId source) {
  SerialBfs out;
  out.levels.assign(csr.n, kUnreached);
  out.parents.assign(csr.n, kNoParent);
  out.levels[source] = 0;
  out.parents[source] = source;
  std::deque<VertexId> queue{source};
  std::uint32_t max_level = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (VertexId u : csr.row(v)) {
      if (out.levels[u] == kUnreached) {
        out.levels[u] = out.levels[v] + 1;
        max_level = out.levels[u];
        queue.push_back(u);
      }
    }
  }
  for (std::uint64_t v = 0; v < csr.n; ++v) {
    if (v == source || out.levels[v] == kUnreached) continue;
    VertexId best = kNoParent;
    for (VertexId u : csr.row(v)) {
      if (out.levels[u] + 1 == out.levels[v] &&
          (best == kNoParent || u > best)) {
        best = u;
      }
    }
    out.parents[v] = best;
  }
  out.depth = max_level + 1;
  return out;
}

// Expands every WAH word independently, bit by bit.
inline std::vector<bool> naive_wah_expand(const WahVector& v) {
  const unsigned g = v.word_width - 1;
  std::vector<bool> bits;
  for (std::uint64_t w : v.words) {
    if ((w >> (v.word_width - 1)) & 1u) {
      const bool value = (w >> (v.word_width - 2)) & 1u;
      const std::uint64_t count = w & ((std::uint64_t{1} << (v.word_width - 2)) - 1);
      for (std::uint64_t k = 0; k < count * g; ++k) bits.push_back(value);
    } else {
      // payload is stored first-group-bit-highest
      for (unsigned j = 0; j < g; ++j) bits.push_back((w >> (g - 1 - j)) & 1u);
    }
  }
  for (unsigned j = 0; j < v.active_len; ++j)
    bits.push_back((v.active_bits >> j) & 1u);
  return bits;
}

inline std::vector<bool> to_bool_vector(const Bitmap& b) {
  std::vector<bool> out(b.nbits());
  for (std::uint64_t k = 0; k < b.nbits(); ++k) out[k] = b.get_bit(k);
  return out;
}

// Dense double-loop frontier expansion over the rows [row_lo, row_hi) of a
// boolean matrix, with the same max tie-break the engine promises.
struct DenseExpand {
  Bitmap tentative;
  std::vector<VertexId> parents;  // local, kNoParent where unset
};

inline DenseExpand dense_expand(const std::vector<std::vector<bool>>& adj,
                                std::uint64_t row_lo, std::uint64_t row_hi,
                                const std::vector<bool>& frontier,
                                const std::vector<bool>& visited_local) {
  DenseExpand out{Bitmap(row_hi - row_lo),
                  std::vector<VertexId>(row_hi - row_lo, kNoParent)};
  for (std::uint64_t v = row_lo; v < row_hi; ++v) {
    if (visited_local[v - row_lo]) continue;
    VertexId best = kNoParent;
    for (std::uint64_t u = 0; u < adj[v].size(); ++u) {
      if (adj[v][u] && frontier[u]) best = u;
    }
    if (best != kNoParent) {
      out.tentative.set_bit(v - row_lo);
      out.parents[v - row_lo] = best;
    }
  }
  return out;
}

// Fixed 8-vertex undirected graph shared across suites.
inline EdgeList eight_vertex_graph() {
  EdgeList e;
  e.num_vertices = 8;
  e.edges = {{0, 2}, {0, 3}, {0, 5}, {1, 6}, {1, 7},
             {2, 4}, {3, 5}, {3, 6}, {4, 7}, {5, 7}};
  return e;
}

inline Bitmap bitmap_from_string(const char* bits) {
  std::string s(bits);
  Bitmap b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '1') b.set_bit(i);
  return b;
}

inline Bitmap random_bitmap(std::mt19937_64& rng, std::uint64_t nbits,
                            double density) {
  Bitmap b(nbits);
  std::bernoulli_distribution coin(density);
  for (std::uint64_t k = 0; k < nbits; ++k)
    if (coin(rng)) b.set_bit(k);
  return b;
}

inline EdgeList random_edge_list(std::mt19937_64& rng, std::uint64_t n,
                                 std::size_t edge_count) {
  EdgeList e;
  e.num_vertices = n;
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  for (std::size_t i = 0; i < edge_count; ++i)
    e.edges.emplace_back(pick(rng), pick(rng));
  return e;
}

}  // namespace bfsim::testing
