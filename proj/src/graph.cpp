#include "bfsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

namespace bfsim {

namespace {

constexpr std::uint64_t kRelabelSalt = 0x52454c41424c3144ULL;

std::uint64_t splitmix64_fin(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double to_unit(std::uint64_t r) { return (r >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t counter_rand(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64_fin(seed ^ splitmix64_fin(counter + 0x9e3779b97f4a7c15ULL));
}

void GraphConfig::validate() const {
  if (scale < 1) throw std::invalid_argument("scale must be >= 1");
  if (scale > 40)
    throw std::overflow_error("scale > 40 exceeds the vertex id budget");
  if (edgefactor < 1) throw std::invalid_argument("edgefactor must be >= 1");
  if (edgefactor > (std::uint64_t{1} << (62 - scale)))
    throw std::overflow_error("edgefactor * 2^scale overflows the edge count");
  double sum = 0;
  for (double v : initiator) {
    if (v < 0) throw std::invalid_argument("initiator probabilities must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("initiator probabilities must sum to 1");
}

EdgeList generate_kronecker(const GraphConfig& cfg) {
  cfg.validate();
  const std::uint64_t n = cfg.num_vertices();
  const std::uint64_t m = cfg.num_edges();
  const double ab = cfg.initiator[0] + cfg.initiator[1];
  const double abc = ab + cfg.initiator[2];

  EdgeList out;
  out.num_vertices = n;
  out.edges.reserve(m);
  for (std::uint64_t e = 0; e < m; ++e) {
    VertexId u = 0, v = 0;
    for (unsigned level = 0; level < cfg.scale; ++level) {
      const double r = to_unit(counter_rand(cfg.seed, e * cfg.scale + level));
      const VertexId bit = VertexId{1} << (cfg.scale - 1 - level);
      if (r < cfg.initiator[0]) {
        // quadrant a: both high bits 0
      } else if (r < ab) {
        v |= bit;
      } else if (r < abc) {
        u |= bit;
      } else {
        u |= bit;
        v |= bit;
      }
    }
    out.edges.emplace_back(u, v);
  }

  if (cfg.relabel) {
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    for (std::uint64_t i = n - 1; i > 0; --i) {
      const std::uint64_t j = counter_rand(cfg.seed ^ kRelabelSalt, i) % (i + 1);
      std::swap(perm[i], perm[j]);
    }
    for (auto& [u, v] : out.edges) {
      u = perm[u];
      v = perm[v];
    }
  }
  return out;
}

bool CsrMatrix::has_edge(VertexId u, VertexId v) const {
  const auto r = row(v);  // pre-transposed: row v lists sources u
  return std::binary_search(r.begin(), r.end(), u);
}

CsrMatrix build_csr(const EdgeList& edges, std::uint64_t n) {
  std::vector<std::pair<VertexId, VertexId>> dir;
  dir.reserve(2 * edges.edges.size());
  for (const auto& [u, v] : edges.edges) {
    if (u >= n || v >= n)
      throw std::out_of_range("build_csr: edge endpoint >= vertex count");
    if (u == v) continue;  // self-loops dropped
    dir.emplace_back(u, v);
    dir.emplace_back(v, u);
  }
  std::sort(dir.begin(), dir.end());
  dir.erase(std::unique(dir.begin(), dir.end()), dir.end());

  CsrMatrix csr;
  csr.n = n;
  csr.row_offsets.assign(n + 1, 0);
  csr.column_indices.reserve(dir.size());
  for (const auto& [u, v] : dir) csr.row_offsets[u + 1]++;
  for (std::uint64_t i = 0; i < n; ++i) csr.row_offsets[i + 1] += csr.row_offsets[i];
  // symmetric matrix: row v of the transpose equals row v of the original
  for (const auto& [u, v] : dir) csr.column_indices.push_back(v);
  return csr;
}

std::pair<std::uint64_t, std::uint64_t> CsrPartition::rank_range(int j) const {
  if (j < 0 || j >= ranks) throw std::out_of_range("rank index out of range");
  const std::uint64_t lo = std::min<std::uint64_t>(std::uint64_t(j) * block, n);
  const std::uint64_t hi = std::min<std::uint64_t>(lo + block, n);
  return {lo, hi};
}

std::vector<CsrPartition> partition_rows(const CsrMatrix& csr, int p) {
  if (p < 1 || std::uint64_t(p) > csr.n)
    throw std::invalid_argument("partition_rows: need 1 <= p <= n");
  const std::uint64_t block = (csr.n + p - 1) / p;
  std::vector<CsrPartition> parts;
  parts.reserve(p);
  for (int i = 0; i < p; ++i) {
    CsrPartition part;
    part.rank = i;
    part.ranks = p;
    part.n = csr.n;
    part.block = block;
    part.row_lo = std::min<std::uint64_t>(std::uint64_t(i) * block, csr.n);
    part.row_hi = std::min<std::uint64_t>(part.row_lo + block, csr.n);
    part.row_offsets.reserve(part.local_rows() + 1);
    part.row_offsets.push_back(0);
    for (std::uint64_t v = part.row_lo; v < part.row_hi; ++v) {
      const auto row = csr.row(v);
      part.column_indices.insert(part.column_indices.end(), row.begin(), row.end());
      part.row_offsets.push_back(part.column_indices.size());
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

SubBlockView::SubBlockView(const CsrPartition& part, int j) : part_(&part) {
  const auto [lo, hi] = part.rank_range(j);  // throws on bad j
  col_lo_ = lo;
  col_hi_ = hi;
}

std::uint64_t SubBlockView::entry_count() const {
  std::uint64_t count = 0;
  for (std::uint64_t r = 0; r < part_->local_rows(); ++r) {
    const auto row = part_->local_row(r);
    const auto lo = std::lower_bound(row.begin(), row.end(), col_lo_);
    const auto hi = std::lower_bound(lo, row.end(), col_hi_);
    count += hi - lo;
  }
  return count;
}

SubBlockView sub_block_columns(const CsrPartition& part, int j) {
  return SubBlockView(part, j);
}

namespace {

constexpr char kMagic[8] = {'K', 'R', 'O', 'N', 'E', 'L', '1', '\0'};

void put_u64_file(std::ofstream& f, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i));
  f.write(buf, 8);
}

std::uint64_t get_u64_file(std::ifstream& f) {
  unsigned char buf[8];
  f.read(reinterpret_cast<char*>(buf), 8);
  if (!f) throw DecodeError("edge-list file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

}  // namespace

void write_edge_list(const std::string& path, const EdgeList& edges) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(kMagic, 8);
  put_u64_file(f, edges.num_vertices);
  put_u64_file(f, edges.edges.size());
  for (const auto& [u, v] : edges.edges) {
    put_u64_file(f, u);
    put_u64_file(f, v);
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

EdgeList read_edge_list(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw DecodeError("not an edge-list file: " + path);
  EdgeList out;
  out.num_vertices = get_u64_file(f);
  const std::uint64_t count = get_u64_file(f);
  out.edges.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const VertexId u = get_u64_file(f);
    const VertexId v = get_u64_file(f);
    if (u >= out.num_vertices || v >= out.num_vertices)
      throw DecodeError("edge-list file has endpoint >= vertex count");
    out.edges.emplace_back(u, v);
  }
  return out;
}

}  // namespace bfsim
