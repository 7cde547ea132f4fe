#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfsim/codec.hpp"
#include "bfsim/fabric.hpp"
#include "bfsim/graph.hpp"

namespace bfsim {

enum class Algorithm { bit, wah, dir_wah };

Algorithm parse_algorithm(std::string_view text);
const char* algorithm_name(Algorithm alg);

/// BFS tree over the whole graph. levels[v] is the discovery depth
/// (kUnreached when v is not reachable); parents[v] is the highest-labeled
/// neighbor one level up, with parents[source] == source. d counts the
/// non-empty frontier levels, so the source-only level is level 0 and
/// d-1 is the deepest reached level.
struct BfsResult {
  VertexId source = 0;
  std::uint32_t depth = 0;  // d
  std::vector<VertexId> parents;
  std::vector<std::uint32_t> levels;
};

struct PhaseSeconds {
  double traversing = 0;
  double reducing = 0;
  double communication = 0;
  double compression_sieve = 0;
};

/// One frontier level. The representation columns (raw/sparse/wah bytes)
/// are payload sizes of the global frontier in each format; sent_* and
/// reduce_bytes come from the fabric ledger for the exchange that shipped
/// this level. The last row is the termination probe: frontier_count 0,
/// reduce traffic only.
struct LevelReport {
  std::uint32_t level = 0;
  std::uint64_t frontier_count = 0;
  std::uint64_t raw_bytes = 0;
  std::uint64_t sparse_bytes = 0;
  std::uint64_t wah_bytes = 0;
  std::uint64_t sent_payload = 0;
  std::uint64_t sent_overhead = 0;
  std::uint64_t sent_max_rank = 0;
  std::vector<std::uint64_t> sent_per_rank;  // exchange bytes by sender
  std::uint64_t reduce_bytes = 0;
  std::uint64_t messages = 0;
  /// C_i: raw-exchange payload / this level's payload (> 1 when the codec
  /// won); 0 on levels without a compressed exchange.
  double compression_ratio = 0;
  PhaseSeconds wall;  // max over ranks per phase
};

struct RunReport {
  Algorithm alg = Algorithm::bit;
  CodecSpec codec{};
  int ranks = 1;
  std::uint64_t n = 0;
  VertexId source = 0;
  std::uint32_t d = 0;

  std::vector<LevelReport> per_level;  // levels 0..d (last row is the probe)
  std::vector<LedgerRecord> records;   // this run's ledger slice

  std::vector<std::uint64_t> volume_per_rank;  // bytes sent, all phases
  std::uint64_t volume_max_rank = 0;
  std::uint64_t init_payload = 0;
  std::uint64_t init_overhead = 0;
  std::uint64_t comm_payload_total = 0;
  std::uint64_t comm_overhead_total = 0;
  std::uint64_t reduce_total = 0;

  /// Mean over exchange levels of (level payload) / (payload a raw bitmap
  /// exchange would ship). C for the compressed variant, C' for the sieved
  /// one, absent for the baseline.
  std::optional<double> compression_factor;

  double wall_total_s = 0;
  // filled by the orchestrator once the traversed edge count is known
  std::uint64_t m = 0;
  double teps = 0;
};

/// Algorithm BIT: local expansion, then an allgatherv of raw local frontier
/// bitmaps each level; terminates when the frontier popcount reduces to 0.
std::pair<BfsResult, RunReport> bfs_baseline(std::span<const CsrPartition> parts,
                                             Fabric& fabric, VertexId source);

/// Algorithm WAH: as the baseline, with each local frontier compressed
/// before the exchange and decompressed after.
std::pair<BfsResult, RunReport> bfs_compressed(std::span<const CsrPartition> parts,
                                               Fabric& fabric, VertexId source,
                                               const CodecSpec& codec);

/// Algorithm DIR-WAH: per-destination sieve through the cross directory,
/// compress, exchange via alltoallv, expand from the received pieces.
std::pair<BfsResult, RunReport> bfs_sieve_compressed(
    std::span<const CsrPartition> parts, Fabric& fabric, VertexId source,
    const CodecSpec& codec);

struct ValidationReport {
  bool passed = true;
  std::vector<std::string> errors;
};

/// Graph500-style tree checks: root parent, parent edges exist, levels step
/// by one, visited vertices are exactly those reachable from the source,
/// and no tree edge skips a level.
ValidationReport validate(const BfsResult& result, const CsrMatrix& csr);

/// TEPS = m / time, m counting the raw input edge tuples whose endpoints
/// lie in the traversed component.
double compute_teps(std::uint64_t m, double seconds);

/// Raw input tuples within the traversed component (multiple edges and
/// self-loops included).
std::uint64_t traversed_edge_tuples(const EdgeList& edges,
                                    const std::vector<std::uint32_t>& levels);

}  // namespace bfsim
