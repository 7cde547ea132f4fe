#include "bfsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include "bfsim/directory.hpp"
#include "bfsim/spmv.hpp"

namespace bfsim {

Algorithm parse_algorithm(std::string_view text) {
  if (text == "bit") return Algorithm::bit;
  if (text == "wah") return Algorithm::wah;
  if (text == "dir-wah") return Algorithm::dir_wah;
  throw std::invalid_argument("unknown algorithm: " + std::string(text));
}

const char* algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::bit:
      return "bit";
    case Algorithm::wah:
      return "wah";
    case Algorithm::dir_wah:
      return "dir-wah";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct StopWatch {
  Clock::time_point t0 = Clock::now();
  double lap() {
    const auto t1 = Clock::now();
    const double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

struct WorkerOut {
  LevelState state{0};
  std::map<LevelPhaseKey, double> wall;
};

unsigned sieve_threads_from_env() {
  const char* s = std::getenv("BFS_SIEVE_THREADS");
  if (!s) return 1;
  const long v = std::atol(s);
  return v < 1 ? 1u : static_cast<unsigned>(v);
}

template <class Fn>
void for_each_destination(int p, unsigned threads, Fn&& fn) {
  threads = std::min<unsigned>(threads, static_cast<unsigned>(p));
  if (threads <= 1) {
    for (int j = 0; j < p; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&fn, t, threads, p] {
      for (int j = static_cast<int>(t); j < p; j += static_cast<int>(threads)) fn(j);
    });
  }
  for (auto& th : pool) th.join();
}

void run_workers(Fabric& fabric, int p, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(p);
  std::vector<std::thread> workers;
  workers.reserve(p);
  for (int r = 0; r < p; ++r) {
    workers.emplace_back([&, r] {
      try {
        body(r);
      } catch (...) {
        errors[r] = std::current_exception();
        fabric.abort("rank worker failed");
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_inputs(std::span<const CsrPartition> parts, Fabric& fabric,
                  VertexId source) {
  if (parts.empty()) throw std::invalid_argument("no partitions");
  if (static_cast<int>(parts.size()) != fabric.ranks())
    throw std::invalid_argument("partition count != fabric rank count");
  const std::uint64_t n = parts[0].n;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].rank != static_cast<int>(i) ||
        parts[i].ranks != static_cast<int>(parts.size()) || parts[i].n != n)
      throw std::invalid_argument("inconsistent partition sequence");
  }
  if (source >= n) throw std::invalid_argument("source vertex out of range");
}

struct RankSetup {
  const CsrPartition* part;
  VertexId source;
};

LevelState make_initial_state(const RankSetup& s) {
  LevelState st(s.part->local_rows());
  if (s.source >= s.part->row_lo && s.source < s.part->row_hi) {
    const std::uint64_t local = s.part->local_index(s.source);
    st.visited.set_bit(local);
    st.parents[local] = s.source;
    st.levels[local] = 0;
  }
  return st;
}

// Shared driver: the three variants differ only in how a level's frontier
// is shipped and in how the next expansion reads it.
enum class Variant { bit, wah, dir };

struct EngineConfig {
  Variant variant;
  CodecSpec codec;
};

void worker_loop(const EngineConfig& cfg, const CsrPartition& part,
                 Fabric& fabric, VertexId source, const CrossDirectory* cd,
                 unsigned sieve_threads, WorkerOut& out) {
  const int p = part.ranks;
  const std::uint64_t n = part.n;
  out.state = make_initial_state({&part, source});
  LevelState& st = out.state;

  // BIT / WAH expand from the global frontier, DIR from per-source pieces.
  Bitmap frontier(n);
  std::vector<Bitmap> pieces;
  if (cfg.variant == Variant::dir) {
    pieces.reserve(p);
    for (int j = 0; j < p; ++j) {
      const auto [lo, hi] = part.rank_range(j);
      pieces.emplace_back(hi - lo);
    }
    const int j0 = part.owner_of(source);
    const std::uint64_t local = source - std::uint64_t(j0) * part.block;
    if (cd->row[j0].bits.get_bit(local)) pieces[j0].set_bit(local);
  } else {
    frontier.set_bit(source);
  }

  while (true) {
    StopWatch sw;
    Bitmap t = cfg.variant == Variant::dir
                   ? expand_blocked(part, pieces, st.visited, st.parents)
                   : expand(part, frontier, st.visited, st.parents);
    st.tentative = std::move(t);
    update_visited(st);
    const int level = static_cast<int>(st.level);
    out.wall[{level, Phase::traversing}] += sw.lap();

    const std::uint64_t total = fabric.allreduce_sum(
        part.rank, st.tentative.popcount(), {level, Phase::reducing});
    out.wall[{level, Phase::reducing}] += sw.lap();
    if (total == 0) break;

    switch (cfg.variant) {
      case Variant::bit: {
        Bytes payload = st.tentative.payload();
        auto received = fabric.allgatherv(part.rank, std::move(payload),
                                          {level, Phase::communication});
        frontier = Bitmap(n);
        for (int j = 0; j < p; ++j) {
          const auto [lo, hi] = part.rank_range(j);
          frontier.or_blit(Bitmap::from_payload(hi - lo, received[j]), lo);
        }
        out.wall[{level, Phase::communication}] += sw.lap();
        break;
      }
      case Variant::wah: {
        Bytes payload = encode_message(cfg.codec, st.tentative);
        out.wall[{level, Phase::compression_sieve}] += sw.lap();
        auto received = fabric.allgatherv(part.rank, std::move(payload),
                                          {level, Phase::communication});
        out.wall[{level, Phase::communication}] += sw.lap();
        frontier = Bitmap(n);
        for (int j = 0; j < p; ++j) {
          const auto [lo, hi] = part.rank_range(j);
          Bitmap piece = decode_message(received[j], hi - lo);
          if (piece.nbits() != hi - lo)
            throw DecodeError("corrupted frontier piece");
          frontier.or_blit(piece, lo);
        }
        out.wall[{level, Phase::compression_sieve}] += sw.lap();
        break;
      }
      case Variant::dir: {
        std::vector<Bytes> outgoing(p);
        for_each_destination(p, sieve_threads, [&](int j) {
          outgoing[j] = sieve_encode_piece(cfg.codec, st.tentative, cd->col[j]);
        });
        out.wall[{level, Phase::compression_sieve}] += sw.lap();
        auto received = fabric.alltoallv(part.rank, std::move(outgoing),
                                         {level, Phase::communication});
        out.wall[{level, Phase::communication}] += sw.lap();
        for (int j = 0; j < p; ++j) {
          Bitmap piece = decode_message(received[j], pieces[j].nbits());
          if (piece.nbits() != pieces[j].nbits())
            throw DecodeError("corrupted frontier piece");
          pieces[j] = std::move(piece);
        }
        out.wall[{level, Phase::compression_sieve}] += sw.lap();
        break;
      }
    }
  }
}

RunReport assemble_report(const EngineConfig& cfg,
                          std::span<const CsrPartition> parts,
                          const BfsResult& result,
                          const std::vector<LedgerRecord>& records,
                          const std::vector<WorkerOut>& outs,
                          double wall_total_s) {
  const int p = static_cast<int>(parts.size());
  const std::uint64_t n = parts[0].n;
  RunReport rep;
  rep.alg = cfg.variant == Variant::bit
                ? Algorithm::bit
                : (cfg.variant == Variant::wah ? Algorithm::wah : Algorithm::dir_wah);
  rep.codec = cfg.codec;
  rep.ranks = p;
  rep.n = n;
  rep.source = result.source;
  rep.d = result.depth;
  rep.records = records;
  rep.wall_total_s = wall_total_s;

  // frontier sizes per level from the final tree
  std::vector<std::uint64_t> counts(result.depth + 1, 0);
  std::vector<Bitmap> frontiers;
  frontiers.reserve(result.depth + 1);
  for (std::uint32_t l = 0; l <= result.depth; ++l) frontiers.emplace_back(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    const std::uint32_t l = result.levels[v];
    if (l == kUnreached) continue;
    counts[l] += 1;
    frontiers[l].set_bit(v);
  }
  const CodecSpec table_codec{CodecId::wah, cfg.codec.id == CodecId::wah
                                                ? cfg.codec.wah_width
                                                : 64};

  rep.per_level.resize(result.depth + 1);
  for (std::uint32_t l = 0; l <= result.depth; ++l) {
    LevelReport& row = rep.per_level[l];
    row.level = l;
    row.frontier_count = counts[l];
    row.raw_bytes = raw_payload_bytes(n);
    row.sparse_bytes = sparse_payload_bytes(counts[l]);
    row.wah_bytes = encoded_size(table_codec, frontiers[l]) - kMessageHeaderBytes;
    row.sent_per_rank.assign(p, 0);
  }

  rep.volume_per_rank.assign(p, 0);
  for (const auto& r : records) {
    rep.volume_per_rank[r.rank] += r.bytes_sent();
    if (r.phase == Phase::init) {
      rep.init_payload += r.payload_sent;
      rep.init_overhead += r.overhead_sent;
      continue;
    }
    if (r.level < 0 || r.level > static_cast<int>(result.depth)) continue;
    LevelReport& row = rep.per_level[r.level];
    if (r.phase == Phase::communication) {
      row.sent_payload += r.payload_sent;
      row.sent_overhead += r.overhead_sent;
      row.sent_max_rank = std::max(row.sent_max_rank, r.bytes_sent());
      row.sent_per_rank[r.rank] += r.bytes_sent();
      row.messages += r.messages;
    } else if (r.phase == Phase::reducing) {
      row.reduce_bytes += r.bytes_sent();
    }
  }
  rep.volume_max_rank =
      *std::max_element(rep.volume_per_rank.begin(), rep.volume_per_rank.end());

  for (const auto& row : rep.per_level) {
    rep.comm_payload_total += row.sent_payload;
    rep.comm_overhead_total += row.sent_overhead;
    rep.reduce_total += row.reduce_bytes;
  }

  // compression factor: level payload vs what a raw bitmap exchange ships
  if (cfg.variant != Variant::bit && result.depth >= 2) {
    std::uint64_t raw_per_level = 0;
    for (const auto& part : parts)
      raw_per_level += raw_payload_bytes(part.local_rows());
    raw_per_level *= std::uint64_t(p - 1);
    double sum = 0;
    for (std::uint32_t l = 1; l < result.depth; ++l) {
      LevelReport& row = rep.per_level[l];
      if (row.sent_payload > 0)
        row.compression_ratio = double(raw_per_level) / double(row.sent_payload);
      sum += double(row.sent_payload) / double(raw_per_level);
    }
    rep.compression_factor = sum / double(result.depth - 1);
  }

  // wall per level/phase: max over ranks
  for (std::uint32_t l = 0; l <= result.depth; ++l) {
    PhaseSeconds& ws = rep.per_level[l].wall;
    for (const auto& out : outs) {
      auto get = [&](Phase ph) {
        const auto it = out.wall.find({static_cast<int>(l), ph});
        return it == out.wall.end() ? 0.0 : it->second;
      };
      ws.traversing = std::max(ws.traversing, get(Phase::traversing));
      ws.reducing = std::max(ws.reducing, get(Phase::reducing));
      ws.communication = std::max(ws.communication, get(Phase::communication));
      ws.compression_sieve =
          std::max(ws.compression_sieve, get(Phase::compression_sieve));
    }
  }
  return rep;
}

std::pair<BfsResult, RunReport> run_variants(std::span<const CsrPartition> parts,
                                             Fabric& fabric, VertexId source,
                                             const EngineConfig& cfg) {
  check_inputs(parts, fabric, source);
  const int p = static_cast<int>(parts.size());
  const std::uint64_t n = parts[0].n;
  const unsigned sieve_threads = sieve_threads_from_env();

  const std::size_t records_before = fabric.ledger().size();

  std::vector<CrossDirectory> directories;
  if (cfg.variant == Variant::dir) {
    directories.resize(p);
    run_workers(fabric, p, [&](int r) {
      directories[r] = init_cross_directory_rank(parts[r], fabric);
    });
  }

  std::vector<WorkerOut> outs(p);
  const auto t0 = Clock::now();
  run_workers(fabric, p, [&](int r) {
    worker_loop(cfg, parts[r], fabric, source,
                cfg.variant == Variant::dir ? &directories[r] : nullptr,
                sieve_threads, outs[r]);
  });
  const double wall_total_s = seconds_since(t0);

  BfsResult result;
  result.source = source;
  result.depth = outs[0].state.level;
  result.parents.assign(n, kNoParent);
  result.levels.assign(n, kUnreached);
  for (int r = 0; r < p; ++r) {
    if (outs[r].state.level != result.depth)
      throw std::logic_error("ranks disagree on level count");
    const CsrPartition& part = parts[r];
    std::copy(outs[r].state.parents.begin(), outs[r].state.parents.end(),
              result.parents.begin() + part.row_lo);
    std::copy(outs[r].state.levels.begin(), outs[r].state.levels.end(),
              result.levels.begin() + part.row_lo);
  }

  const auto all_records = fabric.ledger();
  std::vector<LedgerRecord> records(all_records.begin() + records_before,
                                    all_records.end());
  RunReport report =
      assemble_report(cfg, parts, result, records, outs, wall_total_s);
  return {std::move(result), std::move(report)};
}

}  // namespace

std::pair<BfsResult, RunReport> bfs_baseline(std::span<const CsrPartition> parts,
                                             Fabric& fabric, VertexId source) {
  return run_variants(parts, fabric, source,
                      {Variant::bit, CodecSpec{CodecId::raw}});
}

std::pair<BfsResult, RunReport> bfs_compressed(std::span<const CsrPartition> parts,
                                               Fabric& fabric, VertexId source,
                                               const CodecSpec& codec) {
  return run_variants(parts, fabric, source, {Variant::wah, codec});
}

std::pair<BfsResult, RunReport> bfs_sieve_compressed(
    std::span<const CsrPartition> parts, Fabric& fabric, VertexId source,
    const CodecSpec& codec) {
  return run_variants(parts, fabric, source, {Variant::dir, codec});
}

namespace {

// Reachable set via an independent traversal over the CSR itself.
std::vector<bool> reachable_from(const CsrMatrix& csr, VertexId source) {
  std::vector<bool> seen(csr.n, false);
  std::vector<VertexId> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    const VertexId v = queue.back();
    queue.pop_back();
    for (VertexId u : csr.row(v)) {
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate(const BfsResult& result, const CsrMatrix& csr) {
  ValidationReport rep;
  auto fail = [&](std::string msg) {
    rep.passed = false;
    if (rep.errors.size() < 32) rep.errors.push_back(std::move(msg));
  };

  const std::uint64_t n = csr.n;
  if (result.parents.size() != n || result.levels.size() != n) {
    fail("result arrays do not match the vertex count");
    return rep;
  }
  if (result.source >= n) {
    fail("source out of range");
    return rep;
  }
  if (result.parents[result.source] != result.source)
    fail("source is not its own parent");
  if (result.levels[result.source] != 0) fail("source level is not 0");

  std::uint32_t max_level = 0;
  for (std::uint64_t v = 0; v < n; ++v) {
    const bool visited = result.levels[v] != kUnreached;
    if (visited != (result.parents[v] != kNoParent)) {
      fail("vertex " + std::to_string(v) + " has inconsistent parent/level");
      continue;
    }
    if (!visited) continue;
    max_level = std::max(max_level, result.levels[v]);
    if (v == result.source) continue;
    const VertexId parent = result.parents[v];
    if (parent >= n || result.levels[parent] == kUnreached) {
      fail("vertex " + std::to_string(v) + " has an unvisited parent");
      continue;
    }
    if (!csr.has_edge(parent, v))
      fail("no edge between vertex " + std::to_string(v) + " and its parent " +
           std::to_string(parent));
    if (result.levels[v] != result.levels[parent] + 1)
      fail("vertex " + std::to_string(v) + " is not one level below its parent");
  }

  const auto reach = reachable_from(csr, result.source);
  for (std::uint64_t v = 0; v < n; ++v) {
    const bool visited = result.levels[v] != kUnreached;
    if (visited && !reach[v])
      fail("vertex " + std::to_string(v) + " visited but unreachable");
    if (!visited && reach[v])
      fail("vertex " + std::to_string(v) + " reachable but not visited");
  }

  // cross edges may not skip a level; unvisited vertices may not touch
  // visited ones
  for (std::uint64_t v = 0; v < n; ++v) {
    const bool v_visited = result.levels[v] != kUnreached;
    for (VertexId u : csr.row(v)) {
      const bool u_visited = result.levels[u] != kUnreached;
      if (v_visited && u_visited) {
        const std::int64_t dl = std::int64_t(result.levels[v]) - std::int64_t(result.levels[u]);
        if (dl > 1 || dl < -1) {
          fail("edge (" + std::to_string(u) + "," + std::to_string(v) +
               ") spans more than one level");
        }
      } else if (v_visited != u_visited) {
        fail("edge (" + std::to_string(u) + "," + std::to_string(v) +
             ") connects visited and unvisited vertices");
      }
    }
  }

  // d counts the non-empty levels 0..max_level
  if (rep.passed && result.depth != max_level + 1) {
    fail("depth " + std::to_string(result.depth) +
         " does not match deepest level " + std::to_string(max_level));
  }
  return rep;
}

double compute_teps(std::uint64_t m, double seconds) {
  if (seconds <= 0) throw std::invalid_argument("TEPS needs a positive time");
  return double(m) / seconds;
}

std::uint64_t traversed_edge_tuples(const EdgeList& edges,
                                    const std::vector<std::uint32_t>& levels) {
  std::uint64_t m = 0;
  for (const auto& [u, v] : edges.edges) {
    if (levels[u] != kUnreached || levels[v] != kUnreached) ++m;
  }
  return m;
}

}  // namespace bfsim
