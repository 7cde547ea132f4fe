#include "bfsim/runner.hpp"

#include <bit>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "bfsim/report.hpp"

namespace bfsim {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSourceSalt = 0x534f55524345ull;

std::uint64_t parse_u64(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw std::invalid_argument(std::string("bad ") + what + ": " +
                                std::string(text));
  return v;
}

json config_echo(const RunSpec& spec, const GraphConfig* cfg,
                 const std::optional<std::string>& graph_file, Algorithm alg,
                 const CodecSpec& codec, int p, VertexId source, int rep) {
  json c{
      {"alg", algorithm_name(alg)},
      {"codec", alg == Algorithm::bit ? json(nullptr) : json(codec.to_string())},
      {"ranks", p},
      {"source", source},
      {"source_policy", spec.source_policy},
      {"rep", rep},
      {"alpha", spec.cost.alpha},
      {"beta", spec.cost.beta},
      {"format", spec.format},
  };
  if (cfg) {
    c["graph"] = {{"scale", cfg->scale},
                  {"edgefactor", cfg->edgefactor},
                  {"seed", cfg->seed},
                  {"initiator", cfg->initiator},
                  {"relabel", cfg->relabel}};
  } else {
    c["graph"] = {{"file", graph_file.value()}};
  }
  return c;
}

struct GraphBundle {
  EdgeList edges;
  CsrMatrix csr;
};

GraphBundle load_graph(const RunSpec& spec, const GraphConfig* cfg) {
  GraphBundle g;
  if (cfg) {
    g.edges = generate_kronecker(*cfg);
  } else {
    g.edges = read_edge_list(spec.graph_file.value());
  }
  g.csr = build_csr(g.edges, g.edges.num_vertices);
  return g;
}

}  // namespace

void RunSpec::validate() const {
  if (!generate && !graph_file)
    throw std::invalid_argument("need a graph: either generate or a file");
  if (generate && graph_file)
    throw std::invalid_argument("generate and graph file are exclusive");
  if (algorithms.empty() && !export_graph)
    throw std::invalid_argument("need at least one algorithm");
  if (codecs.empty()) throw std::invalid_argument("need at least one codec");
  if (ranks.empty()) throw std::invalid_argument("need at least one rank count");
  for (int p : ranks)
    if (p < 1) throw std::invalid_argument("rank counts must be >= 1");
  if (reps < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (format != "json" && format != "csv")
    throw std::invalid_argument("format must be json or csv");
  if (scale_per_rank) {
    if (!generate)
      throw std::invalid_argument("weak scaling needs a generated graph");
    for (int p : ranks)
      if (!std::has_single_bit(unsigned(p)))
        throw std::invalid_argument(
            "weak scaling needs power-of-two rank counts");
  }
  cost.validate();
  if (generate) generate->validate();
}

std::vector<VertexId> resolve_sources(const std::string& policy,
                                      const CsrMatrix& csr, std::uint64_t seed) {
  if (policy.rfind("random:", 0) != 0) {
    const VertexId s = parse_u64(policy, "source id");
    if (s >= csr.n) throw std::invalid_argument("source vertex out of range");
    return {s};
  }
  const std::uint64_t k = parse_u64(policy.substr(7), "source count");
  if (k < 1) throw std::invalid_argument("need at least one source");
  std::vector<VertexId> sources;
  std::vector<bool> taken(csr.n, false);
  std::uint64_t counter = 0;
  const std::uint64_t attempts_cap = 1000 * k + 1000;
  while (sources.size() < k && counter < attempts_cap) {
    const VertexId v = counter_rand(seed ^ kSourceSalt, counter++) % csr.n;
    if (taken[v] || csr.degree(v) == 0) continue;
    taken[v] = true;
    sources.push_back(v);
  }
  if (sources.size() < k)
    throw std::invalid_argument(
        "could not sample enough sources with nonzero degree");
  return sources;
}

std::vector<RunResult> execute(const RunSpec& spec) {
  spec.validate();
  if (spec.algorithms.empty()) return {};

  std::vector<RunResult> results;
  for (int p : spec.ranks) {
    GraphConfig cfg;
    const GraphConfig* cfg_ptr = nullptr;
    if (spec.generate) {
      cfg = *spec.generate;
      if (spec.scale_per_rank)
        cfg.scale = *spec.scale_per_rank +
                    static_cast<unsigned>(std::countr_zero(unsigned(p)));
      cfg_ptr = &cfg;
    }
    const GraphBundle g = load_graph(spec, cfg_ptr);
    if (std::uint64_t(p) > g.csr.n)
      throw std::invalid_argument("more ranks than vertices");
    const auto parts = partition_rows(g.csr, p);
    const std::uint64_t sample_seed = spec.generate ? spec.generate->seed : 1;
    const auto sources = resolve_sources(spec.source_policy, g.csr, sample_seed);

    for (Algorithm alg : spec.algorithms) {
      // the baseline ships raw bitmaps; the codec list does not apply
      const std::size_t codec_count =
          alg == Algorithm::bit ? 1 : spec.codecs.size();
      for (std::size_t ci = 0; ci < codec_count; ++ci) {
        const CodecSpec codec = spec.codecs[ci];
        for (std::size_t si = 0; si < sources.size(); ++si) {
          for (int rep = 0; rep < spec.reps; ++rep) {
            Fabric fabric(p, {spec.fabric_timeout_s});
            auto [bfs, report] = [&] {
              switch (alg) {
                case Algorithm::bit:
                  return bfs_baseline(parts, fabric, sources[si]);
                case Algorithm::wah:
                  return bfs_compressed(parts, fabric, sources[si], codec);
                case Algorithm::dir_wah:
                default:
                  return bfs_sieve_compressed(parts, fabric, sources[si], codec);
              }
            }();
            report.m = traversed_edge_tuples(g.edges, bfs.levels);
            report.teps = compute_teps(report.m, report.wall_total_s);

            if (spec.tamper) {
              for (std::uint64_t v = 0; v < g.csr.n; ++v) {
                if (v != bfs.source && bfs.levels[v] != kUnreached) {
                  bfs.parents[v] = v;  // self edges never survive cleaning
                  break;
                }
              }
            }
            const ValidationReport validation = validate(bfs, g.csr);

            RunResult rr;
            rr.alg = alg;
            rr.ranks = p;
            rr.source = sources[si];
            rr.rep = rep;

            std::vector<std::string> name_parts;
            if (spec.algorithms.size() > 1) name_parts.push_back(algorithm_name(alg));
            if (codec_count > 1) {
              std::string cs = codec.to_string();
              for (auto& ch : cs)
                if (ch == ':') ch = '-';
              name_parts.push_back(cs);
            }
            if (spec.ranks.size() > 1) name_parts.push_back("p" + std::to_string(p));
            if (sources.size() > 1) name_parts.push_back("s" + std::to_string(si));
            if (spec.reps > 1) name_parts.push_back("r" + std::to_string(rep));
            for (std::size_t i = 0; i < name_parts.size(); ++i)
              rr.name += (i ? "." : "") + name_parts[i];

            rr.doc = report_to_json(
                report,
                config_echo(spec, cfg_ptr, spec.graph_file, alg, codec, p,
                            sources[si], rep),
                validation, spec.cost);
            rr.bfs = std::move(bfs);
            rr.report = std::move(report);
            rr.validation = validation;
            results.push_back(std::move(rr));
          }
        }
      }
    }
  }
  return results;
}

namespace {

std::string output_path(const RunSpec& spec, const RunResult& rr) {
  const std::string& base = *spec.out_path;
  if (rr.name.empty()) return base;
  const auto dot = base.rfind('.');
  const auto slash = base.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "." + rr.name;
  return base.substr(0, dot) + "." + rr.name + base.substr(dot);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int run_cli(const RunSpec& spec) {
  spec.validate();

  if (spec.export_graph) {
    GraphConfig cfg;
    const GraphConfig* cfg_ptr = nullptr;
    if (spec.generate) {
      cfg = *spec.generate;
      cfg_ptr = &cfg;
    }
    const EdgeList edges = cfg_ptr ? generate_kronecker(*cfg_ptr)
                                   : read_edge_list(spec.graph_file.value());
    write_edge_list(*spec.export_graph, edges);
    std::cout << "wrote " << edges.edges.size() << " edge tuples to "
              << *spec.export_graph << "\n";
    if (spec.algorithms.empty()) return 0;
  }

  const auto results = execute(spec);
  bool all_valid = true;
  for (const auto& rr : results) {
    all_valid = all_valid && rr.validation.passed;
    const auto& totals = rr.doc.at("totals");
    char line[256];
    std::snprintf(line, sizeof line,
                  "alg=%-7s p=%-3d n=%" PRIu64 " source=%" PRIu64
                  " d=%u comm_bytes=%" PRIu64 " volume=%" PRIu64
                  " teps=%.3e valid=%s",
                  algorithm_name(rr.alg), rr.ranks, rr.report.n, rr.source,
                  rr.report.d,
                  totals.at("bytes").at("sent_total").get<std::uint64_t>(),
                  rr.report.volume_max_rank, rr.report.teps,
                  rr.validation.passed ? "yes" : "NO");
    std::cout << line << "\n";
    if (spec.print_table) std::cout << frontier_table(rr.report);
    for (const auto& err : rr.validation.errors)
      std::cerr << "validation: " << err << "\n";

    if (spec.out_path) {
      const std::string path = output_path(spec, rr);
      write_file(path, spec.format == "json" ? dump_report(rr.doc)
                                             : report_to_csv(rr.doc));
    }
  }

  if (spec.ranks.size() > 1) {
    std::cout << "\nweak scaling\n"
              << "alg      p    n        d   comm_bytes   volume       teps"
                 "         bytes_per_rank\n";
    for (const auto& rr : results) {
      char line[160];
      std::snprintf(line, sizeof line,
                    "%-8s %-4d %-8" PRIu64 " %-3u %-12" PRIu64 " %-12" PRIu64
                    " %-12.3e ",
                    algorithm_name(rr.alg), rr.ranks, rr.report.n, rr.report.d,
                    rr.report.comm_payload_total + rr.report.comm_overhead_total,
                    rr.report.volume_max_rank, rr.report.teps);
      std::cout << line;
      for (std::size_t i = 0; i < rr.report.volume_per_rank.size(); ++i)
        std::cout << (i ? "," : "") << rr.report.volume_per_rank[i];
      std::cout << "\n";
    }
  }
  return all_valid ? 0 : 2;
}

}  // namespace bfsim
