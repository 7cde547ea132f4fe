#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfsim/engine.hpp"
#include "bfsim/graph.hpp"

namespace bfsim {

/// One experiment description: a graph source, the algorithms and codecs to
/// run over it, the rank counts, and reporting knobs.
struct RunSpec {
  std::optional<GraphConfig> generate;
  std::optional<std::string> graph_file;

  std::vector<int> ranks{4};
  /// Weak scaling: run each rank count p (a power of two) at
  /// scale = scale_per_rank + log2(p).
  std::optional<unsigned> scale_per_rank;

  std::vector<Algorithm> algorithms;
  std::vector<CodecSpec> codecs{CodecSpec{CodecId::wah, 64}};

  /// "random:k" samples k distinct sources with nonzero degree; a plain
  /// integer pins the source.
  std::string source_policy = "random:1";

  CostModelParams cost{};
  int reps = 1;
  double fabric_timeout_s = 30.0;

  std::optional<std::string> out_path;
  std::string format = "json";  // json | csv
  bool print_table = false;

  std::optional<std::string> export_graph;
  /// Testing aid: corrupts one parent before validation so the
  /// validation-failure exit path can be exercised.
  bool tamper = false;

  void validate() const;
};

struct RunResult {
  std::string name;  // file suffix parts, empty for a single run
  Algorithm alg;
  int ranks = 1;
  VertexId source = 0;
  int rep = 0;
  BfsResult bfs;
  RunReport report;
  ValidationReport validation;
  nlohmann::json doc;
};

/// Runs every (rank count x algorithm x codec x source x repetition) combo
/// of the spec on fresh fabrics and returns the reports. Throws on invalid
/// specs and IO failures; validation failures are recorded, not thrown.
std::vector<RunResult> execute(const RunSpec& spec);

/// Sampled or pinned BFS sources for a graph (nonzero degree only).
std::vector<VertexId> resolve_sources(const std::string& policy,
                                      const CsrMatrix& csr, std::uint64_t seed);

/// Full CLI behavior: runs the spec, writes report files, prints summaries.
/// Exit code 0 on success, 2 when any validation failed.
int run_cli(const RunSpec& spec);

}  // namespace bfsim
