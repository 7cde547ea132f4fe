#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bfsim/runner.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distributed BFS simulator: baseline bitmap, compressed, and "
      "sieved+compressed frontier exchange over simulated ranks"};

  bfsim::GraphConfig gen;
  bool have_scale = false;
  std::string graph_file;
  std::string ranks_arg = "4";
  std::string algs_arg;
  std::string codec_arg = "wah:64";
  bfsim::RunSpec spec;
  int scale_per_rank = -1;

  app.add_option("--scale", gen.scale, "Kronecker scale (N = 2^scale)")
      ->check(CLI::Range(1u, 40u))
      ->each([&](const std::string&) { have_scale = true; });
  app.add_option("--edgefactor", gen.edgefactor,
                 "edge tuples per vertex (M = edgefactor * N)");
  app.add_option("--seed", gen.seed, "generator seed");
  app.add_option("--initiator", gen.initiator,
                 "Kronecker initiator probabilities a b c d")
      ->expected(4);
  app.add_flag("--relabel", gen.relabel,
               "apply the deterministic vertex relabeling permutation");
  app.add_option("--graph", graph_file, "read an edge-list file instead of generating");
  app.add_option("--ranks", ranks_arg, "simulated rank counts, comma separated");
  app.add_option("--scale-per-rank", scale_per_rank,
                 "weak scaling: scale = this + log2(ranks)");
  app.add_option("--alg", algs_arg, "algorithms: bit|wah|dir-wah, comma separated")
      ->required();
  app.add_option("--codec", codec_arg,
                 "codecs: raw|wah:W|sparse|rle, comma separated");
  app.add_option("--source", spec.source_policy,
                 "source vertex id, or random:k to sample k sources");
  app.add_option("--alpha", spec.cost.alpha, "cost model seconds per message");
  app.add_option("--beta", spec.cost.beta, "cost model seconds per byte");
  app.add_option("--reps", spec.reps, "repetitions per configuration");
  std::string out_path;
  app.add_option("--out", out_path, "report output path");
  app.add_option("--format", spec.format, "report format: json|csv");
  app.add_flag("--table", spec.print_table, "print the per-level frontier table");
  std::string export_path;
  app.add_option("--export-graph", export_path, "write the edge list to this path");
  app.add_option("--fabric-timeout", spec.fabric_timeout_s,
                 "collective deadlock timeout in seconds");
  app.add_flag("--tamper", spec.tamper, "testing aid: corrupt one parent")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (!graph_file.empty()) {
      spec.graph_file = graph_file;
      if (have_scale)
        throw std::invalid_argument("--scale and --graph are exclusive");
    } else {
      spec.generate = gen;
    }
    if (scale_per_rank >= 0) spec.scale_per_rank = unsigned(scale_per_rank);
    spec.ranks.clear();
    for (const auto& r : split_list(ranks_arg))
      spec.ranks.push_back(std::stoi(r));
    for (const auto& a : split_list(algs_arg))
      spec.algorithms.push_back(bfsim::parse_algorithm(a));
    spec.codecs.clear();
    for (const auto& c : split_list(codec_arg))
      spec.codecs.push_back(bfsim::CodecSpec::parse(c));
    if (!out_path.empty()) spec.out_path = out_path;
    if (!export_path.empty()) spec.export_graph = export_path;
    return bfsim::run_cli(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
