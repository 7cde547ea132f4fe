#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfsim/engine.hpp"
#include "bfsim/report.hpp"
#include "bfsim/runner.hpp"

namespace py = pybind11;
using namespace bfsim;

namespace {

py::object opt_id(std::uint64_t v, std::uint64_t sentinel) {
  if (v == sentinel) return py::none();
  return py::int_(v);
}

py::dict run_bfs(const GraphConfig& cfg, const std::string& alg, int ranks,
                 VertexId source, const std::string& codec, double alpha,
                 double beta) {
  const EdgeList edges = generate_kronecker(cfg);
  const CsrMatrix csr = build_csr(edges, edges.num_vertices);
  const auto parts = partition_rows(csr, ranks);
  const Algorithm algorithm = parse_algorithm(alg);
  const CodecSpec codec_spec = CodecSpec::parse(codec);

  Fabric fabric(ranks);
  auto [result, report] = [&] {
    switch (algorithm) {
      case Algorithm::bit:
        return bfs_baseline(parts, fabric, source);
      case Algorithm::wah:
        return bfs_compressed(parts, fabric, source, codec_spec);
      case Algorithm::dir_wah:
      default:
        return bfs_sieve_compressed(parts, fabric, source, codec_spec);
    }
  }();
  report.m = traversed_edge_tuples(edges, result.levels);
  report.teps = compute_teps(report.m, report.wall_total_s);
  const ValidationReport validation = validate(result, csr);

  py::list parents, levels;
  for (VertexId p : result.parents) parents.append(opt_id(p, kNoParent));
  for (std::uint32_t l : result.levels) levels.append(opt_id(l, kUnreached));

  py::dict out;
  out["parents"] = parents;
  out["levels"] = levels;
  out["d"] = result.depth;
  out["source"] = result.source;
  out["valid"] = validation.passed;
  out["errors"] = validation.errors;
  out["comm_bytes"] = report.comm_payload_total + report.comm_overhead_total;
  out["volume_max_rank"] = report.volume_max_rank;
  out["m"] = report.m;
  const nlohmann::json doc = report_to_json(
      report, nlohmann::json{{"alg", alg}, {"codec", codec}, {"ranks", ranks}},
      validation, {alpha, beta});
  out["report_json"] = doc.dump(2);
  return out;
}

}  // namespace

PYBIND11_MODULE(_bfsim, m) {
  m.doc() = "Distributed BFS simulator: compressed and sieved frontier exchange";

  py::register_exception<DecodeError>(m, "DecodeError");
  py::register_exception<FabricError>(m, "FabricError");

  py::class_<GraphConfig>(m, "GraphConfig")
      .def(py::init([](unsigned scale, std::uint64_t edgefactor,
                       std::uint64_t seed, std::array<double, 4> initiator,
                       bool relabel) {
             GraphConfig cfg;
             cfg.scale = scale;
             cfg.edgefactor = edgefactor;
             cfg.seed = seed;
             cfg.initiator = initiator;
             cfg.relabel = relabel;
             cfg.validate();
             return cfg;
           }),
           py::arg("scale"), py::arg("edgefactor") = 16, py::arg("seed") = 1,
           py::arg("initiator") = std::array<double, 4>{0.57, 0.19, 0.19, 0.05},
           py::arg("relabel") = false)
      .def_readonly("scale", &GraphConfig::scale)
      .def_readonly("edgefactor", &GraphConfig::edgefactor)
      .def_readonly("seed", &GraphConfig::seed)
      .def_property_readonly("num_vertices", &GraphConfig::num_vertices)
      .def_property_readonly("num_edges", &GraphConfig::num_edges);

  py::class_<EdgeList>(m, "EdgeList")
      .def_readonly("num_vertices", &EdgeList::num_vertices)
      .def("__len__", [](const EdgeList& e) { return e.edges.size(); })
      .def("edge", [](const EdgeList& e, std::size_t i) { return e.edges.at(i); });

  m.def("generate_kronecker", &generate_kronecker, py::arg("config"));
  m.def("write_edge_list", &write_edge_list, py::arg("path"), py::arg("edges"));
  m.def("read_edge_list", &read_edge_list, py::arg("path"));

  py::class_<CsrMatrix>(m, "CsrMatrix")
      .def_readonly("n", &CsrMatrix::n)
      .def("entry_count", &CsrMatrix::entry_count)
      .def("degree", &CsrMatrix::degree, py::arg("v"))
      .def("row", [](const CsrMatrix& csr, std::uint64_t v) {
        const auto r = csr.row(v);
        return std::vector<VertexId>(r.begin(), r.end());
      });

  m.def("build_csr", &build_csr, py::arg("edges"), py::arg("n"));

  py::class_<Bitmap>(m, "Bitmap")
      .def(py::init<std::uint64_t>(), py::arg("nbits"))
      .def_property_readonly("nbits", &Bitmap::nbits)
      .def("set_bit", &Bitmap::set_bit, py::arg("k"))
      .def("get_bit", &Bitmap::get_bit, py::arg("k"))
      .def("popcount", &Bitmap::popcount)
      .def("set_positions", &Bitmap::set_positions)
      .def("__eq__",
           [](const Bitmap& a, const Bitmap& b) { return a == b; });

  m.def(
      "encode_message",
      [](const std::string& codec, const Bitmap& b) {
        const Bytes msg = encode_message(CodecSpec::parse(codec), b);
        return py::bytes(reinterpret_cast<const char*>(msg.data()), msg.size());
      },
      py::arg("codec"), py::arg("bitmap"));
  m.def(
      "decode_message",
      [](const py::bytes& raw) {
        std::string_view view = raw;
        return decode_message(std::span<const std::uint8_t>(
            reinterpret_cast<const std::uint8_t*>(view.data()), view.size()));
      },
      py::arg("message"));
  m.def(
      "encoded_size",
      [](const std::string& codec, const Bitmap& b) {
        return encoded_size(CodecSpec::parse(codec), b);
      },
      py::arg("codec"), py::arg("bitmap"));

  m.def("run_bfs", &run_bfs, py::arg("config"), py::arg("alg") = "bit",
        py::arg("ranks") = 4, py::arg("source") = 0,
        py::arg("codec") = "wah:64", py::arg("alpha") = 0.0,
        py::arg("beta") = 0.0,
        "Generate a Kronecker graph and run one BFS variant over simulated "
        "ranks; returns parents, levels and the serialized run report.");
}
