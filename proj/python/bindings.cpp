#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "sck/audit.hpp"
#include "sck/dual.hpp"
#include "sck/harness.hpp"
#include "sck/index_io.hpp"
#include "sck/reference.hpp"

namespace py = pybind11;
using namespace sck;

namespace {

py::dict cut_dict(const Cut& c) {
  py::dict d;
  d["side"] = members(c.side);
  d["capacity"] = c.capacity;
  d["steiner"] = c.steiner;
  return d;
}

std::vector<std::tuple<int, int, int>> edge_list(const MultiGraph& g) {
  std::vector<std::tuple<int, int, int>> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.id, e.u, e.v);
  return out;
}

// Keeps the graph next to the oracle so Python sees one immutable object.
struct Oracle {
  explicit Oracle(const MultiGraph& g) : graph(g), oracle(std::make_shared<const DualOracle>(DualOracle::build(g))) {}
  MultiGraph graph;
  std::shared_ptr<const DualOracle> oracle;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steiner mincut index and dual edge sensitivity oracle";

  static py::exception<Error> sck_error(m, "SckError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = sck_error;
      py::object inst = exc(e.what());
      inst.attr("code") = std::string(errc_name(e.code()));
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  py::class_<MultiGraph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<Vertex, Vertex>>& edges, const std::vector<Vertex>& terminals) {
             for (Vertex t : terminals)
               if (t < 0 || t >= n) fail(Errc::InvalidVertex, "terminal out of range");
             return MultiGraph(n, edges, make_set(terminals));
           }),
           py::arg("n"), py::arg("edges"), py::arg("terminals"))
      .def_static("parse", &parse_graph_string, py::arg("text"), "Parse the 'n m k / terminals / edges' text format")
      .def_static("load", &load_graph, py::arg("path"))
      .def("to_text", &format_graph)
      .def_property_readonly("n", &MultiGraph::n)
      .def_property_readonly("m", &MultiGraph::m)
      .def_property_readonly("terminals", [](const MultiGraph& g) { return members(g.steiner()); })
      .def_property_readonly("edges", &edge_list, "(id, u, v) triples")
      .def("connected", &MultiGraph::connected)
      .def("__repr__", [](const MultiGraph& g) {
        return "<Graph n=" + std::to_string(g.n()) + " m=" + std::to_string(g.m()) +
               " terminals=" + std::to_string(popcount(g.steiner())) + ">";
      });

  m.def("steiner_mincut", [](const MultiGraph& g) {
    const SteinerMincut s = steiner_mincut(g);
    return py::make_tuple(s.lambda, cut_dict(s.witness));
  }, py::arg("graph"), "Reference Steiner mincut by max-flow: (lambda, witness)");
  m.def("min_steiner_cut_separating", [](const MultiGraph& g, Vertex u, Vertex v) {
    return min_steiner_cut_separating(g, u, v);
  }, py::arg("graph"), py::arg("u"), py::arg("v"));

  py::class_<Oracle>(m, "Oracle")
      .def(py::init<const MultiGraph&>(), py::arg("graph"))
      .def_static("from_bytes", [](py::bytes b) { return Oracle(graph_from_index_bytes(std::string(b))); })
      .def_static("load", [](const std::string& path) { return Oracle(load_index_graph(path)); }, py::arg("path"))
      .def("to_bytes", [](const Oracle& o) { return py::bytes(index_bytes(o.graph)); }, "SCK1 index blob")
      .def("save", [](const Oracle& o, const std::string& path) { save_index(path, o.graph); }, py::arg("path"))
      .def_property_readonly("graph", [](const Oracle& o) { return o.graph; })
      .def_property_readonly("lambda_", [](const Oracle& o) { return o.oracle->lambda(); })
      .def("query_cut", [](const Oracle& o, Vertex u, Vertex v) {
        if (u < 0 || v < 0 || u >= o.graph.n() || v >= o.graph.n()) fail(Errc::InvalidVertex, "vertex out of range");
        return std::string(cut_level_name(o.oracle->minplus1().query_cut(u, v)));
      }, py::arg("u"), py::arg("v"), "'lambda', 'lambda+1' or 'above'")
      .def("cut_witness", [](const Oracle& o, Vertex u, Vertex v) -> py::object {
        if (u < 0 || v < 0 || u >= o.graph.n() || v >= o.graph.n()) fail(Errc::InvalidVertex, "vertex out of range");
        const CutLevel level = o.oracle->minplus1().query_cut(u, v);
        if (level == CutLevel::Above) return py::none();
        return cut_dict(o.oracle->minplus1().report_witness(u, v, level));
      }, py::arg("u"), py::arg("v"))
      .def("query_fail", [](const Oracle& o, EdgeId e, EdgeId f) { return o.oracle->query_fail_capacity(e, f); },
           py::arg("e"), py::arg("f"), "Steiner mincut capacity after failing edges e and f")
      .def("query_fail_cut", [](const Oracle& o, EdgeId e, EdgeId f) { return cut_dict(o.oracle->query_fail_cut(e, f)); },
           py::arg("e"), py::arg("f"))
      .def("query_insert", [](const Oracle& o, std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) {
        return o.oracle->query_insert_capacity(e, f);
      }, py::arg("e"), py::arg("f"), "Steiner mincut capacity after inserting edges e and f")
      .def("query_insert_cut", [](const Oracle& o, std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) {
        return cut_dict(o.oracle->query_insert_cut(e, f));
      }, py::arg("e"), py::arg("f"))
      .def("stats", [](const Oracle& o) {
        const IndexStats s = index_stats(*o.oracle);
        py::dict d;
        d["n"] = s.n;
        d["m"] = s.m;
        d["terminals"] = s.terminals;
        d["lambda"] = s.lambda;
        d["units"] = s.units;
        d["steiner_units"] = s.steiner_units;
        d["stretched_units"] = s.stretched_units;
        d["skeleton_nodes"] = s.skeleton_nodes;
        d["skeleton_cycles"] = s.skeleton_cycles;
        d["capacity_only_entries"] = s.capacity_entries;
        d["full_entries"] = s.full_entries;
        return d;
      })
      .def("measure", [](const Oracle& o) { return measurement_json(measure(*o.oracle)); }, "Stable JSON string");

  m.def("gen_random", &gen_random, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed"));
  m.def("gen_hard_instance", [](int left, int right, double density, std::uint64_t seed) {
    const HardInstance hi = gen_hard_instance(random_bipartite(left, right, density, seed));
    return py::make_tuple(hi.h, hi.b.adj);
  }, py::arg("left"), py::arg("right"), py::arg("density"), py::arg("seed"),
     "(graph H, adjacency rows as bitmasks over the right side)");
  m.def("recover_adjacency", [](const Oracle& o, int left, int right) {
    return recover_adjacency(*o.oracle, left, right).adj;
  }, py::arg("oracle"), py::arg("left"), py::arg("right"));
  m.def("verify", [](const MultiGraph& g) {
    const AuditReport r = verify(g);
    py::dict d;
    for (const Check& c : r.checks) d[py::str(c.name)] = py::make_tuple(c.checked, c.failed, c.example);
    return d;
  }, py::arg("graph"), "name -> (checked, failed, first failure)");
}
