#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eqwalk/classical.hpp"
#include "eqwalk/errors.hpp"
#include "eqwalk/hierarchical.hpp"
#include "eqwalk/io.hpp"
#include "eqwalk/transducer.hpp"
#include "eqwalk/walk.hpp"
#include "eqwalk/welded.hpp"

namespace py = pybind11;
using namespace eqwalk;

namespace {

Phase phase_from_int(int p) {
    if (p == 1) return Phase::Plus;
    if (p == -1) return Phase::Minus;
    throw DomainError("phase must be +1 or -1");
}

ExtendedGraph make_graph(const std::vector<VertexId>& a, const std::vector<VertexId>& b,
                         const std::vector<std::tuple<VertexId, VertexId, double>>& edges, const VertexId& s,
                         const VertexId& t, double w0, double w_end) {
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (const auto& [u, v, w] : edges) list.push_back({u, v, w});
    return ExtendedGraph(BipartiteGraph(a, b, std::move(list)), s, t, w0, w_end);
}

py::dict result_dict(const TransductionResult& r) {
    py::dict d;
    d["tau"] = r.tau;
    d["catalyst"] = r.catalyst;
    d["complexity"] = r.complexity;
    d["residual"] = r.residual;
    return d;
}

Eigen::VectorXcd start_input() {
    Eigen::VectorXcd xi(2);
    xi << 1.0, 0.0;
    return xi;
}

}  // namespace

PYBIND11_MODULE(_eqwalk, m) {
    m.doc() = "Electric quantum walks, transducers and welded-tree benchmarks";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "EqwalkError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<SideMismatchError>(m, "SideMismatchError", base.ptr());
    py::register_exception<NotAWalkVertexError>(m, "NotAWalkVertexError", base.ptr());
    py::register_exception<NoFlowError>(m, "NoFlowError", base.ptr());
    py::register_exception<NumericalFailureError>(m, "NumericalFailureError", base.ptr());
    py::register_exception<ParityError>(m, "ParityError", base.ptr());
    py::register_exception<UnbalancedWeightsError>(m, "UnbalancedWeightsError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<ExtendedGraph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("a"), py::arg("b"), py::arg("edges"), py::arg("s"), py::arg("t"),
             py::arg("w0") = 1.0, py::arg("w_end") = 1.0)
        .def_property_readonly("dim", &ExtendedGraph::dim)
        .def_property_readonly("num_edges", [](const ExtendedGraph& g) { return g.base().num_edges(); })
        .def_property_readonly("num_vertices", [](const ExtendedGraph& g) { return g.base().num_vertices(); })
        .def_property_readonly("s", &ExtendedGraph::s)
        .def_property_readonly("t", &ExtendedGraph::t)
        .def_property_readonly("w0", &ExtendedGraph::w0)
        .def_property_readonly("w_end", &ExtendedGraph::w_end)
        .def("start_state", &ExtendedGraph::start_state)
        .def("end_state", &ExtendedGraph::end_state)
        .def("star_state", [](const ExtendedGraph& g, const VertexId& u) { return star_state(g, u); })
        .def("total_weight", [](const ExtendedGraph& g) { return total_weight(g.base()); })
        .def("effective_resistance",
             [](const ExtendedGraph& g) { return electric_flow(g.base(), g.s(), g.t()).resistance; });

    m.def("read_graph", [](const std::string& path) { return read_graph_file(path).graph; }, py::arg("path"));

    m.def(
        "walk_matrix", [](const ExtendedGraph& g, int phase) { return walk_step(g, phase_from_int(phase)).matrix(); },
        py::arg("graph"), py::arg("phase") = 1);
    m.def(
        "apply_walk",
        [](const ExtendedGraph& g, const EdgeVector& x, int k, int phase) {
            return apply_walk(walk_step(g, phase_from_int(phase)), x, k);
        },
        py::arg("graph"), py::arg("x"), py::arg("k") = 1, py::arg("phase") = 1);
    m.def("catalyst_v0", &catalyst_v0, py::arg("graph"));
    m.def("catalyst_v1", &catalyst_v1, py::arg("graph"));

    m.def(
        "solve_transduction",
        [](const Eigen::MatrixXcd& unitary, Eigen::Index dim_public, const Eigen::VectorXcd& xi, double tol) {
            return result_dict(solve_transduction(Transducer(unitary, dim_public), xi, tol));
        },
        py::arg("unitary"), py::arg("dim_public"), py::arg("xi"), py::arg("tol") = 1e-9);
    m.def(
        "transduce_walk",
        [](const ExtendedGraph& g, int phase, double tol) {
            return result_dict(solve_transduction(Transducer(walk_step(g, phase_from_int(phase))), start_input(), tol));
        },
        py::arg("graph"), py::arg("phase") = -1, py::arg("tol") = 1e-9);
    m.def(
        "run_iterative",
        [](const ExtendedGraph& g, int phase, int k) {
            return run_iterative(Transducer(walk_step(g, phase_from_int(phase))), start_input(), k);
        },
        py::arg("graph"), py::arg("phase"), py::arg("k"));

    py::class_<WeldedTree>(m, "WeldedTree")
        .def_readonly("depth", &WeldedTree::depth)
        .def_readonly("labels", &WeldedTree::labels)
        .def("extended", &WeldedTree::extended, py::arg("w0") = 1.0, py::arg("w_end") = 1.0);
    m.def("generate_welded", &generate_welded, py::arg("n"), py::arg("seed"));
    m.def("catalyst_v2", &catalyst_v2, py::arg("tree"));
    m.def("catalyst_v3", &catalyst_v3, py::arg("tree"));
    m.def(
        "verify_welded",
        [](int n, std::uint64_t seed) {
            const WeldedReport r = verify_welded(n, seed);
            py::dict d;
            d["complexity"] = r.complexity;
            d["residual"] = r.residual;
            d["bound"] = r.bound;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("n"), py::arg("seed") = 1);

    m.def(
        "hierarchical_profile",
        [](const std::string& family, int size) {
            HierarchicalSpec spec = family_spec(parse_family(family), size);
            if (spec.layers() % 2 == 0) spec = augment_even(spec);
            const FlattenedLine line = flatten(spec);
            py::dict d;
            d["sizes"] = spec.sizes;
            d["layer_edges"] = spec.layer_edges;
            d["weights"] = line.weights_double();
            d["c_profile"] = line.profile().as_double();
            d["bound"] = line.profile().complexity_bound(line.layers()).convert_to<double>();
            d["sign"] = terminal_sign(line.layers());
            return d;
        },
        py::arg("family"), py::arg("size"));
    m.def(
        "verify_hierarchical",
        [](const std::string& family, int size, std::uint64_t seed) {
            const HierarchicalReport r = verify_hierarchical(family_spec(parse_family(family), size), 1, seed);
            py::dict d;
            d["layers"] = r.layers;
            d["complexity"] = r.complexity;
            d["min_norm_complexity"] = r.min_norm_complexity;
            d["tau_overlap"] = r.tau_overlap;
            d["bound"] = r.bound;
            d["sign"] = r.sign;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("family"), py::arg("size"), py::arg("seed") = 1);

    m.def(
        "classical_hitting",
        [](const ExtendedGraph& g, std::int64_t max_steps, int trials, std::uint64_t seed) {
            return classical_hitting(g.base(), g.s(), g.t(), max_steps, trials, seed);
        },
        py::arg("graph"), py::arg("max_steps"), py::arg("trials"), py::arg("seed") = 1);
}
