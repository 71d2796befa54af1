// Python bindings for the topical core: parsing, evaluation, graph
// analysis, the eigenproblem and the recession certificates.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "topical/expr.hpp"
#include "topical/graphs.hpp"
#include "topical/metrics.hpp"
#include "topical/recession.hpp"
#include "topical/serialize.hpp"
#include "topical/solver.hpp"

namespace py = pybind11;
using namespace topical;

namespace {

py::dict graph_dict(const Digraph& g) {
    py::dict d;
    d["n"] = g.n;
    py::list sigma;
    for (const auto& s : g.sigma) sigma.append(s);
    d["sigma"] = sigma;
    py::list edges;
    for (auto [u, v] : g.edges()) edges.append(py::make_tuple(u, v));
    d["edges"] = edges;
    return d;
}

py::dict eigen_dict(const EigenReport& rep) {
    py::dict d;
    d["status"] = solve_status_name(rep.status);
    d["eigenvalue_additive"] = rep.eigenvalue_additive;
    d["eigenvalue_multiplicative"] = std::exp(rep.eigenvalue_additive);
    d["eigenvector_additive"] = rep.eigenvector;
    std::vector<double> mul(rep.eigenvector.size());
    for (size_t i = 0; i < mul.size(); ++i) mul[i] = std::exp(rep.eigenvector[i]);
    d["eigenvector_multiplicative"] = mul;
    d["residual_sup"] = rep.residual_sup;
    d["iterations"] = rep.iterations;
    d["cw_lower"] = rep.cw_lower;
    d["cw_upper"] = rep.cw_upper;
    return d;
}

}  // namespace

PYBIND11_MODULE(topicalpf, m) {
    m.doc() = "Nonlinear Perron-Frobenius toolkit for homogeneous monotone functions";

    py::class_<TopicalFn>(m, "TopicalFn")
        .def_readonly("dim", &TopicalFn::dim)
        .def_property_readonly("name", [](const TopicalFn& f) { return f.name; })
        .def("__repr__", [](const TopicalFn& f) {
            return "<TopicalFn dim=" + std::to_string(f.dim) + ">";
        })
        .def("__str__", [](const TopicalFn& f) { return pretty_print(f); });

    m.def("parse", &parse, py::arg("text"), py::arg("name") = "");
    m.def("parse_file", &parse_file, py::arg("path"));
    m.def("pretty_print", py::overload_cast<const TopicalFn&>(&pretty_print));
    m.def("eval_additive", &eval_additive, py::arg("f"), py::arg("x"));
    m.def("eval_multiplicative", &eval_multiplicative, py::arg("f"), py::arg("y"));
    m.def("dual", py::overload_cast<const TopicalFn&>(&dual));
    m.def("is_convex_syntactic", &is_convex_syntactic);
    m.def("compose", &compose);
    m.def("iterate_fn", &iterate_fn, py::arg("f"), py::arg("k"));

    m.def("seminorms", [](const Vec& x) {
        SeminormReport r = seminorms(x);
        py::dict d;
        d["top"] = r.top;
        d["bot"] = r.bot;
        d["sup_norm"] = r.sup_norm;
        d["hilbert"] = r.hilbert;
        return d;
    });
    m.def("hilbert_seminorm", &hilbert_seminorm);
    m.def("hilbert_metric", &hilbert_metric);

    m.def("diverges", &diverges, py::arg("f"), py::arg("i"), py::arg("J"));
    m.def("associated_graph", [](const TopicalFn& f) { return graph_dict(associated_graph(f)); });
    m.def("dual_graph", [](const TopicalFn& f) { return graph_dict(dual_graph(f)); });
    m.def("syntactic_graph", [](const TopicalFn& f) { return graph_dict(syntactic_graph(f)); });
    m.def("aggregate", [](const TopicalFn& f) {
        AggregationTower t = aggregate(f);
        py::dict d;
        py::list levels;
        for (const auto& g : t.levels) levels.append(graph_dict(g));
        d["levels"] = levels;
        d["stabilized_at"] = t.stabilized_at;
        return d;
    });
    m.def("is_indecomposable", [](const TopicalFn& f) {
        IndecomposabilityResult r = is_indecomposable(f);
        py::dict d;
        d["indecomposable"] = r.indecomposable;
        if (r.witness) {
            d["witness_I"] = r.witness->I;
            d["witness_J"] = r.witness->J;
        }
        return d;
    });
    m.def("to_dot",
          [](const TopicalFn& f) { return to_dot(associated_graph(f)); });

    m.def("orbit", [](const TopicalFn& f, const Vec& x0, int k_max) {
        OrbitTrace t = orbit(f, x0, k_max);
        py::dict d;
        d["iterates"] = t.iterates;
        d["hilbert_diameters"] = t.hilbert_diameters;
        d["top_over_k"] = t.top_over_k;
        d["bot_over_k"] = t.bot_over_k;
        d["finite"] = t.finite;
        return d;
    });
    m.def("cycle_times", [](const TopicalFn& f, int k_max) {
        CycleTimes ct = cycle_times(f, k_max);
        py::dict d;
        d["upper_at_kmax"] = ct.upper_at_kmax;
        d["lower_at_kmax"] = ct.lower_at_kmax;
        d["upper_tail"] = ct.upper_tail;
        d["lower_tail"] = ct.lower_tail;
        return d;
    });
    m.def(
        "collatz_wielandt_upper",
        [](const TopicalFn& f, int samples, std::uint64_t seed, std::optional<Vec> anchor) {
            return collatz_wielandt_upper(f, samples, seed, anchor);
        },
        py::arg("f"), py::arg("samples") = 64, py::arg("seed") = 0,
        py::arg("anchor") = std::nullopt);
    m.def(
        "eigen_solve",
        [](const TopicalFn& f, double tol, int k_max) {
            return eigen_dict(eigen_solve(f, tol, k_max));
        },
        py::arg("f"), py::arg("tol") = 1e-9, py::arg("k_max") = 10000);
    m.def("byk_reduce", &byk_reduce, py::arg("f"), py::arg("x"), py::arg("k"),
          py::arg("lambda_"));
    m.def(
        "membership",
        [](const TopicalFn& f, const Vec& x, std::optional<double> lam, std::optional<double> mu,
           double tol) {
            Membership mm = membership(f, x, lam, mu, tol);
            py::dict d;
            if (mm.in_super) d["in_super"] = *mm.in_super;
            if (mm.in_sub) d["in_sub"] = *mm.in_sub;
            if (mm.in_slice) d["in_slice"] = *mm.in_slice;
            d["slack"] = mm.slack;
            return d;
        },
        py::arg("f"), py::arg("x"), py::arg("lambda_") = std::nullopt,
        py::arg("mu") = std::nullopt, py::arg("tol") = 0.0);
    m.def("super_diameter_bound", [](const TopicalFn& f, double lambda) {
        DiameterBound b = super_diameter_bound(f, lambda);
        py::dict d;
        d["bounded"] = b.bounded;
        if (b.bounded) d["bound"] = b.bound;
        return d;
    });
    m.def(
        "coordinate_realization_check",
        [](const TopicalFn& f, const Vec& x, int k_max, double tol) {
            RealizationCheck rc = coordinate_realization_check(f, x, k_max, tol);
            py::dict d;
            d["chi"] = rc.chi;
            if (rc.coord) d["coord"] = *rc.coord;
            return d;
        },
        py::arg("f"), py::arg("x"), py::arg("k_max") = 200, py::arg("tol") = 1e-6);

    m.def("recession", [](const TopicalFn& f) {
        RecessionResult r = recession(f);
        py::dict d;
        d["fhat"] = r.fhat;
        d["numeric_agreement"] = r.numeric_agreement;
        return d;
    });
    m.def(
        "trivial_eigenspace_check",
        [](const TopicalFn& fhat, int trials, std::uint64_t seed) {
            TrivialityReport r = trivial_eigenspace_check(fhat, trials, seed);
            py::dict d;
            d["certified_nontrivial"] = r.certified_nontrivial;
            if (r.certified_nontrivial) {
                d["witness"] = r.witness;
                d["witness_residual"] = r.witness_residual;
            }
            return d;
        },
        py::arg("fhat"), py::arg("trials") = 64, py::arg("seed") = 0);
    m.def("slice_bounded_certificate", [](const TopicalFn& f) {
        SliceCertificate c = slice_bounded_certificate(f);
        py::dict d;
        d["bounded_certified"] = c.bounded_certified;
        d["fhat"] = c.rec.fhat;
        d["numeric_agreement"] = c.rec.numeric_agreement;
        if (c.witness) d["witness"] = *c.witness;
        return d;
    });
}
