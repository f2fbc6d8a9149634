#include "feastsvd/driver.hpp"
#include "feastsvd/errors.hpp"
#include "feastsvd/oracle.hpp"
#include "feastsvd/sparse.hpp"
#include "feastsvd/trace.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace feast;

namespace {

using Triplets = std::tuple<Eigen::Index, Eigen::Index, std::vector<int>, std::vector<int>, std::vector<cplx>>;

SparseMatrix from_coo(const Triplets& t) {
    const auto& [rows, cols, ri, ci, v] = t;
    if (ri.size() != v.size() || ci.size() != v.size()) throw InvalidArgument("coo arrays differ in length");
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) trip.emplace_back(ri[k], ci[k], v[k]);
    return SparseMatrix::from_triplets(rows, cols, trip);
}

SparsePencil make_pencil(const Triplets& a, const std::optional<Triplets>& b) {
    return b ? SparsePencil::gsvd(from_coo(a), from_coo(*b)) : SparsePencil::svd(from_coo(a));
}

py::dict solve(const Triplets& a, const std::optional<Triplets>& b, double alpha, double beta, int nodes,
               double aspect, std::optional<int> subspace, std::optional<double> tol, int max_iterations,
               const std::string& variant, bool soft_locking, int samples, std::uint64_t seed,
               std::optional<std::pair<Mat, Mat>> guess) {
    SolverOptions o;
    o.alpha = alpha;
    o.beta = beta;
    o.n_nodes = nodes;
    o.aspect_ratio = aspect;
    o.subspace_size = subspace;
    o.tol = tol;
    o.max_iterations = max_iterations;
    o.variant = parse_variant(variant);
    o.soft_locking = soft_locking;
    o.trace_samples = samples;
    o.seed = seed;
    if (guess) o.initial_guess = SubspacePair{guess->first, guess->second, true};
    o.validate();

    SparsePencil pencil = make_pencil(a, b);
    SolveResult r;
    {
        py::gil_scoped_release release;
        r = feast_gsvd(pencil, o);
    }
    const GsvdSolution& s = r.solution;
    py::list history;
    for (const auto& h : r.report.history) {
        py::dict d;
        d["iteration"] = h.iteration;
        d["max_rel_residual"] = h.max_rel_residual;
        d["converged"] = h.converged;
        d["inside"] = h.inside;
        d["ritz_values"] = h.ritz_values;
        history.append(d);
    }
    py::dict out;
    out["sigma"] = s.sigma;
    out["u"] = s.u;
    out["w"] = s.w;
    out["v"] = s.v;
    out["x"] = s.x;
    out["c"] = s.c;
    out["s"] = s.s;
    out["rel1"] = s.rel1;
    out["rel2"] = s.rel2;
    out["converged"] = s.converged;
    out["stopping_reason"] = stopping_reason_name(r.report.reason);
    out["iterations"] = r.report.iterations;
    out["subspace_size"] = r.report.subspace_size;
    out["tol"] = r.report.tol;
    out["history"] = history;
    if (r.report.estimate) out["k_hat"] = r.report.estimate->k_hat;
    return out;
}

py::dict estimate(const Triplets& a, const std::optional<Triplets>& b, double alpha, double beta, int nodes,
                  double aspect, int samples, std::uint64_t seed) {
    SparsePencil pencil = make_pencil(a, b);
    EllipseContour contour = build_ellipse(alpha, beta, aspect, nodes);
    FactorizationCache cache(pencil);
    TraceEstimate t;
    {
        py::gil_scoped_release release;
        t = estimate_count(cache, contour, samples, seed);
    }
    py::dict out;
    out["k_hat"] = t.k_hat;
    out["samples"] = t.samples;
    out["values"] = t.values;
    out["stddev"] = t.stddev;
    out["subspace_size"] = auto_subspace_size(t.k_hat);
    return out;
}

Triplets read_mm(const std::string& path) {
    SparseMatrix m = read_matrix_market(path);
    std::vector<int> ri, ci;
    std::vector<cplx> v;
    for (int k = 0; k < m.data.outerSize(); ++k)
        for (SpMat::InnerIterator it(m.data, k); it; ++it) {
            ri.push_back(static_cast<int>(it.row()));
            ci.push_back(static_cast<int>(it.col()));
            v.push_back(it.value());
        }
    return {m.rows(), m.cols(), ri, ci, v};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Contour-integral partial SVD and GSVD for sparse matrices";

    // Every library error reflects bad input or an ill-posed problem.
    py::register_exception<Error>(m, "FeastError", PyExc_ValueError);

    m.def("solve", &solve, py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("beta"), py::arg("nodes"),
          py::arg("aspect"), py::arg("subspace"), py::arg("tol"), py::arg("max_iterations"), py::arg("variant"),
          py::arg("soft_locking"), py::arg("samples"), py::arg("seed"), py::arg("guess"));
    m.def("estimate", &estimate, py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("beta"), py::arg("nodes"),
          py::arg("aspect"), py::arg("samples"), py::arg("seed"));
    m.def(
        "dense_reference",
        [](const Mat& a, const std::optional<Mat>& b) {
            DenseGsvdReference r = dense_gsvd_reference(a, b);
            py::dict out;
            out["sigma"] = r.sigma;
            out["c"] = r.c;
            out["s"] = r.s;
            out["u"] = r.u;
            out["w"] = r.w;
            return out;
        },
        py::arg("a"), py::arg("b") = std::nullopt);
    m.def("read_matrix_market", &read_mm, py::arg("path"));
    m.def("derivative_b", [](Eigen::Index n) { return make_derivative_b(n).to_dense(); }, py::arg("n"));
}
