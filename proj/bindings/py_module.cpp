// Python bindings for the main operations: solve + evaluate Pick problems,
// separation and Grammian diagnostics, certificate verification.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "bidisk/agler.hpp"
#include "bidisk/analysis.hpp"
#include "bidisk/errors.hpp"
#include "bidisk/kernels.hpp"
#include "bidisk/realization.hpp"

namespace py = pybind11;
using namespace bidisk;

namespace {

using PyPoints = std::vector<std::pair<cplx, cplx>>;

PointSequence to_sequence(const PyPoints& pts) {
    std::vector<Point2D> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.push_back({p.first, p.second});
    return PointSequence(std::move(v));
}

std::vector<std::vector<cplx>> matrix_rows(const ComplexMatrix& m) {
    std::vector<std::vector<cplx>> rows(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(m.cols()));
        for (int j = 0; j < m.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(m(i, j));
    }
    return rows;
}

HermitianMatrix hermitian_from_rows(const std::vector<std::vector<cplx>>& rows,
                                    const char* name) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw DomainError(std::string(name) + ": matrix must be nonempty");
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw DomainError(std::string(name) + ": matrix must be square");
        for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return HermitianMatrix::from_full(m, 1e-8);
}

BisectOptions make_options(double bis_tol, double feas_tol, int max_iter) {
    BisectOptions opt;
    opt.bis_tol = bis_tol;
    opt.feas_tol = feas_tol;
    opt.max_iter = max_iter;
    return opt;
}

py::object eval_py(const InterpolantHandle& h, cplx l1, cplx l2) {
    const ComplexMatrix v = eval(h, Point2D{l1, l2});
    if (v.rows() == 1 && v.cols() == 1) return py::cast(v(0, 0));
    return py::cast(matrix_rows(v));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nevanlinna-Pick interpolation on the bidisk (C++ core)";

    // Base first: pybind11 tries translators most-recently-registered first.
    py::register_exception<Error>(m, "BidiskError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "BidiskDomainError", PyExc_ValueError);
    py::register_exception<CertificateInconsistent>(m, "BidiskCertificateError", PyExc_ValueError);

    py::class_<InterpolantHandle>(m, "Interpolant",
                                  "Transfer-function realization; call with (l1, l2) inside "
                                  "the open bidisk.")
        .def("__call__", &eval_py, py::arg("l1"), py::arg("l2"))
        .def_property_readonly("scale", [](const InterpolantHandle& h) { return h.scale; })
        .def_property_readonly("out_dim",
                               [](const InterpolantHandle& h) { return h.real.out_dim; })
        .def_property_readonly("in_dim", [](const InterpolantHandle& h) { return h.real.in_dim; })
        .def(
            "sup_norm",
            [](const InterpolantHandle& h, int samples, std::uint64_t seed) {
                return h.scale * sampled_sup_norm(h.real, evaluation_grid(samples, seed));
            },
            py::arg("samples") = 2000, py::arg("seed") = 20260815u,
            "Sampled sup of the operator norm over the bidisk (scaled).");

    m.def(
        "solve_pick",
        [](const PyPoints& points, const std::vector<cplx>& targets, double bis_tol,
           double feas_tol, int max_iter) {
            const PickProblem prob = make_pick_problem(to_sequence(points), targets);
            const BisectResult bis =
                bisect_constant(pick_family(prob), make_options(bis_tol, feas_tol, max_iter));
            const InterpolantHandle h = build_interpolant(prob, bis.m_star, bis.certificate);
            py::dict d;
            d["m_star"] = bis.m_star;
            d["probes"] = bis.probes;
            d["residual"] = bis.certificate.residual;
            d["gamma"] = matrix_rows(bis.certificate.gamma.to_full());
            d["delta"] = matrix_rows(bis.certificate.delta.to_full());
            d["interpolant"] = py::cast(h);
            return d;
        },
        py::arg("points"), py::arg("targets"), py::arg("bis_tol") = kDefaultBisTol,
        py::arg("feas_tol") = kDefaultFeasTol, py::arg("max_iter") = kDefaultMaxIter,
        "Bisect the least interpolation level and build the interpolant.");

    m.def(
        "separation",
        [](const PyPoints& points, double bis_tol, double feas_tol, int max_iter) {
            const SeparationReport rep =
                separation_report(to_sequence(points), make_options(bis_tol, feas_tol, max_iter));
            py::dict d;
            d["gleason_min"] = rep.gleason_min;
            d["bcl_c"] = rep.bcl_c;
            d["weak_m"] = rep.weak_m;
            d["strong_n"] = rep.strong_n;
            d["a_m"] = rep.a_m;
            d["weak_capped"] = rep.weak_capped;
            d["strong_capped"] = rep.strong_capped;
            d["a_capped"] = rep.a_capped;
            return d;
        },
        py::arg("points"), py::arg("bis_tol") = kDefaultBisTol,
        py::arg("feas_tol") = kDefaultFeasTol, py::arg("max_iter") = kDefaultMaxIter,
        "Gleason, Berndtsson-Chang-Lin, weak/strong/(a) separation levels.");

    m.def(
        "gram_report",
        [](const PyPoints& points) {
            const PointSequence seq = to_sequence(points);
            const CarlesonReport rep = carleson_report(seq, product_kernel_sample(seq));
            py::dict d;
            d["gram_norm"] = rep.gram_norm;
            d["embed_sq"] = rep.embed_sq;
            d["riesz_lo"] = rep.riesz_lo;
            d["riesz_hi"] = rep.riesz_hi;
            return d;
        },
        py::arg("points"),
        "Normalized product-kernel Grammian spectrum and Carleson numbers.");

    m.def(
        "verify_pick",
        [](const PyPoints& points, const std::vector<cplx>& targets, double level,
           const std::vector<std::vector<cplx>>& gamma, const std::vector<std::vector<cplx>>& delta,
           double tol, int random_kernels, std::uint64_t seed) {
            const PickProblem pick = make_pick_problem(to_sequence(points), targets);
            AglerCertificate cert;
            cert.gamma = hermitian_from_rows(gamma, "gamma");
            cert.delta = hermitian_from_rows(delta, "delta");
            cert.residual = 0.0;
            cert.iterations = 0;
            const CertificateReport rep =
                verify_certificate(pick_family(pick).at(level), cert, tol, random_kernels, seed);
            py::dict d;
            d["residual"] = rep.residual;
            d["gamma_min_eig"] = rep.gamma_min_eig;
            d["delta_min_eig"] = rep.delta_min_eig;
            d["kernels_checked"] = rep.kernels_checked;
            d["kernels_failed"] = rep.kernels_failed;
            d["worst_kernel_margin"] = rep.worst_kernel_margin;
            d["valid"] = rep.valid;
            return d;
        },
        py::arg("points"), py::arg("targets"), py::arg("level"), py::arg("gamma"),
        py::arg("delta"), py::arg("tol") = 1e-6, py::arg("random_kernels") = 50,
        py::arg("seed") = 20260815u,
        "Re-check an Agler certificate at the given level against the Pick data.");

    m.def(
        "gleason",
        [](std::pair<cplx, cplx> p, std::pair<cplx, cplx> q) {
            return gleason(Point2D{p.first, p.second}, Point2D{q.first, q.second});
        },
        py::arg("p"), py::arg("q"), "Gleason distance on the bidisk.");

    m.def("one_variable_pick_constant", &one_variable_pick_constant, py::arg("coords"),
          py::arg("targets"),
          "Classical one-variable Pick constant (closed-form generalized eigenvalue).");

    m.def(
        "sampled_interpolation_constant",
        [](const PyPoints& points, int draws, std::uint64_t seed, double bis_tol) {
            BisectOptions opt;
            opt.bis_tol = bis_tol;
            return sampled_interpolation_constant(to_sequence(points), draws, seed, opt);
        },
        py::arg("points"), py::arg("draws") = 20, py::arg("seed") = 20260815u,
        py::arg("bis_tol") = kDefaultBisTol,
        "Worst bisected level over random unimodular targets.");
}
