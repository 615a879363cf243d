#include "bidisk/realization.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bidisk/errors.hpp"
#include "bidisk/linalg.hpp"
#include "bidisk/runtime.hpp"

namespace bidisk {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Rank cutoff for certificate factors. Kept independent of the caller's
// Gram tolerance: truncation perturbs the pair Grams by at most twice the
// dropped eigenvalue mass, which stays far below any sensible tol.
constexpr double kFactorTol = 1e-9;

// Columns v_i with <v_j, v_i> = h_ij: conjugated rows of the PSD factor.
ComplexMatrix gram_vectors(const HermitianMatrix& h, double tol) {
    const ComplexMatrix l = psd_factor(h, tol);
    ComplexMatrix v(l.cols(), l.rows());
    for (int i = 0; i < l.rows(); ++i)
        for (int k = 0; k < l.cols(); ++k) v(k, i) = std::conj(l(i, k));
    return v;
}

void require_bidisk(Point2D l, const char* context) {
    if (!(std::abs(l.c1) < 1.0 && std::abs(l.c2) < 1.0))
        throw DomainError(std::string(context) + ": point outside the open bidisk");
}

// Assemble the eq. (2652)-style pairs, complete the lurking isometry to a
// square unitary, and slice the transfer blocks down to the logical
// coefficient dimensions. Column i of dom_coeff / cod_coeff is the
// coefficient part of the i-th domain / codomain pair vector.
TransferRealization build_core(const PointSequence& seq, const HermitianMatrix& gamma,
                               const HermitianMatrix& delta, const ComplexMatrix& dom_coeff,
                               const ComplexMatrix& cod_coeff, double tol, int extra_h1) {
    if (extra_h1 < 0) throw DomainError("realization: extra_h1 must be nonnegative");
    if (!(tol > 0.0)) throw DomainError("realization: tol must be positive");
    const int n = seq.size();

    const ComplexMatrix f = gram_vectors(gamma, kFactorTol);
    const ComplexMatrix g = gram_vectors(delta, kFactorTol);
    const int r1 = f.rows() + extra_h1;
    const int r2 = g.rows();
    const int in_raw = dom_coeff.rows();
    const int out_raw = cod_coeff.rows();
    const int coeff = std::max(in_raw, out_raw);
    const int total = coeff + r1 + r2;

    ComplexMatrix dom(total, n), cod(total, n);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < in_raw; ++t) dom(t, i) = dom_coeff(t, i);
        for (int t = 0; t < out_raw; ++t) cod(t, i) = cod_coeff(t, i);
        for (int k = 0; k < f.rows(); ++k) {
            dom(coeff + k, i) = seq[i].c1 * f(k, i);
            cod(coeff + k, i) = f(k, i);
        }
        for (int k = 0; k < r2; ++k) {
            dom(coeff + r1 + k, i) = seq[i].c2 * g(k, i);
            cod(coeff + r1 + k, i) = g(k, i);
        }
    }

    ComplexMatrix u;
    try {
        u = complete_to_unitary(dom, cod, tol);
    } catch (const NotIsometricError& e) {
        throw CertificateInconsistent(
            std::string("realization: certificate residual breaks the isometry pairs (") +
            e.what() + ")");
    }

    TransferRealization r;
    r.a = u.block(0, 0, out_raw, in_raw);
    r.b = u.block(0, coeff, out_raw, total - coeff);
    r.c = u.block(coeff, 0, total - coeff, in_raw);
    r.d = u.block(coeff, coeff, total - coeff, total - coeff);
    r.dim_h1 = r1;
    r.dim_h2 = r2;
    r.in_dim = in_raw;
    r.out_dim = out_raw;
    return r;
}

void check_node_values(const InterpolantHandle& handle, const ComplexMatrix& expected,
                       double tol, const char* context) {
    const int n = handle.base.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const ComplexMatrix v = eval(handle, handle.base[i]);
        for (int t = 0; t < expected.rows(); ++t)
            worst = std::max(worst, std::abs(v(t, 0) - expected(t, i)));
    }
    if (worst > 100.0 * tol)
        throw CertificateInconsistent(std::string(context) +
                                      ": node values off by " + std::to_string(worst));
}

} // namespace

std::vector<cplx> DiagonalSymbol::entries(int dim_h1, int dim_h2) const {
    std::vector<cplx> e(static_cast<std::size_t>(dim_h1 + dim_h2), l.c2);
    std::fill(e.begin(), e.begin() + dim_h1, l.c1);
    return e;
}

ComplexMatrix eval_unscaled(const TransferRealization& r, Point2D l) {
    require_bidisk(l, "eval");
    const int h = r.dim_h1 + r.dim_h2;
    if (h == 0) return r.a;
    const std::vector<cplx> e = DiagonalSymbol{l}.entries(r.dim_h1, r.dim_h2);

    ComplexMatrix m = ComplexMatrix::identity(h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) m(i, j) -= r.d(i, j) * e[j];
    ComplexMatrix x = solve_linear(std::move(m), r.c); // (1 - D E)^{-1} C
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < x.cols(); ++j) x(i, j) *= e[i];
    return r.a + r.b * x;
}

ComplexMatrix eval(const InterpolantHandle& handle, Point2D l) {
    return eval_unscaled(handle.real, l) * cplx(handle.scale);
}

double resolvent_sigma_min(const TransferRealization& r, Point2D l) {
    require_bidisk(l, "resolvent_sigma_min");
    const int h = r.dim_h1 + r.dim_h2;
    if (h == 0) return 1.0;
    const std::vector<cplx> e = DiagonalSymbol{l}.entries(r.dim_h1, r.dim_h2);
    ComplexMatrix m = ComplexMatrix::identity(h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) m(i, j) -= r.d(i, j) * e[j];
    const double low =
        min_eigenvalue(HermitianMatrix::hermitian_part(m.adjoint() * m));
    return std::sqrt(std::max(0.0, low));
}

InterpolantHandle build_realization_b(const PointSequence& seq, double n_level,
                                      const AglerCertificate& cert, double tol, int extra_h1) {
    if (!(n_level > 0.0)) throw DomainError("build_realization_b: level must be positive");
    const int n = seq.size();
    const double root = std::sqrt(n_level);
    ComplexMatrix dom(1, n), cod(n, n);
    for (int i = 0; i < n; ++i) {
        dom(0, i) = root;
        cod(i, i) = 1.0;
    }
    InterpolantHandle handle{build_core(seq, cert.gamma, cert.delta, dom, cod, tol, extra_h1),
                             root, false, seq};
    check_node_values(handle, cod, tol, "build_realization_b");
    return handle;
}

InterpolantHandle build_interpolant(const PickProblem& prob, double m_star,
                                    const AglerCertificate& cert, double tol, int extra_h1) {
    if (!(m_star > 0.0)) throw DomainError("build_interpolant: level must be positive");
    const int n = prob.base.size();
    const int width = static_cast<int>(prob.targets.front().size());
    ComplexMatrix dom(1, n), cod(width, n);
    for (int i = 0; i < n; ++i) {
        dom(0, i) = m_star;
        for (int t = 0; t < width; ++t) cod(t, i) = prob.targets[i][static_cast<std::size_t>(t)];
    }
    InterpolantHandle handle{
        build_core(prob.base, cert.gamma, cert.delta, dom, cod, tol, extra_h1), m_star, false,
        prob.base};
    check_node_values(handle, cod, tol, "build_interpolant");
    return handle;
}

InterpolantHandle build_realization_a(const PointSequence& seq, double m_level,
                                      const AglerCertificate& cert, double tol, int extra_h1) {
    if (!(m_level > 0.0)) throw DomainError("build_realization_a: level must be positive");
    const int n = seq.size();
    const double root = std::sqrt(m_level);
    ComplexMatrix dom(n, n), cod(1, n);
    for (int i = 0; i < n; ++i) {
        dom(i, i) = root;
        cod(0, i) = 1.0;
    }
    InterpolantHandle handle{build_core(seq, cert.gamma, cert.delta, dom, cod, tol, extra_h1),
                             root, false, seq};
    // Contract touches only the i-th entry at node i.
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const ComplexMatrix row = eval(handle, seq[i]);
        worst = std::max(worst, std::abs(row(0, i) - 1.0));
    }
    if (worst > 100.0 * tol)
        throw CertificateInconsistent("build_realization_a: node values off by " +
                                      std::to_string(worst));
    return handle;
}

std::vector<InterpolantHandle> strong_separation_family(const PointSequence& seq, double n_star,
                                                        const AglerCertificate& cert,
                                                        double tol) {
    const InterpolantHandle full = build_realization_b(seq, n_star, cert, tol);
    const int n = seq.size();
    const int h = full.real.dim_h1 + full.real.dim_h2;
    std::vector<InterpolantHandle> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        TransferRealization r;
        r.a = full.real.a.block(i, 0, 1, 1);
        r.b = full.real.b.block(i, 0, 1, h);
        r.c = full.real.c;
        r.d = full.real.d;
        r.dim_h1 = full.real.dim_h1;
        r.dim_h2 = full.real.dim_h2;
        r.in_dim = 1;
        r.out_dim = 1;
        rows.push_back(InterpolantHandle{std::move(r), full.scale, false, seq});
    }
    return rows;
}

ComposedInterpolant compose_iii_to_iv(const InterpolantHandle& psi_row,
                                      std::vector<InterpolantHandle> chi) {
    const int n = psi_row.base.size();
    if (psi_row.real.out_dim != 1 || psi_row.real.in_dim != n)
        throw DomainError("compose_iii_to_iv: psi_row is not an n-input row function");
    if (static_cast<int>(chi.size()) != n)
        throw DomainError("compose_iii_to_iv: need one chi per node");
    for (const auto& c : chi) {
        if (c.real.in_dim != 1 || c.real.out_dim != 1)
            throw DomainError("compose_iii_to_iv: chi entries must be scalar functions");
        if (c.base.size() != n) throw DomainError("compose_iii_to_iv: node sets differ");
        for (int i = 0; i < n; ++i) {
            if (std::abs(c.base[i].c1 - psi_row.base[i].c1) > 1e-12 ||
                std::abs(c.base[i].c2 - psi_row.base[i].c2) > 1e-12)
                throw DomainError("compose_iii_to_iv: node sets differ");
        }
    }
    return ComposedInterpolant{psi_row, std::move(chi)};
}

ComplexMatrix eval(const ComposedInterpolant& phi, Point2D l) {
    const ComplexMatrix psi = eval(phi.psi_row, l); // 1 x n
    const int n = static_cast<int>(phi.chi.size());
    ComplexMatrix out(n, 1);
    for (int i = 0; i < n; ++i)
        out(i, 0) = psi(0, i) * eval(phi.chi[static_cast<std::size_t>(i)], l)(0, 0);
    return out;
}

std::vector<Point2D> evaluation_grid(int random_count, std::uint64_t seed) {
    if (random_count < 0) throw DomainError("evaluation_grid: random_count must be nonnegative");
    static constexpr double kRadii[] = {0.0, 0.3, 0.6, 0.9, 0.99};
    constexpr int kPhases = 16;
    std::vector<cplx> ring;
    for (double r : kRadii) {
        const int phases = r == 0.0 ? 1 : kPhases;
        for (int k = 0; k < phases; ++k) {
            const double th = 2.0 * kPi * k / kPhases;
            ring.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    std::vector<Point2D> pts;
    pts.reserve(ring.size() * ring.size() + static_cast<std::size_t>(random_count));
    for (const cplx& z1 : ring)
        for (const cplx& z2 : ring) pts.push_back({z1, z2});
    Rng rng(seed);
    auto draw = [&rng]() {
        const double rad = 0.999 * std::sqrt(rng.uniform(0.0, 1.0));
        const double th = rng.uniform(0.0, 2.0 * kPi);
        return cplx(rad * std::cos(th), rad * std::sin(th));
    };
    for (int s = 0; s < random_count; ++s) {
        const cplx z1 = draw();
        const cplx z2 = draw();
        pts.push_back({z1, z2});
    }
    return pts;
}

double sampled_sup_norm(const TransferRealization& r, const std::vector<Point2D>& samples) {
    std::vector<double> vals(samples.size(), 0.0);
    parallel_for(samples.size(),
                 [&](std::size_t i) { vals[i] = operator_norm(eval_unscaled(r, samples[i])); });
    return vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
}

double sampled_sup_norm(const ComposedInterpolant& phi, const std::vector<Point2D>& samples) {
    std::vector<double> vals(samples.size(), 0.0);
    parallel_for(samples.size(), [&](std::size_t i) {
        const ComplexMatrix col = eval(phi, samples[i]);
        double sq = 0.0;
        for (int t = 0; t < col.rows(); ++t) sq += std::norm(col(t, 0));
        vals[i] = std::sqrt(sq);
    });
    return vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
}

} // namespace bidisk
