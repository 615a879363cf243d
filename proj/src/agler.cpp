#include "bidisk/agler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bidisk/linalg.hpp"

namespace bidisk {

namespace {

// Entrywise inverse of X_m; this is the coordinate-m Szego Gram, hence PSD.
HermitianMatrix szego_gram(const PointSequence& seq, int m) {
    const int n = seq.size();
    HermitianMatrix s(n);
    auto coord = [&](int i) { return m == 1 ? seq[i].c1 : seq[i].c2; };
    for (int i = 0; i < n; ++i) {
        s.set_diag(i, 1.0 / (1.0 - std::norm(coord(i))));
        for (int j = i + 1; j < n; ++j)
            s.set_upper(i, j, 1.0 / (1.0 - std::conj(coord(i)) * coord(j)));
    }
    return s;
}

HermitianMatrix szego_gram_1(const PointSequence& seq) { return szego_gram(seq, 1); }

// Gram matrix of the pick target rows: V_ij = <w_j, w_i> = sum conj(w_i) w_j.
HermitianMatrix target_gram(const std::vector<std::vector<cplx>>& targets) {
    const int n = static_cast<int>(targets.size());
    HermitianMatrix v(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& w : targets[i]) s += std::norm(w);
        v.set_diag(i, s);
        for (int j = i + 1; j < n; ++j) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < targets[i].size(); ++t)
                acc += std::conj(targets[i][t]) * targets[j][t];
            v.set_upper(i, j, acc);
        }
    }
    return v;
}

// Largest generalized eigenvalue of B v = mu S v for Hermitian B and
// positive definite S, via the symmetric reduction S^{-1/2} B S^{-1/2}.
double generalized_max_eig(const HermitianMatrix& b, const EigenDecomposition& s_eig) {
    const int n = b.dim();
    ComplexMatrix inv_root(n, n);
    for (int k = 0; k < n; ++k) {
        const double w = 1.0 / std::sqrt(s_eig.eigenvalues[k]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                inv_root(i, j) +=
                    w * s_eig.eigenvectors(i, k) * std::conj(s_eig.eigenvectors(j, k));
    }
    const ComplexMatrix c = inv_root * b.to_full() * inv_root;
    return max_eigenvalue(HermitianMatrix::hermitian_part(c));
}

void validate_targets(const PointSequence& base, const std::vector<std::vector<cplx>>& targets) {
    if (static_cast<int>(targets.size()) != base.size())
        throw DomainError("target count must equal point count");
    const std::size_t width = targets.front().size();
    if (width < 1) throw DomainError("targets must have at least one component");
    for (const auto& row : targets) {
        if (row.size() != width) throw DomainError("all target rows must share one width");
        for (const auto& v : row)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DomainError("targets must be finite");
    }
}

double max_target_norm(const std::vector<std::vector<cplx>>& targets) {
    double best = 0.0;
    for (const auto& row : targets) {
        double s = 0.0;
        for (const auto& v : row) s += std::norm(v);
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

DecompositionProblem build_problem(const PointSequence& base, HermitianMatrix lhs,
                                   ProblemKind kind, double level,
                                   std::vector<std::vector<cplx>> targets) {
    DecompositionProblem p{base, std::move(lhs), coordinate_gap(base, 1), coordinate_gap(base, 2),
                           kind, level, std::move(targets)};
    p.lhs.require_finite("decomposition lhs");
    return p;
}

} // namespace

PickProblem make_pick_problem(PointSequence base, const std::vector<cplx>& scalar_targets) {
    std::vector<std::vector<cplx>> rows;
    rows.reserve(scalar_targets.size());
    for (const auto& w : scalar_targets) rows.push_back({w});
    return make_pick_problem(std::move(base), std::move(rows));
}

PickProblem make_pick_problem(PointSequence base, std::vector<std::vector<cplx>> row_targets) {
    validate_targets(base, row_targets);
    return PickProblem{std::move(base), std::move(row_targets)};
}

DecompositionProblem LevelFamily::at(double level) const {
    const int n = base.size();
    HermitianMatrix lhs(n);
    switch (kind) {
        case ProblemKind::pick: {
            // lhs_ij = level^2 - sum_t conj(w_i[t]) w_j[t]
            const HermitianMatrix v = target_gram(targets);
            for (int i = 0; i < n; ++i) {
                lhs.set_diag(i, level * level - v.diag(i));
                for (int j = i + 1; j < n; ++j) lhs.set_upper(i, j, level * level - v(i, j));
            }
            break;
        }
        case ProblemKind::separation_a:
            for (int i = 0; i < n; ++i) lhs.set_diag(i, level - 1.0);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) lhs.set_upper(i, j, -1.0);
            break;
        case ProblemKind::separation_b:
            for (int i = 0; i < n; ++i) lhs.set_diag(i, level - 1.0);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) lhs.set_upper(i, j, level);
            break;
    }
    return build_problem(base, std::move(lhs), kind, level, targets);
}

double LevelFamily::lower_bound() const {
    if (kind == ProblemKind::pick) return max_target_norm(targets);
    return 1.0;
}

double LevelFamily::initial_hi() const {
    switch (kind) {
        case ProblemKind::pick:
            return std::max(1.0, 2.0 * max_target_norm(targets));
        case ProblemKind::separation_a:
            // M I - J is itself PSD at M = n, so this level is feasible
            // outright via the fast path.
            return std::max(2.0, static_cast<double>(base.size()));
        case ProblemKind::separation_b:
            return 2.0;
    }
    throw DomainError("unknown problem kind");
}

double LevelFamily::kernel_lower_bound() const {
    std::vector<HermitianMatrix> gramians;
    auto add_sample = [&](const KernelSample& ks) {
        gramians.push_back(normalized_grammian(ks).matrix);
    };
    add_sample(product_kernel_sample(base));
    for (int m : {1, 2}) {
        // The coordinate Szego kernels are PSD but only sometimes admissible
        // (the cross-coordinate Schur test can fail); check before use.
        KernelSample ks{base, szego_gram(base, m)};
        if (check_admissible(ks, 1e-10).admissible) add_sample(ks);
    }
    for (std::uint64_t seed = 424242; seed < 424247; ++seed)
        add_sample(random_admissible(base, seed));

    double lb = lower_bound();
    const HermitianMatrix v =
        kind == ProblemKind::pick ? target_gram(targets) : HermitianMatrix(base.size());
    for (const auto& g : gramians) {
        const EigenDecomposition ge = eigh(g);
        switch (kind) {
            case ProblemKind::pick:
                if (ge.eigenvalues.front() > 1e-12)
                    lb = std::max(lb, std::sqrt(std::max(0.0, generalized_max_eig(v.schur(g),
                                                                                  ge))));
                break;
            case ProblemKind::separation_a:
                lb = std::max(lb, ge.eigenvalues.back());
                break;
            case ProblemKind::separation_b:
                if (ge.eigenvalues.front() > 1e-12) lb = std::max(lb, 1.0 / ge.eigenvalues.front());
                break;
        }
    }
    return lb;
}

AnalyticUpper LevelFamily::analytic_upper() const {
    const int n = base.size();
    AnalyticUpper best{false, 0.0, HermitianMatrix(n), HermitianMatrix(n)};
    for (int m : {1, 2}) {
        const HermitianMatrix s = szego_gram(base, m);
        const EigenDecomposition se = eigh(s);
        if (se.eigenvalues.front() <= 1e-12 * std::max(1.0, se.eigenvalues.back()))
            continue; // repeated coordinate values: no one-coordinate interpolant
        double level = 0.0;
        switch (kind) {
            case ProblemKind::pick:
                level = std::sqrt(
                    std::max(0.0, generalized_max_eig(target_gram(targets).schur(s), se)));
                break;
            case ProblemKind::separation_a: {
                level = max_eigenvalue(normalized_grammian(KernelSample{base, s}).matrix);
                break;
            }
            case ProblemKind::separation_b: {
                HermitianMatrix d(n);
                for (int i = 0; i < n; ++i) d.set_diag(i, s.diag(i));
                level = generalized_max_eig(d, se);
                break;
            }
        }
        // Tiny upward nudge so the certificate eigenvalue that defined the
        // level stays nonnegative under roundoff.
        level = level * (1.0 + 1e-9) + 1e-12;
        if (best.available && level >= best.level) continue;
        HermitianMatrix cert = at(level).lhs.schur(s);
        if (m == 1)
            best = AnalyticUpper{true, level, std::move(cert), HermitianMatrix(n)};
        else
            best = AnalyticUpper{true, level, HermitianMatrix(n), std::move(cert)};
    }
    return best;
}

LevelFamily pick_family(const PickProblem& prob) {
    return LevelFamily{ProblemKind::pick, prob.base, prob.targets};
}

LevelFamily separation_a_family(const PointSequence& seq) {
    return LevelFamily{ProblemKind::separation_a, seq, {}};
}

LevelFamily separation_b_family(const PointSequence& seq) {
    return LevelFamily{ProblemKind::separation_b, seq, {}};
}

void affine_project(const DecompositionProblem& p, HermitianMatrix& gamma,
                    HermitianMatrix& delta) {
    const int n = p.lhs.dim();
    for (int i = 0; i < n; ++i) {
        const double x1 = p.x1.diag(i);
        const double x2 = p.x2.diag(i);
        const double s = x1 * x1 + x2 * x2;
        const double r = gamma.diag(i) * x1 + delta.diag(i) * x2 - p.lhs.diag(i);
        gamma.set_diag(i, gamma.diag(i) - r * x1 / s);
        delta.set_diag(i, delta.diag(i) - r * x2 / s);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const cplx x1 = p.x1(i, j);
            const cplx x2 = p.x2(i, j);
            const double s = std::norm(x1) + std::norm(x2);
            const cplx r = gamma(i, j) * x1 + delta(i, j) * x2 - p.lhs(i, j);
            gamma.set_upper(i, j, gamma(i, j) - r * std::conj(x1) / s);
            delta.set_upper(i, j, delta(i, j) - r * std::conj(x2) / s);
        }
    }
}

double decomposition_residual(const DecompositionProblem& p, const HermitianMatrix& gamma,
                              const HermitianMatrix& delta) {
    const int n = p.lhs.dim();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t =
            gamma.diag(i) * p.x1.diag(i) + delta.diag(i) * p.x2.diag(i) - p.lhs.diag(i);
        acc += t * t;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const cplx t = gamma(i, j) * p.x1(i, j) + delta(i, j) * p.x2(i, j) - p.lhs(i, j);
            acc += 2.0 * std::norm(t);
        }
    }
    return std::sqrt(acc);
}

namespace {

void validate_problem(const DecompositionProblem& p) {
    const int n = p.lhs.dim();
    if (p.base.size() != n || p.x1.dim() != n || p.x2.dim() != n)
        throw DomainError("decomposition problem matrices must share one dimension");
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (std::abs(p.x1(i, j)) == 0.0 || std::abs(p.x2(i, j)) == 0.0)
                throw DomainError("coordinate gap matrices must have nonzero entries");
}

// PSD lhs decomposes exactly: Gamma = lhs o S1 (Schur product of PSD
// matrices), Delta = 0, since S1 o X1 is the all-ones matrix.
bool try_psd_fast_path(const DecompositionProblem& p, double feas_tol, SolveResult& out) {
    const double scale = std::max(1.0, p.lhs.max_abs());
    if (min_eigenvalue(p.lhs) < -1e-13 * scale) return false;
    const HermitianMatrix surplus = project_psd(p.lhs);
    HermitianMatrix gamma = surplus.schur(szego_gram_1(p.base));
    HermitianMatrix delta(p.lhs.dim());
    const double res = decomposition_residual(p, gamma, delta);
    if (res > feas_tol) return false;
    out = SolveResult{true, AglerCertificate{std::move(gamma), std::move(delta), res, 0}};
    return true;
}

} // namespace

SolveResult dykstra_solve(const DecompositionProblem& p, double feas_tol, int max_iter,
                          const AglerCertificate* warm_start) {
    validate_problem(p);
    if (feas_tol <= 0.0) throw DomainError("feas_tol must be positive");
    if (max_iter < 1) throw DomainError("max_iter must be at least 1");

    SolveResult fast{};
    if (try_psd_fast_path(p, feas_tol, fast)) return fast;

    const int n = p.lhs.dim();
    HermitianMatrix gamma(n), delta(n);
    if (warm_start && warm_start->gamma.dim() == n && warm_start->delta.dim() == n) {
        gamma = warm_start->gamma;
        delta = warm_start->delta;
    }
    HermitianMatrix corr_g(n), corr_d(n);

    double best_res = std::numeric_limits<double>::infinity();
    HermitianMatrix best_g(n), best_d(n);
    int best_iter = 0;

    constexpr int kWindow = 500;
    double window_best = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= max_iter; ++iter) {
        affine_project(p, gamma, delta);

        gamma += corr_g;
        delta += corr_d;
        HermitianMatrix pg = project_psd(gamma);
        HermitianMatrix pd = project_psd(delta);
        corr_g = gamma;
        corr_g -= pg;
        corr_d = delta;
        corr_d -= pd;
        gamma = std::move(pg);
        delta = std::move(pd);

        const double res = decomposition_residual(p, gamma, delta);
        if (res < best_res) {
            best_res = res;
            best_g = gamma;
            best_d = delta;
            best_iter = iter;
        }
        if (res <= feas_tol)
            return SolveResult{true, AglerCertificate{gamma, delta, res, iter}};

        if (iter % kWindow == 0) {
            if (!gamma.all_finite() || !delta.all_finite())
                throw NumericError("dykstra_solve: iterate became non-finite");
            if (std::isfinite(window_best)) {
                const double gain = (window_best - best_res) / window_best;
                const bool hopeless = gain < 1e-4 && best_res > 5.0 * feas_tol;
                const bool frozen = gain < 1e-9;
                if (hopeless || frozen) break;
            }
            window_best = best_res;
        }
    }
    return SolveResult{false, AglerCertificate{std::move(best_g), std::move(best_d), best_res,
                                               best_iter}};
}

SolveResult pick_feasible_at(const PickProblem& prob, double m, double feas_tol, int max_iter) {
    if (!(m > 0.0)) throw DomainError("pick level must be positive");
    return dykstra_solve(pick_family(prob).at(m), feas_tol, max_iter);
}

SolveResult separation_decomposition_a(const PointSequence& seq, double m, double feas_tol,
                                       int max_iter) {
    if (!(m > 0.0)) throw DomainError("separation level must be positive");
    return dykstra_solve(separation_a_family(seq).at(m), feas_tol, max_iter);
}

SolveResult separation_decomposition_b(const PointSequence& seq, double n, double feas_tol,
                                       int max_iter) {
    if (!(n > 0.0)) throw DomainError("separation level must be positive");
    return dykstra_solve(separation_b_family(seq).at(n), feas_tol, max_iter);
}

BisectResult bisect_constant(const LevelFamily& family, const BisectOptions& opt) {
    if (opt.bis_tol <= 0.0) throw DomainError("bis_tol must be positive");
    double lo = std::max(opt.lo >= 0.0 ? opt.lo : 0.0, family.kernel_lower_bound());

    int probes = 0;
    AglerCertificate cert;
    auto feasible_at = [&](double level, bool warm) {
        ++probes;
        return dykstra_solve(family.at(level), opt.feas_tol, opt.max_iter,
                             warm ? &cert : nullptr);
    };

    // Establish a feasible top of the bracket: a closed-form one-coordinate
    // certificate when one exists, the caller's hi, or a doubling search.
    double hi;
    bool have_cert = false;
    const AnalyticUpper au = family.analytic_upper();
    if (au.available && (opt.hi < 0.0 || au.level <= opt.hi)) {
        hi = au.level;
        cert = AglerCertificate{au.gamma, au.delta, 0.0, 0};
        cert.residual = decomposition_residual(family.at(hi), cert.gamma, cert.delta);
        have_cert = true;
    } else {
        hi = opt.hi >= 0.0 ? opt.hi : family.initial_hi();
        if (hi <= lo) hi = lo + 1.0;
        int doublings = 0;
        while (true) {
            SolveResult top = feasible_at(hi, false);
            if (top.feasible) {
                cert = std::move(top.certificate);
                have_cert = true;
                break;
            }
            if (++doublings > 60)
                throw Error("bisect_constant: no feasible level found after 60 doublings");
            lo = std::max(lo, hi);
            hi *= 2.0;
        }
    }
    (void)have_cert;

    while (hi - lo > opt.bis_tol) {
        const double mid = 0.5 * (lo + hi);
        SolveResult probe = feasible_at(mid, true);
        if (probe.feasible) {
            hi = mid;
            cert = std::move(probe.certificate);
        } else {
            lo = mid;
        }
    }
    return BisectResult{hi, std::move(cert), probes};
}

AglerCertificate shift_certificate(const LevelFamily& family, const AglerCertificate& cert,
                                   double from_level, double to_level) {
    if (to_level < from_level)
        throw DomainError("shift_certificate: target level must not decrease");
    AglerCertificate out = cert;
    const int n = family.base.size();
    if (family.kind == ProblemKind::separation_a) {
        for (int i = 0; i < n; ++i) {
            const double x1 = 1.0 - std::norm(family.base[i].c1);
            out.gamma.set_diag(i, out.gamma.diag(i) + (to_level - from_level) / x1);
        }
    } else {
        const double step = family.kind == ProblemKind::pick
                                ? to_level * to_level - from_level * from_level
                                : to_level - from_level;
        HermitianMatrix s1 = szego_gram_1(family.base);
        s1 *= step;
        out.gamma += s1;
    }
    out.residual = decomposition_residual(family.at(to_level), out.gamma, out.delta);
    return out;
}

CertificateReport verify_certificate(const DecompositionProblem& p, const AglerCertificate& c,
                                     double tol, int random_count, std::uint64_t seed) {
    if (c.gamma.dim() != p.lhs.dim() || c.delta.dim() != p.lhs.dim())
        throw DomainError("verify_certificate: dimension mismatch");

    CertificateReport rep{};
    rep.residual = decomposition_residual(p, c.gamma, c.delta);
    rep.gamma_min_eig = min_eigenvalue(c.gamma);
    rep.delta_min_eig = min_eigenvalue(c.delta);
    rep.residual_ok = rep.residual <= tol;
    rep.psd_ok = rep.gamma_min_eig >= -10.0 * tol && rep.delta_min_eig >= -10.0 * tol;

    rep.worst_kernel_margin = std::numeric_limits<double>::infinity();
    const auto batch = kernel_batch(p.base, random_count, seed);
    for (const auto& ks : batch) {
        const HermitianMatrix g = normalized_grammian(ks).matrix;
        double margin = 0.0;
        switch (p.kind) {
            case ProblemKind::separation_a:
                margin = p.level + tol - max_eigenvalue(g);
                break;
            case ProblemKind::separation_b:
                margin = min_eigenvalue(g) - (1.0 / p.level - tol);
                break;
            case ProblemKind::pick: {
                const int n = g.dim();
                HermitianMatrix pick_lhs(n);
                for (int i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (const auto& v : p.targets[i]) s += std::norm(v);
                    pick_lhs.set_diag(i, p.level * p.level - s);
                    for (int j = i + 1; j < n; ++j) {
                        cplx acc = 0.0;
                        for (std::size_t t = 0; t < p.targets[i].size(); ++t)
                            acc += std::conj(p.targets[i][t]) * p.targets[j][t];
                        pick_lhs.set_upper(i, j, p.level * p.level - acc);
                    }
                }
                margin = min_eigenvalue(pick_lhs.schur(g)) + tol;
                break;
            }
        }
        rep.worst_kernel_margin = std::min(rep.worst_kernel_margin, margin);
        ++rep.kernels_checked;
        if (margin < 0.0) ++rep.kernels_failed;
    }
    rep.kernels_ok = rep.kernels_failed == 0;
    rep.valid = rep.residual_ok && rep.psd_ok && rep.kernels_ok;
    return rep;
}

double one_variable_pick_constant(const std::vector<cplx>& coords,
                                  const std::vector<cplx>& targets) {
    if (coords.empty() || coords.size() != targets.size())
        throw DomainError("oracle needs matching nonempty coordinate and target lists");
    const int n = static_cast<int>(coords.size());
    HermitianMatrix s(n), b(n);
    for (int i = 0; i < n; ++i) {
        if (std::abs(coords[i]) >= 1.0)
            throw DomainError("oracle coordinates must lie in the open disk");
        s.set_diag(i, 1.0 / (1.0 - std::norm(coords[i])));
        b.set_diag(i, std::norm(targets[i]) * s.diag(i));
        for (int j = i + 1; j < n; ++j) {
            const cplx sij = 1.0 / (1.0 - std::conj(coords[i]) * coords[j]);
            s.set_upper(i, j, sij);
            b.set_upper(i, j, std::conj(targets[i]) * targets[j] * sij);
        }
    }
    const EigenDecomposition es = eigh(s);
    if (es.eigenvalues.front() <= 0.0)
        throw NumericError("oracle: Szego Gram is numerically singular");
    return std::sqrt(std::max(0.0, generalized_max_eig(b, es)));
}

} // namespace bidisk
