#include "bidisk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bidisk/errors.hpp"
#include "bidisk/linalg.hpp"
#include "bidisk/runtime.hpp"

namespace bidisk {

namespace {

double pseudo_hyperbolic(cplx a, cplx b) {
    return std::abs(a - b) / std::abs(1.0 - std::conj(b) * a);
}

void require_bidisk(Point2D p, const char* context) {
    if (!(std::abs(p.c1) < 1.0 && std::abs(p.c2) < 1.0))
        throw DomainError(std::string(context) + ": point outside the open bidisk");
}

// Minimal M for the two-point problem l_i -> 1, l_j -> 0.
double pair_constant(Point2D a, Point2D b, double bis_tol) {
    const PointSequence pair({a, b});
    BisectOptions opt;
    opt.bis_tol = bis_tol;
    const auto prob = make_pick_problem(pair, std::vector<cplx>{1.0, 0.0});
    return bisect_constant(pick_family(prob), opt).m_star;
}

} // namespace

double gleason(Point2D p, Point2D q) {
    require_bidisk(p, "gleason");
    require_bidisk(q, "gleason");
    return std::max(pseudo_hyperbolic(p.c1, q.c1), pseudo_hyperbolic(p.c2, q.c2));
}

double bcl_condition(const PointSequence& seq) {
    const int n = seq.size();
    double best = 1.0;
    for (int i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != i) prod *= gleason(seq[i], seq[j]);
        best = std::min(best, prod);
    }
    return best;
}

double weak_separation(const PointSequence& seq, double bis_tol) {
    const int n = seq.size();
    if (n < 2) throw DomainError("weak_separation: need at least two points");
    double worst = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (gleason(seq[i], seq[j]) < 1.0 / kWeakCap)
                return std::numeric_limits<double>::infinity();
            worst = std::max(worst, pair_constant(seq[i], seq[j], bis_tol));
        }
    }
    return worst;
}

CarlesonReport carleson_report(const PointSequence& seq, const KernelSample& k) {
    if (k.base.size() != seq.size())
        throw DomainError("carleson_report: kernel sample does not match the sequence");
    const HermitianMatrix g = normalized_grammian(k).matrix;
    const EigenDecomposition eig = eigh(g);
    CarlesonReport rep;
    rep.gram_norm = eig.eigenvalues.back();
    rep.riesz_hi = rep.gram_norm;
    rep.riesz_lo = std::max(0.0, eig.eigenvalues.front());
    // Independent route: embed the normalized kernel functions through the
    // PSD factor and take the frame operator's top eigenvalue. L* L and
    // L L* share their nonzero spectrum but run through different Jacobi
    // sweeps, so agreement is a real check, not a tautology.
    const ComplexMatrix l = psd_factor(g, 1e-10);
    if (l.cols() == 0) {
        rep.embed_sq = 0.0;
        return rep;
    }
    const HermitianMatrix frame = HermitianMatrix::hermitian_part(l.adjoint() * l);
    rep.embed_sq = max_eigenvalue(frame);
    return rep;
}

CarlesonReport carleson_report(const PointSequence& seq, const KernelFn& k) {
    return carleson_report(seq, sample_kernel(seq, k));
}

RieszReport riesz_check(const PointSequence& seq, const std::vector<KernelSample>& batch,
                        double m, double tol) {
    if (!(m > 0.0)) throw DomainError("riesz_check: constant must be positive");
    RieszReport rep;
    rep.m = m;
    rep.tol = tol;
    rep.kernels_checked = static_cast<int>(batch.size());
    rep.worst_lo_margin = std::numeric_limits<double>::infinity();
    rep.worst_hi_margin = std::numeric_limits<double>::infinity();
    const double lo_bound = 1.0 / (m * m) - tol;
    const double hi_bound = m * m + tol;
    for (int idx = 0; idx < rep.kernels_checked; ++idx) {
        const auto& sample = batch[static_cast<std::size_t>(idx)];
        if (sample.base.size() != seq.size())
            throw DomainError("riesz_check: kernel sample does not match the sequence");
        const HermitianMatrix g = normalized_grammian(sample).matrix;
        const EigenDecomposition eig = eigh(g);
        const RieszViolation entry{idx, eig.eigenvalues.front() - lo_bound,
                                   hi_bound - eig.eigenvalues.back()};
        rep.worst_lo_margin = std::min(rep.worst_lo_margin, entry.lo_margin);
        rep.worst_hi_margin = std::min(rep.worst_hi_margin, entry.hi_margin);
        rep.entries.push_back(entry);
        if (entry.lo_margin < 0.0 || entry.hi_margin < 0.0) rep.violations.push_back(entry);
    }
    rep.ok = rep.violations.empty();
    return rep;
}

double sampled_interpolation_constant(const PointSequence& seq, int draws, std::uint64_t seed,
                                      const BisectOptions& opt) {
    if (draws < 1) throw DomainError("sampled_interpolation_constant: draws must be positive");
    const int n = seq.size();
    Rng rng(seed);
    double worst = 0.0;
    for (int d = 0; d < draws; ++d) {
        std::vector<cplx> w(static_cast<std::size_t>(n));
        for (auto& v : w) {
            const double ph = rng.uniform(0.0, 6.283185307179586476925287);
            v = cplx(std::cos(ph), std::sin(ph));
        }
        const auto bis = bisect_constant(pick_family(make_pick_problem(seq, w)), opt);
        worst = std::max(worst, bis.m_star);
    }
    return worst;
}

namespace {

// Bisect with cap semantics: +infinity when no level at or below kWeakCap
// can be certified (rigorously hopeless when the kernel lower bound already
// exceeds the cap; otherwise when the doubling search gives up).
double capped_bisect(const LevelFamily& family, const BisectOptions& opt, bool& capped) {
    if (family.kernel_lower_bound() > kWeakCap) {
        capped = true;
        return std::numeric_limits<double>::infinity();
    }
    try {
        const double level = bisect_constant(family, opt).m_star;
        capped = level > kWeakCap;
        return capped ? std::numeric_limits<double>::infinity() : level;
    } catch (const Error&) {
        capped = true;
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

SeparationReport separation_report(const PointSequence& seq, const BisectOptions& opt) {
    const int n = seq.size();
    SeparationReport rep;
    rep.gleason_min = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rep.gleason_min = std::min(rep.gleason_min, gleason(seq[i], seq[j]));
    rep.bcl_c = bcl_condition(seq);
    rep.weak_m = n < 2 ? 1.0 : weak_separation(seq, opt.bis_tol);
    rep.weak_capped = std::isinf(rep.weak_m);
    rep.strong_n = capped_bisect(separation_b_family(seq), opt, rep.strong_capped);
    rep.a_m = capped_bisect(separation_a_family(seq), opt, rep.a_capped);
    return rep;
}

} // namespace bidisk
