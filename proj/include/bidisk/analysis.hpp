#ifndef BIDISK_ANALYSIS_HPP
#define BIDISK_ANALYSIS_HPP

#include <cstdint>
#include <vector>

#include "bidisk/agler.hpp"
#include "bidisk/kernels.hpp"

namespace bidisk {

/// Bisection on a pairwise weak-separation problem stops here; beyond it the
/// pair is reported as numerically indistinguishable.
inline constexpr double kWeakCap = 1e6;

struct SeparationReport {
    double gleason_min; // min over pairs of the Gleason distance
    double bcl_c;       // min_i prod_{j != i} rho(l_i, l_j)
    double weak_m;      // +infinity when some pair exceeds the cap
    double strong_n;    // bisected (b') level; +infinity when capped
    double a_m;         // bisected (a') level; +infinity when capped
    bool weak_capped;
    bool strong_capped; // no (b') level could be certified below the cap
    bool a_capped;
};

struct CarlesonReport {
    double gram_norm; // largest eigenvalue of the normalized Grammian
    double embed_sq;  // frame-operator route to the same number (Prop 1.1)
    double riesz_lo;  // smallest eigenvalue, clamped at 0
    double riesz_hi;  // == gram_norm
};

struct RieszViolation {
    int kernel;       // index into the checked batch
    double lo_margin; // riesz_lo - (1/m^2 - tol); negative = violated
    double hi_margin; // (m^2 + tol) - riesz_hi; negative = violated
};

struct RieszReport {
    double m;
    double tol;
    int kernels_checked;
    std::vector<RieszViolation> entries;    // one per kernel, in batch order
    std::vector<RieszViolation> violations; // the entries with a negative margin
    double worst_lo_margin;
    double worst_hi_margin;
    bool ok;
};

/// Gleason distance via the coordinatewise pseudo-hyperbolic maximum. The
/// variational definition is cross-checked against two-point Pick bisection
/// (rho * M_star = 1) in the test suite.
double gleason(Point2D p, Point2D q);

/// min_i prod_{j != i} rho(l_i, l_j); 1 for a single point (empty product).
double bcl_condition(const PointSequence& seq);

/// Largest two-point Pick constant over ordered pairs (targets 1 and 0).
/// Returns +infinity when a pair's constant exceeds kWeakCap.
double weak_separation(const PointSequence& seq, double bis_tol = kDefaultBisTol);

/// Grammian spectrum vs the frame-operator factorization of Prop 1.1.
CarlesonReport carleson_report(const PointSequence& seq, const KernelSample& k);
CarlesonReport carleson_report(const PointSequence& seq, const KernelFn& k);

/// Two-sided eq. (209) bounds for each kernel in the batch at constant m.
RieszReport riesz_check(const PointSequence& seq, const std::vector<KernelSample>& batch,
                        double m, double tol = 1e-4);

/// Worst bisected Pick constant over `draws` random unimodular target
/// vectors; a seeded lower estimate of the interpolation constant.
double sampled_interpolation_constant(const PointSequence& seq, int draws = 20,
                                      std::uint64_t seed = 20260815,
                                      const BisectOptions& opt = BisectOptions{});

/// All separation diagnostics in one pass.
SeparationReport separation_report(const PointSequence& seq,
                                   const BisectOptions& opt = BisectOptions{});

} // namespace bidisk

#endif
