#ifndef BIDISK_AGLER_HPP
#define BIDISK_AGLER_HPP

#include <cstdint>
#include <vector>

#include "bidisk/kernels.hpp"
#include "bidisk/matrix.hpp"

namespace bidisk {

enum class ProblemKind { pick, separation_a, separation_b };

/// One feasibility instance: find Gamma, Delta >= 0 with
/// Gamma o X1 + Delta o X2 = lhs, where Xm_ij = 1 - conj(l_i^m) l_j^m.
struct DecompositionProblem {
    PointSequence base;
    HermitianMatrix lhs;
    HermitianMatrix x1;
    HermitianMatrix x2;
    // Provenance, used by verify_certificate to pick the right Schur
    // consequence: level is M (pick, separation_a) or N (separation_b);
    // targets are the pick row vectors (scalar targets have width 1).
    ProblemKind kind;
    double level;
    std::vector<std::vector<cplx>> targets;
};

struct AglerCertificate {
    HermitianMatrix gamma;
    HermitianMatrix delta;
    double residual;
    int iterations;
};

struct SolveResult {
    bool feasible;
    AglerCertificate certificate; // best PSD iterate even when infeasible
};

/// Interpolation data: node i maps to the row vector targets[i] (width 1 for
/// the scalar problem; all rows share one width).
struct PickProblem {
    PointSequence base;
    std::vector<std::vector<cplx>> targets;
};

PickProblem make_pick_problem(PointSequence base, const std::vector<cplx>& scalar_targets);
PickProblem make_pick_problem(PointSequence base, std::vector<std::vector<cplx>> row_targets);

struct AnalyticUpper {
    bool available;
    double level;
    HermitianMatrix gamma;
    HermitianMatrix delta;
};

/// The level-indexed family behind bisection: pick Pick matrices, MI - J, or
/// NJ - I over a shared point sequence.
struct LevelFamily {
    ProblemKind kind;
    PointSequence base;
    std::vector<std::vector<cplx>> targets; // pick only

    DecompositionProblem at(double level) const;
    /// Level below which the problem is infeasible by the diagonal argument
    /// (P_ii must be nonnegative).
    double lower_bound() const;
    /// Starting bracket top for the doubling search.
    double initial_hi() const;
    /// Rigorous lower bound from the Schur-product consequence on a fixed
    /// deterministic batch of admissible kernels (product kernel, the
    /// coordinate Szego kernels when they pass the admissibility check, and
    /// a few random admissible draws). No solver involved.
    double kernel_lower_bound() const;
    /// Least level with a single-coordinate closed-form certificate
    /// Gamma = P o S_m (entrywise; S_m = 1/X_m is the coordinate-m Szego
    /// Gram). Exact: zero residual, PSD by the eigenvalue computation that
    /// chose the level. Unavailable when both coordinates are degenerate
    /// (repeated values).
    AnalyticUpper analytic_upper() const;
};

LevelFamily pick_family(const PickProblem& prob);
LevelFamily separation_a_family(const PointSequence& seq);
LevelFamily separation_b_family(const PointSequence& seq);

inline constexpr double kDefaultFeasTol = 1e-7;
inline constexpr int kDefaultMaxIter = 20000;
inline constexpr double kDefaultBisTol = 5e-4;

/// Dykstra alternating projections between the affine slice and the PSD x PSD
/// cone. The affine projection is exact and entrywise; the cone step carries
/// the Dykstra correction. Feasible when the PSD iterate's residual drops to
/// feas_tol; otherwise the best iterate is reported as an Infeasible verdict
/// (stalled residual or exhausted budget; never an exception).
/// A PSD lhs short-circuits: Gamma = lhs o S1 with S1_ij = 1/x1_ij is an
/// exact certificate (S1 is the coordinate-1 Szego Gram, so it is PSD).
/// warm_start seeds the iterate (corrections restart at zero, which the
/// Dykstra convergence theorem permits for any starting point).
SolveResult dykstra_solve(const DecompositionProblem& p, double feas_tol = kDefaultFeasTol,
                          int max_iter = kDefaultMaxIter,
                          const AglerCertificate* warm_start = nullptr);

/// Exact projection onto {Gamma o X1 + Delta o X2 = lhs}; exposed for tests.
void affine_project(const DecompositionProblem& p, HermitianMatrix& gamma,
                    HermitianMatrix& delta);

double decomposition_residual(const DecompositionProblem& p, const HermitianMatrix& gamma,
                              const HermitianMatrix& delta);

SolveResult pick_feasible_at(const PickProblem& prob, double m, double feas_tol = kDefaultFeasTol,
                             int max_iter = kDefaultMaxIter);
SolveResult separation_decomposition_a(const PointSequence& seq, double m,
                                       double feas_tol = kDefaultFeasTol,
                                       int max_iter = kDefaultMaxIter);
SolveResult separation_decomposition_b(const PointSequence& seq, double n,
                                       double feas_tol = kDefaultFeasTol,
                                       int max_iter = kDefaultMaxIter);

struct BisectOptions {
    double bis_tol = kDefaultBisTol;
    double feas_tol = kDefaultFeasTol;
    int max_iter = kDefaultMaxIter;
    double lo = -1.0; // < 0: use the family's analytic lower bound
    double hi = -1.0; // < 0: doubling search from initial_hi()
};

struct BisectResult {
    double m_star;                // feasible endpoint of the final bracket
    AglerCertificate certificate; // certificate at m_star
    int probes;                   // solver invocations
};

/// Bisects the least feasible level. The returned m_star overestimates the
/// true infimum by at most bis_tol plus the solver's false-infeasibility
/// margin. Throws Error when no feasible level is found within 60 doublings.
BisectResult bisect_constant(const LevelFamily& family, const BisectOptions& opt = {});

/// Exact feasibility transport from one level to a higher one: adds
/// (shift in lhs) o S to Gamma, with S the PSD entrywise inverse of X1
/// (or the 1/x1_ii diagonal for separation_a). No re-solve, no new error.
AglerCertificate shift_certificate(const LevelFamily& family, const AglerCertificate& cert,
                                   double from_level, double to_level);

struct CertificateReport {
    double residual;
    double gamma_min_eig;
    double delta_min_eig;
    bool residual_ok;
    bool psd_ok;
    int kernels_checked;
    int kernels_failed;
    double worst_kernel_margin; // >= 0 when every kernel consequence holds
    bool kernels_ok;
    bool valid;
};

/// Independent re-check of a certificate plus the Schur-product consequence
/// on a batch of admissible kernels (product kernel + random_count draws):
/// separation_a: max eig of G^k <= level + tol; separation_b: min eig of
/// G^k >= 1/level - tol; pick: (level^2 - <w_i, w_j>) o G^k >= -tol.
CertificateReport verify_certificate(const DecompositionProblem& p, const AglerCertificate& c,
                                     double tol, int random_count = 50,
                                     std::uint64_t seed = 20260815);

/// Classical one-variable Pick constant for nodes z_i and scalar targets:
/// the square root of the largest generalized eigenvalue of (W o S) v = mu S v
/// with S the Szego Gram and W_ij = conj(w_i) w_j.
double one_variable_pick_constant(const std::vector<cplx>& coords,
                                  const std::vector<cplx>& targets);

} // namespace bidisk

#endif
