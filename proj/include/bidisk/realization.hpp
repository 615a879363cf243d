#ifndef BIDISK_REALIZATION_HPP
#define BIDISK_REALIZATION_HPP

#include <cstdint>
#include <vector>

#include "bidisk/agler.hpp"
#include "bidisk/kernels.hpp"
#include "bidisk/matrix.hpp"

namespace bidisk {

/// E_lambda = l^1 I_{H1} + l^2 I_{H2}, the coordinate-diagonal symbol.
struct DiagonalSymbol {
    Point2D l;
    std::vector<cplx> entries(int dim_h1, int dim_h2) const;
};

/// Blocks of the square unitary U behind Psi = A + B E (1 - D E)^{-1} C,
/// sliced to the logical coefficient dimensions. When in_dim == out_dim the
/// assembled block matrix is the unitary itself; otherwise it is a column
/// (or row) slice of one, so the columns (rows) stay orthonormal.
struct TransferRealization {
    ComplexMatrix a; // out_dim x in_dim
    ComplexMatrix b; // out_dim x (dim_h1 + dim_h2)
    ComplexMatrix c; // (dim_h1 + dim_h2) x in_dim
    ComplexMatrix d; // (dim_h1 + dim_h2) square
    int dim_h1 = 0;
    int dim_h2 = 0;
    int in_dim = 0;
    int out_dim = 0;
};

/// A realization plus the rescaling that makes it hit the prescribed values.
struct InterpolantHandle {
    TransferRealization real;
    double scale;
    // Targets are interpolated as given; no conjugation is applied. The flag
    // records that choice for consumers that track the transposed bookkeeping.
    bool conjugate_convention;
    PointSequence base;
};

/// Unscaled Psi(l) = A + B E_l (1 - D E_l)^{-1} C, contractive on the bidisk.
ComplexMatrix eval_unscaled(const TransferRealization& r, Point2D l);

/// scale * Psi(l), the user-facing function (out_dim x in_dim).
ComplexMatrix eval(const InterpolantHandle& handle, Point2D l);

/// Smallest singular value of (1 - D E_l); at least 1 - max(|l1|, |l2|).
double resolvent_sigma_min(const TransferRealization& r, Point2D l);

/// Column function Phi with Phi(l_i) = e_i built from a feasible (b')
/// certificate at level n_level (lhs N J - I). extra_h1 appends inert
/// dimensions to H1; the transfer function does not depend on them.
InterpolantHandle build_realization_b(const PointSequence& seq, double n_level,
                                      const AglerCertificate& cert, double tol = 1e-6,
                                      int extra_h1 = 0);

/// Scalar (or row-vector valued) interpolant for a Pick certificate at
/// m_star: eval at node i returns targets[i], sampled modulus <= m_star.
InterpolantHandle build_interpolant(const PickProblem& prob, double m_star,
                                    const AglerCertificate& cert, double tol = 1e-6,
                                    int extra_h1 = 0);

/// Row function Psi with Psi(l_i) e_i = 1 built from a feasible (a')
/// certificate at level m_level (lhs M I - J); sampled norm <= sqrt(M).
InterpolantHandle build_realization_a(const PointSequence& seq, double m_level,
                                      const AglerCertificate& cert, double tol = 1e-6,
                                      int extra_h1 = 0);

/// Rows of the (b') column function: phi_i(l_j) = delta_ij and
/// sum_i |phi_i|^2 <= n_star on the bidisk. All rows share the state blocks.
std::vector<InterpolantHandle> strong_separation_family(const PointSequence& seq, double n_star,
                                                        const AglerCertificate& cert,
                                                        double tol = 1e-6);

/// phi_i = psi_i chi_i evaluated by multiplying component evaluations; no
/// single unitary realization is constructed.
struct ComposedInterpolant {
    InterpolantHandle psi_row;
    std::vector<InterpolantHandle> chi;
};

/// The (iii) => (iv) composition: psi_row is an (a'') row handle over the
/// same nodes as the chi family; the result hits Phi(l_i) = e_i with sampled
/// square-sum at most C^2 M.
ComposedInterpolant compose_iii_to_iv(const InterpolantHandle& psi_row,
                                      std::vector<InterpolantHandle> chi);

/// Column evaluation of the composition (n x 1).
ComplexMatrix eval(const ComposedInterpolant& phi, Point2D l);

/// Deterministic evaluation set: tensor grid of radii {0, .3, .6, .9, .99}
/// with 16 phases per coordinate, plus random_count area-uniform samples of
/// radius <= 0.999 per coordinate.
std::vector<Point2D> evaluation_grid(int random_count, std::uint64_t seed);

/// max over samples of the unscaled Psi's operator norm (parallel, eval is
/// pure). The structural bound is 1 for any realization sliced from a
/// unitary; this is the sampled check.
double sampled_sup_norm(const TransferRealization& r, const std::vector<Point2D>& samples);

/// max over samples of the euclidean norm of the composed column.
double sampled_sup_norm(const ComposedInterpolant& phi, const std::vector<Point2D>& samples);

} // namespace bidisk

#endif
