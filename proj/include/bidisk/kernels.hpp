#ifndef BIDISK_KERNELS_HPP
#define BIDISK_KERNELS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "bidisk/matrix.hpp"

namespace bidisk {

/// Point of the open bidisk; coordinates are the components lambda^1, lambda^2.
struct Point2D {
    cplx c1;
    cplx c2;
};

/// Finite list of pairwise-distinct bidisk points (the interpolation nodes).
class PointSequence {
  public:
    explicit PointSequence(std::vector<Point2D> points);

    int size() const { return static_cast<int>(points_.size()); }
    const Point2D& operator[](int i) const { return points_[i]; }
    const std::vector<Point2D>& points() const { return points_; }

  private:
    std::vector<Point2D> points_;
};

/// Kernel values on a point sequence: matrix(i,j) = k(lambda_i, lambda_j).
/// Validated Hermitian and PSD at construction by sample_kernel.
struct KernelSample {
    PointSequence base;
    HermitianMatrix matrix;
};

/// Gram matrix of the normalized kernel functions; unit diagonal.
struct NormalizedGrammian {
    PointSequence base;
    HermitianMatrix matrix;
};

/// Szego kernel s(l, z) = 1 / (1 - conj(l) z) on the disk.
cplx szego(cplx l, cplx z);

/// Product (bidisk Szego) kernel: szego in each coordinate, multiplied.
cplx product_kernel(const Point2D& l, const Point2D& z);

using KernelFn = std::function<cplx(const Point2D&, const Point2D&)>;

/// Evaluates k on all pairs, validating Hermitian symmetry (1e-10) and
/// positive semidefiniteness (min eigenvalue >= -1e-10 relative to scale).
KernelSample sample_kernel(const PointSequence& seq, const KernelFn& k);

/// Convenience: the product kernel sampled on seq.
KernelSample product_kernel_sample(const PointSequence& seq);

NormalizedGrammian normalized_grammian(const KernelSample& s);

struct AdmissibilityReport {
    double psd1_mineig; // min eigenvalue of X1 o K, X1_ij = 1 - conj(l_i^1) l_j^1
    double psd2_mineig; // same for the second coordinate
    bool admissible;    // both >= -tol
};

AdmissibilityReport check_admissible(const KernelSample& s, double tol);

/// X_ij = 1 - conj(l_i^m) l_j^m for coordinate m in {1, 2}.
HermitianMatrix coordinate_gap(const PointSequence& seq, int m);

/// One term of the admissible family: weight * conj(h(l)) h(z) * product
/// kernel, with h a polynomial of degree <= 2 in each variable.
/// coef[3a + b] multiplies (l^1)^a (l^2)^b.
struct ModulatedTerm {
    double weight;
    std::array<cplx, 9> coef;
};

/// Sum of modulated product-kernel terms; admissible by construction
/// (Schur product of PSD factors). The single term h == 1, weight 1
/// reproduces the product kernel exactly.
KernelSample modulated_product_kernel(const PointSequence& seq,
                                      const std::vector<ModulatedTerm>& terms);

/// Random admissible kernel, deterministic in seed. Draws 2..4 modulated
/// terms whose polynomials stay bounded away from zero on the nodes
/// (redraws otherwise; errors after 100 attempts).
KernelSample random_admissible(const PointSequence& seq, std::uint64_t seed);

/// Kernel family for certificate checks: the product kernel, then any
/// coordinate Szego kernel that passes check_admissible on this sequence,
/// then random_admissible draws seeded seed, seed+1, ...
std::vector<KernelSample> kernel_batch(const PointSequence& seq, int random_count,
                                       std::uint64_t seed);

} // namespace bidisk

#endif
