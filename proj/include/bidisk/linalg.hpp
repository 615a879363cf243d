#ifndef BIDISK_LINALG_HPP
#define BIDISK_LINALG_HPP

#include <vector>

#include "bidisk/matrix.hpp"

namespace bidisk {

struct EigenDecomposition {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // unitary, columns aligned with eigenvalues
};

/// Cyclic complex Jacobi. Converges when the off-diagonal Frobenius norm
/// drops below 1e-12 * ||H||_F; throws ConvergenceError after 30 sweeps.
EigenDecomposition eigh(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);
double max_eigenvalue(const HermitianMatrix& h);

/// Frobenius-nearest PSD matrix: clips negative eigenvalues to zero.
HermitianMatrix project_psd(const HermitianMatrix& h);

/// Factor H = F F* with cols(F) = numerical rank. Rank cutoff: eigenvalues
/// > tol * max(1, lambda_max). Throws NotPsdError if some eigenvalue < -tol.
ComplexMatrix psd_factor(const HermitianMatrix& h, double tol);

/// Unitary completion of the pair correspondence d_i -> c_i. Columns of
/// `domain` and `codomain` are the vectors; both live in dimension
/// domain.rows() == codomain.rows() (caller pads to equal dimension).
/// Requires the two Gram matrices to agree within tol, else NotIsometricError.
/// Result U satisfies U d_i = c_i within 10*tol and ||U*U - I||_max <= 1e-9.
ComplexMatrix complete_to_unitary(const ComplexMatrix& domain, const ComplexMatrix& codomain,
                                  double tol);

/// Solves A X = B by partial-pivot LU; throws NumericError when A is singular.
ComplexMatrix solve_linear(ComplexMatrix a, ComplexMatrix b);

/// Largest singular value, via eigh of M* M.
double operator_norm(const ComplexMatrix& m);

} // namespace bidisk

#endif
