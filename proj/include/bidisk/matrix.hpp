#ifndef BIDISK_MATRIX_HPP
#define BIDISK_MATRIX_HPP

#include <complex>
#include <vector>

#include "bidisk/errors.hpp"

namespace bidisk {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Sized for dimensions up to ~100.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols);
    ComplexMatrix(int rows, int cols, std::vector<cplx> entries);

    static ComplexMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    /// Copy of the r x c block with top-left corner (i0, j0).
    ComplexMatrix block(int i0, int j0, int r, int c) const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;
    /// Throws NumericError if any entry is NaN or infinite.
    void require_finite(const char* context) const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

/// Hermitian matrix with structural storage: real diagonal plus the strict
/// upper triangle. entry(i,j) == conj(entry(j,i)) holds exactly and diagonal
/// imaginary parts are exactly zero, by construction.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(int dim);

    static HermitianMatrix identity(int dim);
    /// All-ones matrix J.
    static HermitianMatrix ones(int dim);
    static HermitianMatrix diagonal(const std::vector<double>& d);
    /// Validates ||m - m*||_max <= herm_tol, then stores the Hermitian part.
    static HermitianMatrix from_full(const ComplexMatrix& m, double herm_tol = 1e-10);
    /// Stores the Hermitian part (m + m*)/2 without a symmetry check; for
    /// reconstructions like V diag V* whose asymmetry is pure roundoff.
    static HermitianMatrix hermitian_part(const ComplexMatrix& m);

    int dim() const { return dim_; }

    cplx operator()(int i, int j) const {
        if (i == j) return cplx(diag_[i], 0.0);
        if (i < j) return upper_[upper_index(i, j)];
        return std::conj(upper_[upper_index(j, i)]);
    }

    double diag(int i) const { return diag_[i]; }
    void set_diag(int i, double v) { diag_[i] = v; }
    /// Sets entry (i,j) with i < j; the mirrored entry follows automatically.
    void set_upper(int i, int j, cplx v) { upper_[upper_index(i, j)] = v; }

    ComplexMatrix to_full() const;

    HermitianMatrix& operator+=(const HermitianMatrix& o);
    HermitianMatrix& operator-=(const HermitianMatrix& o);
    HermitianMatrix& operator*=(double s);
    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

    /// Entrywise (Schur) product; Hermitian again.
    HermitianMatrix schur(const HermitianMatrix& o) const;

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;
    void require_finite(const char* context) const;

  private:
    std::size_t upper_index(int i, int j) const {
        // i < j
        return static_cast<std::size_t>(i) * dim_ - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }

    int dim_ = 0;
    std::vector<double> diag_;
    std::vector<cplx> upper_;
};

} // namespace bidisk

#endif
