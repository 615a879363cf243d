#include "bidisk/matrix.hpp"

#include <cmath>
#include <utility>

namespace bidisk {

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DomainError("matrix dimensions must be nonnegative");
    data_.assign(static_cast<std::size_t>(rows) * cols, cplx(0.0));
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 0 || cols < 0) throw DomainError("matrix dimensions must be nonnegative");
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
        throw DomainError("entry count does not match matrix dimensions");
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = std::conj(data_[k]);
    return r;
}

ComplexMatrix ComplexMatrix::block(int i0, int j0, int r, int c) const {
    if (i0 < 0 || j0 < 0 || r < 0 || c < 0 || i0 + r > rows_ || j0 + c > cols_)
        throw DomainError("block out of range");
    ComplexMatrix b(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch in +");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch in -");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix shape mismatch in *");
    ComplexMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int k = 0; k < a.cols_; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void ComplexMatrix::require_finite(const char* context) const {
    if (!all_finite()) throw NumericError(std::string("non-finite matrix entry in ") + context);
}

HermitianMatrix::HermitianMatrix(int dim) : dim_(dim) {
    if (dim < 0) throw DomainError("matrix dimensions must be nonnegative");
    diag_.assign(static_cast<std::size_t>(dim), 0.0);
    upper_.assign(static_cast<std::size_t>(dim) * (dim > 0 ? dim - 1 : 0) / 2, cplx(0.0));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
    HermitianMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.diag_[i] = 1.0;
    return m;
}

HermitianMatrix HermitianMatrix::ones(int dim) {
    HermitianMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.diag_[i] = 1.0;
    for (auto& v : m.upper_) v = 1.0;
    return m;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    HermitianMatrix m(static_cast<int>(d.size()));
    m.diag_ = d;
    return m;
}

HermitianMatrix HermitianMatrix::from_full(const ComplexMatrix& m, double herm_tol) {
    if (m.rows() != m.cols()) throw DomainError("from_full: matrix must be square");
    const int n = m.rows();
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
        dev = std::max(dev, std::abs(m(i, i).imag()));
        for (int j = i + 1; j < n; ++j)
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    }
    if (dev > herm_tol)
        throw DomainError("from_full: matrix deviates from Hermitian by " + std::to_string(dev));
    return hermitian_part(m);
}

HermitianMatrix HermitianMatrix::hermitian_part(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("hermitian_part: matrix must be square");
    const int n = m.rows();
    HermitianMatrix h(n);
    for (int i = 0; i < n; ++i) {
        h.diag_[i] = m(i, i).real();
        for (int j = i + 1; j < n; ++j)
            h.upper_[h.upper_index(i, j)] = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }
    return h;
}

ComplexMatrix HermitianMatrix::to_full() const {
    ComplexMatrix m(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        m(i, i) = diag_[i];
        for (int j = i + 1; j < dim_; ++j) {
            const cplx v = upper_[upper_index(i, j)];
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
    if (dim_ != o.dim_) throw DomainError("matrix shape mismatch in +");
    for (int i = 0; i < dim_; ++i) diag_[i] += o.diag_[i];
    for (std::size_t k = 0; k < upper_.size(); ++k) upper_[k] += o.upper_[k];
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
    if (dim_ != o.dim_) throw DomainError("matrix shape mismatch in -");
    for (int i = 0; i < dim_; ++i) diag_[i] -= o.diag_[i];
    for (std::size_t k = 0; k < upper_.size(); ++k) upper_[k] -= o.upper_[k];
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
    for (auto& v : diag_) v *= s;
    for (auto& v : upper_) v *= s;
    return *this;
}

HermitianMatrix HermitianMatrix::schur(const HermitianMatrix& o) const {
    if (dim_ != o.dim_) throw DomainError("matrix shape mismatch in schur");
    HermitianMatrix r(dim_);
    for (int i = 0; i < dim_; ++i) r.diag_[i] = diag_[i] * o.diag_[i];
    for (std::size_t k = 0; k < upper_.size(); ++k) r.upper_[k] = upper_[k] * o.upper_[k];
    return r;
}

double HermitianMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : diag_) s += v * v;
    for (const auto& v : upper_) s += 2.0 * std::norm(v);
    return std::sqrt(s);
}

double HermitianMatrix::max_abs() const {
    double m = 0.0;
    for (double v : diag_) m = std::max(m, std::abs(v));
    for (const auto& v : upper_) m = std::max(m, std::abs(v));
    return m;
}

bool HermitianMatrix::all_finite() const {
    for (double v : diag_)
        if (!std::isfinite(v)) return false;
    for (const auto& v : upper_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void HermitianMatrix::require_finite(const char* context) const {
    if (!all_finite()) throw NumericError(std::string("non-finite matrix entry in ") + context);
}

} // namespace bidisk
