#include "bidisk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bidisk {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    const int n = a.rows();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
}

// One two-sided rotation J* A J zeroing A(p,q). J differs from identity only
// at rows/cols p,q: J[p,p] = c*e^{i phi}, J[p,q] = s*e^{i phi}, J[q,p] = -s,
// J[q,q] = c, where e^{i phi} is the phase of A(p,q).
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
    const cplx apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const cplx phase = apq / r;
    const double alpha = a(p, p).real();
    const double beta = a(q, q).real();
    const double tau = (beta - alpha) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx cp = c * phase;
    const cplx sp = s * phase;

    const int n = a.rows();
    for (int k = 0; k < n; ++k) { // rows: A <- J* A
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = std::conj(cp) * apk - s * aqk;
        a(q, k) = std::conj(sp) * apk + c * aqk;
    }
    for (int k = 0; k < n; ++k) { // cols: A <- A J
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * cp - akq * s;
        a(k, q) = akp * sp + akq * c;
    }
    for (int k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * cp - vkq * s;
        v(k, q) = vkp * sp + vkq * c;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

} // namespace

EigenDecomposition eigh(const HermitianMatrix& h) {
    const int n = h.dim();
    if (n < 1) throw DomainError("eigh: dimension must be at least 1");
    h.require_finite("eigh");

    ComplexMatrix a = h.to_full();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double threshold = 1e-12 * h.frobenius_norm();

    bool converged = false;
    double off = 0.0;
    for (int sweep = 0; sweep < 30; ++sweep) {
        off = offdiag_norm(a);
        if (off <= threshold) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
    if (!converged) {
        off = offdiag_norm(a);
        if (off > threshold) throw ConvergenceError("eigh: Jacobi sweeps exhausted", off);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

double min_eigenvalue(const HermitianMatrix& h) { return eigh(h).eigenvalues.front(); }

double max_eigenvalue(const HermitianMatrix& h) { return eigh(h).eigenvalues.back(); }

HermitianMatrix project_psd(const HermitianMatrix& h) {
    const EigenDecomposition ed = eigh(h);
    const int n = h.dim();
    ComplexMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double lk = ed.eigenvalues[k];
        if (lk <= 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const cplx vik = ed.eigenvectors(i, k);
            if (vik == cplx(0.0)) continue;
            const cplx w = lk * vik;
            for (int j = 0; j < n; ++j) out(i, j) += w * std::conj(ed.eigenvectors(j, k));
        }
    }
    return HermitianMatrix::hermitian_part(out);
}

ComplexMatrix psd_factor(const HermitianMatrix& h, double tol) {
    const EigenDecomposition ed = eigh(h);
    const int n = h.dim();
    const double lmin = ed.eigenvalues.front();
    if (lmin < -tol) throw NotPsdError("psd_factor: matrix is not PSD within tolerance", lmin);
    const double cutoff = tol * std::max(1.0, ed.eigenvalues.back());

    std::vector<int> kept; // descending eigenvalue order for a deterministic layout
    for (int k = n - 1; k >= 0; --k)
        if (ed.eigenvalues[k] > cutoff) kept.push_back(k);

    ComplexMatrix f(n, static_cast<int>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const int k = kept[c];
        const double w = std::sqrt(ed.eigenvalues[k]);
        for (int i = 0; i < n; ++i) f(i, static_cast<int>(c)) = w * ed.eigenvectors(i, k);
    }
    return f;
}

namespace {

// Modified Gram-Schmidt with one reorthogonalization pass. Columns of `vecs`
// are orthonormalized in order; columns whose residual norm falls below
// `drop_tol` are dropped. Returns the accepted columns; `coeffs` (if not
// null) receives, per input column, its expansion in the accepted basis
// (including the new direction as the last coefficient when accepted).
ComplexMatrix orthonormalize(const ComplexMatrix& vecs, double drop_tol,
                             std::vector<std::vector<cplx>>* coeffs,
                             std::vector<int>* accepted_of_input) {
    const int dim = vecs.rows();
    const int m = vecs.cols();
    std::vector<std::vector<cplx>> basis;
    for (int c = 0; c < m; ++c) {
        std::vector<cplx> w(dim);
        for (int i = 0; i < dim; ++i) w[i] = vecs(i, c);
        std::vector<cplx> expansion(basis.size(), cplx(0.0));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t b = 0; b < basis.size(); ++b) {
                cplx proj = 0.0;
                for (int i = 0; i < dim; ++i) proj += std::conj(basis[b][i]) * w[i];
                for (int i = 0; i < dim; ++i) w[i] -= proj * basis[b][i];
                expansion[b] += proj;
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < dim; ++i) nrm += std::norm(w[i]);
        nrm = std::sqrt(nrm);
        if (nrm < drop_tol) {
            if (coeffs) coeffs->push_back(std::move(expansion));
            if (accepted_of_input) accepted_of_input->push_back(-1);
            continue;
        }
        for (int i = 0; i < dim; ++i) w[i] /= nrm;
        expansion.push_back(nrm);
        if (coeffs) coeffs->push_back(std::move(expansion));
        if (accepted_of_input) accepted_of_input->push_back(static_cast<int>(basis.size()));
        basis.push_back(std::move(w));
    }
    ComplexMatrix out(dim, static_cast<int>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b)
        for (int i = 0; i < dim; ++i) out(i, static_cast<int>(b)) = basis[b][i];
    return out;
}

// Extends the orthonormal columns of `q` to a full orthonormal basis of
// C^dim by sweeping standard basis vectors in index order.
ComplexMatrix extend_basis(const ComplexMatrix& q) {
    const int dim = q.rows();
    int have = q.cols();
    ComplexMatrix full(dim, dim);
    for (int c = 0; c < have; ++c)
        for (int i = 0; i < dim; ++i) full(i, c) = q(i, c);
    for (int e = 0; e < dim && have < dim; ++e) {
        std::vector<cplx> w(dim, cplx(0.0));
        w[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int b = 0; b < have; ++b) {
                cplx proj = 0.0;
                for (int i = 0; i < dim; ++i) proj += std::conj(full(i, b)) * w[i];
                for (int i = 0; i < dim; ++i) w[i] -= proj * full(i, b);
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < dim; ++i) nrm += std::norm(w[i]);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) continue;
        for (int i = 0; i < dim; ++i) full(i, have) = w[i] / nrm;
        ++have;
    }
    if (have < dim) throw NumericError("extend_basis: failed to complete an orthonormal basis");
    return full;
}

// Symmetric orthonormalization P <- P (P*P)^{-1/2}; the closest orthonormal
// frame to P, used to absorb O(tol) Gram mismatch in codomain vectors.
ComplexMatrix polar_orthonormalize(const ComplexMatrix& p) {
    if (p.cols() == 0) return p;
    const HermitianMatrix s = HermitianMatrix::hermitian_part(p.adjoint() * p);
    const EigenDecomposition ed = eigh(s);
    const int r = p.cols();
    ComplexMatrix inv_sqrt(r, r);
    for (int k = 0; k < r; ++k) {
        const double lk = ed.eigenvalues[k];
        if (lk <= 1e-14)
            throw NumericError("polar_orthonormalize: frame is numerically rank deficient");
        const double w = 1.0 / std::sqrt(lk);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j)
                inv_sqrt(i, j) += w * ed.eigenvectors(i, k) * std::conj(ed.eigenvectors(j, k));
        }
    }
    return p * inv_sqrt;
}

} // namespace

ComplexMatrix complete_to_unitary(const ComplexMatrix& domain, const ComplexMatrix& codomain,
                                  double tol) {
    if (domain.rows() != codomain.rows())
        throw DomainError("complete_to_unitary: domain and codomain dimensions differ");
    if (domain.cols() != codomain.cols())
        throw DomainError("complete_to_unitary: pair count mismatch");
    domain.require_finite("complete_to_unitary domain");
    codomain.require_finite("complete_to_unitary codomain");

    const int dim = domain.rows();
    const int m = domain.cols();
    if (dim < 1) throw DomainError("complete_to_unitary: dimension must be at least 1");

    const ComplexMatrix gd = domain.adjoint() * domain;
    const ComplexMatrix gc = codomain.adjoint() * codomain;
    double mismatch = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) mismatch = std::max(mismatch, std::abs(gd(i, j) - gc(i, j)));
    if (mismatch > tol)
        throw NotIsometricError("complete_to_unitary: Gram matrices disagree", mismatch);

    std::vector<std::vector<cplx>> coeffs;
    std::vector<int> accepted;
    ComplexMatrix q = orthonormalize(domain, 1e-10, &coeffs, &accepted);
    const int r = q.cols();

    // Codomain counterparts of the accepted directions, from the same
    // Gram-Schmidt expansion coefficients.
    ComplexMatrix p(dim, r);
    for (int c = 0; c < m; ++c) {
        const int slot = accepted[c];
        if (slot < 0) continue; // dropped as dependent
        const std::vector<cplx>& ex = coeffs[c];
        std::vector<cplx> w(dim);
        for (int i = 0; i < dim; ++i) w[i] = codomain(i, c);
        for (int b = 0; b < slot; ++b)
            for (int i = 0; i < dim; ++i) w[i] -= ex[b] * p(i, b);
        const double nrm = ex.back().real();
        for (int i = 0; i < dim; ++i) p(i, slot) = w[i] / nrm;
    }
    p = polar_orthonormalize(p);

    const ComplexMatrix qf = extend_basis(q);
    const ComplexMatrix pf = extend_basis(p);
    ComplexMatrix u = pf * qf.adjoint();

    // Verify the defining property before handing the unitary back.
    const ComplexMatrix mapped = u * domain;
    double dev = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int c = 0; c < m; ++c) dev = std::max(dev, std::abs(mapped(i, c) - codomain(i, c)));
    if (dev > 10.0 * tol)
        throw NotIsometricError("complete_to_unitary: completion misses codomain vectors", dev);
    return u;
}

ComplexMatrix solve_linear(ComplexMatrix a, ComplexMatrix b) {
    if (a.rows() != a.cols()) throw DomainError("solve_linear: matrix must be square");
    if (a.rows() != b.rows()) throw DomainError("solve_linear: shape mismatch");
    const int n = a.rows();
    const int m = b.cols();

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::abs(a(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best < 1e-300) throw NumericError("solve_linear: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (int j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
        }
        const cplx inv = 1.0 / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) * inv;
            if (f == cplx(0.0)) continue;
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (int j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        const cplx inv = 1.0 / a(k, k);
        for (int j = 0; j < m; ++j) {
            cplx acc = b(k, j);
            for (int i = k + 1; i < n; ++i) acc -= a(k, i) * b(i, j);
            b(k, j) = acc * inv;
        }
    }
    b.require_finite("solve_linear");
    return b;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const ComplexMatrix gram = m.adjoint() * m;
    const double top = max_eigenvalue(HermitianMatrix::hermitian_part(gram));
    return std::sqrt(std::max(0.0, top));
}

} // namespace bidisk
