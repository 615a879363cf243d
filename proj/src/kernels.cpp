#include "bidisk/kernels.hpp"

#include <cmath>

#include "bidisk/linalg.hpp"
#include "bidisk/runtime.hpp"

namespace bidisk {

namespace {

void require_in_disk(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) >= 1.0)
        throw DomainError(std::string(what) + " must lie in the open unit disk");
}

void require_in_bidisk(const Point2D& p) {
    require_in_disk(p.c1, "first coordinate");
    require_in_disk(p.c2, "second coordinate");
}

} // namespace

PointSequence::PointSequence(std::vector<Point2D> points) : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("point sequence must contain at least one point");
    for (const auto& p : points_) require_in_bidisk(p);
    const int n = size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dist = std::max(std::abs(points_[i].c1 - points_[j].c1),
                                         std::abs(points_[i].c2 - points_[j].c2));
            if (dist <= 1e-12)
                throw DomainError("point sequence contains a repeated point (indices " +
                                  std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
}

cplx szego(cplx l, cplx z) {
    require_in_disk(l, "szego argument");
    require_in_disk(z, "szego argument");
    return 1.0 / (1.0 - std::conj(l) * z);
}

cplx product_kernel(const Point2D& l, const Point2D& z) {
    return szego(l.c1, z.c1) * szego(l.c2, z.c2);
}

KernelSample sample_kernel(const PointSequence& seq, const KernelFn& k) {
    const int n = seq.size();
    ComplexMatrix values(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) values(i, j) = k(seq[i], seq[j]);
    values.require_finite("sample_kernel");

    double herm_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        herm_dev = std::max(herm_dev, std::abs(values(i, i).imag()));
        for (int j = i + 1; j < n; ++j)
            herm_dev = std::max(herm_dev, std::abs(values(i, j) - std::conj(values(j, i))));
    }
    if (herm_dev > 1e-10)
        throw DomainError("kernel is not Hermitian symmetric (deviation " +
                          std::to_string(herm_dev) + ")");

    HermitianMatrix m = HermitianMatrix::hermitian_part(values);
    for (int i = 0; i < n; ++i)
        if (m.diag(i) <= 0.0) throw DomainError("kernel has a nonpositive diagonal value");
    const double lmin = min_eigenvalue(m);
    if (lmin < -1e-10 * std::max(1.0, m.max_abs()))
        throw NotPsdError("sampled kernel is not positive semidefinite", lmin);
    return KernelSample{seq, std::move(m)};
}

KernelSample product_kernel_sample(const PointSequence& seq) {
    return sample_kernel(seq, [](const Point2D& l, const Point2D& z) {
        return product_kernel(l, z);
    });
}

NormalizedGrammian normalized_grammian(const KernelSample& s) {
    const int n = s.matrix.dim();
    std::vector<double> root(n);
    for (int i = 0; i < n; ++i) {
        const double d = s.matrix.diag(i);
        if (d <= 0.0) throw DomainError("normalized_grammian needs a positive diagonal");
        root[i] = std::sqrt(d);
    }
    HermitianMatrix g(n);
    for (int i = 0; i < n; ++i) {
        g.set_diag(i, 1.0);
        for (int j = i + 1; j < n; ++j) g.set_upper(i, j, s.matrix(i, j) / (root[i] * root[j]));
    }
    return NormalizedGrammian{s.base, std::move(g)};
}

HermitianMatrix coordinate_gap(const PointSequence& seq, int m) {
    if (m != 1 && m != 2) throw DomainError("coordinate index must be 1 or 2");
    const int n = seq.size();
    HermitianMatrix x(n);
    auto coord = [&](int i) { return m == 1 ? seq[i].c1 : seq[i].c2; };
    for (int i = 0; i < n; ++i) {
        x.set_diag(i, 1.0 - std::norm(coord(i)));
        for (int j = i + 1; j < n; ++j)
            x.set_upper(i, j, 1.0 - std::conj(coord(i)) * coord(j));
    }
    return x;
}

AdmissibilityReport check_admissible(const KernelSample& s, double tol) {
    const double e1 = min_eigenvalue(coordinate_gap(s.base, 1).schur(s.matrix));
    const double e2 = min_eigenvalue(coordinate_gap(s.base, 2).schur(s.matrix));
    return AdmissibilityReport{e1, e2, e1 >= -tol && e2 >= -tol};
}

namespace {

cplx eval_poly(const std::array<cplx, 9>& coef, const Point2D& p) {
    cplx pow1 = 1.0;
    cplx acc = 0.0;
    for (int a = 0; a < 3; ++a) {
        cplx pow2 = 1.0;
        for (int b = 0; b < 3; ++b) {
            acc += coef[3 * a + b] * pow1 * pow2;
            pow2 *= p.c2;
        }
        pow1 *= p.c1;
    }
    return acc;
}

} // namespace

KernelSample modulated_product_kernel(const PointSequence& seq,
                                      const std::vector<ModulatedTerm>& terms) {
    if (terms.empty()) throw DomainError("modulated kernel needs at least one term");
    for (const auto& t : terms)
        if (!(t.weight > 0.0)) throw DomainError("modulated kernel weights must be positive");
    const int n = seq.size();
    std::vector<std::vector<cplx>> h(terms.size(), std::vector<cplx>(n));
    for (std::size_t t = 0; t < terms.size(); ++t)
        for (int i = 0; i < n; ++i) h[t][i] = eval_poly(terms[t].coef, seq[i]);

    return sample_kernel(seq, [&](const Point2D& l, const Point2D& z) {
        // Re-evaluating the polynomials keeps the lambda pure in (l, z);
        // n is small so the cost is negligible.
        cplx acc = 0.0;
        for (const auto& t : terms)
            acc += t.weight * std::conj(eval_poly(t.coef, l)) * eval_poly(t.coef, z);
        return acc * product_kernel(l, z);
    });
}

KernelSample random_admissible(const PointSequence& seq, std::uint64_t seed) {
    Rng rng(seed);
    const int n = seq.size();
    const int term_count = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<ModulatedTerm> terms;
    terms.reserve(term_count);
    int attempts = 0;
    while (static_cast<int>(terms.size()) < term_count) {
        if (++attempts > 100)
            throw NumericError("random_admissible: no usable polynomial after 100 draws");
        ModulatedTerm t;
        t.weight = std::exp(rng.uniform(-1.0, 1.0));
        for (auto& c : t.coef) c = cplx(rng.normal(), rng.normal());
        bool usable = true;
        for (int i = 0; i < n && usable; ++i)
            if (std::abs(eval_poly(t.coef, seq[i])) < 1e-6) usable = false;
        if (usable) terms.push_back(t);
    }
    return modulated_product_kernel(seq, terms);
}

std::vector<KernelSample> kernel_batch(const PointSequence& seq, int random_count,
                                       std::uint64_t seed) {
    std::vector<KernelSample> batch;
    batch.reserve(random_count + 3);
    batch.push_back(product_kernel_sample(seq));
    // The coordinate Szego kernels are the sharpest witnesses when they pass
    // the cross-coordinate admissibility test; they are PSD regardless.
    for (int m : {1, 2}) {
        const HermitianMatrix x = coordinate_gap(seq, m);
        const int n = seq.size();
        HermitianMatrix s(n);
        for (int i = 0; i < n; ++i) {
            s.set_diag(i, 1.0 / x.diag(i));
            for (int j = i + 1; j < n; ++j) s.set_upper(i, j, 1.0 / x(i, j));
        }
        KernelSample ks{seq, s};
        if (check_admissible(ks, 1e-10).admissible) batch.push_back(std::move(ks));
    }
    for (int t = 0; t < random_count; ++t) batch.push_back(random_admissible(seq, seed + t));
    return batch;
}

} // namespace bidisk
