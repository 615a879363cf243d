#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bidisk/kernels.hpp"
#include "bidisk/linalg.hpp"
#include "test_support.hpp"

using bidisk::cplx;
using bidisk::Point2D;
using bidisk::PointSequence;
using bidisk_test::random_points;

TEST_CASE("szego closed forms") {
    CHECK(std::abs(bidisk::szego(0.0, cplx(0.3, 0.4)) - 1.0) < 1e-15);
    CHECK(bidisk::szego(0.5, 0.5).real() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(bidisk::szego(0.5, -0.5).real() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(bidisk::szego(1.0, 0.0), bidisk::DomainError);
    CHECK_THROWS_AS(bidisk::szego(0.0, cplx(0.8, 0.8)), bidisk::DomainError);
}

TEST_CASE("product kernel closed forms") {
    const Point2D origin{0.0, 0.0};
    CHECK(std::abs(bidisk::product_kernel(origin, {cplx(0.2, 0.1), cplx(-0.4, 0.0)}) - 1.0) <
          1e-15);
    CHECK(bidisk::product_kernel({0.5, 0.0}, {0.5, 0.0}).real() ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(bidisk::product_kernel({0.5, 0.5}, {0.5, 0.5}).real() ==
          doctest::Approx(16.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("point sequence validation") {
    CHECK_THROWS_AS(PointSequence({}), bidisk::DomainError);
    CHECK_THROWS_AS(PointSequence({{0.3, 0.0}, {0.3, 0.0}}), bidisk::DomainError);
    CHECK_THROWS_AS(PointSequence({{cplx(0.8, 0.8), 0.0}}), bidisk::DomainError);
    CHECK_NOTHROW(PointSequence({{0.3, 0.0}, {0.3, 1e-6}}));
}

TEST_CASE("sample_kernel values and validation") {
    const auto one = bidisk::product_kernel_sample(PointSequence({{0.0, 0.0}}));
    CHECK(one.matrix.dim() == 1);
    CHECK(one.matrix.diag(0) == doctest::Approx(1.0).epsilon(1e-15));

    const auto two = bidisk::product_kernel_sample(PointSequence({{0.0, 0.0}, {0.5, 0.0}}));
    CHECK(two.matrix.diag(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(two.matrix.diag(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(two.matrix(0, 1) - cplx(1.0)) < 1e-14);

    bidisk::Rng rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        const auto seq = random_points(rng, 4);
        const auto ks = bidisk::product_kernel_sample(seq);
        CHECK(bidisk::min_eigenvalue(ks.matrix) > 0.0);
    }

    const PointSequence duo({{0.0, 0.0}, {0.5, 0.0}});
    auto not_hermitian = [](const Point2D& l, const Point2D& z) {
        return cplx(1.0) + 0.5 * (z.c1 - l.c1);
    };
    CHECK_THROWS_AS(bidisk::sample_kernel(duo, not_hermitian), bidisk::DomainError);

    // [[1, 2], [2, 1]] has eigenvalues (3, -1): rejected at construction.
    auto indefinite = [](const Point2D& l, const Point2D& z) {
        const double same = std::abs(l.c1 - z.c1) < 1e-14 ? 1.0 : 2.0;
        return cplx(same);
    };
    CHECK_THROWS_AS(bidisk::sample_kernel(duo, indefinite), bidisk::NotPsdError);
}

TEST_CASE("normalized grammian") {
    const auto one = bidisk::normalized_grammian(
        bidisk::product_kernel_sample(PointSequence({{0.2, 0.4}})));
    CHECK(one.matrix.dim() == 1);
    CHECK(one.matrix.diag(0) == doctest::Approx(1.0));

    // [[1, 1], [1, 4/3]] normalizes to off-diagonal sqrt(3)/2.
    const auto two = bidisk::normalized_grammian(
        bidisk::product_kernel_sample(PointSequence({{0.0, 0.0}, {0.5, 0.0}})));
    CHECK(two.matrix.diag(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two.matrix.diag(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two.matrix(0, 1).real() == doctest::Approx(0.8660254037844386).epsilon(1e-12));
    CHECK(two.matrix(0, 1).imag() == doctest::Approx(0.0));

    // A diagonal sample normalizes to the identity.
    const PointSequence duo({{0.0, 0.0}, {0.5, 0.0}});
    auto diag_kernel = [](const Point2D& l, const Point2D& z) {
        return std::abs(l.c1 - z.c1) < 1e-14 ? cplx(2.0) : cplx(0.0);
    };
    const auto gd = bidisk::normalized_grammian(bidisk::sample_kernel(duo, diag_kernel));
    CHECK(std::abs(gd.matrix(0, 0) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(gd.matrix(1, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(gd.matrix(0, 1)) < 1e-15);

    // Positive definite for distinct points under the product kernel.
    bidisk::Rng rng(11);
    for (int rep = 0; rep < 3; ++rep) {
        const auto g = bidisk::normalized_grammian(
            bidisk::product_kernel_sample(random_points(rng, 5)));
        CHECK(bidisk::min_eigenvalue(g.matrix) > 0.0);
    }
}

TEST_CASE("check_admissible on the product kernel, 100 random sets") {
    bidisk::Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 7);
        const auto ks = bidisk::product_kernel_sample(random_points(rng, n));
        const auto rep_out = bidisk::check_admissible(ks, 1e-10);
        CHECK(rep_out.psd1_mineig >= -1e-10);
        CHECK(rep_out.psd2_mineig >= -1e-10);
        CHECK(rep_out.admissible);
    }
}

TEST_CASE("check_admissible constant kernel and a non-admissible sample") {
    // The constant kernel J is PSD but not admissible off the diagonal axes:
    // X1 o J = X1 = [[1, 1], [1, 1 - r^2]] has determinant -r^2 < 0.
    const PointSequence duo({{0.0, 0.0}, {0.9, 0.0}});
    auto constant = [](const Point2D&, const Point2D&) { return cplx(1.0); };
    const auto ks = bidisk::sample_kernel(duo, constant);
    const auto const_report = bidisk::check_admissible(ks, 1e-10);
    // min eigenvalue of [[1, 1], [1, 0.19]] is (1.19 - sqrt(4.6561))/2.
    CHECK(const_report.psd1_mineig == doctest::Approx(-0.483899902679).epsilon(1e-8));
    CHECK_FALSE(const_report.admissible);
    // Second coordinate is constant zero for both points: X2 o J = J, PSD.
    CHECK(const_report.psd2_mineig >= -1e-12);

    // [[1, .99], [.99, 1]] is PSD, but X1 o K = [[1, .99], [.99, .19]] is not.
    auto tight = [](const Point2D& l, const Point2D& z) {
        return std::abs(l.c1 - z.c1) < 1e-14 ? cplx(1.0) : cplx(0.99);
    };
    const auto bad = bidisk::sample_kernel(duo, tight);
    const auto report = bidisk::check_admissible(bad, 1e-8);
    CHECK(report.psd1_mineig < -1e-3);
    CHECK_FALSE(report.admissible);
    CHECK(report.psd2_mineig >= -1e-12);
}

TEST_CASE("modulated kernel with h == 1 is the product kernel") {
    bidisk::Rng rng(23);
    const auto seq = random_points(rng, 5);
    bidisk::ModulatedTerm unit{1.0, {}};
    unit.coef[0] = 1.0;
    const auto mod = bidisk::modulated_product_kernel(seq, {unit});
    const auto prod = bidisk::product_kernel_sample(seq);
    CHECK((mod.matrix.to_full() - prod.matrix.to_full()).max_abs() < 1e-14);
}

TEST_CASE("random_admissible determinism and admissibility") {
    bidisk::Rng rng(29);
    const auto seq = random_points(rng, 6);
    const auto a = bidisk::random_admissible(seq, 777);
    const auto b = bidisk::random_admissible(seq, 777);
    CHECK((a.matrix.to_full() - b.matrix.to_full()).max_abs() == 0.0);

    const auto c = bidisk::random_admissible(seq, 778);
    CHECK((a.matrix.to_full() - c.matrix.to_full()).max_abs() > 1e-6);

    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto ks = bidisk::random_admissible(seq, seed);
        const auto report = bidisk::check_admissible(ks, 1e-8);
        CHECK(report.admissible);
    }
}

TEST_CASE("kernel batch layout") {
    bidisk::Rng rng(31);
    const auto seq = random_points(rng, 4);
    const auto batch = bidisk::kernel_batch(seq, 3, 50);
    // product kernel + up to two admissible coordinate kernels + 3 randoms
    REQUIRE(batch.size() >= 4);
    REQUIRE(batch.size() <= 6);
    const auto prod = bidisk::product_kernel_sample(seq);
    CHECK((batch[0].matrix.to_full() - prod.matrix.to_full()).max_abs() == 0.0);
    for (const auto& ks : batch) CHECK(bidisk::check_admissible(ks, 1e-8).admissible);

    // One-variable sequences always admit the first-coordinate Szego kernel.
    const PointSequence line({{0.0, 0.0}, {0.5, 0.0}, {-0.4, 0.0}});
    const auto line_batch = bidisk::kernel_batch(line, 0, 1);
    REQUIRE(line_batch.size() >= 2);
    const auto gap = bidisk::coordinate_gap(line, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(line_batch[1].matrix(i, j) - 1.0 / gap(i, j)) <= 1e-14);
}
