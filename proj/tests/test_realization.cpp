#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bidisk/agler.hpp"
#include "bidisk/errors.hpp"
#include "bidisk/linalg.hpp"
#include "bidisk/realization.hpp"
#include "test_support.hpp"

using bidisk::AglerCertificate;
using bidisk::ComplexMatrix;
using bidisk::cplx;
using bidisk::InterpolantHandle;
using bidisk::Point2D;
using bidisk::PointSequence;
using bidisk_test::random_points;

namespace {

AglerCertificate sep_b_certificate(const PointSequence& seq, double& n_star) {
    const auto bis = bidisk::bisect_constant(bidisk::separation_b_family(seq));
    n_star = bis.m_star;
    return bis.certificate;
}

double node_error_b(const InterpolantHandle& h) {
    double worst = 0.0;
    for (int i = 0; i < h.base.size(); ++i) {
        const ComplexMatrix v = bidisk::eval(h, h.base[i]);
        for (int t = 0; t < v.rows(); ++t)
            worst = std::max(worst, std::abs(v(t, 0) - (t == i ? cplx(1.0) : cplx(0.0))));
    }
    return worst;
}

} // namespace

TEST_CASE("single node at the origin gives the constant e1") {
    const PointSequence seq({{0.0, 0.0}});
    AglerCertificate cert{bidisk::HermitianMatrix(1), bidisk::HermitianMatrix(1), 0.0, 0};
    const auto h = bidisk::build_realization_b(seq, 1.0, cert);
    CHECK(h.scale == doctest::Approx(1.0));
    CHECK(h.real.dim_h1 == 0);
    CHECK(h.real.dim_h2 == 0);
    const auto at_origin = bidisk::eval(h, {0.0, 0.0});
    CHECK(std::abs(at_origin(0, 0) - 1.0) <= 1e-12);
    const auto away = bidisk::eval(h, {0.4, -0.2});
    CHECK(std::abs(away(0, 0) - 1.0) <= 1e-12); // no dynamics: constant
}

TEST_CASE("eval at the origin is scale times the a block") {
    bidisk::Rng rng(101);
    const auto seq = random_points(rng, 3, 0.6);
    double n_star = 0.0;
    const auto cert = sep_b_certificate(seq, n_star);
    const auto h = bidisk::build_realization_b(seq, n_star, cert);
    const auto v = bidisk::eval(h, {0.0, 0.0});
    for (int t = 0; t < 3; ++t)
        CHECK(std::abs(v(t, 0) - h.scale * h.real.a(t, 0)) <= 1e-14);
}

TEST_CASE("realization b hits the nodes and stays below sqrt(N)") {
    bidisk::Rng rng(103);
    const auto seq = random_points(rng, 3, 0.7);
    double n_star = 0.0;
    const auto cert = sep_b_certificate(seq, n_star);
    const auto h = bidisk::build_realization_b(seq, n_star, cert);
    CHECK(node_error_b(h) <= 1e-5);

    const auto grid = bidisk::evaluation_grid(2000, 7);
    CHECK(bidisk::sampled_sup_norm(h.real, grid) <= 1.0 + 1e-6);

    // Resolvent stays safely invertible on the sampled set.
    for (const auto& l : {Point2D{0.99, -0.99}, Point2D{cplx(0.0, 0.99), 0.0}}) {
        CHECK(bidisk::resolvent_sigma_min(h.real, l) >= 1.0 - 0.99 - 1e-8);
    }
}

TEST_CASE("pick interpolant single point is constant") {
    const PointSequence seq({{0.3, -0.2}});
    const cplx w(0.4, 0.3);
    const auto prob = bidisk::make_pick_problem(seq, std::vector<cplx>{w});
    const auto sol = bidisk::pick_feasible_at(prob, std::abs(w));
    REQUIRE(sol.feasible);
    const auto h = bidisk::build_interpolant(prob, std::abs(w), sol.certificate);
    for (const auto& l : {Point2D{0.0, 0.0}, Point2D{-0.5, 0.6}, Point2D{cplx(0.1, 0.7), 0.2}})
        CHECK(std::abs(bidisk::eval(h, l)(0, 0) - w) <= 1e-7);
}

TEST_CASE("pick interpolant for the hand oracle pair") {
    const PointSequence seq({{0.0, 0.0}, {0.5, 0.0}});
    const auto prob = bidisk::make_pick_problem(seq, std::vector<cplx>{0.0, 0.5});
    const auto sol = bidisk::pick_feasible_at(prob, 1.0);
    REQUIRE(sol.feasible);
    const auto h = bidisk::build_interpolant(prob, 1.0, sol.certificate);
    CHECK(std::abs(bidisk::eval(h, {0.0, 0.0})(0, 0)) <= 1e-5);
    CHECK(std::abs(bidisk::eval(h, {0.5, 0.0})(0, 0) - 0.5) <= 1e-5);
    const auto grid = bidisk::evaluation_grid(2000, 11);
    CHECK(bidisk::sampled_sup_norm(h.real, grid) <= 1.0 + 1e-6);
}

TEST_CASE("pick interpolant with constant targets is numerically constant") {
    bidisk::Rng rng(107);
    const auto seq = random_points(rng, 3, 0.6);
    const cplx c(0.2, -0.6);
    const auto prob = bidisk::make_pick_problem(seq, std::vector<cplx>(3, c));
    const auto bis = bidisk::bisect_constant(bidisk::pick_family(prob));
    const auto h = bidisk::build_interpolant(prob, bis.m_star, bis.certificate);
    const auto grid = bidisk::evaluation_grid(500, 13);
    double sup = 0.0;
    for (const auto& l : grid) sup = std::max(sup, std::abs(bidisk::eval(h, l)(0, 0)));
    CHECK(sup <= std::abs(c) * (1.0 + 1e-6) + bidisk::kDefaultBisTol);
}

TEST_CASE("generic pick interpolant obeys the contract") {
    bidisk::Rng rng(109);
    const auto seq = random_points(rng, 4, 0.7);
    std::vector<cplx> w;
    for (int i = 0; i < 4; ++i) w.push_back(bidisk_test::random_disk_point(rng, 0.9));
    const auto prob = bidisk::make_pick_problem(seq, w);
    const auto bis = bidisk::bisect_constant(bidisk::pick_family(prob));
    const auto h = bidisk::build_interpolant(prob, bis.m_star, bis.certificate);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(bidisk::eval(h, seq[i])(0, 0) - w[static_cast<std::size_t>(i)]) <= 1e-5);
    const auto grid = bidisk::evaluation_grid(3000, 17);
    CHECK(bidisk::sampled_sup_norm(h.real, grid) <= 1.0 + 1e-6);
}

TEST_CASE("strong separation rows are a dual family") {
    bidisk::Rng rng(113);
    const auto seq = random_points(rng, 3, 0.65);
    double n_star = 0.0;
    const auto cert = sep_b_certificate(seq, n_star);
    const auto rows = bidisk::strong_separation_family(seq, n_star, cert);
    REQUIRE(rows.size() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double want = i == j ? 1.0 : 0.0;
            CHECK(std::abs(bidisk::eval(rows[static_cast<std::size_t>(i)], seq[j])(0, 0) - want) <=
                  1e-5);
        }
    const auto grid = bidisk::evaluation_grid(2000, 19);
    double sup_sq = 0.0;
    for (const auto& l : grid) {
        double sq = 0.0;
        for (const auto& r : rows) sq += std::norm(bidisk::eval(r, l)(0, 0));
        sup_sq = std::max(sup_sq, sq);
    }
    CHECK(sup_sq <= n_star + 1e-5);
}

TEST_CASE("realization a gives the unit row values") {
    bidisk::Rng rng(127);
    const auto seq = random_points(rng, 3, 0.6);
    const auto bis = bidisk::bisect_constant(bidisk::separation_a_family(seq));
    const auto h = bidisk::build_realization_a(seq, bis.m_star, bis.certificate);
    CHECK(h.real.in_dim == 3);
    CHECK(h.real.out_dim == 1);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(bidisk::eval(h, seq[i])(0, i) - 1.0) <= 1e-5);
    const auto grid = bidisk::evaluation_grid(2000, 23);
    CHECK(bidisk::sampled_sup_norm(h.real, grid) <= 1.0 + 1e-6);
}

TEST_CASE("compose iii to iv") {
    bidisk::Rng rng(131);
    const auto seq = random_points(rng, 3, 0.6);
    const auto bis_a = bidisk::bisect_constant(bidisk::separation_a_family(seq));
    const auto psi = bidisk::build_realization_a(seq, bis_a.m_star, bis_a.certificate);
    double n_star = 0.0;
    const auto cert_b = sep_b_certificate(seq, n_star);
    const auto chi = bidisk::strong_separation_family(seq, n_star, cert_b);

    const auto phi = bidisk::compose_iii_to_iv(psi, chi);
    for (int i = 0; i < 3; ++i) {
        const auto v = bidisk::eval(phi, seq[i]);
        for (int t = 0; t < 3; ++t)
            CHECK(std::abs(v(t, 0) - (t == i ? cplx(1.0) : cplx(0.0))) <= 2e-5);
    }
    // chi_i are bounded by 1 pointwise in modulus times sqrt(N); the crude
    // composite bound is C sqrt(M) with C = sqrt(N).
    const auto grid = bidisk::evaluation_grid(2000, 29);
    const double bound = std::sqrt(n_star) * std::sqrt(bis_a.m_star);
    CHECK(bidisk::sampled_sup_norm(phi, grid) <= bound * (1.0 + 1e-6));

    auto wrong = chi;
    wrong.pop_back();
    CHECK_THROWS_AS(bidisk::compose_iii_to_iv(psi, wrong), bidisk::DomainError);
}

TEST_CASE("constant row composed with chi reproduces the chi column") {
    bidisk::Rng rng(137);
    const auto seq = random_points(rng, 3, 0.6);
    double n_star = 0.0;
    const auto cert = sep_b_certificate(seq, n_star);
    const auto chi = bidisk::strong_separation_family(seq, n_star, cert);

    bidisk::TransferRealization ones_row;
    ones_row.a = ComplexMatrix(1, 3);
    for (int i = 0; i < 3; ++i) ones_row.a(0, i) = 1.0;
    ones_row.b = ComplexMatrix(1, 0);
    ones_row.c = ComplexMatrix(0, 3);
    ones_row.d = ComplexMatrix(0, 0);
    ones_row.in_dim = 3;
    ones_row.out_dim = 1;
    const InterpolantHandle psi{ones_row, 1.0, false, seq};

    const auto phi = bidisk::compose_iii_to_iv(psi, chi);
    for (int i = 0; i < 3; ++i) {
        const auto v = bidisk::eval(phi, seq[i]);
        CHECK(std::abs(v(i, 0) - 1.0) <= 1e-5);
    }
}

TEST_CASE("padding independence") {
    bidisk::Rng rng(139);
    const auto seq = random_points(rng, 3, 0.6);
    double n_star = 0.0;
    const auto cert = sep_b_certificate(seq, n_star);
    const auto plain = bidisk::build_realization_b(seq, n_star, cert);
    const auto padded = bidisk::build_realization_b(seq, n_star, cert, 1e-6, 3);
    CHECK(padded.real.dim_h1 == plain.real.dim_h1 + 3);
    bidisk::Rng sampler(141);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const Point2D l{bidisk_test::random_disk_point(sampler, 0.95),
                        bidisk_test::random_disk_point(sampler, 0.95)};
        worst = std::max(worst, (bidisk::eval(plain, l) - bidisk::eval(padded, l)).max_abs());
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("inconsistent certificate is rejected") {
    bidisk::Rng rng(149);
    const auto seq = random_points(rng, 3, 0.6);
    double n_star = 0.0;
    auto cert = sep_b_certificate(seq, n_star);
    cert.gamma.set_diag(0, cert.gamma.diag(0) + 0.3); // breaks the Gram match
    CHECK_THROWS_AS(bidisk::build_realization_b(seq, n_star, cert),
                    bidisk::CertificateInconsistent);
}

TEST_CASE("eval rejects boundary points") {
    const PointSequence seq({{0.0, 0.0}});
    AglerCertificate cert{bidisk::HermitianMatrix(1), bidisk::HermitianMatrix(1), 0.0, 0};
    const auto h = bidisk::build_realization_b(seq, 1.0, cert);
    CHECK_THROWS_AS(bidisk::eval(h, {1.0, 0.0}), bidisk::DomainError);
}

TEST_CASE("evaluation grid layout") {
    const auto grid = bidisk::evaluation_grid(100, 3);
    CHECK(grid.size() == 65 * 65 + 100);
    for (const auto& p : grid) {
        CHECK(std::abs(p.c1) < 1.0);
        CHECK(std::abs(p.c2) < 1.0);
    }
    const auto again = bidisk::evaluation_grid(100, 3);
    CHECK(grid.size() == again.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(grid[i].c1 == again[i].c1);
        CHECK(grid[i].c2 == again[i].c2);
    }
}
