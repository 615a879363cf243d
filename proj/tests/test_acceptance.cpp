// Acceptance gate: one line per criterion, [PASS] or [FAIL] with the
// measured quantity. Exit code = number of failed criteria.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "bidisk/agler.hpp"
#include "bidisk/analysis.hpp"
#include "bidisk/errors.hpp"
#include "bidisk/io.hpp"
#include "bidisk/kernels.hpp"
#include "bidisk/linalg.hpp"
#include "bidisk/realization.hpp"
#include "bidisk/runtime.hpp"

using namespace bidisk;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

cplx disk_point(Rng& rng, double rmax) {
    while (true) {
        const cplx z(rng.uniform(-rmax, rmax), rng.uniform(-rmax, rmax));
        if (std::abs(z) <= rmax) return z;
    }
}

// Rejection sampling with a minimum pairwise separation (coordinatewise max
// metric), matching the frozen acceptance distribution.
std::vector<Point2D> separated_points(Rng& rng, int n, double rmax, double minsep,
                                      bool one_variable) {
    std::vector<Point2D> pts;
    while (static_cast<int>(pts.size()) < n) {
        const Point2D cand{disk_point(rng, rmax),
                           one_variable ? cplx(0.0) : disk_point(rng, rmax)};
        bool ok = true;
        for (const auto& q : pts) {
            const double dist = std::max(std::abs(cand.c1 - q.c1), std::abs(cand.c2 - q.c2));
            if (dist < minsep) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(cand);
    }
    return pts;
}

// Certificates accumulated across criteria, re-checked under criterion 2.
struct SolvedInstance {
    DecompositionProblem problem;
    AglerCertificate certificate;
};

std::string read_file(const std::string& path) {
    return read_text_file(path);
}

int run_command(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

int main() {
    std::vector<Outcome> results(9);
    std::vector<SolvedInstance> solved;
    char buf[256];

    // Criteria 1 and 7 share the frozen instance distribution: 25 sequences
    // of 3..6 one-variable points (rmax 0.8, pairwise separation >= 0.15),
    // targets |w| <= 1.
    {
        Rng rng(20260815);
        double worst_c1 = 0.0;
        int c1_fail = 0, c7_pos_fail = 0, c7_neg_fail = 0;
        double worst_lo = 1e9, worst_hi = 1e9;
        for (int inst = 0; inst < 25; ++inst) {
            const int n = 3 + static_cast<int>(rng.next_u64() % 4);
            std::vector<Point2D> pts;
            std::vector<cplx> coords, targets;
            for (int i = 0; i < n; ++i) {
                cplx z;
                while (true) {
                    z = disk_point(rng, 0.8);
                    bool ok = true;
                    for (const auto& q : coords)
                        if (std::abs(z - q) < 0.15) {
                            ok = false;
                            break;
                        }
                    if (ok) break;
                }
                pts.push_back({z, 0.0});
                coords.push_back(z);
                targets.push_back(disk_point(rng, 1.0));
            }
            const PointSequence seq(pts);

            const LevelFamily fam = pick_family(make_pick_problem(seq, targets));
            const BisectResult bis = bisect_constant(fam);
            const double oracle = one_variable_pick_constant(coords, targets);
            const double err = std::abs(bis.m_star - oracle);
            worst_c1 = std::max(worst_c1, err);
            if (err > std::max(1e-3, 2.0 * kDefaultBisTol)) ++c1_fail;
            solved.push_back({fam.at(bis.m_star), bis.certificate});

            const double m_int =
                sampled_interpolation_constant(seq, 20, 20260815u + static_cast<unsigned>(inst));
            const auto batch = kernel_batch(seq, 20, 515151u + static_cast<unsigned>(inst));
            const RieszReport pos = riesz_check(seq, batch, m_int, 1e-4);
            worst_lo = std::min(worst_lo, pos.worst_lo_margin);
            worst_hi = std::min(worst_hi, pos.worst_hi_margin);
            if (!pos.ok) ++c7_pos_fail;
            const RieszReport neg = riesz_check(seq, batch, m_int / 2.0, 1e-4);
            if (neg.violations.empty()) ++c7_neg_fail;
        }
        results[0].pass = c1_fail == 0;
        std::snprintf(buf, sizeof buf, "one-variable oracle, 25 instances, worst |delta| %.2e",
                      worst_c1);
        results[0].detail = buf;
        results[6].pass = c7_pos_fail == 0 && c7_neg_fail == 0;
        std::snprintf(buf, sizeof buf,
                      "riesz chain, 25 instances, worst margins lo %+.2e hi %+.2e, "
                      "negative controls violated on %d/25",
                      worst_lo, worst_hi, 25 - c7_neg_fail);
        results[6].detail = buf;
    }

    // Criterion 3 instances: random bidisk sequences; their (a')/(b')
    // certificates also feed criteria 4 and 5.
    struct BidiskInstance {
        PointSequence seq;
        BisectResult a;
        BisectResult b;
        PickProblem pick;
        BisectResult pick_bis;
    };
    std::vector<BidiskInstance> bidisk_instances;
    {
        Rng rng(20260903);
        double worst_a = 1e9, worst_b = 1e9;
        int fails = 0, kernels_total = 0;
        for (int inst = 0; inst < 6; ++inst) {
            const int n = 3 + static_cast<int>(rng.next_u64() % 4);
            PointSequence seq(separated_points(rng, n, 0.7, 0.15, false));
            const BisectResult a = bisect_constant(separation_a_family(seq));
            const BisectResult b = bisect_constant(separation_b_family(seq));
            solved.push_back({separation_a_family(seq).at(a.m_star), a.certificate});
            solved.push_back({separation_b_family(seq).at(b.m_star), b.certificate});

            std::vector<cplx> targets;
            for (int i = 0; i < n; ++i) targets.push_back(disk_point(rng, 1.0));
            const PickProblem pick = make_pick_problem(seq, targets);
            const BisectResult pb = bisect_constant(pick_family(pick));
            solved.push_back({pick_family(pick).at(pb.m_star), pb.certificate});

            const auto batch = kernel_batch(seq, 50, 424200u + static_cast<unsigned>(inst));
            kernels_total += static_cast<int>(batch.size());
            for (const KernelSample& k : batch) {
                const auto eig = eigh(normalized_grammian(k).matrix);
                const double amarg = a.m_star + 1e-5 - eig.eigenvalues.back();
                const double bmarg = eig.eigenvalues.front() - (1.0 / b.m_star - 1e-5);
                worst_a = std::min(worst_a, amarg);
                worst_b = std::min(worst_b, bmarg);
                if (amarg < 0.0 || bmarg < 0.0) ++fails;
            }
            bidisk_instances.push_back({std::move(seq), a, b, pick, pb});
        }
        results[2].pass = fails == 0;
        std::snprintf(buf, sizeof buf,
                      "schur consequence, %d kernels over 6 instances, worst margins "
                      "a %+.2e b %+.2e",
                      kernels_total, worst_a, worst_b);
        results[2].detail = buf;
    }

    // Criterion 2: independent recomputation of every feasible certificate.
    {
        double worst_res = 0.0, worst_eig = 0.0;
        int fails = 0;
        for (const SolvedInstance& s : solved) {
            const CertificateReport rep = verify_certificate(s.problem, s.certificate, 1e-6, 10);
            worst_res = std::max(worst_res, rep.residual);
            worst_eig = std::min(worst_eig, std::min(rep.gamma_min_eig, rep.delta_min_eig));
            if (rep.residual > 1e-7 || rep.gamma_min_eig < -1e-6 || rep.delta_min_eig < -1e-6)
                ++fails;
        }
        results[1].pass = fails == 0;
        std::snprintf(buf, sizeof buf,
                      "certificate validity, %zu certificates, worst residual %.2e, "
                      "worst min eig %+.2e",
                      solved.size(), worst_res, worst_eig);
        results[1].detail = buf;
    }

    // Criterion 4: realization contract on every construction in this run.
    {
        double worst_sup = 0.0, worst_node = 0.0;
        int built = 0;
        const std::vector<Point2D> samples = evaluation_grid(5775, 20260815);
        const auto check_handle = [&](const InterpolantHandle& h, double node_err) {
            worst_sup = std::max(worst_sup, sampled_sup_norm(h.real, samples));
            worst_node = std::max(worst_node, node_err);
            ++built;
        };

        for (const BidiskInstance& bi : bidisk_instances) {
            const int n = bi.seq.size();

            const InterpolantHandle hp =
                build_interpolant(bi.pick, bi.pick_bis.m_star, bi.pick_bis.certificate);
            double node = 0.0;
            for (int i = 0; i < n; ++i)
                node = std::max(node, std::abs(eval(hp, bi.seq[i])(0, 0) -
                                               bi.pick.targets[static_cast<std::size_t>(i)][0]));
            check_handle(hp, node);

            const InterpolantHandle hb =
                build_realization_b(bi.seq, bi.b.m_star, bi.b.certificate);
            node = 0.0;
            for (int i = 0; i < n; ++i) {
                const ComplexMatrix col = eval(hb, bi.seq[i]);
                for (int r = 0; r < n; ++r)
                    node = std::max(node, std::abs(col(r, 0) - (r == i ? 1.0 : 0.0)));
            }
            check_handle(hb, node);

            const InterpolantHandle ha =
                build_realization_a(bi.seq, bi.a.m_star, bi.a.certificate);
            node = 0.0;
            for (int i = 0; i < n; ++i)
                node = std::max(node, std::abs(eval(ha, bi.seq[i])(0, i) - 1.0));
            check_handle(ha, node);
        }

        results[3].pass = worst_sup <= 1.0 + 1e-6 && worst_node <= 1e-5;
        std::snprintf(buf, sizeof buf,
                      "realization contract, %d realizations x %zu samples, sup %.9f, "
                      "worst node error %.2e",
                      built, samples.size(), worst_sup, worst_node);
        results[3].detail = buf;
    }

    // Criterion 5: strong-separation families from the (b') certificates.
    {
        double worst_node = 0.0, worst_sup_excess = -1e9;
        const std::vector<Point2D> samples = evaluation_grid(2000, 20260815);
        for (const BidiskInstance& bi : bidisk_instances) {
            const int n = bi.seq.size();
            const std::vector<InterpolantHandle> family =
                strong_separation_family(bi.seq, bi.b.m_star, bi.b.certificate);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    worst_node = std::max(
                        worst_node, std::abs(eval(family[static_cast<std::size_t>(i)], bi.seq[j])(0, 0) -
                                             (i == j ? 1.0 : 0.0)));
            double sup_sq = 0.0;
            for (const Point2D& z : samples) {
                double total = 0.0;
                for (const InterpolantHandle& h : family) total += std::norm(eval(h, z)(0, 0));
                sup_sq = std::max(sup_sq, total);
            }
            worst_sup_excess = std::max(worst_sup_excess, sup_sq - bi.b.m_star);
        }
        results[4].pass = worst_node <= 1e-5 && worst_sup_excess <= 1e-4;
        std::snprintf(buf, sizeof buf,
                      "strong separation, 6 families, worst |phi_i(l_j) - delta| %.2e, "
                      "worst sum|phi|^2 - N %+.2e",
                      worst_node, worst_sup_excess);
        results[4].detail = buf;
    }

    // Criterion 6: Prop 1.1 identity on 100 random (sequence, kernel) pairs.
    {
        Rng rng(20260906);
        double worst_rel = 0.0;
        int fails = 0;
        for (int t = 0; t < 100; ++t) {
            const int n = 2 + static_cast<int>(rng.next_u64() % 5);
            const PointSequence seq(separated_points(rng, n, 0.8, 0.05, false));
            const KernelSample k = t % 3 == 0
                                       ? product_kernel_sample(seq)
                                       : random_admissible(seq, 777000u + static_cast<unsigned>(t));
            const CarlesonReport rep = carleson_report(seq, k);
            const double rel =
                std::abs(rep.embed_sq - rep.gram_norm) / (1.0 + rep.gram_norm);
            worst_rel = std::max(worst_rel, rel);
            if (std::abs(rep.embed_sq - rep.gram_norm) > 1e-8 * (1.0 + rep.gram_norm)) ++fails;
        }
        results[5].pass = fails == 0;
        std::snprintf(buf, sizeof buf,
                      "prop 1.1 identity, 100 pairs, worst relative gap %.2e", worst_rel);
        results[5].detail = buf;
    }

    // Criterion 8: Gleason formula vs two-point Pick bisection.
    {
        Rng rng(20260908);
        double worst = 0.0;
        int fails = 0;
        for (int t = 0; t < 50; ++t) {
            Point2D p{disk_point(rng, 0.85), disk_point(rng, 0.85)};
            Point2D q{disk_point(rng, 0.85), disk_point(rng, 0.85)};
            while (gleason(p, q) < 0.05)
                q = Point2D{disk_point(rng, 0.85), disk_point(rng, 0.85)};
            const double rho = gleason(p, q);
            const PointSequence pair({p, q});
            const BisectResult bis =
                bisect_constant(pick_family(make_pick_problem(pair, std::vector<cplx>{1.0, 0.0})));
            const double gap = std::abs(rho * bis.m_star - 1.0);
            worst = std::max(worst, gap);
            if (gap > std::max(1e-3, 2.0 * kDefaultBisTol)) ++fails;
        }
        results[7].pass = fails == 0;
        std::snprintf(buf, sizeof buf, "gleason cross-check, 50 pairs, worst |rho*M - 1| %.2e",
                      worst);
        results[7].detail = buf;
    }

    // Criterion 9: CLI byte-level determinism and certificate round-trip.
    {
        const char* cli = std::getenv("BIDISK_CLI");
        if (cli == nullptr) {
            results[8].pass = false;
            results[8].detail = "BIDISK_CLI not set; cannot exercise the CLI";
        } else {
            const std::string problem =
                "{\"points\": [[0.0, 0.0, 0.0, 0.0], [0.5, 0.0, 0.3, 0.1], "
                "[-0.2, 0.4, 0.1, -0.3], [0.1, -0.5, -0.4, 0.2]],\n"
                " \"targets\": [[0.3, 0.0], [-0.1, 0.2], [0.4, 0.1], [0.0, -0.35]],\n"
                " \"options\": {\"seed\": 20260815}}\n";
            write_text_file("acc_problem.json", problem);
            const std::string base = std::string(cli);
            bool ok = true;
            std::string why;

            if (run_command(base + " pick acc_problem.json --cert acc_cert.json"
                                   " > acc_out1.txt 2>/dev/null") != 0) {
                ok = false;
                why = "pick run 1 failed";
            }
            const std::string cert1 = ok ? read_file("acc_cert.json") : "";
            if (ok && run_command(base + " pick acc_problem.json --cert acc_cert.json"
                                         " > acc_out2.txt 2>/dev/null") != 0) {
                ok = false;
                why = "pick run 2 failed";
            }
            if (ok && read_file("acc_out1.txt") != read_file("acc_out2.txt")) {
                ok = false;
                why = "stdout differs between runs";
            }
            if (ok && read_file("acc_cert.json") != cert1) {
                ok = false;
                why = "certificate differs between runs";
            }
            if (ok && serialize_certificate(parse_certificate(cert1)) != cert1) {
                ok = false;
                why = "serialize(parse(cert)) is not byte-identical";
            }
            if (ok && run_command(base + " verify acc_problem.json acc_cert.json"
                                         " > acc_ver1.txt 2>/dev/null") != 0) {
                ok = false;
                why = "verify failed";
            }
            if (ok && run_command(base + " gram acc_problem.json --random-kernels 10 --seed 5"
                                         " > acc_gram1.txt 2>/dev/null") != 0) {
                ok = false;
                why = "gram failed";
            }
            if (ok && run_command(base + " gram acc_problem.json --random-kernels 10 --seed 5"
                                         " > acc_gram2.txt 2>/dev/null") != 0) {
                ok = false;
                why = "gram rerun failed";
            }
            if (ok && read_file("acc_gram1.txt") != read_file("acc_gram2.txt")) {
                ok = false;
                why = "gram output differs between runs";
            }
            results[8].pass = ok;
            results[8].detail = ok ? "cli determinism + round trip, byte-exact" : why;
        }
    }

    int failures = 0;
    for (int i = 0; i < 9; ++i) {
        if (!results[static_cast<std::size_t>(i)].pass) ++failures;
        std::printf("[%s] criterion %d: %s\n",
                    results[static_cast<std::size_t>(i)].pass ? "PASS" : "FAIL", i + 1,
                    results[static_cast<std::size_t>(i)].detail.c_str());
    }
    return failures;
}
