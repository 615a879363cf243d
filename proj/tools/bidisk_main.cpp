// bidisk: Nevanlinna-Pick interpolation and interpolating-sequence
// diagnostics on the bidisk. Subcommands: pick, separation, eval, gram,
// verify. Exit codes: 0 success/diagnostic, 2 input error, 3 certificate
// mismatch, 4 numeric failure.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bidisk/agler.hpp"
#include "bidisk/analysis.hpp"
#include "bidisk/errors.hpp"
#include "bidisk/io.hpp"
#include "bidisk/kernels.hpp"
#include "bidisk/realization.hpp"

namespace {

using namespace bidisk;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitNumeric = 4;
constexpr double kTwoPi = 6.283185307179586476925287;

std::string fnum(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

std::string fexact(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

const char* fbool(bool v) { return v ? "true" : "false"; }

struct GridSpec {
    int radii = 5;
    int phases = 16;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%d,%d", &g.radii, &g.phases) != 2 || g.radii < 1 ||
        g.phases < 1)
        throw DomainError("grid: expected R,P with positive integers, got \"" + s + "\"");
    return g;
}

// Tensor grid: R radii uniform on [0, 0.99] crossed with P phases, per
// coordinate; (R*P)^2 points, no deduplication at r = 0.
std::vector<Point2D> tensor_grid(const GridSpec& g) {
    std::vector<cplx> ring;
    ring.reserve(static_cast<std::size_t>(g.radii) * g.phases);
    for (int k = 0; k < g.radii; ++k) {
        const double r = g.radii == 1 ? 0.0 : 0.99 * k / (g.radii - 1);
        for (int p = 0; p < g.phases; ++p) {
            const double th = kTwoPi * p / g.phases;
            ring.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    std::vector<Point2D> grid;
    grid.reserve(ring.size() * ring.size());
    for (const cplx& z1 : ring)
        for (const cplx& z2 : ring) grid.push_back({z1, z2});
    return grid;
}

// Streams rows l1,l2,component,value for each grid point; values(pt) yields
// the component list at pt.
template <typename ValuesFn>
void write_grid_csv(std::ostream& out, const std::vector<Point2D>& grid, ValuesFn values) {
    out << "l1_re,l1_im,l2_re,l2_im,component,value_re,value_im\n";
    for (const Point2D& pt : grid) {
        const std::vector<cplx> vals = values(pt);
        for (std::size_t k = 0; k < vals.size(); ++k)
            out << fexact(pt.c1.real()) << ',' << fexact(pt.c1.imag()) << ','
                << fexact(pt.c2.real()) << ',' << fexact(pt.c2.imag()) << ',' << k << ','
                << fexact(vals[k].real()) << ',' << fexact(vals[k].imag()) << '\n';
    }
}

template <typename Body>
void with_output(const std::string& path, Body body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write file: " + path);
    body(out);
    if (!out) throw DomainError("write failed: " + path);
}

void require_hash(const CertificateFile& cert, const ProblemFile& pf) {
    const std::string h = problem_hash(pf);
    if (cert.problem_hash != h)
        throw CertificateInconsistent("certificate problem_hash " + cert.problem_hash +
                                      " does not match problem " + h);
}

// File options overridden by flags that were actually given.
struct SolveFlags {
    double tol = 0.0;
    int max_iter = 0;
    std::uint64_t seed = 0;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* iter_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void add(CLI::App* cmd, const char* tol_doc) {
        tol_opt = cmd->add_option("--tol", tol, tol_doc);
        iter_opt = cmd->add_option("--max-iter", max_iter, "Dykstra iteration budget per probe");
        seed_opt = cmd->add_option("--seed", seed, "Seed for randomized kernels and samples");
    }

    SolverOptions merge(const SolverOptions& base) const {
        SolverOptions o = base;
        if (tol_opt && tol_opt->count()) {
            if (!(tol > 0.0)) throw DomainError("--tol must be positive");
            o.bis_tol = tol;
        }
        if (iter_opt && iter_opt->count()) {
            if (max_iter < 1) throw DomainError("--max-iter must be at least 1");
            o.max_iter = max_iter;
        }
        if (seed_opt && seed_opt->count()) o.seed = seed;
        return o;
    }
};

BisectOptions bisect_options(const SolverOptions& o) {
    BisectOptions b;
    b.bis_tol = o.bis_tol;
    b.feas_tol = o.feas_tol;
    b.max_iter = o.max_iter;
    return b;
}

int run_pick(const std::string& problem_path, const std::string& cert_path, bool oracle,
             const SolveFlags& flags) {
    const ProblemFile pf = parse_problem(read_text_file(problem_path));
    const PickProblem prob = problem_pick(pf);
    const SolverOptions opt = flags.merge(pf.options);
    const std::string hash = problem_hash(pf);

    const BisectResult bis = bisect_constant(pick_family(prob), bisect_options(opt));
    std::cout << "n = " << prob.base.size() << "\n";
    std::cout << "problem_hash = " << hash << "\n";
    std::cout << "m_star = " << fnum(bis.m_star) << "\n";
    std::cout << "probes = " << bis.probes << "\n";
    std::cout << "residual = " << fnum(bis.certificate.residual) << "\n";

    const InterpolantHandle h = build_interpolant(prob, bis.m_star, bis.certificate);
    double node_err = 0.0;
    for (int i = 0; i < prob.base.size(); ++i) {
        const ComplexMatrix v = eval(h, prob.base[i]);
        node_err = std::max(node_err, std::abs(v(0, 0) - prob.targets[static_cast<std::size_t>(i)][0]));
    }
    std::cout << "node_error_max = " << fnum(node_err) << "\n";

    const std::vector<Point2D> samples = evaluation_grid(5775, opt.seed);
    const double sup = h.scale * sampled_sup_norm(h.real, samples);
    std::cout << "sampled_sup = " << fnum(sup) << " (samples = " << samples.size() << ")\n";

    if (oracle) {
        bool on_c2_axis = true, on_c1_axis = true;
        for (const auto& q : pf.points) {
            if (q[2] != 0.0 || q[3] != 0.0) on_c2_axis = false;
            if (q[0] != 0.0 || q[1] != 0.0) on_c1_axis = false;
        }
        if (on_c2_axis || on_c1_axis) {
            std::vector<cplx> coords, w;
            for (std::size_t i = 0; i < pf.points.size(); ++i) {
                const auto& q = pf.points[i];
                coords.emplace_back(on_c2_axis ? cplx(q[0], q[1]) : cplx(q[2], q[3]));
                w.emplace_back(pf.targets[i][0], pf.targets[i][1]);
            }
            const double ref = one_variable_pick_constant(coords, w);
            std::cout << "oracle = " << fnum(ref) << "\n";
            std::cout << "oracle_delta = " << fnum(bis.m_star - ref) << "\n";
        } else {
            std::cout << "oracle = unavailable (not a one-variable configuration)\n";
        }
    }

    if (!cert_path.empty()) {
        write_text_file(cert_path, serialize_certificate(make_certificate_file(
                                       "pick", bis.m_star, bis.certificate, hash)));
        std::cout << "certificate written: " << cert_path << "\n";
    }
    return kExitOk;
}

int run_separation(const std::string& problem_path, const std::string& cert_a_path,
                   const std::string& cert_b_path, const std::string& functions_path,
                   const std::string& grid_str, const SolveFlags& flags) {
    const ProblemFile pf = parse_problem(read_text_file(problem_path));
    const PointSequence seq = problem_points(pf);
    const SolverOptions opt = flags.merge(pf.options);
    const BisectOptions bopt = bisect_options(opt);
    const std::string hash = problem_hash(pf);
    const int n = seq.size();

    double gleason_min = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            gleason_min = std::min(gleason_min, gleason(seq[i], seq[j]));
    std::cout << "n = " << n << "\n";
    std::cout << "problem_hash = " << hash << "\n";
    std::cout << "gleason_min = " << fnum(gleason_min) << "\n";
    std::cout << "bcl_c = " << fnum(bcl_condition(seq)) << "\n";

    const double weak = n < 2 ? 1.0 : weak_separation(seq, bopt.bis_tol);
    if (std::isinf(weak))
        std::cout << "weak_m = cap exceeded\n";
    else
        std::cout << "weak_m = " << fnum(weak) << "\n";

    // Same cap semantics as separation_report, but keeping the certificates.
    const auto capped_run = [&](const LevelFamily& fam, BisectResult& out) {
        if (fam.kernel_lower_bound() > kWeakCap) return true;
        try {
            out = bisect_constant(fam, bopt);
        } catch (const Error&) {
            return true;
        }
        return out.m_star > kWeakCap;
    };

    BisectResult strong, alev;
    const bool strong_capped = capped_run(separation_b_family(seq), strong);
    const bool a_capped = capped_run(separation_a_family(seq), alev);
    if (strong_capped)
        std::cout << "strong_n = cap exceeded\n";
    else
        std::cout << "strong_n = " << fnum(strong.m_star) << " (probes = " << strong.probes
                  << ", residual = " << fnum(strong.certificate.residual) << ")\n";
    if (a_capped)
        std::cout << "a_m = cap exceeded\n";
    else
        std::cout << "a_m = " << fnum(alev.m_star) << " (probes = " << alev.probes
                  << ", residual = " << fnum(alev.certificate.residual) << ")\n";

    if (!cert_b_path.empty()) {
        if (strong_capped) {
            std::cout << "certificate (b) unavailable: cap exceeded\n";
        } else {
            write_text_file(cert_b_path,
                            serialize_certificate(make_certificate_file(
                                "separation_b", strong.m_star, strong.certificate, hash)));
            std::cout << "certificate (b) written: " << cert_b_path << "\n";
        }
    }
    if (!cert_a_path.empty()) {
        if (a_capped) {
            std::cout << "certificate (a) unavailable: cap exceeded\n";
        } else {
            write_text_file(cert_a_path, serialize_certificate(make_certificate_file(
                                             "separation_a", alev.m_star, alev.certificate, hash)));
            std::cout << "certificate (a) written: " << cert_a_path << "\n";
        }
    }

    if (!functions_path.empty()) {
        if (strong_capped)
            throw NumericError("separation: strong level capped, no function family to export");
        const std::vector<InterpolantHandle> family =
            strong_separation_family(seq, strong.m_star, strong.certificate);
        const std::vector<Point2D> grid = tensor_grid(parse_grid(grid_str));
        with_output(functions_path, [&](std::ostream& out) {
            write_grid_csv(out, grid, [&](Point2D pt) {
                std::vector<cplx> vals;
                vals.reserve(family.size());
                for (const auto& h : family) vals.push_back(eval(h, pt)(0, 0));
                return vals;
            });
        });
        std::cout << "functions written: " << functions_path << " (" << grid.size() << " points x "
                  << family.size() << " functions)\n";
    }
    return kExitOk;
}

int run_eval(const std::string& problem_path, const std::string& cert_path,
             const std::string& grid_str, const std::string& csv_path, double tol) {
    const ProblemFile pf = parse_problem(read_text_file(problem_path));
    const CertificateFile cert = parse_certificate(read_text_file(cert_path));
    require_hash(cert, pf);
    const AglerCertificate payload = certificate_payload(cert);

    InterpolantHandle h = [&] {
        if (cert.kind == "pick") return build_interpolant(problem_pick(pf), cert.level, payload, tol);
        const PointSequence seq = problem_points(pf);
        if (cert.kind == "separation_b") return build_realization_b(seq, cert.level, payload, tol);
        return build_realization_a(seq, cert.level, payload, tol);
    }();

    const std::vector<Point2D> grid = tensor_grid(parse_grid(grid_str));
    with_output(csv_path, [&](std::ostream& out) {
        write_grid_csv(out, grid, [&](Point2D pt) {
            const ComplexMatrix v = eval(h, pt);
            std::vector<cplx> vals;
            vals.reserve(static_cast<std::size_t>(v.rows()) * v.cols());
            for (int i = 0; i < v.rows(); ++i)
                for (int j = 0; j < v.cols(); ++j) vals.push_back(v(i, j));
            return vals;
        });
    });
    return kExitOk;
}

int run_gram(const std::string& problem_path, const std::string& kernel, bool dump,
             int random_kernels, double tol, const SolveFlags& flags) {
    const ProblemFile pf = parse_problem(read_text_file(problem_path));
    const PointSequence seq = problem_points(pf);
    const SolverOptions opt = flags.merge(pf.options);

    KernelFn fn;
    if (kernel == "product")
        fn = product_kernel;
    else if (kernel == "szego1")
        fn = [](const Point2D& a, const Point2D& b) { return szego(a.c1, b.c1); };
    else if (kernel == "szego2")
        fn = [](const Point2D& a, const Point2D& b) { return szego(a.c2, b.c2); };
    else
        throw DomainError("gram: unknown kernel \"" + kernel +
                          "\" (expected product, szego1, szego2)");

    const KernelSample sample = sample_kernel(seq, fn);
    const CarlesonReport rep = carleson_report(seq, sample);
    std::cout << "n = " << seq.size() << "\n";
    std::cout << "kernel = " << kernel << "\n";
    std::cout << "gram_norm = " << fnum(rep.gram_norm) << "\n";
    std::cout << "embed_sq = " << fnum(rep.embed_sq) << "\n";
    std::cout << "riesz_lo = " << fnum(rep.riesz_lo) << "\n";
    std::cout << "riesz_hi = " << fnum(rep.riesz_hi) << "\n";

    if (dump) {
        const HermitianMatrix g = normalized_grammian(sample).matrix;
        std::cout << "normalized_grammian:\n";
        for (int i = 0; i < g.dim(); ++i)
            for (int j = 0; j < g.dim(); ++j)
                std::cout << i << ',' << j << ',' << fexact(g(i, j).real()) << ','
                          << fexact(g(i, j).imag()) << "\n";
    }

    if (random_kernels > 0) {
        const double m =
            sampled_interpolation_constant(seq, 20, opt.seed, bisect_options(opt));
        const std::vector<KernelSample> batch = kernel_batch(seq, random_kernels, opt.seed);
        const RieszReport riesz = riesz_check(seq, batch, m, tol);
        std::cout << "m_sampled = " << fnum(m) << "\n";
        std::cout << "riesz_tol = " << fnum(riesz.tol) << "\n";
        for (const RieszViolation& e : riesz.entries)
            std::cout << "kernel " << e.kernel << ": lo_margin = " << fnum(e.lo_margin)
                      << ", hi_margin = " << fnum(e.hi_margin) << ", "
                      << (e.lo_margin < 0.0 || e.hi_margin < 0.0 ? "VIOLATED" : "ok") << "\n";
        std::cout << "riesz_ok = " << fbool(riesz.ok)
                  << " (kernels = " << riesz.kernels_checked
                  << ", worst_lo_margin = " << fnum(riesz.worst_lo_margin)
                  << ", worst_hi_margin = " << fnum(riesz.worst_hi_margin) << ")\n";
    }
    return kExitOk;
}

int run_verify(const std::string& problem_path, const std::string& cert_path, double tol,
               int random_kernels, const SolveFlags& flags) {
    const ProblemFile pf = parse_problem(read_text_file(problem_path));
    const CertificateFile cert = parse_certificate(read_text_file(cert_path));
    require_hash(cert, pf);
    const AglerCertificate payload = certificate_payload(cert);
    const SolverOptions opt = flags.merge(pf.options);

    const DecompositionProblem prob = [&] {
        if (cert.kind == "pick") return pick_family(problem_pick(pf)).at(cert.level);
        const PointSequence seq = problem_points(pf);
        if (cert.kind == "separation_b") return separation_b_family(seq).at(cert.level);
        return separation_a_family(seq).at(cert.level);
    }();

    const CertificateReport rep = verify_certificate(prob, payload, tol, random_kernels, opt.seed);
    std::cout << "kind = " << cert.kind << "\n";
    std::cout << "level = " << fnum(cert.level) << "\n";
    std::cout << "residual = " << fnum(rep.residual) << " (ok = " << fbool(rep.residual_ok)
              << ")\n";
    std::cout << "gamma_min_eig = " << fnum(rep.gamma_min_eig) << "\n";
    std::cout << "delta_min_eig = " << fnum(rep.delta_min_eig) << " (psd_ok = "
              << fbool(rep.psd_ok) << ")\n";
    std::cout << "kernels_checked = " << rep.kernels_checked
              << ", kernels_failed = " << rep.kernels_failed
              << ", worst_margin = " << fnum(rep.worst_kernel_margin) << "\n";
    std::cout << "valid = " << fbool(rep.valid) << "\n";
    return rep.valid ? kExitOk : kExitCertificate;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nevanlinna-Pick interpolation and interpolating-sequence diagnostics "
                 "on the bidisk"};
    app.require_subcommand(1);
    app.footer("Environment:\n  BIDISK_PICK_THREADS  caps internal parallelism (default: "
               "hardware concurrency)");

    std::string problem_path, cert_path, cert_a_path, cert_b_path, functions_path, csv_path;
    std::string grid_str = "5,16";
    std::string kernel = "product";
    bool oracle = false, dump = false;
    int random_kernels = 0;
    double eval_tol = 1e-6, gram_tol = 1e-4, verify_tol = 1e-6;
    int verify_kernels = 50;
    SolveFlags pick_flags, sep_flags, gram_flags, verify_flags;

    CLI::App* pick = app.add_subcommand(
        "pick", "Bisect the least interpolation level M and build the interpolant");
    pick->add_option("problem", problem_path, "Problem file (points + targets)")->required();
    pick->add_option("--cert", cert_path, "Write the solved certificate here");
    pick->add_flag("--oracle", oracle,
                   "Compare against the classical one-variable Pick constant "
                   "(one-variable configurations only)");
    pick_flags.add(pick, "Bisection tolerance on the level");

    CLI::App* separation = app.add_subcommand(
        "separation", "Separation diagnostics: gleason, bcl, weak/strong/a levels");
    separation->add_option("problem", problem_path, "Problem file (points; targets ignored)")
        ->required();
    separation->add_option("--cert-a", cert_a_path, "Write the (a) certificate here");
    separation->add_option("--cert-b", cert_b_path, "Write the (b) certificate here");
    separation->add_option("--functions", functions_path,
                           "Export the strong-separation family on a grid (CSV)");
    separation->add_option("--grid", grid_str, "Grid spec R,P for --functions (default 5,16)");
    sep_flags.add(separation, "Bisection tolerance on the levels");

    CLI::App* evalc = app.add_subcommand(
        "eval", "Rebuild the realization from a certificate and evaluate on a grid");
    evalc->add_option("problem", problem_path, "Problem file the certificate refers to")
        ->required();
    evalc->add_option("certificate", cert_path, "Certificate file")->required();
    evalc->add_option("--grid", grid_str, "Grid spec R,P per coordinate (default 5,16)");
    evalc->add_option("--csv", csv_path, "Write CSV here instead of stdout");
    evalc->add_option("--tol", eval_tol, "Certificate tolerance for the rebuild (default 1e-6)");

    CLI::App* gram = app.add_subcommand(
        "gram", "Normalized Grammian spectrum, Carleson numbers, Riesz bounds");
    gram->add_option("problem", problem_path, "Problem file (points)")->required();
    gram->add_option("--kernel", kernel, "product | szego1 | szego2 (default product)");
    gram->add_flag("--dump", dump, "Print the normalized Grammian entries");
    gram->add_option("--random-kernels", random_kernels,
                     "Run riesz_check over this many random admissible kernels");
    gram->add_option("--riesz-tol", gram_tol, "Riesz margin tolerance (default 1e-4)");
    gram_flags.add(gram, "Bisection tolerance for the sampled constant");

    CLI::App* verify = app.add_subcommand(
        "verify", "Re-check a certificate: residual, PSD, kernel consequences");
    verify->add_option("problem", problem_path, "Problem file the certificate refers to")
        ->required();
    verify->add_option("certificate", cert_path, "Certificate file")->required();
    verify->add_option("--tol", verify_tol, "Residual/PSD/kernel tolerance (default 1e-6)");
    verify->add_option("--random-kernels", verify_kernels,
                       "Random admissible kernels in the batch (default 50)");
    verify_flags.seed_opt = verify->add_option("--seed", verify_flags.seed,
                                               "Seed for the kernel batch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (pick->parsed()) return run_pick(problem_path, cert_path, oracle, pick_flags);
        if (separation->parsed())
            return run_separation(problem_path, cert_a_path, cert_b_path, functions_path,
                                  grid_str, sep_flags);
        if (evalc->parsed()) return run_eval(problem_path, cert_path, grid_str, csv_path, eval_tol);
        if (gram->parsed())
            return run_gram(problem_path, kernel, dump, random_kernels, gram_tol, gram_flags);
        if (verify->parsed())
            return run_verify(problem_path, cert_path, verify_tol, verify_kernels, verify_flags);
    } catch (const CertificateInconsistent& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitInput;
}
