#include "bidisk/io.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

using njson = nlohmann::json;

njson parse_json(const std::string& text, const char* what) {
    try {
        return njson::parse(text);
    } catch (const njson::exception& e) {
        throw DomainError(std::string(what) + ": invalid JSON (" + e.what() + ")");
    }
}

void require_object(const njson& j, const std::string& where) {
    if (!j.is_object()) throw DomainError(where + ": expected an object");
}

void require_known_keys(const njson& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) throw DomainError(where + ": unknown key \"" + it.key() + "\"");
    }
}

double number_at(const njson& v, const std::string& where) {
    if (!v.is_number()) throw DomainError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw DomainError(where + ": value is not finite");
    return x;
}

njson point_to_json(const std::array<double, 4>& p) {
    return njson::array({p[0], p[1], p[2], p[3]});
}

njson pair_to_json(const std::array<double, 2>& p) { return njson::array({p[0], p[1]}); }

// Content that a certificate commits to: points and targets, nothing else.
njson content_json(const ProblemFile& p) {
    njson j = njson::object();
    njson pts = njson::array();
    for (const auto& q : p.points) pts.push_back(point_to_json(q));
    j["points"] = std::move(pts);
    if (p.has_targets) {
        njson tg = njson::array();
        for (const auto& t : p.targets) tg.push_back(pair_to_json(t));
        j["targets"] = std::move(tg);
    }
    return j;
}

njson matrix_to_json(const ComplexMatrix& m) {
    njson rows = njson::array();
    for (int i = 0; i < m.rows(); ++i) {
        njson row = njson::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(njson::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const njson& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw DomainError(where + ": expected a nonempty array of rows");
    const int n = static_cast<int>(j.size());
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const njson& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw DomainError(where + ": row " + std::to_string(i) + " must have " +
                              std::to_string(n) + " entries");
        for (int k = 0; k < n; ++k) {
            const njson& cell = row[static_cast<std::size_t>(k)];
            const std::string at =
                where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
            if (!cell.is_array() || cell.size() != 2)
                throw DomainError(at + ": expected [re, im]");
            m(i, k) = cplx(number_at(cell[0], at), number_at(cell[1], at));
        }
    }
    return m;
}

bool known_kind(const std::string& kind) {
    return kind == "pick" || kind == "separation_a" || kind == "separation_b";
}

} // namespace

ProblemFile parse_problem(const std::string& text) {
    const njson j = parse_json(text, "problem");
    require_object(j, "problem");
    require_known_keys(j, "problem", {"points", "targets", "options"});
    if (!j.contains("points")) throw DomainError("problem: missing \"points\"");

    ProblemFile p;
    const njson& pts = j["points"];
    if (!pts.is_array() || pts.empty())
        throw DomainError("problem: \"points\" must be a nonempty array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const njson& q = pts[i];
        const std::string at = "problem: points[" + std::to_string(i) + "]";
        if (!q.is_array() || q.size() != 4)
            throw DomainError(at + ": expected [re1, im1, re2, im2]");
        std::array<double, 4> v{};
        for (int k = 0; k < 4; ++k) v[static_cast<std::size_t>(k)] = number_at(q[k], at);
        p.points.push_back(v);
    }

    if (j.contains("targets")) {
        const njson& tg = j["targets"];
        if (!tg.is_array() || tg.size() != pts.size())
            throw DomainError("problem: \"targets\" must match \"points\" in length");
        for (std::size_t i = 0; i < tg.size(); ++i) {
            const njson& t = tg[i];
            const std::string at = "problem: targets[" + std::to_string(i) + "]";
            if (!t.is_array() || t.size() != 2) throw DomainError(at + ": expected [re, im]");
            p.targets.push_back({number_at(t[0], at), number_at(t[1], at)});
        }
        p.has_targets = true;
    }

    if (j.contains("options")) {
        const njson& op = j["options"];
        require_object(op, "problem: options");
        require_known_keys(op, "problem: options", {"bis_tol", "feas_tol", "max_iter", "seed"});
        if (op.contains("bis_tol")) {
            p.options.bis_tol = number_at(op["bis_tol"], "problem: options.bis_tol");
            if (!(p.options.bis_tol > 0.0))
                throw DomainError("problem: options.bis_tol must be positive");
        }
        if (op.contains("feas_tol")) {
            p.options.feas_tol = number_at(op["feas_tol"], "problem: options.feas_tol");
            if (!(p.options.feas_tol > 0.0))
                throw DomainError("problem: options.feas_tol must be positive");
        }
        if (op.contains("max_iter")) {
            if (!op["max_iter"].is_number_integer())
                throw DomainError("problem: options.max_iter must be an integer");
            p.options.max_iter = op["max_iter"].get<int>();
            if (p.options.max_iter < 1)
                throw DomainError("problem: options.max_iter must be at least 1");
        }
        if (op.contains("seed")) {
            if (!op["seed"].is_number_unsigned())
                throw DomainError("problem: options.seed must be a nonnegative integer");
            p.options.seed = op["seed"].get<std::uint64_t>();
        }
    }
    return p;
}

std::string serialize_problem(const ProblemFile& p) {
    njson j = content_json(p);
    j["options"] = njson{{"bis_tol", p.options.bis_tol},
                         {"feas_tol", p.options.feas_tol},
                         {"max_iter", p.options.max_iter},
                         {"seed", p.options.seed}};
    return j.dump(2) + "\n";
}

std::string problem_hash(const ProblemFile& p) {
    const std::string dump = content_json(p).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PointSequence problem_points(const ProblemFile& p) {
    if (p.points.empty()) throw DomainError("problem: points must be nonempty");
    std::vector<Point2D> pts;
    pts.reserve(p.points.size());
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        const auto& q = p.points[i];
        const Point2D pt{cplx(q[0], q[1]), cplx(q[2], q[3])};
        if (!(std::abs(pt.c1) < 1.0) || !(std::abs(pt.c2) < 1.0))
            throw DomainError("problem: point " + std::to_string(i) +
                              " is not strictly inside the bidisk");
        pts.push_back(pt);
    }
    return PointSequence(std::move(pts));
}

PickProblem problem_pick(const ProblemFile& p) {
    if (!p.has_targets) throw DomainError("problem: targets are required for interpolation");
    PointSequence seq = problem_points(p);
    std::vector<cplx> w;
    w.reserve(p.targets.size());
    for (const auto& t : p.targets) w.emplace_back(t[0], t[1]);
    return make_pick_problem(std::move(seq), w);
}

CertificateFile parse_certificate(const std::string& text) {
    const njson j = parse_json(text, "certificate");
    require_object(j, "certificate");
    require_known_keys(j, "certificate",
                       {"kind", "level", "gamma", "delta", "residual", "problem_hash"});
    for (const char* key : {"kind", "level", "gamma", "delta", "residual", "problem_hash"})
        if (!j.contains(key))
            throw DomainError(std::string("certificate: missing \"") + key + "\"");

    CertificateFile c;
    if (!j["kind"].is_string()) throw DomainError("certificate: \"kind\" must be a string");
    c.kind = j["kind"].get<std::string>();
    if (!known_kind(c.kind)) throw DomainError("certificate: unknown kind \"" + c.kind + "\"");
    c.level = number_at(j["level"], "certificate: level");
    if (!(c.level > 0.0)) throw DomainError("certificate: level must be positive");
    c.gamma = matrix_from_json(j["gamma"], "certificate: gamma");
    c.delta = matrix_from_json(j["delta"], "certificate: delta");
    if (c.gamma.rows() != c.delta.rows())
        throw DomainError("certificate: gamma and delta sizes disagree");
    c.residual = number_at(j["residual"], "certificate: residual");
    if (!j["problem_hash"].is_string())
        throw DomainError("certificate: \"problem_hash\" must be a string");
    c.problem_hash = j["problem_hash"].get<std::string>();
    return c;
}

std::string serialize_certificate(const CertificateFile& c) {
    njson j;
    j["kind"] = c.kind;
    j["level"] = c.level;
    j["gamma"] = matrix_to_json(c.gamma);
    j["delta"] = matrix_to_json(c.delta);
    j["residual"] = c.residual;
    j["problem_hash"] = c.problem_hash;
    return j.dump(2) + "\n";
}

CertificateFile make_certificate_file(const std::string& kind, double level,
                                      const AglerCertificate& cert, const std::string& hash) {
    if (!known_kind(kind)) throw DomainError("certificate: unknown kind \"" + kind + "\"");
    CertificateFile c;
    c.kind = kind;
    c.level = level;
    c.gamma = cert.gamma.to_full();
    c.delta = cert.delta.to_full();
    c.residual = cert.residual;
    c.problem_hash = hash;
    return c;
}

AglerCertificate certificate_payload(const CertificateFile& c) {
    AglerCertificate cert;
    try {
        cert.gamma = HermitianMatrix::from_full(c.gamma, 1e-12);
        cert.delta = HermitianMatrix::from_full(c.delta, 1e-12);
    } catch (const Error& e) {
        throw CertificateInconsistent(std::string("certificate: payload is not Hermitian (") +
                                      e.what() + ")");
    }
    cert.residual = c.residual;
    cert.iterations = 0;
    return cert;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write file: " + path);
    out << text;
    if (!out) throw DomainError("write failed: " + path);
}

} // namespace bidisk
