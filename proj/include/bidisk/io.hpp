#ifndef BIDISK_IO_HPP
#define BIDISK_IO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bidisk/agler.hpp"
#include "bidisk/kernels.hpp"
#include "bidisk/matrix.hpp"

namespace bidisk {

/// Solver parameters carried by a problem file; flags may override.
struct SolverOptions {
    double bis_tol = kDefaultBisTol;
    double feas_tol = kDefaultFeasTol;
    int max_iter = kDefaultMaxIter;
    std::uint64_t seed = 20260815u;
};

/// Parsed problem file: interpolation nodes, optional targets, options.
/// Complex values are [re, im] pairs throughout; points are quadruples
/// [re1, im1, re2, im2].
struct ProblemFile {
    std::vector<std::array<double, 4>> points;
    std::vector<std::array<double, 2>> targets; // meaningful iff has_targets
    bool has_targets = false;
    SolverOptions options;
};

/// Serialized Agler certificate plus the hash of the problem it certifies.
/// kind distinguishes which level family produced it.
struct CertificateFile {
    std::string kind; // "pick" | "separation_a" | "separation_b"
    double level = 0.0;
    ComplexMatrix gamma;
    ComplexMatrix delta;
    double residual = 0.0;
    std::string problem_hash;
};

/// Parses JSON text. Unknown keys, malformed entries, boundary or duplicate
/// points, and target/point length mismatches throw DomainError with a
/// message naming the offending index or key.
ProblemFile parse_problem(const std::string& text);

/// Canonical JSON (sorted keys, two-space indent, shortest-round-trip
/// doubles). parse_problem(serialize_problem(p)) reproduces p and
/// serialize is a byte-level fixed point of the round trip.
std::string serialize_problem(const ProblemFile& p);

/// FNV-1a 64 over the canonical dump of the mathematical content (points
/// and targets only; options do not change what a certificate certifies).
/// Format "fnv1a:" + 16 lowercase hex digits.
std::string problem_hash(const ProblemFile& p);

/// Node sequence of the file; validates strict bidisk membership and
/// pairwise distinctness, naming offending indices.
PointSequence problem_points(const ProblemFile& p);

/// Interpolation data of the file; requires targets.
PickProblem problem_pick(const ProblemFile& p);

CertificateFile parse_certificate(const std::string& text);
std::string serialize_certificate(const CertificateFile& c);

/// Packs a solved certificate for writing. kind must be one of the three
/// recognized strings.
CertificateFile make_certificate_file(const std::string& kind, double level,
                                      const AglerCertificate& cert,
                                      const std::string& hash);

/// Hermitian payload of a parsed certificate. Throws CertificateInconsistent
/// when gamma or delta is not Hermitian to 1e-12 or shapes disagree.
AglerCertificate certificate_payload(const CertificateFile& c);

/// Reads a whole file; DomainError when unreadable.
std::string read_text_file(const std::string& path);

/// Writes text atomically enough for our purposes (truncate + write).
void write_text_file(const std::string& path, const std::string& text);

} // namespace bidisk

#endif
