#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "affdist/gf2.hpp"
#include "affdist/sidon.hpp"
#include "affdist/vbf.hpp"

// Distance from an (n,m)-function to the affine maps:
//   d(f) = 2^n - max_A |G_f ^ G_A|
// computed exactly through the Walsh transform when the budget allows,
// and otherwise bracketed by witnesses plus certified scans over gerbera
// configurations in the graph of f.

namespace affdist {

// |{x : f(x) = A(x)}|
int intersection_count(const VBF& f, const AffineMap& a);

// steps = 2^(nm) * m * 2^m must stay below 2^38
bool distance_exact_feasible(int n, int m);

struct ExactDistance {
    int distance = 0;
    AffineMap witness;   // lexicographically smallest maximizer
};

// Exact distance via d = 2^n - 2^-m max_{b,L} sum_v (-1)^(v.b) W_f(L(v),v),
// the maximum running over all linear maps L : F_2^m -> F_2^n.
// Throws when infeasible (use gerbera_scan / witness_search instead).
ExactDistance distance_exact_witnessed(const VBF& f, int threads = 1);
int distance_exact(const VBF& f, int threads = 1);

// A lower bound of the shape 2^n - sqrt(arg) - halves/2 together with the
// integer form actually usable on distances.
struct RadicalBound {
    int n = 0;
    uint64_t sqrt_arg = 0;
    int halves = 0;
    double value() const;            // 2^n - sqrt(arg) - halves/2
    std::string formula() const;
    int usable() const;              // ceil of value(), exact integer arithmetic
};

struct DistanceBounds {
    int n = 0, m = 0;
    int delta = 0;                 // differential uniformity
    bool apn = false;
    bool vectorial_bent = false;
    int trivial_upper = 0;         // 2^n - n - 1
    RadicalBound uniformity_lower; // 2^n - sqrt(delta)*2^(n/2) - 1/2
    std::optional<std::pair<int, int>> bent_interval;   // bent functions only
    double conjecture_value = 0;   // (1 - 2^-m)(2^n - 2^(n/2))
    std::optional<double> conjecture_apn;   // 2^n - 2^(n/2) - 1 when n = m
    std::optional<int> sidon_lower;         // 2^n - maxSidon(n), APN with n = m >= 2
    std::optional<RadicalBound> family_lower;   // inverse / half Gold exponents
    std::optional<int> family_upper;
    int best_lower = 0;
    int best_upper = 0;
};

DistanceBounds bounds_report(const VBF& f);

struct WitnessResult {
    AffineMap map;
    int intersection = 0;
};

// Best affine map found by gerbera-seeded candidates plus hill climbing
// over matrix/offset bit flips; deterministic for a fixed seed.
WitnessResult witness_search(const VBF& f, uint64_t seed = 0, int restarts = 24);

// ----- gerbera scan ---------------------------------------------------------

// Membership test for the family of graphs of affine maps: an n-dimensional
// affine subspace of F_2^(2n+1) qualifies iff its directions project onto
// the full input space.
bool projects_onto_inputs(int n, std::span<const uint32_t> dirs);
AffineMap subspace_to_affine_map(int n, uint32_t base, std::span<const uint32_t> dirs);
AffineSubspace affine_map_graph(const AffineMap& a);

struct ScanCenters {
    bool exhaustive = false;              // covers all of W minus the graph
    std::vector<uint32_t> list;           // centers, (2n+1)-bit words
    size_t total_centers = 0;             // size of W minus the graph
    std::vector<std::string> group;       // generator descriptions (orbit mode)
    std::vector<size_t> orbit_sizes;      // aligned with list in orbit mode
};

ScanCenters all_centers(const VBF& f);

// Orbit representatives of the centers under graph-preserving maps of a
// power function: coordinate scalings (x,y) -> (ax, a^d y), the Frobenius
// square, and for quadratic exponents the translation lifts. All of these
// fix the projection structure, so scanning one representative per orbit
// is as good as scanning every center.
ScanCenters center_orbit_representatives(const FieldSpec& k, uint64_t d);

struct ScanOutcome {
    uint32_t center = 0;
    int max_count = 0;                    // over candidates passing the projection test
    bool hit = false;                     // some candidate reached the target
    std::optional<AffineMap> witness;
};

struct ScanCertificate {
    std::string function_id;
    std::vector<uint16_t> truth_table;    // embedded for self-contained reverification
    int n = 0;
    int target = 0;                       // s
    int gerbera_size = 0;                 // t
    bool orbit_mode = false;
    bool exhaustive = false;
    size_t centers_scanned = 0;
    size_t total_centers = 0;
    std::vector<uint32_t> centers;        // orbit reps (or all when small)
    std::vector<std::string> group;
    bool absent = false;                  // no affine A with intersection >= target
    int witnessed_max = 0;
    std::optional<AffineMap> witness;
    double wall_ms = 0;
    int threads = 1;
};

using ScanProgress = std::function<void(const ScanOutcome&)>;

// Scans every size-t gerbera configuration of the graph for each center,
// extends its affine span to candidate affine-map graphs and counts
// intersections. Requires an APN input and a licensed (n, target, t)
// combination: (6,>=9,3), (7,>=12,3), (8,>=17,4), (9,>=22,4). For those,
// any affine graph meeting the target necessarily contains a scanned
// configuration, so a completed scan certifies absence.
//
// With a checkpoint path, finished centers are recorded after completion
// and skipped when the same scan is restarted.
ScanCertificate gerbera_scan(const VBF& f, int target, int t,
                             const ScanCenters& centers, int threads = 1,
                             const ScanProgress& progress = {},
                             const std::string& checkpoint = {});

// ----- aggregated report ----------------------------------------------------

enum class LmcStatus { consistent, violated, undetermined };
const char* to_string(LmcStatus s);

struct DistanceOptions {
    std::string strategy = "auto";   // auto | exact | witness | certify
    uint64_t seed = 0;
    int threads = 1;
    bool long_scans = false;         // opt-in for the heavy certificates
    std::optional<uint64_t> power;   // monomial exponent when known
    std::optional<FieldSpec> field;  // field used to build f
    std::string id;
    std::string checkpoint;          // resume file for certificate scans
};

struct DistanceReport {
    std::string id;
    int n = 0, m = 0;
    std::optional<int> exact;
    int lower = 0, upper = 0;
    DistanceBounds bounds;
    std::optional<AffineMap> witness;
    int witness_intersection = 0;
    LmcStatus lmc = LmcStatus::undetermined;
    std::optional<ScanCertificate> certificate;
    std::string strategy_used;
    double wall_ms = 0;
};

DistanceReport distance_report(const VBF& f, const DistanceOptions& opt = {});

// JSON serialization (nlohmann). Reports are deterministic except for the
// wall_ms timing fields.
std::string report_to_json(const DistanceReport& r);
std::string certificate_to_json(const ScanCertificate& c);
ScanCertificate certificate_from_json(const std::string& text);
void save_certificate(const std::string& path, const ScanCertificate& c);
ScanCertificate load_certificate(const std::string& path);

// Rechecks the stored witness, the license preconditions, and (orbit mode)
// the representative list; does not redo the scan itself.
struct VerifyResult {
    bool ok = false;
    std::string message;
};
VerifyResult verify_certificate(const ScanCertificate& c);

}  // namespace affdist
