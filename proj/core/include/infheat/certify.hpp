#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infheat/barriers.hpp"
#include "infheat/region.hpp"

namespace infheat {

enum class Verdict { Certified, Refuted, Inconclusive };
std::string_view to_string(Verdict v);

struct CertSample {
    SpaceTimePoint point;
    double residual = 0.0;
    ResidualRule rule = ResidualRule::Gradient;
};

/// Outcome of one barrier condition; `measured` is the quantity it was decided on.
struct ConditionResult {
    std::string name;
    bool holds = false;
    double measured = 0.0;
    std::string detail;
};

struct CertificateReport {
    std::string form;
    std::vector<FormParam> params;
    Side side = Side::Super;
    Equation equation = Equation::Normalized;
    std::size_t samples = 0;
    double tolerance = 0.0;
    /// Worst residual for the side: the minimum for super, the maximum for sub.
    double min_residual = 0.0;
    double max_residual = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<CertSample> violations;  // at most kMaxViolations
    std::size_t violation_count = 0;
    std::size_t degenerate_count = 0;
    std::vector<ConditionResult> conditions;
    std::vector<std::string> notes;

    static constexpr std::size_t kMaxViolations = 50;
    bool condition_holds(std::string_view name) const;
};

/// Residual sign check at seeded interior samples. tol is raised to the
/// form's tolerance floor. Throws std::domain_error naming the sample when
/// the form is invalid or its premise fails at a sample.
CertificateReport certify(const BarrierForm& form, const Region& region, Side side, std::size_t samples,
                          std::uint64_t seed, double tol = 1e-9, Equation eq = Equation::Normalized);

/// Certification of a tip form in log time: samples L = |log|t|| log-uniformly
/// in [L_min, L_max] and q = |x|^2/(4|t|) uniformly in [0, q_max(L)] where
/// q_max is the region's tip radius, and checks the sign of the form's
/// log-time residual. Reaches |t| far below double range. L_min <= 0 picks
/// the form's premise threshold (or the region cutoff).
CertificateReport certify_log_time(const BarrierForm& form, const Region& tip_region, Side side,
                                   std::size_t samples, std::uint64_t seed, double tol = 1e-9,
                                   double L_min = 0.0, double L_max = 1e300);

struct BarrierCheckOptions {
    std::size_t samples = 500;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    Side side = Side::Super;
    Equation equation = Equation::Normalized;
    /// Boundary samples closer than rho to zeta0 are ignored; <= 0 selects 0.1 * diameter.
    double rho = 0.0;
    std::size_t boundary_samples = 200;
    /// Approach distances rho0 * exp(-(2^k - 1)), k = 0..approach_steps-1.
    double approach_start = 0.0;  // <= 0 selects 0.25 * rho
    int approach_steps = 10;
    /// Condition (3) holds if the extrapolated limit is below this fraction of the first value.
    double limit_fraction = 0.05;
    /// Unit space-time direction (x..., t) of the approach; empty picks one automatically.
    std::vector<double> approach_direction;
};

/// Barrier conditions at zeta0: (1) supersolution + positivity at interior
/// samples, (2) boundary margin away from zeta0 (measured), (3) value -> 0
/// along an interior approach, extrapolated with Aitken's delta-squared.
CertificateReport check_barrier(const BarrierForm& form, const Region& region, const SpaceTimePoint& zeta0,
                                const BarrierCheckOptions& opt = {});

using FormFamily = std::function<BarrierForm(int j)>;
using DistanceFunction = std::function<double(const SpaceTimePoint&)>;

struct FamilyCheckOptions {
    BarrierCheckOptions member;
    int j_max = 8;      // members checked individually
    int k_max = 8;      // condition (3) / (5) levels
    int j_search = 4096;  // largest j tried as a witness
    bool strong = false;
    DistanceFunction distance;  // required when strong
};

struct FamilyWitness {
    int k = 0;
    std::optional<int> j;
    double margin = 0.0;  // min relative slack (w_j - k) or (w_j - k d) over the samples at the witness
};

struct FamilyReport {
    CertificateReport summary;
    std::vector<CertificateReport> members;
    std::vector<FamilyWitness> boundary_witnesses;
    std::vector<FamilyWitness> strong_witnesses;
};

/// Barrier-family check: conditions (1),(2) per member j = 1..j_max, condition
/// (3) by exhibiting a witness j for each k, and in strong mode w_j >= k d.
FamilyReport check_barrier_family(const FormFamily& family, const Region& region, const SpaceTimePoint& zeta0,
                                  const FamilyCheckOptions& opt);

/// Inward unit space-time direction at zeta0 with the largest clearance
/// ratio over distances rho0 * {1, 1/2, 1/4, 1/8}; empty when none is inside.
/// With `admissible`, directions whose probe points fail it are skipped.
std::vector<double> approach_direction(const Region& region, const SpaceTimePoint& zeta0, double rho0,
                                       const std::function<bool(const SpaceTimePoint&)>& admissible = {});

/// Aitken delta-squared extrapolation of the last three terms; falls back
/// to the last term when the denominator vanishes.
double aitken_limit(const std::vector<double>& seq);

}  // namespace infheat
