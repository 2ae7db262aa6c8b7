#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infheat/barriers.hpp"
#include "infheat/certify.hpp"
#include "infheat/region.hpp"
#include "infheat/scheme.hpp"

namespace infheat {

enum class RegularityVerdict { Regular, Irregular, Inconclusive };
std::string_view to_string(RegularityVerdict v);

/// One lattice resolution. dt = 0 selects eps^2 / 2.
struct Resolution {
    double h = 0.01;
    int K = 1;
    int dirs = 2;
    double dt = 0.0;

    SchemeConfig config() const;
};

/// Limit thresholds as fractions of sup Psi over the region's enclosing box.
struct Thresholds {
    double regular = 0.02;
    double irregular = 0.10;
    /// Required shrink factor of the limit per resolution halving.
    double shrink = 1.5;
};

struct ProbeSeries {
    Resolution resolution;
    double eps = 0.0;
    double dt = 0.0;
    std::vector<double> distances;
    std::vector<double> values;
    /// Local decay rates -d log u / d tau, tau = log(D / d), over the last window.
    std::vector<double> rates;
    double power = 0.0;  // fitted kappa ~ tau^{-power}
    double limit = 0.0;
    double ratio = 0.0;  // limit / sup Psi
    std::size_t slices_marched = 0;
};

struct RegularityReport {
    SpaceTimePoint zeta0;
    std::string region;
    double probe_eps = 0.0;
    double sup_psi = 0.0;
    std::vector<double> direction;  // unit (x..., t)
    double rho0 = 0.0;
    Thresholds thresholds;
    std::vector<ProbeSeries> series;
    RegularityVerdict verdict = RegularityVerdict::Inconclusive;
    std::vector<std::string> evidence;
};

/// Anchor calibration: regular = max(default, 1.5 * wall ratio),
/// irregular = min(default, heat-ball ratio / 1.5), both at the finest level.
Thresholds calibrate_thresholds(const RegularityReport& regular_anchor,
                                const RegularityReport& irregular_anchor,
                                const Thresholds& defaults = {});

struct ClassifyOptions {
    /// Probe data |x - x0|^2 + probe_eps (t - t0)^2; <= 0 selects 0.5 / diam.
    double probe_eps = 0.0;
    /// Empty picks the inward direction with the best clearance.
    std::vector<double> direction;
    double rho0 = 0.0;  // <= 0 selects 0.25 * diam, halved until inside
    int max_probes = 16;
    /// Probes stop once the spatial clearance drops below this many h.
    double min_clearance_cells = 6.0;
    int rate_window = 4;
    Thresholds thresholds;
};

/// Marches with the probe data, samples u toward zeta0 at distances
/// rho0 * 2^-k and extrapolates the limit per resolution. Throws when zeta0
/// is not near the boundary or the schedule has fewer than two entries.
RegularityReport classify(const Region& region, const SpaceTimePoint& zeta0, const std::vector<Resolution>& schedule,
                          const ClassifyOptions& opt = {});

/// Limit of u along distances d (decreasing) from the decay-rate trend:
/// 0 when the fitted power is <= 1 (the rate integral diverges).
struct LimitFit {
    std::vector<double> rates;
    double power = 0.0;
    double limit = 0.0;
};
LimitFit extrapolate_limit(const std::vector<double>& distances, const std::vector<double>& values, double scale,
                           int window = 4);

// ------------------------------------------------------------- experiments

struct FutureBlindnessResult {
    bool bit_identical = false;
    std::size_t slices_compared = 0;
    std::optional<RegularityVerdict> verdict_full;
    std::optional<RegularityVerdict> verdict_past;
    bool verdicts_agree = true;
};

/// Marches g and g + perturbation * [t > t0] and compares all slices with
/// t < t0 bitwise. With a schedule, also classifies zeta0 in the region and
/// in its past part.
FutureBlindnessResult future_blindness_test(const Region& region, const SpaceTimePoint& zeta0, const BoundaryData& g,
                                            const BoundaryData& perturbation, const SchemeConfig& cfg,
                                            const std::vector<Resolution>& schedule = {},
                                            const ClassifyOptions& opt = {});

enum class Contact { North, South, Side };
std::string_view to_string(Contact c);
std::optional<Contact> contact_from_string(std::string_view s);

struct ExteriorSphereExperiment {
    Region region;
    SpaceTimePoint zeta0;
    SpaceTimePoint center;
    double R0 = 0.0;
    double a = 0.0;
    CertificateReport certificate;
    std::optional<RegularityReport> regularity;
};

/// n = 1 domain touching the closed ball of radius R0 about (0, 0) at the
/// chosen pole or side; certifies the exterior-sphere barrier and, with a
/// schedule, classifies the contact point.
ExteriorSphereExperiment exterior_sphere_experiment(Contact contact, double R0,
                                                    const std::vector<Resolution>& schedule,
                                                    std::size_t samples = 500, std::uint64_t seed = 0,
                                                    const ClassifyOptions& opt = {});

/// Classify (0, 0) for the Petrovsky region with each factor.
std::vector<RegularityReport> petrovsky_sweep(const std::vector<double>& factors, double cutoff,
                                              const std::vector<Resolution>& schedule,
                                              const ClassifyOptions& opt = {}, std::size_t n = 1);

/// Classify the centre of the heat ball {W(-x, -t) > level}.
RegularityReport heat_ball_experiment(double level, const std::vector<Resolution>& schedule,
                                      const ClassifyOptions& opt = {}, std::size_t n = 1);

/// Default schedule for n = 1 tip experiments.
std::vector<Resolution> default_schedule();

}  // namespace infheat
