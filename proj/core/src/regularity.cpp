#include "infheat/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstring>
#include <stdexcept>

#include "infheat/format.hpp"

namespace infheat {

std::string_view to_string(RegularityVerdict v) {
    switch (v) {
        case RegularityVerdict::Regular: return "regular";
        case RegularityVerdict::Irregular: return "irregular";
        case RegularityVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view to_string(Contact c) {
    switch (c) {
        case Contact::North: return "north";
        case Contact::South: return "south";
        case Contact::Side: return "side";
    }
    return "?";
}

std::optional<Contact> contact_from_string(std::string_view s) {
    for (Contact c : {Contact::North, Contact::South, Contact::Side})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

SchemeConfig Resolution::config() const {
    SchemeConfig c;
    c.h = h;
    c.K = K;
    c.dirs = dirs;
    c.dt = dt;
    return c;
}

std::vector<Resolution> default_schedule() { return {{0.002, 1, 2, 0.0}, {0.001, 1, 2, 0.0}, {0.0005, 1, 2, 0.0}}; }

Thresholds calibrate_thresholds(const RegularityReport& regular_anchor, const RegularityReport& irregular_anchor,
                                const Thresholds& defaults) {
    if (regular_anchor.series.empty() || irregular_anchor.series.empty())
        throw std::invalid_argument("calibrate_thresholds: anchors without probe series");
    Thresholds t = defaults;
    t.regular = std::max(defaults.regular, 1.5 * regular_anchor.series.back().ratio);
    t.irregular = std::min(defaults.irregular, irregular_anchor.series.back().ratio / 1.5);
    return t;
}

LimitFit extrapolate_limit(const std::vector<double>& distances, const std::vector<double>& values, double scale,
                           int window) {
    if (distances.size() != values.size()) throw std::invalid_argument("extrapolate_limit: size mismatch");
    LimitFit fit;
    const std::size_t n = values.size();
    if (n == 0) {
        fit.limit = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    const double last = values.back();
    fit.limit = last;
    if (!(last > 0.0)) {
        fit.limit = 0.0;
        return fit;
    }
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(window, 2)));
    std::vector<double> taus;
    for (std::size_t i = n - w + 1; i < n; ++i) {
        if (!(values[i - 1] > 0.0)) {
            fit.limit = 0.0;
            return fit;
        }
        const double t0 = std::log(scale / distances[i - 1]), t1 = std::log(scale / distances[i]);
        fit.rates.push_back(-(std::log(values[i]) - std::log(values[i - 1])) / (t1 - t0));
        taus.push_back(0.5 * (t0 + t1));
    }
    if (fit.rates.size() < 2) return fit;
    for (double k : fit.rates)
        if (!(k > 0.0)) return fit;  // not decaying: the last value is the estimate

    // least squares log kappa = a - p log tau
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(fit.rates.size());
    for (std::size_t i = 0; i < fit.rates.size(); ++i) {
        const double x = std::log(taus[i]), y = std::log(fit.rates[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = m * sxx - sx * sx;
    fit.power = den > 0.0 ? -(m * sxy - sx * sy) / den : 0.0;
    if (fit.power <= 1.0) {
        fit.limit = 0.0;
        return fit;
    }
    const double tau = std::log(scale / distances.back());
    fit.limit = last * std::exp(-fit.rates.back() * tau / (fit.power - 1.0));
    return fit;
}

namespace {

SpaceTimePoint along(const SpaceTimePoint& z, const std::vector<double>& dir, double d) {
    SpaceTimePoint p = z;
    for (std::size_t i = 0; i < p.x.size(); ++i) p.x[i] += d * dir[i];
    p.t += d * dir.back();
    return p;
}

double sup_over_box(const Box& box, const SpaceTimePoint& z, double probe_eps) {
    double s = 0.0;
    for (std::size_t d = 0; d < box.dim(); ++d) {
        const double a = std::max(std::abs(box.lo[d] - z.x[d]), std::abs(box.hi[d] - z.x[d]));
        s += a * a;
    }
    const double b = std::max(std::abs(box.t_lo - z.t), std::abs(box.t_hi - z.t));
    return s + probe_eps * b * b;
}

struct Probe {
    double distance;
    SpaceTimePoint point;
    double value = std::numeric_limits<double>::quiet_NaN();
};

// Marches until every probe time is covered; u at a probe is linear in time
// between the two bracketing slices.
std::size_t sample_probes(const Lattice& lat, const BoundaryData& g, std::vector<Probe>& probes) {
    if (probes.empty()) return 0;
    std::vector<std::size_t> order(probes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probes[a].point.t < probes[b].point.t; });
    const Stencil& st = lat.stencil();
    const std::size_t size = lat.grid().size();
    std::vector<double> prev_vals;
    std::vector<std::uint8_t> prev_mask;
    SliceView prev = {lat.initial_time(), nullptr, nullptr};
    std::size_t next = 0, marched = 0;
    march_stream(lat, g, [&](std::size_t s, const SliceView& cur) {
        marched = s + 1;
        while (next < order.size() && probes[order[next]].point.t <= cur.t) {
            Probe& p = probes[order[next]];
            const double a = st.interpolate(prev, g, p.point.x);
            const double b = st.interpolate(cur, g, p.point.x);
            const double theta = std::clamp((p.point.t - prev.t) / (cur.t - prev.t), 0.0, 1.0);
            p.value = (1.0 - theta) * a + theta * b;
            ++next;
        }
        if (next == order.size()) return false;
        prev_vals.assign(cur.values, cur.values + size);
        prev_mask.assign(cur.mask, cur.mask + size);
        prev = {cur.t, prev_vals.data(), prev_mask.data()};
        return true;
    });
    return marched;
}

RegularityVerdict decide(RegularityReport& r) {
    const auto& thr = r.thresholds;
    const ProbeSeries& f = r.series.back();
    const ProbeSeries& c = r.series[r.series.size() - 2];
    const double tiny = 1e-12 * r.sup_psi;
    const bool shrinking = f.limit <= tiny || f.limit <= c.limit / thr.shrink;
    const bool small = f.ratio < thr.regular;
    const bool large = c.ratio >= thr.irregular && f.ratio >= thr.irregular;
    r.evidence.push_back("limit/supPsi coarse=" + format_double(c.ratio) + " fine=" + format_double(f.ratio));
    r.evidence.push_back(std::string("shrink by ") + format_double(thr.shrink) + " per halving: " +
                         (shrinking ? "yes" : "no"));
    r.evidence.push_back("thresholds regular<" + format_double(thr.regular) + " irregular>=" +
                         format_double(thr.irregular));
    if (shrinking && small) return RegularityVerdict::Regular;
    if (large) return RegularityVerdict::Irregular;
    return RegularityVerdict::Inconclusive;
}

}  // namespace

RegularityReport classify(const Region& region, const SpaceTimePoint& zeta0, const std::vector<Resolution>& schedule,
                          const ClassifyOptions& opt) {
    if (schedule.size() < 2) throw std::invalid_argument("classify: schedule needs at least two resolutions");
    if (zeta0.dim() != region.dim()) throw std::invalid_argument("classify: zeta0 dimension mismatch");
    if (region.contains(zeta0)) throw std::invalid_argument("classify: zeta0 " + to_string(zeta0) + " is interior");
    const double tol = std::max(default_boundary_tolerance(region), 10.0 * kDefaultTimeFloor);
    if (approach_direction(region, zeta0, tol).empty())
        throw std::invalid_argument("classify: zeta0 " + to_string(zeta0) + " is not within " + format_double(tol) +
                                    " of the boundary");

    RegularityReport r;
    r.zeta0 = zeta0;
    r.region = region.describe();
    r.thresholds = opt.thresholds;
    const double diam = diameter(region);
    r.probe_eps = opt.probe_eps > 0.0 ? opt.probe_eps : 0.5 / diam;
    if (!(r.probe_eps * diam < 1.0))
        throw std::invalid_argument("classify: probe eps * diam(Ω) must be < 1 (got " +
                                    format_double(r.probe_eps * diam) + ")");
    r.sup_psi = sup_over_box(region.bounding_box(), zeta0, r.probe_eps);

    double rho0 = opt.rho0 > 0.0 ? opt.rho0 : 0.25 * diam;
    std::vector<double> dir = opt.direction;
    if (!dir.empty()) {
        if (dir.size() != zeta0.dim() + 1) throw std::invalid_argument("classify: direction needs n+1 components");
        const double nrm = std::sqrt(squared_norm(dir));
        if (!(nrm > 0.0)) throw std::invalid_argument("classify: zero direction");
        for (double& v : dir) v /= nrm;
        for (int i = 0; i < 60 && !region.contains(along(zeta0, dir, rho0)); ++i) rho0 *= 0.5;
        if (!region.contains(along(zeta0, dir, rho0)))
            throw std::invalid_argument("classify: the given direction does not enter the region");
    } else {
        for (int i = 0; i < 60 && dir.empty(); ++i) {
            dir = approach_direction(region, zeta0, rho0);
            if (dir.empty()) rho0 *= 0.5;
        }
        if (dir.empty()) throw std::invalid_argument("classify: no interior approach direction");
    }
    r.direction = dir;
    r.rho0 = rho0;

    const SpaceTimePoint z = zeta0;
    const double pe = r.probe_eps;
    const BoundaryData psi = [z, pe](std::span<const double> x, double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - z.x[i]) * (x[i] - z.x[i]);
        return s + pe * (t - z.t) * (t - z.t);
    };

    for (const Resolution& res : schedule) {
        const SchemeConfig cfg = res.config();
        const auto lat = make_lattice(region, cfg);
        std::vector<Probe> probes;
        for (int k = 0; k < opt.max_probes; ++k) {
            const double d = rho0 * std::ldexp(1.0, -k);
            SpaceTimePoint p = along(zeta0, dir, d);
            if (!region.contains(p) || spatial_clearance(region, p) < opt.min_clearance_cells * res.h) break;
            if (p.t <= lat->initial_time() + lat->dt()) break;
            probes.push_back({d, std::move(p)});
        }
        ProbeSeries s;
        s.resolution = res;
        s.eps = lat->eps();
        s.dt = lat->dt();
        s.slices_marched = sample_probes(*lat, psi, probes);
        for (const auto& p : probes) {
            s.distances.push_back(p.distance);
            s.values.push_back(p.value);
        }
        const LimitFit fit = extrapolate_limit(s.distances, s.values, diam, opt.rate_window);
        s.rates = fit.rates;
        s.power = fit.power;
        s.limit = fit.limit;
        s.ratio = s.limit / r.sup_psi;
        r.evidence.push_back("h=" + format_double(res.h) + ": " + std::to_string(probes.size()) + " probes, limit " +
                             format_double(s.limit) + ", power " + format_double(s.power));
        r.series.push_back(std::move(s));
    }
    for (const auto& s : r.series)
        if (s.values.size() < 3) {
            r.evidence.push_back("fewer than 3 probes at h=" + format_double(s.resolution.h));
            r.verdict = RegularityVerdict::Inconclusive;
            return r;
        }
    r.verdict = decide(r);
    return r;
}

FutureBlindnessResult future_blindness_test(const Region& region, const SpaceTimePoint& zeta0, const BoundaryData& g,
                                            const BoundaryData& perturbation, const SchemeConfig& cfg,
                                            const std::vector<Resolution>& schedule, const ClassifyOptions& opt) {
    const double t0 = zeta0.t;
    const BoundaryData g2 = [g, perturbation, t0](std::span<const double> x, double t) {
        return t > t0 ? g(x, t) + perturbation(x, t) : g(x, t);
    };
    const auto lat = make_lattice(region, cfg);
    const std::size_t size = lat->grid().size();
    std::vector<std::vector<double>> vals;
    std::vector<std::vector<std::uint8_t>> masks;
    march_stream(*lat, g, [&](std::size_t, const SliceView& v) {
        if (!(v.t < t0)) return false;
        if (static_cast<double>(vals.size() + 1) * static_cast<double>(size) > 4e7)
            throw std::invalid_argument("future_blindness_test: lattice too large to compare");
        vals.emplace_back(v.values, v.values + size);
        masks.emplace_back(v.mask, v.mask + size);
        return true;
    });
    FutureBlindnessResult out;
    bool same = true;
    std::size_t compared = 0;
    march_stream(*lat, g2, [&](std::size_t s, const SliceView& v) {
        if (!(v.t < t0) || s >= vals.size()) return false;
        for (std::size_t i = 0; i < size; ++i) {
            if (v.mask[i] != masks[s][i]) same = false;
            // bitwise, so that -0.0 vs 0.0 or NaN payloads would count as differences
            if (v.mask[i] && std::memcmp(&v.values[i], &vals[s][i], sizeof(double)) != 0) same = false;
        }
        ++compared;
        return true;
    });
    out.bit_identical = same && compared == vals.size();
    out.slices_compared = compared;

    if (!schedule.empty()) {
        out.verdict_full = classify(region, zeta0, schedule, opt).verdict;
        const Region past = clip_time(region, t0, TimeSide::Before);
        try {
            out.verdict_past = classify(past, zeta0, schedule, opt).verdict;
        } catch (const std::invalid_argument&) {
            // zeta0 not on the boundary of the past part (or the past is empty)
        }
        out.verdicts_agree = !out.verdict_past || *out.verdict_past == *out.verdict_full;
    }
    return out;
}

ExteriorSphereExperiment exterior_sphere_experiment(Contact contact, double R0, const std::vector<Resolution>& schedule,
                                                    std::size_t samples, std::uint64_t seed,
                                                    const ClassifyOptions& opt) {
    if (!(std::isfinite(R0) && R0 > 0.0)) throw std::invalid_argument("exterior_sphere_experiment: R0 > 0 required");
    ExteriorSphereExperiment e{Region::empty(1), SpaceTimePoint({0.0}, 0.0), SpaceTimePoint({0.0}, 0.0), R0, 0.0, {},
                               std::nullopt};
    // delta: lower bound of |x - x'| over the side domain
    const double delta = R0;
    e.a = exterior_sphere_rate(R0, delta);
    switch (contact) {
        case Contact::Side:
            e.region = Region::cylinder(SpatialShape::box({R0}, {R0 + 1.0}), -R0, R0);
            e.zeta0 = SpaceTimePoint({R0}, 0.0);
            break;
        case Contact::North:
            e.region = Region::cylinder(SpatialShape::box({-1.0}, {1.0}), R0, R0 + 1.0);
            e.zeta0 = SpaceTimePoint({0.0}, R0);
            break;
        case Contact::South:
            e.region = Region::cylinder(SpatialShape::box({-1.0}, {1.0}), -R0 - 1.0, -R0);
            e.zeta0 = SpaceTimePoint({0.0}, -R0);
            break;
    }
    const BarrierForm w = exterior_sphere(e.center, R0, e.a);
    e.certificate = certify(w, e.region, Side::Super, samples, seed);
    if (!schedule.empty()) e.regularity = classify(e.region, e.zeta0, schedule, opt);
    return e;
}

std::vector<RegularityReport> petrovsky_sweep(const std::vector<double>& factors, double cutoff,
                                              const std::vector<Resolution>& schedule, const ClassifyOptions& opt,
                                              std::size_t n) {
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw std::invalid_argument("petrovsky_sweep: 0 < c < 1 required");
    ClassifyOptions o = opt;
    if (o.direction.empty()) {
        o.direction.assign(n + 1, 0.0);
        o.direction[n] = -1.0;  // along the t-axis into the tip
    }
    std::vector<RegularityReport> out;
    for (double A : factors) {
        if (!(A > 0.0)) throw std::invalid_argument("petrovsky_sweep: factors > 0 required");
        out.push_back(classify(Region::petrovsky(n, A, cutoff), SpaceTimePoint(std::vector<double>(n, 0.0), 0.0),
                               schedule, o));
    }
    return out;
}

RegularityReport heat_ball_experiment(double level, const std::vector<Resolution>& schedule,
                                      const ClassifyOptions& opt, std::size_t n) {
    if (!(level > 0.0)) throw std::invalid_argument("heat_ball_experiment: level > 0 required");
    ClassifyOptions o = opt;
    if (o.direction.empty()) {
        o.direction.assign(n + 1, 0.0);
        o.direction[n] = -1.0;
    }
    const SpaceTimePoint center(std::vector<double>(n, 0.0), 0.0);
    return classify(Region::heat_ball(center, level), center, schedule, o);
}

}  // namespace infheat
