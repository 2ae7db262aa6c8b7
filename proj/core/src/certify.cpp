#include "infheat/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "infheat/format.hpp"

namespace infheat {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::Refuted: return "refuted";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool CertificateReport::condition_holds(std::string_view name) const {
    for (const auto& c : conditions)
        if (c.name == name) return c.holds;
    return false;
}

namespace {

CertificateReport blank_report(const BarrierForm& form, Side side, Equation eq, double tol) {
    CertificateReport r;
    r.form = form.name();
    r.params = form.params();
    r.side = side;
    r.equation = eq;
    r.tolerance = std::max(tol, form.tolerance_floor());
    r.min_residual = std::numeric_limits<double>::infinity();
    r.max_residual = -std::numeric_limits<double>::infinity();
    return r;
}

// Worst residual for the side, stored in min_residual.
void record(CertificateReport& r, const SpaceTimePoint& p, double v, ResidualRule rule, bool degenerate) {
    ++r.samples;
    if (degenerate) ++r.degenerate_count;
    r.max_residual = std::max(r.max_residual, v);
    r.min_residual = std::min(r.min_residual, v);
    const bool bad = r.side == Side::Super ? v < -r.tolerance : v > r.tolerance;
    if (!bad) return;
    ++r.violation_count;
    if (r.violations.size() < CertificateReport::kMaxViolations) r.violations.push_back({p, v, rule});
}

void finish(CertificateReport& r) {
    if (r.samples == 0) {
        r.verdict = Verdict::Inconclusive;
        r.min_residual = r.max_residual = 0.0;
        r.notes.push_back("no admissible samples");
        return;
    }
    r.verdict = r.violation_count > 0 ? Verdict::Refuted : Verdict::Certified;
}

std::optional<double> form_param(const BarrierForm& form, std::string_view name) {
    for (const auto& p : form.params())
        if (p.name == name && p.values.size() == 1) return p.values[0];
    return std::nullopt;
}

std::optional<double> tip_cutoff(const Region& region) {
    const Primitive* prim = region.primitive();
    if (!prim) return std::nullopt;
    if (const auto* p = std::get_if<PetrovskySpec>(prim)) return p->cutoff;
    if (const auto* s = std::get_if<IrregularSubdomainSpec>(prim)) return -s->cutoff;
    return std::nullopt;
}

SpaceTimePoint along(const SpaceTimePoint& z, const std::vector<double>& dir, double d) {
    SpaceTimePoint p = z;
    for (std::size_t i = 0; i < p.x.size(); ++i) p.x[i] += d * dir[i];
    p.t += d * dir.back();
    return p;
}

std::vector<std::vector<double>> candidate_directions(std::size_t n) {
    std::vector<std::vector<double>> out;
    auto unit = [&](std::size_t axis, double s) {
        std::vector<double> v(n + 1, 0.0);
        v[axis] = s;
        return v;
    };
    out.push_back(unit(n, -1.0));
    out.push_back(unit(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(unit(i, 1.0));
        out.push_back(unit(i, -1.0));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i)
        for (double a : {1.0, -1.0})
            for (double b : {1.0, -1.0}) {
                std::vector<double> v(n + 1, 0.0);
                v[i] = a * s;
                v[n] = b * s;
                out.push_back(v);
            }
    return out;
}

}  // namespace

std::vector<double> approach_direction(const Region& region, const SpaceTimePoint& zeta0, double rho0,
                                       const std::function<bool(const SpaceTimePoint&)>& admissible) {
    std::vector<double> dir;
    double best = -1.0;
    for (const auto& c : candidate_directions(region.dim())) {
        double score = std::numeric_limits<double>::infinity();
        for (double f : {1.0, 0.5, 0.25, 0.125}) {
            const SpaceTimePoint p = along(zeta0, c, f * rho0);
            if (!region.contains(p) || (admissible && !admissible(p))) {
                score = -1.0;
                break;
            }
            score = std::min(score, spatial_clearance(region, p) / (f * rho0));
        }
        if (score > best) {
            best = score;
            dir = c;
        }
    }
    return dir;
}

double aitken_limit(const std::vector<double>& seq) {
    if (seq.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (seq.size() < 3) return seq.back();
    const double x0 = seq[seq.size() - 3], x1 = seq[seq.size() - 2], x2 = seq.back();
    const double d1 = x1 - x0, d2 = x2 - x1;
    const double den = d2 - d1;
    if (den == 0.0 || !std::isfinite(den)) return x2;
    const double lim = x2 - d2 * d2 / den;
    return std::isfinite(lim) ? lim : x2;
}

CertificateReport certify(const BarrierForm& form, const Region& region, Side side, std::size_t samples,
                          std::uint64_t seed, double tol, Equation eq) {
    if (samples < 1) throw std::invalid_argument("certify: samples >= 1 required");
    if (form.dim() != region.dim()) throw std::invalid_argument("certify: form and region dimensions differ");
    if (form.kind() == FormKind::QuadraticProbe) {
        const double eps = *form_param(form, "eps"), d = diameter(region);
        if (!(eps * d < 1.0))
            throw std::domain_error("certify: ε·diam(Ω) must be < 1 for " + form.name() + " (ε·diam = " +
                                    format_double(eps * d) + ")");
    }
    CertificateReport r = blank_report(form, side, eq, tol);
    const auto pts = sample_interior(region, samples, seed);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!form.valid(p))
            throw std::domain_error("certify: sample " + std::to_string(i) + " " + to_string(p) +
                                    " outside the validity set of " + form.name() + " (" + form.validity() + ")");
        if (auto why = form.premise_violation(p))
            throw std::domain_error("certify: sample " + std::to_string(i) + " " + to_string(p) + ": " + *why);
        const Residual res = residual(form, p, eq);
        record(r, p, res.value(side), res.rule(side), res.degenerate);
    }
    finish(r);
    return r;
}

CertificateReport certify_log_time(const BarrierForm& form, const Region& tip_region, Side side,
                                   std::size_t samples, std::uint64_t seed, double tol, double L_min,
                                   double L_max) {
    if (samples < 1) throw std::invalid_argument("certify_log_time: samples >= 1 required");
    if (!form.log_time_residual(0.0, 10.0))
        throw std::invalid_argument("certify_log_time: " + form.name() + " has no log-time residual");
    const auto cutoff = tip_cutoff(tip_region);
    if (!cutoff) throw std::invalid_argument("certify_log_time: region must be a Petrovsky or irregular tip");

    CertificateReport r = blank_report(form, side, Equation::Normalized, tol);
    double floor_L = -std::log(*cutoff);
    if (form.kind() == FormKind::IrregularityFunction) {
        const double L0 = irregularity_premise_threshold(*form_param(form, "k"), *form_param(form, "alpha"));
        if (L_min > 0.0 && L_min < L0)
            throw std::domain_error("certify_log_time: L_min = " + format_double(L_min) +
                                    " is below the premise threshold L0 = " + format_double(L0));
        floor_L = std::max(floor_L, L0);
        r.notes.push_back("premise threshold L0 = " + format_double(L0));
    }
    if (L_min <= 0.0) L_min = floor_L;
    L_min = std::max(L_min, floor_L * (1.0 + 1e-12));
    if (!(L_max > L_min)) throw std::invalid_argument("certify_log_time: L_max > L_min required");
    r.notes.push_back("log-time samples store (q, L) as (x, t); q = |x|^2/(4|t|), L = |log|t||");
    r.notes.push_back("L range [" + format_double(L_min) + ", " + format_double(L_max) + "]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double a = std::log(L_min), b = std::log(L_max);
    for (std::size_t i = 0; i < samples; ++i) {
        const double L = std::exp(a + (b - a) * unif(rng));
        const double u = unif(rng);
        const auto qmax = tip_region.tip_scaled_radius(L);
        if (!qmax) continue;
        // every tenth sample sits on an end of the q range
        double q = u * *qmax;
        if (i % 10 == 0) q = (i / 10) % 2 == 0 ? 0.0 : *qmax;
        const double v = *form.log_time_residual(q, L);
        record(r, SpaceTimePoint({q}, L), v, ResidualRule::Gradient, q == 0.0);
    }
    finish(r);
    return r;
}

CertificateReport check_barrier(const BarrierForm& form, const Region& region, const SpaceTimePoint& zeta0,
                                const BarrierCheckOptions& opt) {
    if (zeta0.dim() != region.dim()) throw std::invalid_argument("check_barrier: zeta0 dimension mismatch");
    CertificateReport r = certify(form, region, opt.side, opt.samples, opt.seed, opt.tol, opt.equation);
    if (opt.equation == Equation::NonNormalized)
        r.notes.push_back("a single barrier is not known to suffice for the non-normalized equation; "
                          "see check_barrier_family");

    // (1) residual sign and positivity
    double min_value = std::numeric_limits<double>::infinity();
    for (const auto& p : sample_interior(region, opt.samples, opt.seed)) min_value = std::min(min_value, form.value(p));
    const bool positive = min_value > 0.0;
    r.conditions.push_back({"residual", r.verdict == Verdict::Certified, opt.side == Side::Super ? r.min_residual : r.max_residual,
                            std::string(to_string(opt.side)) + "solution residual sign at interior samples"});
    r.conditions.push_back({"positive", positive, min_value, "minimum of the form over interior samples"});

    // (2) boundary margin away from zeta0
    const double diam = diameter(region);
    const double rho = opt.rho > 0.0 ? opt.rho : 0.1 * diam;
    double margin = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (const auto& s : sample_boundary(region, opt.boundary_samples, opt.seed + 1)) {
        if (distance(s.point, zeta0) < rho || !form.valid(s.inside)) continue;
        margin = std::min(margin, form.value(s.inside));
        ++used;
    }
    if (used == 0) margin = 0.0;
    r.conditions.push_back({"boundary_margin", used > 0 && margin > 0.0, margin,
                            "min over " + std::to_string(used) + " boundary samples at distance >= " +
                                format_double(rho)});

    // (3) limit along an interior approach
    const double rho0 = opt.approach_start > 0.0 ? opt.approach_start : 0.25 * rho;
    std::vector<double> dir = opt.approach_direction;
    if (dir.empty())
        dir = approach_direction(region, zeta0, rho0, [&form](const SpaceTimePoint& p) { return form.valid(p); });
    if (dir.size() != region.dim() + 1) {
        r.conditions.push_back({"limit_zero", false, std::numeric_limits<double>::quiet_NaN(),
                                "no interior approach direction found"});
    } else {
        std::vector<double> values;
        for (int k = 0; k < opt.approach_steps; ++k) {
            const double d = rho0 * std::exp(-(std::ldexp(1.0, k) - 1.0));
            if (!(d > 1e-300)) break;
            const SpaceTimePoint p = along(zeta0, dir, d);
            if (!form.valid(p)) break;
            values.push_back(form.value(p));
        }
        const double lim = aitken_limit(values);
        const bool holds = values.size() >= 3 && std::abs(lim) <= opt.limit_fraction * std::abs(values.front());
        r.conditions.push_back({"limit_zero", holds, lim,
                                "Aitken limit of " + std::to_string(values.size()) + " approach values from " +
                                    (values.empty() ? std::string("-") : format_double(values.front()))});
    }

    const bool all = r.condition_holds("residual") && positive && r.condition_holds("boundary_margin") &&
                     r.condition_holds("limit_zero");
    if (r.verdict == Verdict::Refuted || !positive)
        r.verdict = Verdict::Refuted;
    else
        r.verdict = all ? Verdict::Certified : Verdict::Inconclusive;
    return r;
}

FamilyReport check_barrier_family(const FormFamily& family, const Region& region, const SpaceTimePoint& zeta0,
                                  const FamilyCheckOptions& opt) {
    if (opt.j_max < 1 || opt.k_max < 1) throw std::invalid_argument("check_barrier_family: j_max, k_max >= 1");
    if (opt.strong && !opt.distance) throw std::invalid_argument("check_barrier_family: strong mode needs d");
    FamilyReport out;
    bool refuted = false, all = true;
    for (int j = 1; j <= opt.j_max; ++j) {
        out.members.push_back(check_barrier(family(j), region, zeta0, opt.member));
        refuted |= out.members.back().verdict == Verdict::Refuted;
        all &= out.members.back().verdict == Verdict::Certified;
    }

    const double diam = diameter(region);
    std::vector<SpaceTimePoint> bnd;
    for (const auto& s : sample_boundary(region, opt.member.boundary_samples, opt.member.seed + 1))
        bnd.push_back(s.inside);
    const auto interior = sample_interior(region, opt.member.samples, opt.member.seed);

    // smallest j whose worst relative slack over pts is >= -1e-12 (rounding)
    auto search = [&](const std::vector<SpaceTimePoint>& pts, const std::function<double(const BarrierForm&, const SpaceTimePoint&)>& slack) {
        FamilyWitness w;
        for (int j = 1; j <= opt.j_search; ++j) {
            const BarrierForm f = family(j);
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& p : pts) {
                if (!f.valid(p)) continue;
                worst = std::min(worst, slack(f, p));
                if (worst < -1e-12) break;
            }
            if (worst >= -1e-12) {
                w.j = j;
                w.margin = std::isfinite(worst) ? worst : 0.0;
                return w;
            }
        }
        return w;
    };

    for (int k = 1; k <= opt.k_max; ++k) {
        std::vector<SpaceTimePoint> far;
        for (const auto& p : bnd)
            if (distance(p, zeta0) >= 1.0 / k) far.push_back(p);
        const double kk = k;
        FamilyWitness w = search(far, [kk](const BarrierForm& f, const SpaceTimePoint& p) {
            const double v = f.value(p);
            return (v - kk) / std::max({1.0, std::abs(v), kk});
        });
        w.k = k;
        all &= w.j.has_value();
        out.boundary_witnesses.push_back(w);
        if (opt.strong) {
            std::vector<SpaceTimePoint> pts = interior;
            pts.insert(pts.end(), bnd.begin(), bnd.end());
            const DistanceFunction& d = opt.distance;
            FamilyWitness s = search(pts, [kk, &d](const BarrierForm& f, const SpaceTimePoint& p) {
                const double v = f.value(p), kd = kk * d(p);
                return (v - kd) / std::max({1e-300, std::abs(v), std::abs(kd)});
            });
            s.k = k;
            all &= s.j.has_value();
            out.strong_witnesses.push_back(s);
        }
    }

    CertificateReport& sum = out.summary;
    sum.form = out.members.front().form + " family";
    sum.params = out.members.front().params;
    sum.side = opt.member.side;
    sum.equation = opt.member.equation;
    sum.tolerance = out.members.front().tolerance;
    sum.min_residual = std::numeric_limits<double>::infinity();
    sum.max_residual = -std::numeric_limits<double>::infinity();
    for (const auto& m : out.members) {
        sum.samples += m.samples;
        sum.min_residual = std::min(sum.min_residual, m.min_residual);
        sum.max_residual = std::max(sum.max_residual, m.max_residual);
        sum.violation_count += m.violation_count;
        for (const auto& v : m.violations)
            if (sum.violations.size() < CertificateReport::kMaxViolations) sum.violations.push_back(v);
    }
    for (const auto& w : out.boundary_witnesses)
        sum.conditions.push_back({"boundary_k" + std::to_string(w.k), w.j.has_value(), w.j ? *w.j : 0.0,
                                  "witness j with liminf w_j >= k away from zeta0"});
    for (const auto& w : out.strong_witnesses)
        sum.conditions.push_back({"strong_k" + std::to_string(w.k), w.j.has_value(), w.j ? *w.j : 0.0,
                                  "witness j with w_j >= k d"});
    sum.notes.push_back("diameter " + format_double(diam));
    sum.verdict = refuted ? Verdict::Refuted : all ? Verdict::Certified : Verdict::Inconclusive;
    return out;
}

}  // namespace infheat
