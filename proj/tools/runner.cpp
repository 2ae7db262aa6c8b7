#include "runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "infheat/certify.hpp"
#include "infheat/format.hpp"
#include "infheat/regularity.hpp"
#include "infheat/scheme.hpp"

namespace infheat::cli {

namespace {

std::vector<double> vec(const Json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
    const Json& v = j.at(key);
    if (v.is_number()) return {v.get<double>()};
    return v.get<std::vector<double>>();
}

double num(const Json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
    return j.at(key).get<double>();
}

double num(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::string type_of(const Json& j, const char* what) {
    if (!j.is_object() || !j.contains("type"))
        throw ValidationError(std::string(what) + " literal needs a \"type\" field");
    return j.at("type").get<std::string>();
}

SpatialShape parse_shape(const Json& j) {
    const std::string type = type_of(j, "shape");
    if (type == "box") return SpatialShape::box(vec(j, "lo"), vec(j, "hi"));
    if (type == "ball") return SpatialShape::ball(vec(j, "center"), num(j, "radius"));
    throw ValidationError("unknown shape type \"" + type + "\"");
}

TimeSide parse_side(const Json& j) {
    const std::string s = j.get<std::string>();
    if (s == "before") return TimeSide::Before;
    if (s == "after") return TimeSide::After;
    throw ValidationError("time side must be \"before\" or \"after\"");
}

SchemeConfig parse_scheme(const Json& j) {
    SchemeConfig c;
    if (j.is_null()) return c;
    c.h = num(j, "h", c.h);
    c.K = static_cast<int>(num(j, "K", c.K));
    c.dirs = static_cast<int>(num(j, "dirs", c.dirs));
    c.dt = num(j, "dt", c.dt);
    c.max_iter = static_cast<int>(num(j, "maxIter", c.max_iter));
    c.fix_tol = num(j, "fixTol", c.fix_tol);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return c;
}

std::vector<Resolution> parse_schedule(const Json& j) {
    if (!j.is_array()) throw ValidationError("schedule must be a list of resolutions");
    std::vector<Resolution> out;
    for (const auto& e : j) {
        Resolution r;
        r.h = num(e, "h");
        r.K = static_cast<int>(num(e, "K", r.K));
        r.dirs = static_cast<int>(num(e, "dirs", r.dirs));
        r.dt = num(e, "dt", r.dt);
        try {
            r.config().validate();
        } catch (const std::invalid_argument& ex) {
            throw ValidationError(ex.what());
        }
        out.push_back(r);
    }
    if (out.size() < 2) throw ValidationError("schedule needs at least two resolutions");
    return out;
}

ClassifyOptions parse_classify_options(const Json& cfg) {
    ClassifyOptions o;
    o.probe_eps = num(cfg, "probeEps", 0.0);
    if (cfg.contains("direction")) o.direction = vec(cfg, "direction");
    o.max_probes = static_cast<int>(num(cfg, "maxProbes", o.max_probes));
    if (cfg.contains("thresholds")) {
        const Json& t = cfg.at("thresholds");
        o.thresholds.regular = num(t, "regular", o.thresholds.regular);
        o.thresholds.irregular = num(t, "irregular", o.thresholds.irregular);
        o.thresholds.shrink = num(t, "shrink", o.thresholds.shrink);
    }
    return o;
}

Side parse_cert_side(const Json& cfg) {
    const std::string s = cfg.value("side", std::string("super"));
    if (s == "super") return Side::Super;
    if (s == "sub") return Side::Sub;
    throw ValidationError("side must be \"super\" or \"sub\"");
}

Equation parse_equation(const Json& cfg) {
    const std::string s = cfg.value("equation", std::string("normalized"));
    if (s == "normalized") return Equation::Normalized;
    if (s == "non-normalized") return Equation::NonNormalized;
    throw ValidationError("equation must be \"normalized\" or \"non-normalized\"");
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const Json& required(const Json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << s;
}

struct Expectations {
    const Json* spec = nullptr;
    RunResult* result = nullptr;

    void verdict(const std::string& got) const {
        if (spec && spec->contains("verdict")) {
            const auto want = spec->at("verdict").get<std::string>();
            if (want != got) result->mismatches.push_back("verdict " + got + " != expected " + want);
        }
    }
    void at_most(const char* key, double got) const {
        if (spec && spec->contains(key)) {
            const double want = spec->at(key).get<double>();
            if (!(got <= want))
                result->mismatches.push_back(std::string(key) + " " + format_double(got) + " > " + format_double(want));
        }
    }
    void flag(const char* key, bool got) const {
        if (spec && spec->contains(key) && spec->at(key).get<bool>() != got)
            result->mismatches.push_back(std::string(key) + " is " + (got ? "true" : "false"));
    }
};

}  // namespace

Json parse_config(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        const auto pos = msg.find("; ");
        if (pos != std::string::npos) msg = msg.substr(pos + 2);
        throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         msg);
    }
}

SpaceTimePoint parse_point(const Json& j) {
    if (!j.is_object()) throw ValidationError("point literal must be {\"x\": [...], \"t\": ...}");
    SpaceTimePoint p(vec(j, "x"), num(j, "t"));
    if (p.dim() < 1 || !p.finite()) throw ValidationError("point needs n >= 1 finite components");
    return p;
}

Region parse_region(const Json& j) {
    const std::string type = type_of(j, "region");
    try {
        if (type == "cylinder") {
            const auto t = vec(j, "t");
            if (t.size() != 2) throw ValidationError("cylinder \"t\" must be [t0, t1]");
            return Region::cylinder(parse_shape(required(j, "base")), t[0], t[1]);
        }
        if (type == "space-time-ball") return Region::space_time_ball(parse_point(required(j, "center")), num(j, "radius"));
        if (type == "petrovsky")
            return Region::petrovsky(static_cast<std::size_t>(num(j, "n", 1)), num(j, "factor"), num(j, "cutoff"),
                                     num(j, "tFloor", kDefaultTimeFloor));
        if (type == "heat-ball")
            return Region::heat_ball(parse_point(required(j, "center")), num(j, "level"),
                                     num(j, "tFloor", kDefaultTimeFloor));
        if (type == "half-space")
            return Region::half_space(static_cast<std::size_t>(num(j, "n", 1)), num(j, "tau"),
                                      parse_side(required(j, "side")));
        if (type == "irregular-subdomain")
            return Region::irregular_subdomain(static_cast<std::size_t>(num(j, "n", 1)), num(j, "k"),
                                               num(j, "alpha"), num(j, "level"), num(j, "cutoff"),
                                               num(j, "tFloor", kDefaultTimeFloor));
        if (type == "empty") return Region::empty(static_cast<std::size_t>(num(j, "n", 1)));
        if (type == "clip")
            return clip_time(parse_region(required(j, "region")), num(j, "t0"), parse_side(required(j, "side")));
        if (type == "union" || type == "intersection" || type == "difference") {
            const Json& of = required(j, "of");
            if (!of.is_array() || of.size() < 2) throw ValidationError(type + " needs \"of\" with >= 2 regions");
            const CsgOp op = type == "union" ? CsgOp::Union : type == "intersection" ? CsgOp::Intersection
                                                                                       : CsgOp::Difference;
            Region r = parse_region(of[0]);
            for (std::size_t i = 1; i < of.size(); ++i) r = Region::combine(op, r, parse_region(of[i]));
            return r;
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    throw ValidationError("unknown region type \"" + type + "\"");
}

BarrierForm parse_form(const Json& j, const Region* region) {
    const std::string type = type_of(j, "form");
    const auto kind = form_kind_from_string(type);
    if (!kind) throw ValidationError("unknown form type \"" + type + "\"");
    auto n_of = [&]() { return static_cast<std::size_t>(num(j, "n", region ? static_cast<double>(region->dim()) : 1.0)); };
    try {
        std::optional<BarrierForm> f;
        switch (*kind) {
            case FormKind::QuadraticProbe: {
                const double eps = num(j, "eps");
                if (region) {
                    const double d = diameter(*region);
                    if (!(eps * d < 1.0))
                        throw ValidationError("ε·diam(Ω) must be < 1 (ε·diam = " + format_double(eps * d) + ")");
                }
                f = quadratic_probe(parse_point(required(j, "center")), eps);
                break;
            }
            case FormKind::BottomBarrier: f = bottom_barrier(parse_point(required(j, "base"))); break;
            case FormKind::ExteriorSphere: {
                const double R0 = num(j, "R0");
                double a = num(j, "a", 0.0);
                if (j.contains("delta")) {
                    const double delta = num(j, "delta");
                    if (a <= 0.0) a = exterior_sphere_rate(R0, delta);
                    if (2.0 * a * delta * delta < (2.0 * R0 + 1.0) * (1.0 - 1e-12))
                        throw ValidationError("2aδ² ≥ 2R₀+1 violated (2aδ² = " + format_double(2 * a * delta * delta) +
                                              ")");
                }
                if (a <= 0.0) throw ValidationError("ExteriorSphere needs \"a\" > 0 or \"delta\"");
                f = exterior_sphere(parse_point(required(j, "center")), R0, a);
                break;
            }
            case FormKind::PetrovskyBarrier: f = petrovsky_barrier(n_of(), num(j, "delta", 0.25)); break;
            case FormKind::IrregularityFunction:
                f = irregularity_function(n_of(), num(j, "k"), num(j, "alpha"));
                break;
            case FormKind::FundamentalW: f = fundamental_w(parse_point(required(j, "center"))); break;
            case FormKind::WallBarrier: {
                const SpatialShape dom = parse_shape(required(j, "domain"));
                const auto x0 = vec(j, "x0");
                if (x0.size() != dom.dim()) throw ValidationError("WallBarrier x0 dimension mismatch");
                const SchemeConfig cfg = parse_scheme(j.value("scheme", Json()));
                auto res = stationary_solve(dom, -1.0, [x0](std::span<const double> x) {
                    return std::sqrt(squared_distance(x, x0));
                }, cfg);
                f = wall_barrier(res.field, num(j, "t0"));
                break;
            }
            case FormKind::AppendixFamily: {
                const auto c = parse_point(required(j, "center"));
                const int jj = static_cast<int>(num(j, "j"));
                if (j.contains("beta") || j.contains("alpha") || j.contains("m")) {
                    const double d = region ? diameter(*region) : num(j, "diam");
                    f = appendix_family(c, jj, num(j, "alpha", 1.0), num(j, "beta", 1.0 / (2.0 * d)), num(j, "m", 3.0));
                } else {
                    f = appendix_family(c, jj, region ? diameter(*region) : num(j, "diam"));
                }
                break;
            }
            case FormKind::TopShift:
                f = top_shift(parse_form(required(j, "base"), region), num(j, "eps"), num(j, "T"));
                break;
        }
        if (j.value("negate", false)) return -*f;
        return *f;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

BoundaryData parse_data(const Json& j, std::size_t n, BoundaryData* oracle) {
    const std::string type = type_of(j, "data");
    if (type == "constant") {
        const double c = num(j, "value");
        return [c](std::span<const double>, double) { return c; };
    }
    if (type == "affine") {
        auto c = vec(j, "coeffs");
        if (c.size() != n) throw ValidationError("affine coeffs must have n entries");
        const double b = num(j, "offset", 0.0), r = num(j, "rate", 0.0);
        return [c, b, r](std::span<const double> x, double t) {
            double s = b + r * t;
            for (std::size_t i = 0; i < x.size(); ++i) s += c[i] * x[i];
            return s;
        };
    }
    if (type == "heat-sine") {
        // e^{-t} sin x: the exact solution in one space dimension
        BoundaryData g = [](std::span<const double> x, double t) { return std::exp(-t) * std::sin(x[0]); };
        if (n != 1) throw ValidationError("heat-sine data needs n = 1");
        if (oracle) *oracle = g;
        return g;
    }
    if (type == "quadratic-probe") {
        const auto c = parse_point(required(j, "center"));
        if (c.dim() != n) throw ValidationError("probe center dimension mismatch");
        const double e = num(j, "eps");
        return [c, e](std::span<const double> x, double t) {
            return squared_distance(x, c.x) + e * (t - c.t) * (t - c.t);
        };
    }
    if (type == "distance") {
        const auto c = vec(j, "center");
        if (c.size() != n) throw ValidationError("distance center dimension mismatch");
        return [c](std::span<const double> x, double) { return std::sqrt(squared_distance(x, c)); };
    }
    throw ValidationError("unknown data type \"" + type + "\"");
}

RunResult run_config(const Json& config, const RunOptions& opt) {
    if (!config.is_object()) throw ValidationError("config must be an object");
    const std::string kind = required(config, "experiment").get<std::string>();
    const std::uint64_t seed = opt.seed ? *opt.seed : config.value("seed", std::uint64_t{0});
    const Json* expect = config.contains("expect") ? &config.at("expect") : nullptr;
    std::filesystem::create_directories(opt.out_dir);

    RunResult out;
    Expectations ex{expect, &out};
    Json result;
    std::vector<std::pair<std::string, RegularityReport>> curves;

    if (kind == "march") {
        const Region region = parse_region(required(config, "region"));
        const SchemeConfig cfg = parse_scheme(config.value("scheme", Json()));
        BoundaryData oracle;
        const BoundaryData g = parse_data(required(config, "data"), region.dim(), &oracle);
        const bool dpp = config.value("dpp", false);
        LatticeField field = dpp ? dpp_march(region, g, cfg) : march(region, g, cfg);
        result["slices"] = field.slice_count();
        result["nodes"] = field.lattice().grid().size();
        result["eps"] = cfg.eps();
        result["dt"] = cfg.time_step();
        if (oracle) {
            double err = 0.0;
            std::vector<double> x(region.dim());
            for (std::size_t s = 0; s < field.slice_count(); ++s) {
                const auto vals = field.values(s);
                const auto mask = field.mask(s);
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    if (!mask[i]) continue;
                    field.lattice().grid().position(i, x);
                    err = std::max(err, std::abs(vals[i] - oracle(x, field.time(s))));
                }
            }
            result["maxError"] = err;
            ex.at_most("maxError", err);
        }
        std::ofstream f(opt.out_dir / "fields.csv", std::ios::binary);
        field.write_csv(f);
    } else if (kind == "stationary") {
        const SpatialShape dom = parse_shape(required(config, "domain"));
        const double rhs = num(config, "rhs", -1.0);
        const SchemeConfig cfg = parse_scheme(config.value("scheme", Json()));
        const BoundaryData g = parse_data(required(config, "phi"), dom.dim());
        SpatialData phi = [g](std::span<const double> x) { return g(x, 0.0); };
        std::ostringstream log;
        const auto res = stationary_solve(dom, rhs, phi, cfg, &log);
        result["iterations"] = res.iterations;
        result["lastChange"] = res.last_change;
        result["fixedPointError"] = res.fixed_point_error;
        const auto& fld = *res.field;
        std::ofstream f(opt.out_dir / "fields.csv", std::ios::binary);
        f << "node";
        for (std::size_t d = 0; d < dom.dim(); ++d) f << ",x" << d;
        f << ",value\n";
        std::vector<double> x(dom.dim());
        double err = 0.0;
        for (std::size_t i = 0; i < fld.values().size(); ++i) {
            if (!fld.mask()[i]) continue;
            fld.grid().position(i, x);
            f << i;
            for (double v : x) f << ',' << format_double(v);
            f << ',' << format_double(fld.values()[i]) << '\n';
            if (dom.dim() == 1 && dom.kind() == SpatialShape::Kind::Box) {
                // nu'' = rhs with nu = phi at both ends
                const double a = dom.lo()[0], b = dom.hi()[0];
                const double pa = phi(std::span<const double>(&a, 1)), pb = phi(std::span<const double>(&b, 1));
                const double exact = pa + (x[0] - a) * (pb - pa) / (b - a) - rhs * (x[0] - a) * (b - x[0]) / 2.0;
                err = std::max(err, std::abs(fld.values()[i] - exact));
            }
        }
        if (dom.dim() == 1 && dom.kind() == SpatialShape::Kind::Box) {
            result["maxError"] = err;
            ex.at_most("maxError", err);
        }
        result["log"] = log.str();
    } else if (kind == "certify") {
        const Region region = parse_region(required(config, "region"));
        const BarrierForm form = parse_form(required(config, "form"), &region);
        const auto samples = static_cast<std::size_t>(num(config, "samples", 1000));
        const double tol = num(config, "tol", 1e-9);
        CertificateReport r;
        if (config.contains("logTime")) {
            const Json& lt = config.at("logTime");
            r = certify_log_time(form, region, parse_cert_side(config), samples, seed, tol, num(lt, "Lmin", 0.0),
                                 num(lt, "Lmax", 1e300));
        } else {
            r = certify(form, region, parse_cert_side(config), samples, seed, tol, parse_equation(config));
        }
        result = to_json(r);
        ex.verdict(std::string(to_string(r.verdict)));
    } else if (kind == "check-barrier") {
        const Region region = parse_region(required(config, "region"));
        const BarrierForm form = parse_form(required(config, "form"), &region);
        BarrierCheckOptions o;
        o.samples = static_cast<std::size_t>(num(config, "samples", 500));
        o.seed = seed;
        o.side = parse_cert_side(config);
        o.equation = parse_equation(config);
        o.rho = num(config, "rho", 0.0);
        const auto r = check_barrier(form, region, parse_point(required(config, "zeta0")), o);
        result = to_json(r);
        ex.verdict(std::string(to_string(r.verdict)));
    } else if (kind == "barrier-family") {
        const Region region = parse_region(required(config, "region"));
        const Json& fam = required(config, "family");
        const SpaceTimePoint c = parse_point(required(fam, "center"));
        const double diam = num(fam, "diam", diameter(region));
        const double alpha = num(fam, "alpha", 1.0), beta = num(fam, "beta", 1.0 / (2.0 * diam)),
                     m = num(fam, "m", 3.0);
        const bool negate = fam.value("negate", false);
        FamilyCheckOptions o;
        o.member.samples = static_cast<std::size_t>(num(config, "samples", 300));
        o.member.seed = seed;
        o.member.side = parse_cert_side(config);
        o.member.equation = parse_equation(config);
        o.j_max = static_cast<int>(num(config, "jMax", 8));
        o.k_max = static_cast<int>(num(config, "kMax", 8));
        o.strong = config.value("strong", false);
        o.distance = [c, diam](const SpaceTimePoint& p) { return appendix_distance(c, diam, p); };
        const auto r = check_barrier_family(
            [&](int j) {
                auto f = appendix_family(c, j, alpha, beta, m);
                return negate ? -f : f;
            },
            region, parse_point(required(config, "zeta0")), o);
        result = to_json(r);
        ex.verdict(std::string(to_string(r.summary.verdict)));
    } else if (kind == "classify") {
        const Region region = parse_region(required(config, "region"));
        const auto r = classify(region, parse_point(required(config, "zeta0")),
                                parse_schedule(required(config, "schedule")), parse_classify_options(config));
        result = to_json(r);
        curves.emplace_back("classify", r);
        ex.verdict(std::string(to_string(r.verdict)));
    } else if (kind == "exterior-sphere") {
        const auto contact = contact_from_string(required(config, "contact").get<std::string>());
        if (!contact) throw ValidationError("contact must be north, south or side");
        const double R0 = num(config, "R0");
        const std::vector<Resolution> sched =
            config.contains("schedule") ? parse_schedule(config.at("schedule")) : std::vector<Resolution>{};
        const auto e = exterior_sphere_experiment(*contact, R0, sched,
                                                  static_cast<std::size_t>(num(config, "samples", 500)), seed,
                                                  parse_classify_options(config));
        result = to_json(e);
        if (*contact == Contact::North && R0 < 1.0)
            result["notes"].push_back("north contact with R0 < 1 is outside the proven range; no claim is made");
        if (e.regularity) curves.emplace_back(std::string(to_string(*contact)), *e.regularity);
        if (expect && expect->contains("certificate")) {
            const auto want = expect->at("certificate").get<std::string>();
            if (want != to_string(e.certificate.verdict))
                out.mismatches.push_back("certificate " + std::string(to_string(e.certificate.verdict)) +
                                         " != expected " + want);
        }
        if (e.regularity) ex.verdict(std::string(to_string(e.regularity->verdict)));
    } else if (kind == "petrovsky-sweep") {
        const auto factors = vec(config, "factors");
        const auto reports = petrovsky_sweep(factors, num(config, "cutoff", 0.1),
                                             parse_schedule(required(config, "schedule")),
                                             parse_classify_options(config));
        Json arr = Json::array();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            Json e = to_json(reports[i]);
            e["factor"] = factors[i];
            arr.push_back(e);
            curves.emplace_back("A=" + format_double(factors[i]), reports[i]);
        }
        result["reports"] = arr;
        if (expect && expect->contains("verdicts")) {
            const auto want = expect->at("verdicts").get<std::vector<std::string>>();
            for (std::size_t i = 0; i < reports.size() && i < want.size(); ++i)
                if (want[i] != to_string(reports[i].verdict))
                    out.mismatches.push_back("A=" + format_double(factors[i]) + ": " +
                                             std::string(to_string(reports[i].verdict)) + " != expected " + want[i]);
        }
    } else if (kind == "heat-ball") {
        const auto r = heat_ball_experiment(num(config, "level"), parse_schedule(required(config, "schedule")),
                                            parse_classify_options(config));
        result = to_json(r);
        curves.emplace_back("heat-ball", r);
        ex.verdict(std::string(to_string(r.verdict)));
    } else if (kind == "future-blindness") {
        const Region region = parse_region(required(config, "region"));
        const BoundaryData g = parse_data(required(config, "data"), region.dim());
        const BoundaryData p = parse_data(required(config, "perturbation"), region.dim());
        const std::vector<Resolution> sched =
            config.contains("schedule") ? parse_schedule(config.at("schedule")) : std::vector<Resolution>{};
        const auto r = future_blindness_test(region, parse_point(required(config, "zeta0")), g, p,
                                             parse_scheme(config.value("scheme", Json())), sched,
                                             parse_classify_options(config));
        result = to_json(r);
        ex.flag("bitIdentical", r.bit_identical);
    } else {
        throw ValidationError("unknown experiment \"" + kind + "\"");
    }

    if (!curves.empty()) {
        std::ofstream f(opt.out_dir / "curves.csv", std::ios::binary);
        write_curves_csv(f, curves);
    }
    out.expectation_met = out.mismatches.empty();
    Json report;
    report["experiment"] = kind;
    report["seed"] = seed;
    report["result"] = result;
    if (expect) report["expect"] = *expect;
    report["expectationMet"] = out.expectation_met;
    report["mismatches"] = out.mismatches;
    write_text(opt.out_dir / "report.json", report.dump(2) + "\n");
    out.report = std::move(report);
    return out;
}

int run_file(const std::filesystem::path& path, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw ParseError("cannot open " + path.string());
        std::stringstream ss;
        ss << f.rdbuf();
        const Json config = parse_config(ss.str());
        const RunResult r = run_config(config, opt);
        out << "report: " << (opt.out_dir / "report.json").string() << '\n';
        for (const auto& m : r.mismatches) err << "expectation mismatch: " << m << '\n';
        return r.expectation_met ? 0 : 2;
    } catch (const ParseError& e) {
        err << e.what() << '\n';
    } catch (const ValidationError& e) {
        err << "invalid config: " << e.what() << '\n';
    } catch (const nlohmann::json::exception& e) {
        err << "invalid config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace infheat::cli
