#include "infheat/report.hpp"

#include <cmath>
#include <ostream>

#include "infheat/format.hpp"

namespace infheat {

namespace {

// Non-finite doubles become null so the document stays valid JSON.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json nums(const std::vector<double>& v) {
    Json a = Json::array();
    for (double d : v) a.push_back(num(d));
    return a;
}

}  // namespace

Json to_json(const SpaceTimePoint& p) {
    Json j;
    j["x"] = nums(p.x);
    j["t"] = num(p.t);
    return j;
}

Json to_json(const std::vector<FormParam>& params) {
    Json j = Json::object();
    for (const auto& p : params) j[p.name] = p.values.size() == 1 ? num(p.values[0]) : nums(p.values);
    return j;
}

Json to_json(const CertificateReport& r) {
    Json j;
    j["form"] = r.form;
    j["params"] = to_json(r.params);
    j["side"] = std::string(to_string(r.side));
    j["equation"] = std::string(to_string(r.equation));
    j["samples"] = r.samples;
    j["tolerance"] = num(r.tolerance);
    j["minResidual"] = num(r.min_residual);
    j["maxResidual"] = num(r.max_residual);
    j["verdict"] = std::string(to_string(r.verdict));
    j["degenerateSamples"] = r.degenerate_count;
    j["violationCount"] = r.violation_count;
    Json v = Json::array();
    for (const auto& s : r.violations)
        v.push_back({{"point", to_json(s.point)}, {"residual", num(s.residual)}, {"rule", std::string(to_string(s.rule))}});
    j["violations"] = v;
    Json c = Json::array();
    for (const auto& k : r.conditions)
        c.push_back({{"name", k.name}, {"holds", k.holds}, {"measured", num(k.measured)}, {"detail", k.detail}});
    j["conditions"] = c;
    j["notes"] = r.notes;
    return j;
}

Json to_json(const FamilyReport& r) {
    Json j = to_json(r.summary);
    Json m = Json::array();
    for (const auto& c : r.members) m.push_back(to_json(c));
    j["members"] = m;
    auto wit = [](const std::vector<FamilyWitness>& ws) {
        Json a = Json::array();
        for (const auto& w : ws)
            a.push_back({{"k", w.k}, {"j", w.j ? Json(*w.j) : Json(nullptr)}, {"margin", num(w.margin)}});
        return a;
    };
    j["boundaryWitnesses"] = wit(r.boundary_witnesses);
    j["strongWitnesses"] = wit(r.strong_witnesses);
    return j;
}

Json to_json(const RegularityReport& r) {
    Json j;
    j["zeta0"] = to_json(r.zeta0);
    j["region"] = r.region;
    j["probeEps"] = num(r.probe_eps);
    j["supPsi"] = num(r.sup_psi);
    j["direction"] = nums(r.direction);
    j["rho0"] = num(r.rho0);
    j["thresholds"] = {{"regular", num(r.thresholds.regular)},
                       {"irregular", num(r.thresholds.irregular)},
                       {"shrink", num(r.thresholds.shrink)}};
    Json res = Json::array();
    for (const auto& s : r.series) {
        Json e;
        e["h"] = num(s.resolution.h);
        e["K"] = s.resolution.K;
        e["dirs"] = s.resolution.dirs;
        e["eps"] = num(s.eps);
        e["dt"] = num(s.dt);
        e["distances"] = nums(s.distances);
        e["values"] = nums(s.values);
        e["rates"] = nums(s.rates);
        e["power"] = num(s.power);
        e["limit"] = num(s.limit);
        e["ratio"] = num(s.ratio);
        e["slicesMarched"] = s.slices_marched;
        res.push_back(e);
    }
    j["resolutions"] = res;
    j["verdict"] = std::string(to_string(r.verdict));
    j["evidence"] = r.evidence;
    return j;
}

Json to_json(const FutureBlindnessResult& r) {
    Json j;
    j["bitIdentical"] = r.bit_identical;
    j["slicesCompared"] = r.slices_compared;
    j["verdictFull"] = r.verdict_full ? Json(std::string(to_string(*r.verdict_full))) : Json(nullptr);
    j["verdictPast"] = r.verdict_past ? Json(std::string(to_string(*r.verdict_past))) : Json(nullptr);
    j["verdictsAgree"] = r.verdicts_agree;
    return j;
}

Json to_json(const ExteriorSphereExperiment& e) {
    Json j;
    j["region"] = e.region.describe();
    j["zeta0"] = to_json(e.zeta0);
    j["center"] = to_json(e.center);
    j["R0"] = num(e.R0);
    j["a"] = num(e.a);
    j["certificate"] = to_json(e.certificate);
    j["regularity"] = e.regularity ? to_json(*e.regularity) : Json(nullptr);
    return j;
}

void write_curves_csv(std::ostream& os, const std::vector<std::pair<std::string, RegularityReport>>& reports) {
    os << "label,h,distance,value\n";
    for (const auto& [label, r] : reports)
        for (const auto& s : r.series)
            for (std::size_t i = 0; i < s.values.size(); ++i)
                os << label << ',' << format_double(s.resolution.h) << ',' << format_double(s.distances[i]) << ','
                   << format_double(s.values[i]) << '\n';
}

}  // namespace infheat
