#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infheat/certify.hpp"
#include "infheat/regularity.hpp"

namespace infheat {

using Json = nlohmann::ordered_json;

Json to_json(const SpaceTimePoint& p);
Json to_json(const std::vector<FormParam>& params);
Json to_json(const CertificateReport& r);
Json to_json(const FamilyReport& r);
Json to_json(const RegularityReport& r);
Json to_json(const FutureBlindnessResult& r);
Json to_json(const ExteriorSphereExperiment& e);

/// Rows label,h,distance,value for every probe of every series.
void write_curves_csv(std::ostream& os, const std::vector<std::pair<std::string, RegularityReport>>& reports);

}  // namespace infheat
