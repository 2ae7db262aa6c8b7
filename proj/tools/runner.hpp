#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "infheat/barriers.hpp"
#include "infheat/lattice.hpp"
#include "infheat/region.hpp"
#include "infheat/report.hpp"

namespace infheat::cli {

/// Config could not be read or parsed; message carries line/column.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config parsed but violates a constraint.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
};

struct RunResult {
    Json report;
    bool expectation_met = true;
    std::vector<std::string> mismatches;
};

/// Parses JSON text; errors report line and column.
Json parse_config(const std::string& text);

Region parse_region(const Json& j);
BarrierForm parse_form(const Json& j, const Region* region = nullptr);
/// Boundary data literal. Sets `oracle` when the data is an exact solution.
BoundaryData parse_data(const Json& j, std::size_t n, BoundaryData* oracle = nullptr);
SpaceTimePoint parse_point(const Json& j);

/// Runs one experiment config and writes report.json (plus fields.csv /
/// curves.csv where the experiment produces them) into opt.out_dir.
RunResult run_config(const Json& config, const RunOptions& opt);

/// Exit status 0 (ok / expectations met), 2 (expectation mismatch), 1 (error).
int run_file(const std::filesystem::path& path, const RunOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace infheat::cli
