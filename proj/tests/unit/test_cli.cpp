#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "runner.hpp"

using namespace infheat;
using namespace infheat::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("infheat_cli_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, ParseErrorCarriesLineAndColumn) {
    const std::string text = "{\n  \"experiment\": \"march\",\n  \"scheme\": {\"h\": }\n}";
    const auto msg = message_of([&] { parse_config(text); });
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column"), std::string::npos) << msg;
    EXPECT_THROW(parse_config(text), ParseError);
}

TEST(Config, RegionLiterals) {
    const auto cyl = parse_region(Json::parse(R"({"type":"cylinder","base":{"type":"box","lo":[0],"hi":[1]},"t":[0,0.5]})"));
    EXPECT_TRUE(cyl.contains(SpaceTimePoint({0.5}, 0.25)));
    EXPECT_FALSE(cyl.contains(SpaceTimePoint({0.5}, 0.75)));
    const auto diff = parse_region(Json::parse(
        R"({"type":"difference","of":[{"type":"cylinder","base":{"type":"box","lo":[0],"hi":[1]},"t":[0,1]},
            {"type":"space-time-ball","center":{"x":[0.5],"t":0.5},"radius":0.1}]})"));
    EXPECT_FALSE(diff.contains(SpaceTimePoint({0.5}, 0.5)));
    EXPECT_TRUE(diff.contains(SpaceTimePoint({0.1}, 0.5)));
    EXPECT_THROW(parse_region(Json::parse(R"({"type":"torus"})")), ValidationError);
    EXPECT_THROW(parse_region(Json::parse(R"({"type":"union","of":[{"type":"empty"}]})")), ValidationError);
    EXPECT_THROW(parse_point(Json::parse(R"({"x":[],"t":0})")), ValidationError);
}

TEST(Config, FormConstraintsAreValidated) {
    const auto box = parse_region(Json::parse(R"({"type":"cylinder","base":{"type":"box","lo":[0],"hi":[1]},"t":[0,1]})"));
    const auto msg = message_of([&] {
        parse_form(Json::parse(R"({"type":"QuadraticProbe","center":{"x":[0],"t":0},"eps":1.0})"), &box);
    });
    EXPECT_NE(msg.find("ε·diam"), std::string::npos) << msg;
    const auto sphere = message_of([&] {
        parse_form(Json::parse(R"({"type":"ExteriorSphere","center":{"x":[0],"t":0},"R0":1,"a":0.1,"delta":1})"));
    });
    EXPECT_NE(sphere.find("2aδ² ≥ 2R₀+1"), std::string::npos) << sphere;
    EXPECT_THROW(parse_form(Json::parse(R"({"type":"Nope"})")), ValidationError);
}

TEST(Config, SchemeCflIsValidated) {
    const Json cfg = Json::parse(R"({"experiment":"march",
        "region":{"type":"cylinder","base":{"type":"box","lo":[0],"hi":[1]},"t":[0,0.1]},
        "data":{"type":"constant","value":0},"scheme":{"h":0.1,"dt":0.01}})");
    const auto msg = message_of([&] { run_config(cfg, {scratch("cfl")}); });
    EXPECT_NE(msg.find("CFL"), std::string::npos) << msg;
    EXPECT_THROW(run_config(cfg, {scratch("cfl")}), ValidationError);
}

TEST(Config, DataLiterals) {
    BoundaryData oracle;
    const auto g = parse_data(Json::parse(R"({"type":"heat-sine"})"), 1, &oracle);
    ASSERT_TRUE(static_cast<bool>(oracle));
    const double x = 1.0;
    EXPECT_DOUBLE_EQ(g(std::span<const double>(&x, 1), 0.0), std::sin(1.0));
    const auto a = parse_data(Json::parse(R"({"type":"affine","coeffs":[2],"offset":1,"rate":3})"), 1);
    EXPECT_DOUBLE_EQ(a(std::span<const double>(&x, 1), 0.5), 4.5);
    EXPECT_THROW(parse_data(Json::parse(R"({"type":"affine","coeffs":[1,2]})"), 1), ValidationError);
    EXPECT_THROW(parse_data(Json::parse(R"({"type":"heat-sine"})"), 2), ValidationError);
}

TEST(Run, MarchWritesReportAndFields) {
    const auto dir = scratch("march");
    const Json cfg = Json::parse(R"({"experiment":"march","seed":7,
        "region":{"type":"cylinder","base":{"type":"box","lo":[0],"hi":[3.141592653589793]},"t":[0,0.2]},
        "data":{"type":"heat-sine"},"scheme":{"h":0.02},"expect":{"maxError":0.05}})");
    const auto r = run_config(cfg, {dir});
    EXPECT_TRUE(r.expectation_met);
    ASSERT_TRUE(std::filesystem::exists(dir / "report.json"));
    ASSERT_TRUE(std::filesystem::exists(dir / "fields.csv"));
    std::ifstream f(dir / "report.json");
    const Json back = Json::parse(f);
    EXPECT_EQ(back, r.report);
    EXPECT_EQ(back["experiment"], "march");
    EXPECT_EQ(back["seed"], 7);
    EXPECT_LE(back["result"]["maxError"].get<double>(), 0.05);
}

TEST(Run, SeedOverrideAndDeterminism) {
    const Json cfg = Json::parse(R"({"experiment":"certify","seed":1,
        "region":{"type":"petrovsky","n":1,"factor":4,"cutoff":0.1},
        "form":{"type":"PetrovskyBarrier","delta":0.25},"side":"super","samples":200})");
    RunOptions a{scratch("seed_a"), 99};
    RunOptions b{scratch("seed_b"), 99};
    const auto ra = run_config(cfg, a);
    const auto rb = run_config(cfg, b);
    EXPECT_EQ(ra.report["seed"], 99);
    EXPECT_EQ(ra.report.dump(), rb.report.dump());
    EXPECT_EQ(ra.report["result"]["verdict"], "certified");
}

TEST(Run, NorthContactBelowOneIsNotedNotRejected) {
    const Json cfg = Json::parse(R"({"experiment":"exterior-sphere","contact":"north","R0":0.5,"samples":100})");
    const auto r = run_config(cfg, {scratch("north")});
    ASSERT_TRUE(r.report["result"].contains("notes"));
    EXPECT_NE(r.report["result"]["notes"].dump().find("no claim"), std::string::npos);
}

TEST(Run, ExitCodes) {
    const auto dir = scratch("exit");
    std::ostringstream out, err;

    const auto ok = dir / "ok.json";
    std::ofstream(ok) << R"({"experiment":"certify","region":{"type":"petrovsky","n":1,"factor":4,"cutoff":0.1},
        "form":{"type":"PetrovskyBarrier"},"samples":100,"expect":{"verdict":"certified"}})";
    EXPECT_EQ(run_file(ok, {dir / "ok"}, out, err), 0) << err.str();

    const auto bad = dir / "mismatch.json";
    std::ofstream(bad) << R"({"experiment":"certify","region":{"type":"petrovsky","n":1,"factor":4,"cutoff":0.1},
        "form":{"type":"PetrovskyBarrier"},"samples":100,"expect":{"verdict":"refuted"}})";
    err.str("");
    EXPECT_EQ(run_file(bad, {dir / "bad"}, out, err), 2);
    EXPECT_NE(err.str().find("expectation mismatch"), std::string::npos);

    const auto broken = dir / "broken.json";
    std::ofstream(broken) << "{\"experiment\": ";
    err.str("");
    EXPECT_EQ(run_file(broken, {dir / "broken"}, out, err), 1);
    EXPECT_NE(err.str().find("line 1"), std::string::npos) << err.str();

    err.str("");
    EXPECT_EQ(run_file(dir / "missing.json", {dir}, out, err), 1);
    const auto unknown = dir / "unknown.json";
    std::ofstream(unknown) << R"({"experiment":"teleport"})";
    err.str("");
    EXPECT_EQ(run_file(unknown, {dir / "unknown"}, out, err), 1);
    EXPECT_NE(err.str().find("invalid config"), std::string::npos);
}
