#include <cmath>

#include <gtest/gtest.h>

#include "infheat/certify.hpp"
#include "infheat/report.hpp"
#include "oracles.hpp"

using namespace infheat;

TEST(Certify, PetrovskyBarrierOnFactorFour) {
    const auto r = certify(petrovsky_barrier(1, 0.25), Region::petrovsky(1, 4.0, 0.1), Side::Super, 400, 1);
    EXPECT_EQ(r.verdict, Verdict::Certified);
    EXPECT_EQ(r.violation_count, 0u);
    EXPECT_EQ(r.samples, 400u);
    EXPECT_GT(r.min_residual, 0.0);
}

TEST(Certify, ExteriorSphereAwayFromTheBall) {
    const double R0 = 1.0, delta = 1.2;
    const Region far = Region::cylinder(SpatialShape::box({1.2}, {2.5}), -1.0, 1.0);
    const auto ok = certify(exterior_sphere(SpaceTimePoint({0.0}, 0.0), R0, exterior_sphere_rate(R0, delta)), far,
                            Side::Super, 400, 2);
    EXPECT_EQ(ok.verdict, Verdict::Certified);
}

TEST(Certify, ExteriorSphereBelowTheSouthPoleIsRefuted) {
    const double R0 = 1.0;
    const Region below = Region::cylinder(SpatialShape::box({-0.3}, {0.3}), -2.0, -R0);
    const auto r = certify(exterior_sphere(SpaceTimePoint({0.0}, 0.0), R0, exterior_sphere_rate(R0, 0.3)), below,
                           Side::Super, 400, 3);
    EXPECT_EQ(r.verdict, Verdict::Refuted);
    EXPECT_GT(r.violation_count, 0u);
    EXPECT_LE(r.violations.size(), CertificateReport::kMaxViolations);
    EXPECT_LT(r.violations.front().residual, 0.0);
}

TEST(Certify, RefusesSamplesOutsideValidityOrPremise) {
    EXPECT_THROW(certify(petrovsky_barrier(1, 0.25), Region::cylinder(SpatialShape::box({0.0}, {1.0}), -0.5, 0.5),
                         Side::Super, 50, 1),
                 std::domain_error);
    try {
        certify(irregularity_function(1, 0.9, 0.05), Region::petrovsky(1, 8.0, 0.1), Side::Sub, 50, 1);
        FAIL() << "premise should fail at double-range times";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("sample 0"), std::string::npos);
    }
    EXPECT_THROW(certify(quadratic_probe(SpaceTimePoint({0.0}, 0.0), 1.0),
                         Region::cylinder(SpatialShape::box({0.0, 0.0}, {1.0, 1.0}), 0.0, 1.0), Side::Sub, 10, 1),
                 std::invalid_argument);
}

TEST(Certify, QuadraticProbeNeedsSmallEps) {
    const Region r = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 1.0);
    const SpaceTimePoint c({0.5}, 0.0);
    EXPECT_NO_THROW(certify(quadratic_probe(c, 0.5), r, Side::Sub, 50, 1));
    EXPECT_THROW(certify(quadratic_probe(c, 1.0), r, Side::Sub, 50, 1), std::domain_error);
}

TEST(CertifyLogTime, IrregularityFunctionBeyondThePremise) {
    const Region sub = Region::irregular_subdomain(1, 0.9, 0.05, -1.0, -0.01);
    const BarrierForm f = irregularity_function(1, 0.9, 0.05);
    const auto r = certify_log_time(f, sub, Side::Sub, 300, 4);
    EXPECT_EQ(r.verdict, Verdict::Certified);
    EXPECT_LT(r.max_residual, 0.0);
    EXPECT_THROW(certify_log_time(f, sub, Side::Sub, 10, 4, 1e-9, 100.0), std::domain_error);
    EXPECT_THROW(certify_log_time(fundamental_w(SpaceTimePoint({0.0}, 0.0)), sub, Side::Sub, 10, 4),
                 std::invalid_argument);
}

TEST(CheckBarrier, PetrovskyAtTheTip) {
    BarrierCheckOptions opt;
    opt.samples = 300;
    const auto r = check_barrier(petrovsky_barrier(1, 0.25), Region::petrovsky(1, 4.0, 0.1), SpaceTimePoint({0.0}, 0.0),
                                 opt);
    EXPECT_EQ(r.verdict, Verdict::Certified);
    for (const char* c : {"residual", "positive", "boundary_margin", "limit_zero"}) EXPECT_TRUE(r.condition_holds(c)) << c;
}

TEST(CheckBarrier, PetrovskyTraceOnTheCurvedBoundary) {
    const Region region = Region::petrovsky(1, 4.0, 0.1);
    const BarrierForm f = petrovsky_barrier(1, 0.25);
    std::size_t curved = 0;
    for (const auto& b : sample_boundary(region, 100, 5)) {
        if (b.tag != BoundaryClass::Curved) continue;
        ++curved;
        const SpaceTimePoint on({std::sqrt(petrovsky_squared_radius(4.0, b.point.t))}, b.point.t);
        EXPECT_NEAR(f.value(on), oracle::petrovsky_trace(b.point.t), 1e-12);
    }
    EXPECT_GT(curved, 10u);
}

TEST(CheckBarrier, BottomBarrierOnACylinder) {
    const Region cyl = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 1.0);
    const auto r = check_barrier(bottom_barrier(SpaceTimePoint({0.4}, 0.0)), cyl, SpaceTimePoint({0.4}, 0.0));
    EXPECT_EQ(r.verdict, Verdict::Certified);
    EXPECT_TRUE(r.condition_holds("limit_zero"));
}

TEST(CheckBarrier, NegativeFormIsRefuted) {
    const Region cyl = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 1.0);
    const auto r = check_barrier(-bottom_barrier(SpaceTimePoint({0.4}, 0.0)), cyl, SpaceTimePoint({0.4}, 0.0));
    EXPECT_EQ(r.verdict, Verdict::Refuted);
    EXPECT_FALSE(r.condition_holds("positive"));
}

TEST(BarrierFamily, AppendixWitnesses) {
    const Region cyl = Region::cylinder(SpatialShape::box({-1.0, -1.0}, {1.0, 1.0}), 0.0, 1.0);
    const SpaceTimePoint z({0.0, 0.0}, 0.0);
    const double diam = 3.0;
    FamilyCheckOptions opt;
    opt.member.side = Side::Sub;
    opt.member.equation = Equation::NonNormalized;
    opt.member.samples = 200;
    opt.j_max = 3;
    opt.k_max = 5;
    opt.strong = true;
    opt.distance = [&](const SpaceTimePoint& p) { return appendix_distance(z, diam, p); };
    const auto fam = check_barrier_family([&](int j) { return appendix_family(z, j, diam); }, cyl, z, opt);
    EXPECT_EQ(fam.summary.verdict, Verdict::Certified);
    ASSERT_EQ(fam.strong_witnesses.size(), 5u);
    // w_j >= k d needs j >= k: the spatial term grows like j, not j^3
    EXPECT_EQ(fam.strong_witnesses[4].j, 5);
    EXPECT_EQ(fam.strong_witnesses[0].j, 1);
    EXPECT_TRUE(fam.summary.condition_holds("boundary_k5"));

    // the negated family is a supersolution family for the non-normalized equation
    for (int j = 1; j <= 3; ++j) {
        const auto r = certify(-appendix_family(z, j, diam), cyl, Side::Super, 200, 6, 1e-9, Equation::NonNormalized);
        EXPECT_EQ(r.verdict, Verdict::Certified) << j;
    }
}

TEST(Helpers, AitkenOnAGeometricSequence) {
    EXPECT_NEAR(aitken_limit({3.0, 2.0, 1.5}), 1.0, 1e-15);
    EXPECT_EQ(aitken_limit({1.0, 1.0, 1.0}), 1.0);
    EXPECT_TRUE(std::isnan(aitken_limit({})));
}

TEST(Helpers, ApproachDirectionPointsInward) {
    const Region cyl = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 1.0);
    const auto d = approach_direction(cyl, SpaceTimePoint({0.0}, 0.5), 0.1);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_DOUBLE_EQ(d[0], 1.0);
    EXPECT_DOUBLE_EQ(d[1], 0.0);
    EXPECT_TRUE(approach_direction(cyl, SpaceTimePoint({5.0}, 0.5), 0.1).empty());
}

TEST(Report, CertificateJsonShape) {
    const auto r = certify(petrovsky_barrier(1, 0.25), Region::petrovsky(1, 4.0, 0.1), Side::Super, 20, 1);
    const Json j = to_json(r);
    for (const char* key : {"form", "params", "side", "equation", "samples", "tolerance", "minResidual",
                            "maxResidual", "verdict", "violationCount", "violations", "conditions", "notes"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["verdict"], "certified");
    EXPECT_EQ(j["form"], "PetrovskyBarrier");
}
