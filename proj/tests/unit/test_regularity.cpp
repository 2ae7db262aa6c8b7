#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "infheat/regularity.hpp"

using namespace infheat;

namespace {

std::vector<Resolution> coarse() { return {{0.01, 1, 2, 0.0}, {0.005, 1, 2, 0.0}}; }

Region wall() { return Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 0.5); }

}  // namespace

TEST(ExtrapolateLimit, SlowDecayKeepsAPositiveLimit) {
    // u = u_inf exp(1 / tau): rate 1 / tau^2, so the fitted power is 2.
    const double uinf = 0.3, D = 1.0;
    std::vector<double> d, u;
    for (int k = 1; k <= 14; ++k) {
        d.push_back(D * std::pow(2.0, -k));
        const double tau = std::log(D / d.back());
        u.push_back(uinf * std::exp(1.0 / tau));
    }
    const auto fit = extrapolate_limit(d, u, D);
    EXPECT_NEAR(fit.power, 2.0, 0.2);
    EXPECT_NEAR(fit.limit, uinf, 0.05 * uinf);
}

TEST(ExtrapolateLimit, PowerDecayGoesToZero) {
    std::vector<double> d, u;
    for (int k = 1; k <= 12; ++k) {
        d.push_back(std::pow(2.0, -k));
        u.push_back(std::sqrt(d.back()));
    }
    const auto fit = extrapolate_limit(d, u, 1.0);
    EXPECT_LE(fit.power, 1.0);
    EXPECT_EQ(fit.limit, 0.0);
}

TEST(ExtrapolateLimit, SizeMismatchThrows) {
    EXPECT_THROW(extrapolate_limit({0.5, 0.25}, {1.0}, 1.0), std::invalid_argument);
}

TEST(Classify, LateralWallIsRegular) {
    const auto r = classify(wall(), SpaceTimePoint({0.0}, 0.25), coarse());
    EXPECT_EQ(r.verdict, RegularityVerdict::Regular);
    ASSERT_EQ(r.series.size(), 2u);
    EXPECT_LT(r.series.back().ratio, r.thresholds.regular);
    EXPECT_GT(r.sup_psi, 0.0);
    EXPECT_FALSE(r.evidence.empty());
}

TEST(Classify, BottomPointIsRegular) {
    const Region cyl = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 0.5);
    const auto r = classify(cyl, SpaceTimePoint({0.5}, 0.0), coarse());
    EXPECT_EQ(r.verdict, RegularityVerdict::Regular);
}

TEST(Classify, RejectsBadInput) {
    EXPECT_THROW(classify(wall(), SpaceTimePoint({0.5}, 0.25), coarse()), std::invalid_argument);
    EXPECT_THROW(classify(wall(), SpaceTimePoint({0.0}, 0.25), {{0.01, 1, 2, 0.0}}), std::invalid_argument);
    EXPECT_THROW(classify(wall(), SpaceTimePoint({0.0, 0.0}, 0.25), coarse()), std::invalid_argument);
    EXPECT_THROW(classify(wall(), SpaceTimePoint({-0.4}, 0.25), coarse()), std::invalid_argument);
}

TEST(Thresholds, CalibrationStaysInsideDefaults) {
    const auto reg = classify(wall(), SpaceTimePoint({0.0}, 0.25), coarse());
    const auto irr = heat_ball_experiment(4.0, coarse());
    const auto t = calibrate_thresholds(reg, irr);
    EXPECT_GE(t.regular, Thresholds{}.regular);
    EXPECT_LE(t.irregular, Thresholds{}.irregular);
    EXPECT_LT(t.regular, t.irregular);
    EXPECT_THROW(calibrate_thresholds(RegularityReport{}, irr), std::invalid_argument);
}

TEST(ExteriorSphere, SideContactCertifiedAndRegular) {
    const auto e = exterior_sphere_experiment(Contact::Side, 0.5, coarse(), 300, 3);
    EXPECT_EQ(e.certificate.verdict, Verdict::Certified);
    ASSERT_TRUE(e.regularity.has_value());
    EXPECT_EQ(e.regularity->verdict, RegularityVerdict::Regular);
}

TEST(ExteriorSphere, NorthContactWithLargeRadius) {
    const auto e = exterior_sphere_experiment(Contact::North, 1.5, coarse(), 300, 4);
    EXPECT_EQ(e.certificate.verdict, Verdict::Certified);
    ASSERT_TRUE(e.regularity.has_value());
    EXPECT_EQ(e.regularity->verdict, RegularityVerdict::Regular);
}

TEST(ExteriorSphere, SouthContactBarrierFails) {
    const auto e = exterior_sphere_experiment(Contact::South, 0.5, {}, 300, 5);
    EXPECT_EQ(e.certificate.verdict, Verdict::Refuted);
    EXPECT_FALSE(e.regularity.has_value());
}

TEST(ExteriorSphere, ContactNames) {
    for (Contact c : {Contact::North, Contact::South, Contact::Side})
        EXPECT_EQ(contact_from_string(to_string(c)), c);
    EXPECT_FALSE(contact_from_string("east").has_value());
    EXPECT_THROW(exterior_sphere_experiment(Contact::Side, 0.0, {}), std::invalid_argument);
}

TEST(FutureBlindness, PerturbationAfterT0IsInvisible) {
    const Region cyl = Region::cylinder(SpatialShape::box({0.0}, {0.2}), 0.0, 0.1);
    const BoundaryData g = [](std::span<const double> x, double) { return x[0]; };
    const BoundaryData bump = [](std::span<const double>, double) { return 1.0; };
    SchemeConfig cfg;
    cfg.h = 0.005;
    const auto r = future_blindness_test(cyl, SpaceTimePoint({0.0}, 0.05), g, bump, cfg);
    EXPECT_TRUE(r.bit_identical);
    EXPECT_GT(r.slices_compared, 0u);
    EXPECT_FALSE(r.verdict_full.has_value());
}

TEST(FutureBlindness, VerdictAgreesOnThePastPart) {
    const BoundaryData g = [](std::span<const double>, double) { return 0.0; };
    const BoundaryData bump = [](std::span<const double>, double) { return 1.0; };
    SchemeConfig cfg;
    cfg.h = 0.01;
    const std::vector<Resolution> fine{{0.004, 1, 2, 0.0}, {0.002, 1, 2, 0.0}};
    const auto r = future_blindness_test(wall(), SpaceTimePoint({0.0}, 0.25), g, bump, cfg, fine);
    EXPECT_TRUE(r.bit_identical);
    ASSERT_TRUE(r.verdict_full.has_value());
    ASSERT_TRUE(r.verdict_past.has_value());
    EXPECT_EQ(*r.verdict_full, RegularityVerdict::Regular);
    EXPECT_EQ(*r.verdict_past, RegularityVerdict::Regular);
    EXPECT_TRUE(r.verdicts_agree);
}

TEST(Petrovsky, SweepRejectsBadParameters) {
    EXPECT_THROW(petrovsky_sweep({4.0}, 1.5, coarse()), std::invalid_argument);
    EXPECT_THROW(petrovsky_sweep({-1.0}, 0.1, coarse()), std::invalid_argument);
    EXPECT_THROW(heat_ball_experiment(0.0, coarse()), std::invalid_argument);
}

TEST(Petrovsky, SmallFactorIsRegular) {
    const auto r = petrovsky_sweep({1.0}, 0.1, default_schedule());
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].verdict, RegularityVerdict::Regular);
}

TEST(Verdicts, Names) {
    EXPECT_EQ(to_string(RegularityVerdict::Regular), "regular");
    EXPECT_EQ(to_string(RegularityVerdict::Irregular), "irregular");
    EXPECT_EQ(to_string(RegularityVerdict::Inconclusive), "inconclusive");
}
