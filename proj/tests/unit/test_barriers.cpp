#include <cmath>

#include <gtest/gtest.h>

#include "infheat/barriers.hpp"
#include "infheat/region.hpp"
#include "oracles.hpp"

using namespace infheat;

namespace {

const SpaceTimePoint kOrigin2({0.0, 0.0}, 0.0);

}  // namespace

TEST(Catalog, NineKindsWithNamesThatRoundTrip) {
    const auto cat = form_catalog();
    ASSERT_EQ(cat.size(), 9u);
    for (int k = 0; k <= static_cast<int>(FormKind::TopShift); ++k) {
        const auto kind = static_cast<FormKind>(k);
        EXPECT_EQ(form_kind_from_string(to_string(kind)), kind);
    }
    EXPECT_FALSE(form_kind_from_string("Nope").has_value());
}

TEST(Catalog, TextCarriesConstraintsAndDefaults) {
    const std::string text = catalog_text();
    EXPECT_NE(text.find("ExteriorSphere"), std::string::npos);
    EXPECT_NE(text.find("2aδ² ≥ 2R₀+1"), std::string::npos);
    EXPECT_NE(text.find("AppendixFamily"), std::string::npos);
    EXPECT_NE(text.find("α=1, m=3"), std::string::npos);
}

TEST(Hessian, RadialAndDenseEigenvalues) {
    const Hessian r = Hessian::radial(2.0, -3.0, {0.6, 0.8});
    // c1 Id + c2 y y^T with |y| = 1: eigenvalues 2 and -1
    EXPECT_NEAR(r.eigen_max(), 2.0, 1e-14);
    EXPECT_NEAR(r.eigen_min(), -1.0, 1e-14);
    const Hessian d = Hessian::dense(2, {1.0, 2.0, 2.0, 1.0});
    EXPECT_NEAR(d.eigen_max(), 3.0, 1e-14);
    EXPECT_NEAR(d.eigen_min(), -1.0, 1e-14);
    const std::vector<double> v{1.0, 1.0};
    EXPECT_NEAR(d.quadratic(v), 6.0, 1e-14);
    EXPECT_NEAR(r.quadratic(v), 4.0 - 3.0 * 1.96, 1e-14);
}

TEST(Residual, QuadraticProbeIsExact) {
    const SpaceTimePoint c({0.2, -0.4}, 0.3);
    const double eps = 0.25;
    const BarrierForm f = quadratic_probe(c, eps);
    for (const auto& p : {SpaceTimePoint({0.5, 0.1}, 0.9), SpaceTimePoint({-1.0, 2.0}, -0.4)}) {
        const Residual r = residual(f, p);
        EXPECT_FALSE(r.degenerate);
        EXPECT_NEAR(r.value(Side::Super), oracle::quadratic_probe_residual(eps, p.t, c.t), 1e-12);
    }
}

TEST(Residual, FundamentalSolutionVanishes) {
    const BarrierForm w = fundamental_w(kOrigin2);
    for (const auto& p : sample_interior(Region::cylinder(SpatialShape::box({-2.0, -2.0}, {2.0, 2.0}), 0.1, 3.0), 100, 3)) {
        if (oracle::norm(p.x) == 0.0) continue;
        EXPECT_LE(std::abs(residual(w, p).value(Side::Super)), 1e-10);
        const auto o = oracle::fundamental(oracle::norm(p.x), p.t);
        EXPECT_NEAR(w.jet(p).u_t, o.u_t, 1e-12 * std::max(1.0, std::abs(o.u_t)));
    }
}

TEST(Residual, ExteriorSphereOnTheAxisUsesEigenMin) {
    const double a = 1.5, R0 = 1.0;
    const SpaceTimePoint centre({0.0, 0.0}, 0.0);
    const BarrierForm f = exterior_sphere(centre, R0, a);
    const SpaceTimePoint p({0.0, 0.0}, 1.7);
    const Jet j = f.jet(p);
    EXPECT_EQ(j.gradient[0], 0.0);
    EXPECT_EQ(j.gradient[1], 0.0);
    const Residual r = residual(f, p);
    ASSERT_TRUE(r.degenerate);
    EXPECT_EQ(r.rule(Side::Super), ResidualRule::EigenMin);
    EXPECT_EQ(r.rule(Side::Sub), ResidualRule::EigenMax);
    const double R2 = p.t * p.t;
    EXPECT_NEAR(r.value(Side::Super), 2 * a * std::exp(-a * R2) * (p.t - 1.0), 1e-14);
}

TEST(Residual, NegationFlipsSignsAndSwapsEigenRules) {
    const BarrierForm f = exterior_sphere(SpaceTimePoint({0.0}, 0.0), 1.0, 1.5);
    const SpaceTimePoint axis({0.0}, 1.3), off({1.4}, 0.2);
    const Residual a = residual(f, off), b = residual(-f, off);
    EXPECT_DOUBLE_EQ(a.value(Side::Super), -b.value(Side::Sub));
    const Residual c = residual(f, axis), d = residual(-f, axis);
    EXPECT_DOUBLE_EQ(c.value(Side::Super), -d.value(Side::Sub));
    EXPECT_DOUBLE_EQ(c.value(Side::Sub), -d.value(Side::Super));
    EXPECT_TRUE((-f).negated());
    EXPECT_EQ((-f).name(), "-ExteriorSphere");
}

TEST(Residual, RefusesPointsOutsideValidity) {
    EXPECT_THROW(residual(petrovsky_barrier(1, 0.25), SpaceTimePoint({0.0}, 0.5)), std::domain_error);
    EXPECT_THROW(residual(fundamental_w(SpaceTimePoint({0.0}, 1.0)), SpaceTimePoint({0.0}, 0.5)), std::domain_error);
    EXPECT_THROW(petrovsky_barrier(1, 0.5), std::invalid_argument);
    EXPECT_THROW(irregularity_function(1, 0.4, 0.1), std::invalid_argument);
    EXPECT_THROW(quadratic_probe(kOrigin2, 0.0), std::invalid_argument);
}

TEST(Residual, AppendixNonNormalizedClosedForm) {
    const double diam = 3.0;
    const Region cyl = Region::cylinder(SpatialShape::box({-1.0, -1.0}, {1.0, 1.0}), 0.0, 1.0);
    for (int j : {1, 2, 5}) {
        const BarrierForm psi = appendix_family(kOrigin2, j, diam);
        for (const auto& p : sample_interior(cyl, 50, 9)) {
            const double r = residual(psi, p, Equation::NonNormalized).value(Side::Sub);
            const double want = oracle::appendix_nonnormalized_residual(j, 1.0, 1.0 / (2 * diam), 3.0, p.t);
            EXPECT_NEAR(r, want, 1e-9 * j * j * j);
            EXPECT_LE(r, -37.0 / 81.0 * j * j * j + 1e-9);
            // the spatial term carries one factor of j
            EXPECT_GE(psi.value(p), j * appendix_distance(kOrigin2, diam, p) * (1 - 1e-12));
        }
    }
}

TEST(Residual, WallBarrierIsNearlyASolution) {
    SchemeConfig cfg;
    cfg.h = 0.01;
    const auto nu = stationary_solve(SpatialShape::box({0.0}, {1.0}), -1.0,
                                     [](std::span<const double> x) { return std::abs(x[0]); }, cfg);
    const BarrierForm w = wall_barrier(nu.field, 1.0);
    EXPECT_DOUBLE_EQ(w.tolerance_floor(), 10 * cfg.eps());
    for (double x : {0.13, 0.5, 0.77}) {
        const SpaceTimePoint p({x}, 0.4);
        EXPECT_NEAR(w.value(p), oracle::stationary_quadratic(x) + 0.6, 1e-4);
        const auto r = w.numeric_residual(p, Equation::Normalized);
        ASSERT_TRUE(r.has_value());
        EXPECT_LE(std::abs(r->value(Side::Super)), w.tolerance_floor());
    }
}

TEST(TopShift, AddsStrictMargin) {
    const BarrierForm base = exterior_sphere(SpaceTimePoint({0.0}, 0.0), 1.0, exterior_sphere_rate(1.0, 1.2));
    const BarrierForm top = top_shift(base, 0.1, 2.0);
    const SpaceTimePoint p({1.5}, 0.5);
    EXPECT_NEAR(top.value(p) - base.value(p), 0.1 / 1.5, 1e-15);
    EXPECT_NEAR(residual(top, p).value(Side::Super) - residual(base, p).value(Side::Super), 0.1 / (1.5 * 1.5),
                1e-13);
    EXPECT_FALSE(top.valid(SpaceTimePoint({1.5}, 2.5)));
}

TEST(Rate, ExteriorSphereRate) {
    const double R0 = 0.7, delta = 0.4;
    EXPECT_NEAR(2 * exterior_sphere_rate(R0, delta) * delta * delta, 2 * R0 + 1, 1e-14);
}

TEST(LevelCurves, IrregularLevelInsideFactorEight) {
    for (double t : {-1e-2, -1e-3, -1e-4, -1e-5}) {
        const double L = std::abs(std::log(std::abs(t)));
        const double r2 = petrovsky_level_curve(0.9, 0.05, -1.0, t);
        EXPECT_LE(r2, -8.0 * t * std::log(L)) << t;
    }
}

TEST(LevelCurves, ZeroLevelOfTheBarrier) {
    // -4t (log|log|t|| + log 2) at t = -0.1
    EXPECT_NEAR(petrovsky_barrier_zero_level(-0.1), 0.4 * (std::log(std::log(10.0)) + std::log(2.0)), 1e-15);
    EXPECT_NEAR(petrovsky_barrier_zero_level(-0.1), 0.6109, 1e-4);
}

TEST(Premise, IrregularityThresholdSatisfiesBothConditions) {
    const double k = 0.9, alpha = 0.05;
    const double L0 = irregularity_premise_threshold(k, alpha);
    EXPECT_GT(L0, 1e191);
    EXPECT_LT(L0, 1e192);
    auto holds = [&](double L) {
        const double y = std::log(L);
        return std::log(k) + 1.0 / (1.0 - k) <= alpha * y - 2.0 * std::log(y) && (alpha + 1.0) / L < k / 2.0;
    };
    EXPECT_TRUE(holds(L0));
    EXPECT_TRUE(holds(L0 * 10));
    EXPECT_FALSE(holds(L0 / 10));
    const BarrierForm f = irregularity_function(1, k, alpha);
    EXPECT_TRUE(f.premise_violation(SpaceTimePoint({0.0}, -1e-300)).has_value());
}

TEST(LogTime, PetrovskyResidualIsPositiveOnTheTip) {
    const BarrierForm f = petrovsky_barrier(1, 0.25);
    for (double L : {3.0, 1e5, 1e200}) {
        EXPECT_GT(*f.log_time_residual(0.0, L), 0.0);
        EXPECT_GT(*f.log_time_residual(std::log(L), L), 0.0);
    }
    EXPECT_FALSE(fundamental_w(kOrigin2).log_time_residual(0.0, 10.0).has_value());
}
