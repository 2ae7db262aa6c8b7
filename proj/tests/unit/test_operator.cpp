#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "infheat/parallel.hpp"
#include "infheat/scheme.hpp"
#include "oracles.hpp"

using namespace infheat;

namespace {

Stencil square_stencil(double half, double h, int K, int dirs) {
    const auto cells = static_cast<std::size_t>(std::llround(2 * half / h));
    return Stencil(Grid({-half, -half}, h, {cells + 1, cells + 1}), K, dirs, {-half, -half}, {half, half});
}

const SliceView kAnalytic{0.0, nullptr, nullptr};

BoundaryData heat_data() {
    return [](std::span<const double> x, double t) { return oracle::heat_sine(x[0], t); };
}

Region heat_cylinder() { return Region::cylinder(SpatialShape::box({0.0}, {std::numbers::pi}), 0.0, 0.5); }

}  // namespace

TEST(SchemeUpdate, ConvexCombinationProperties) {
    EXPECT_EQ(scheme_update(0.7, 0.7, 0.7, 0.5), 0.7);
    EXPECT_EQ(scheme_update(0.0, 1.0, -1.0, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(scheme_update(0.2, 1.0, 0.0, 0.25), 0.2 + 0.25 * (1.0 - 0.4));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3, 3), L(0.0, 0.5);
    for (int i = 0; i < 10000; ++i) {
        const double u = U(rng), M = U(rng), m = U(rng), lam = L(rng);
        const double v = scheme_update(u, M, m, lam);
        EXPECT_LE(v, std::max({u, M, m}));
        EXPECT_GE(v, std::min({u, M, m}));
    }
}

TEST(DiscreteOperator, RadialSquareReadsSecondRadialDerivative) {
    const int K = 4;
    const Stencil st = square_stencil(1.0, 0.025, K, 16);
    const BoundaryData u = [](std::span<const double> x, double) { return x[0] * x[0] + x[1] * x[1]; };
    const double L = discrete_inf_laplacian(st, kAnalytic, u, std::vector<double>{0.0, 0.0});
    // bilinear interpolation can only overestimate a convex function, by at most h^2/2
    EXPECT_GE(L, 2.0 - 1e-12);
    EXPECT_LE(L, 2.0 + 0.5 / (K * K));
}

TEST(DiscreteOperator, SaddleAtOriginIsMidpointOfEigenvalues) {
    const Stencil st = square_stencil(1.0, 0.05, 2, 16);
    const BoundaryData u = [](std::span<const double> x, double) { return x[0] * x[0] - x[1] * x[1]; };
    EXPECT_NEAR(discrete_inf_laplacian(st, kAnalytic, u, std::vector<double>{0.0, 0.0}), 0.0, 1e-12);
}

TEST(DiscreteOperator, NonNormalizedSquareIsChainOfFactors) {
    Stencil st(Grid({-1.0}, 0.01, {201}), 1, 2, {-1.0}, {1.0});
    const BoundaryData u = [](std::span<const double> x, double) { return x[0] * x[0]; };
    for (double r : {0.3, -0.5, 0.71}) {
        const double v = discrete_inf_laplacian_nonnormalized(st, kAnalytic, u, std::vector<double>{r});
        EXPECT_NEAR(v, 8.0 * r * r, 1e-10) << r;
    }
}

TEST(DiscreteOperator, NonNormalizedFourThirdsPowerIsConstant) {
    // (4/3 r^{1/3})^2 (4/9 r^{-2/3}) = 64/81 for every r > 0
    const Stencil st = square_stencil(1.0, 0.0025, 8, 64);
    const BoundaryData u = [](std::span<const double> x, double) {
        return std::pow(x[0] * x[0] + x[1] * x[1], 2.0 / 3.0);
    };
    for (double r : {0.5, 0.7}) {
        const double v = discrete_inf_laplacian_nonnormalized(st, kAnalytic, u, std::vector<double>{r, 0.0});
        EXPECT_NEAR(v, 64.0 / 81.0, 0.05 * st.eps() / 0.02) << r;
    }
}

TEST(March, HeatOracleWithinEps) {
    for (double h : {0.05, 0.025}) {
        SchemeConfig cfg;
        cfg.h = h;
        const auto u = march(heat_cylinder(), heat_data(), cfg);
        double err = 0.0;
        std::vector<double> x(1);
        for (std::size_t s = 0; s < u.slice_count(); ++s)
            for (std::size_t i = 0; i < u.lattice().grid().size(); ++i) {
                if (!u.interior(s, i)) continue;
                u.lattice().grid().position(i, x);
                err = std::max(err, std::abs(u.node_value(s, i) - oracle::heat_sine(x[0], u.time(s))));
            }
        EXPECT_LE(err, cfg.eps()) << h;
    }
}

TEST(March, DppMatchesEulerAtHalfLambda) {
    SchemeConfig cfg;
    cfg.h = 0.05;
    const auto lat = make_lattice(heat_cylinder(), cfg);
    const auto a = march(lat, heat_data());
    const auto b = dpp_march(lat, heat_data());
    for (std::size_t s = 0; s < a.slice_count(); ++s)
        EXPECT_EQ(std::memcmp(a.values(s).data(), b.values(s).data(), a.values(s).size_bytes()), 0);
}

TEST(March, DppRejectsOtherTimeSteps) {
    SchemeConfig cfg;
    cfg.h = 0.05;
    cfg.dt = 0.0001;
    EXPECT_THROW(dpp_march(heat_cylinder(), heat_data(), cfg), std::invalid_argument);
}

TEST(March, StreamObserverCanStop) {
    SchemeConfig cfg;
    cfg.h = 0.05;
    const auto lat = make_lattice(heat_cylinder(), cfg);
    std::size_t seen = 0;
    march_stream(*lat, heat_data(), [&](std::size_t s, const SliceView&) {
        seen = s + 1;
        return s < 9;
    });
    EXPECT_EQ(seen, 10u);
}

TEST(March, ThreadCountDoesNotChangeResults) {
    const Region r = Region::cylinder(SpatialShape::ball({0.0, 0.0}, 1.0), 0.0, 0.05);
    SchemeConfig cfg;
    cfg.h = 0.01;
    cfg.K = 2;
    cfg.dirs = 8;
    const BoundaryData g = [](std::span<const double> x, double t) { return x[0] * x[1] + t; };
    const int before = thread_count();
    set_thread_count(1);
    const auto a = march(r, g, cfg);
    set_thread_count(4);
    const auto b = march(r, g, cfg);
    set_thread_count(before);
    for (std::size_t s = 0; s < a.slice_count(); ++s)
        EXPECT_EQ(std::memcmp(a.values(s).data(), b.values(s).data(), a.values(s).size_bytes()), 0);
}

TEST(SchemeConfig, CflViolationNamesTheBound) {
    SchemeConfig cfg;
    cfg.h = 0.01;
    cfg.dt = 0.001;
    try {
        cfg.validate();
        FAIL() << "expected a CFL error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("CFL"), std::string::npos);
    }
    cfg.dt = 0.0;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_DOUBLE_EQ(cfg.time_step(), 0.5e-4);
    cfg.dirs = 3;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Stationary, QuadraticOracle) {
    SchemeConfig cfg;
    cfg.h = 0.01;
    std::ostringstream log;
    const auto res = stationary_solve(SpatialShape::box({0.0}, {1.0}), -1.0,
                                      [](std::span<const double> x) { return std::abs(x[0]); }, cfg, &log, 5000);
    const double eps = cfg.eps();
    EXPECT_NEAR(res.field->interpolate(std::vector<double>{0.5}), 0.625, eps * eps);
    std::vector<double> x(1);
    for (std::size_t i = 0; i < res.field->values().size(); ++i) {
        if (!res.field->mask()[i]) continue;
        res.field->grid().position(i, x);
        EXPECT_GE(res.field->values()[i], std::abs(x[0]) - 10 * eps);
        EXPECT_NEAR(res.field->values()[i], oracle::stationary_quadratic(x[0]), eps * eps);
    }
    const std::string text = log.str();
    EXPECT_EQ(text.rfind("slice=5000 t=", 0), 0u) << text.substr(0, 80);
    EXPECT_NE(text.find("max|Δu|="), std::string::npos);
}

TEST(Stationary, ReportsNonConvergence) {
    SchemeConfig cfg;
    cfg.h = 0.01;
    cfg.max_iter = 10;
    try {
        stationary_solve(SpatialShape::box({0.0}, {1.0}), -1.0, [](std::span<const double>) { return 0.0; }, cfg);
        FAIL() << "expected StationaryError";
    } catch (const StationaryError& e) {
        EXPECT_EQ(e.iterations(), 10);
        EXPECT_GT(e.last_change(), 0.0);
    }
}

TEST(ParabolicModification, RejectsBadBoxes) {
    SchemeConfig cfg;
    cfg.h = 0.05;
    const auto u = march(heat_cylinder(), heat_data(), cfg);
    EXPECT_THROW(parabolic_modification(u, Region::petrovsky(1, 4.0, 0.1)), std::invalid_argument);
    EXPECT_THROW(parabolic_modification(u, Region::cylinder(SpatialShape::box({-1.0}, {1.0}), 0.1, 0.2)),
                 std::invalid_argument);
}

TEST(ParabolicModification, SchemeSolutionIsAFixedPoint) {
    SchemeConfig cfg;
    cfg.h = 0.05;
    const auto u = march(heat_cylinder(), heat_data(), cfg);
    const auto U = parabolic_modification(u, Region::cylinder(SpatialShape::box({1.0}, {2.0}), 0.1, 0.3));
    for (std::size_t s = 0; s < u.slice_count(); ++s)
        EXPECT_EQ(std::memcmp(u.values(s).data(), U.values(s).data(), u.values(s).size_bytes()), 0);
}
