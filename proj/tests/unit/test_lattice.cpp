#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "infheat/lattice.hpp"
#include "infheat/scheme.hpp"

using namespace infheat;

TEST(Grid, FlatIndexRoundTrip) {
    Grid g({-1.0, 0.0}, 0.5, {5, 3});
    EXPECT_EQ(g.size(), 15u);
    std::vector<double> x(2);
    std::vector<std::int64_t> idx(2);
    g.position(7, x);
    g.unflatten(7, idx);
    EXPECT_DOUBLE_EQ(x[0], g.coordinate(0, idx[0]));
    EXPECT_DOUBLE_EQ(x[1], g.coordinate(1, idx[1]));
}

TEST(Stencil, LinearInterpolationOfSquare) {
    // u = x^2 stored on h = 0.1: the midpoint of 0 and 0.01 is 0.005 (exact value 0.0025)
    Grid g({0.0}, 0.1, {11});
    Stencil st(g, 1, 2, {0.0}, {1.0});
    std::vector<double> vals(11);
    std::vector<std::uint8_t> mask(11, 1);
    for (int i = 0; i < 11; ++i) vals[i] = (0.1 * i) * (0.1 * i);
    const SliceView view{0.0, vals.data(), mask.data()};
    const BoundaryData never = [](std::span<const double>, double) { return 1e9; };
    EXPECT_NEAR(st.interpolate(view, never, std::vector<double>{0.05}), 0.005, 1e-15);
}

TEST(Stencil, ExteriorCornersReadBoundaryData) {
    Grid g({0.0}, 0.1, {11});
    Stencil st(g, 1, 2, {0.0}, {1.0});
    std::vector<double> vals(11, 0.0);
    std::vector<std::uint8_t> mask(11, 1);
    mask[10] = 0;
    const SliceView view{0.0, vals.data(), mask.data()};
    const BoundaryData g1 = [](std::span<const double>, double) { return 1.0; };
    EXPECT_NEAR(st.interpolate(view, g1, std::vector<double>{0.95}), 0.5, 1e-14);
    EXPECT_EQ(st.interpolate(view, g1, std::vector<double>{1.5}), 1.0);
}

TEST(Stencil, SaddleSphereExtremes) {
    // u = x^2 - y^2 at the origin with 16 directions: max eps^2, min -eps^2
    Grid g({-1.0, -1.0}, 0.05, {41, 41});
    Stencil st(g, 2, 16, {-1.0, -1.0}, {1.0, 1.0});
    const BoundaryData u = [](std::span<const double> x, double) { return x[0] * x[0] - x[1] * x[1]; };
    const SliceView view{0.0, nullptr, nullptr};
    const auto e = st.sphere_values(view, u, std::vector<double>{0.0, 0.0});
    const double eps2 = st.eps() * st.eps();
    EXPECT_NEAR(e.max, eps2, 1e-15);
    EXPECT_NEAR(e.min, -eps2, 1e-15);
}

TEST(Stencil, DirectionsAreUnitAndAntipodal) {
    for (std::size_t n : {1u, 2u, 3u}) {
        const std::size_t dirs = n == 1 ? 2 : 24;
        const auto d = sphere_directions(n, dirs);
        const std::size_t m = d.size() / n;
        ASSERT_EQ(m % 2, 0u);
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += d[j * n + k] * d[j * n + k];
            EXPECT_NEAR(s, 1.0, 1e-14);
            bool paired = false;
            for (std::size_t i = 0; i < m && !paired; ++i) {
                double gap = 0.0;
                for (std::size_t k = 0; k < n; ++k) gap += std::abs(d[i * n + k] + d[j * n + k]);
                paired = gap < 1e-14;
            }
            EXPECT_TRUE(paired) << "n=" << n << " j=" << j;
        }
    }
}

TEST(Stencil, NodeSphereMatchesGenericPath) {
    const Region r = Region::cylinder(SpatialShape::ball({0.0, 0.0}, 1.0), 0.0, 0.1);
    SchemeConfig cfg;
    cfg.h = 0.05;
    cfg.K = 3;
    cfg.dirs = 12;
    const auto lat = make_lattice(r, cfg);
    const BoundaryData g = [](std::span<const double> x, double t) { return std::sin(3 * x[0]) * std::cos(x[1]) + t; };
    const auto u = march(lat, g);
    const Stencil& st = lat->stencil();
    std::vector<double> x(2);
    const SliceView view = u.view(0);
    for (std::size_t i = 0; i < lat->grid().size(); i += 7) {
        if (!u.interior(0, i)) continue;
        lat->grid().position(i, x);
        const auto a = st.sphere_values_at_node(view, g, i);
        const auto b = st.sphere_values(view, g, x);
        EXPECT_NEAR(a.max, b.max, 1e-12);
        EXPECT_NEAR(a.min, b.min, 1e-12);
    }
}

TEST(Lattice, TimeLevelsAndMasks) {
    const Region r = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 0.1);
    Lattice lat(r, 0.1, 1, 0.005, 2);
    EXPECT_EQ(lat.slice_count(), 20u);
    EXPECT_DOUBLE_EQ(lat.initial_time(), 0.0);
    EXPECT_NEAR(lat.time(19), 0.1, 1e-15);
    std::vector<std::uint8_t> mask;
    lat.interior_mask(0.05, mask);
    std::size_t inside = 0;
    for (auto m : mask) inside += m;
    EXPECT_EQ(inside, 9u);  // nodes 0.1 .. 0.9; walls excluded
    EXPECT_EQ(lat.interior_count(0), 9u);
}

TEST(LatticeField, FromFunctionAndCsv) {
    const Region r = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 0.02);
    const auto lat = std::make_shared<const Lattice>(r, 0.25, 1, 0.01, 2);
    const BoundaryData f = [](std::span<const double> x, double t) { return x[0] + 10 * t; };
    const auto field = LatticeField::from_function(lat, f, f);
    ASSERT_EQ(field.slice_count(), 2u);
    std::vector<double> x(1);
    for (std::size_t i = 0; i < lat->grid().size(); ++i) {
        if (!field.interior(1, i)) continue;
        lat->grid().position(i, x);
        EXPECT_DOUBLE_EQ(field.node_value(1, i), x[0] + 10 * field.time(1));
    }
    std::ostringstream os;
    field.write_csv(os);
    EXPECT_EQ(os.str().rfind("slice,t,x0,value\n", 0), 0u);
}

TEST(Lattice, RejectsBadInputs) {
    const Region r = Region::cylinder(SpatialShape::box({0.0}, {1.0}), 0.0, 0.1);
    EXPECT_THROW(Lattice(r, -0.1, 1, 0.005, 2), std::invalid_argument);
    EXPECT_THROW(Lattice(r, 0.1, 0, 0.005, 2), std::invalid_argument);
    EXPECT_THROW(Lattice(Region::half_space(1, 0.0, TimeSide::Before), 0.1, 1, 0.005, 2), std::invalid_argument);
    EXPECT_THROW(Stencil(Grid({0.0, 0.0}, 0.1, {3, 3}), 1, 3, {0.0, 0.0}, {0.2, 0.2}), std::invalid_argument);
}
