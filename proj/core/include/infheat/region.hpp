#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infheat/point.hpp"

namespace infheat {

/// Times with |t| (or t0 - t for heat balls) below this are treated as exterior.
inline constexpr double kDefaultTimeFloor = 1e-6;

enum class BoundaryClass { Bottom, BottomEdge, Wall, Top, Curved, Earliest, Other };
std::string_view to_string(BoundaryClass c);

enum class TimeSide { Before, After };
std::string_view to_string(TimeSide s);

/// Open spatial box or ball; the base of a cylinder.
class SpatialShape {
public:
    enum class Kind { Box, Ball };

    static SpatialShape box(std::vector<double> lo, std::vector<double> hi);
    static SpatialShape ball(std::vector<double> center, double radius);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return a_.size(); }
    // Box: lo/hi. Ball: center (lo() is the center, radius() the radius).
    const std::vector<double>& lo() const { return a_; }
    const std::vector<double>& hi() const { return b_; }
    const std::vector<double>& center() const { return a_; }
    double radius() const { return radius_; }

    bool contains(std::span<const double> x) const;
    /// Unsigned distance from x to the boundary of the shape.
    double boundary_distance(std::span<const double> x) const;
    void bounds(std::vector<double>& lo, std::vector<double>& hi) const;
    double diameter() const;

private:
    Kind kind_ = Kind::Box;
    std::vector<double> a_, b_;
    double radius_ = 0.0;
};

/// Axis-aligned enclosing box in space-time. Empty when any lo > hi.
struct Box {
    std::vector<double> lo, hi;
    double t_lo = 0.0, t_hi = 0.0;

    std::size_t dim() const { return lo.size(); }
    bool empty() const;
    bool bounded() const;
    double diagonal() const;
};

/// Spatial slice of a region at a fixed time, with the time-dependent
/// parts of every predicate evaluated once.
class CrossSection {
public:
    bool contains(std::span<const double> x) const;
    bool empty() const { return nodes_[root_].kind == Kind::None; }
    /// Enclosing box of the slice (may be infinite for unbounded slices).
    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }
    std::size_t dim() const { return dim_; }

private:
    friend class Region;
    enum class Kind : std::uint8_t { None, All, Ball, Box, Union, Intersection, Difference };
    struct Node {
        Kind kind = Kind::None;
        std::uint32_t a = 0;  // child or parameter offset
        std::uint32_t b = 0;  // second child
        double r2 = 0.0;
    };

    bool eval(std::uint32_t i, std::span<const double> x) const;

    std::size_t dim_ = 0;
    std::vector<Node> nodes_;
    std::vector<double> params_;
    std::uint32_t root_ = 0;
    std::vector<double> lo_, hi_;
};

struct CylinderSpec {
    SpatialShape base;
    double t_start = 0.0;
    double t_end = 1.0;
};
struct SpaceTimeBallSpec {
    SpaceTimePoint center;
    double radius = 1.0;
};
/// -cutoff < t < 0, |x|^2 < -factor * t * log|log|t||.
struct PetrovskySpec {
    std::size_t n = 1;
    double factor = 4.0;
    double cutoff = 0.1;
    double t_floor = kDefaultTimeFloor;
};
/// W(x0 - x, t0 - t) > level with W(y, s) = s^{-1/2} exp(-|y|^2 / 4s).
struct HeatBallSpec {
    SpaceTimePoint center;
    double level = 1.0;
    double t_floor = kDefaultTimeFloor;
};
struct HalfSpaceSpec {
    std::size_t n = 1;
    double tau = 0.0;
    TimeSide side = TimeSide::Before;  // Before: t < tau
};
/// cutoff < t < 0 inside the level set {v = level} of the irregularity function.
struct IrregularSubdomainSpec {
    std::size_t n = 1;
    double k = 0.9;
    double alpha = 0.05;
    double level = -1.0;
    double cutoff = -0.01;
    double t_floor = kDefaultTimeFloor;
};
struct EmptySpec {
    std::size_t n = 1;
};

enum class CsgOp { Union, Intersection, Difference };
std::string_view to_string(CsgOp op);

using Primitive = std::variant<CylinderSpec, SpaceTimeBallSpec, PetrovskySpec, HeatBallSpec,
                               HalfSpaceSpec, IrregularSubdomainSpec, EmptySpec>;

/// Immutable implicit space-time region: a primitive or a boolean
/// combination of two regions. Cheap to copy.
class Region {
public:
    static Region cylinder(SpatialShape base, double t_start, double t_end);
    static Region space_time_ball(SpaceTimePoint center, double radius);
    static Region petrovsky(std::size_t n, double factor, double cutoff,
                            double t_floor = kDefaultTimeFloor);
    static Region heat_ball(SpaceTimePoint center, double level, double t_floor = kDefaultTimeFloor);
    static Region half_space(std::size_t n, double tau, TimeSide side);
    static Region irregular_subdomain(std::size_t n, double k, double alpha, double level,
                                      double cutoff, double t_floor = kDefaultTimeFloor);
    static Region empty(std::size_t n);
    static Region combine(CsgOp op, Region left, Region right);

    std::size_t dim() const;
    bool contains(const SpaceTimePoint& p) const;
    CrossSection cross_section(double t) const;
    Box bounding_box() const;

    const Primitive* primitive() const;
    std::optional<CsgOp> op() const;
    const Region& left() const;
    const Region& right() const;

    /// Tag for the boundary crossed between an interior and an exterior point.
    BoundaryClass classify_crossing(const SpaceTimePoint& inside, const SpaceTimePoint& outside) const;

    /// For tip regions (Petrovsky, irregular subdomain): the supremum of
    /// |x|^2 / (4|t|) over the slice at L = |log|t||, as a function of L alone.
    /// Empty for other regions or when the slice is empty.
    std::optional<double> tip_scaled_radius(double L) const;

    std::string describe() const;

private:
    struct Node;
    explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Region operator|(Region a, Region b);
Region operator&(Region a, Region b);
Region operator-(Region a, Region b);

/// Squared radius of the Petrovsky slice at t; <= 0 when the slice is empty.
double petrovsky_squared_radius(double factor, double t);
/// Squared radius of the heat-ball slice at s = t0 - t > 0.
double heat_ball_squared_radius(double level, double s);
/// Squared radius of the level set {v = c} of the irregularity function at t.
double irregular_level_squared_radius(double k, double alpha, double c, double t);

struct BoundarySample {
    SpaceTimePoint point;   // exterior point within tol of the boundary
    SpaceTimePoint inside;  // interior witness within tol of point
    BoundaryClass tag = BoundaryClass::Other;
};

/// Default boundary tolerance: 1e-8 times the enclosing box diagonal.
double default_boundary_tolerance(const Region& region);

/// Seeded boundary points found by bisection along random rays from interior
/// seeds. tol <= 0 selects default_boundary_tolerance.
std::vector<BoundarySample> sample_boundary(const Region& region, std::size_t count,
                                            std::uint64_t seed, double tol = 0.0);

/// Seeded interior points by rejection sampling in the enclosing box.
std::vector<SpaceTimePoint> sample_interior(const Region& region, std::size_t count,
                                            std::uint64_t seed);

Region clip_time(const Region& region, double t0, TimeSide side);

/// Over-approximation of sup |zeta - eta| over the region.
double diameter(const Region& region);

/// Distance from p.x to the complement of the slice at p.t, estimated by
/// bisection along coordinate axes and diagonals. Zero when p is exterior.
double spatial_clearance(const Region& region, const SpaceTimePoint& p);

}  // namespace infheat
