#include "infheat/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace infheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void require_finite(std::span<const double> v, const char* what) {
    for (double c : v) require(std::isfinite(c), std::string(what) + " must be finite");
}

// Maximum of f over |t| in [s_lo, s_hi] for a function that is smooth in
// log|t|: dense logarithmic scan refined by golden-section search.
double max_over_log_time(double s_lo, double s_hi, auto&& f) {
    if (!(s_hi > s_lo)) return f(s_hi);
    constexpr int kScan = 4096;
    const double a = std::log(s_lo), b = std::log(s_hi);
    double best = -kInf;
    int best_i = 0;
    for (int i = 0; i <= kScan; ++i) {
        const double v = f(std::exp(a + (b - a) * i / kScan));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double lo = a + (b - a) * std::max(0, best_i - 1) / kScan;
    double hi = a + (b - a) * std::min(kScan, best_i + 1) / kScan;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
        const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
        if (f(std::exp(m1)) < f(std::exp(m2)))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, f(std::exp(0.5 * (lo + hi))));
}

}  // namespace

std::string_view to_string(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::Bottom: return "bottom";
        case BoundaryClass::BottomEdge: return "bottom-edge";
        case BoundaryClass::Wall: return "wall";
        case BoundaryClass::Top: return "top";
        case BoundaryClass::Curved: return "curved";
        case BoundaryClass::Earliest: return "earliest";
        case BoundaryClass::Other: return "other";
    }
    return "other";
}

std::string_view to_string(TimeSide s) { return s == TimeSide::Before ? "before" : "after"; }

std::string_view to_string(CsgOp op) {
    switch (op) {
        case CsgOp::Union: return "union";
        case CsgOp::Intersection: return "intersection";
        case CsgOp::Difference: return "difference";
    }
    return "union";
}

// ---------------------------------------------------------------- SpatialShape

SpatialShape SpatialShape::box(std::vector<double> lo, std::vector<double> hi) {
    require(!lo.empty() && lo.size() == hi.size(), "box: lo and hi must have equal nonzero length");
    require_finite(lo, "box lo");
    require_finite(hi, "box hi");
    for (std::size_t i = 0; i < lo.size(); ++i) require(lo[i] < hi[i], "box: lo < hi required");
    SpatialShape s;
    s.kind_ = Kind::Box;
    s.a_ = std::move(lo);
    s.b_ = std::move(hi);
    return s;
}

SpatialShape SpatialShape::ball(std::vector<double> center, double radius) {
    require(!center.empty(), "ball: center must be nonempty");
    require_finite(center, "ball center");
    require(std::isfinite(radius) && radius > 0.0, "ball: radius > 0 required");
    SpatialShape s;
    s.kind_ = Kind::Ball;
    s.a_ = std::move(center);
    s.radius_ = radius;
    return s;
}

bool SpatialShape::contains(std::span<const double> x) const {
    if (kind_ == Kind::Box) {
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!(x[i] > a_[i] && x[i] < b_[i])) return false;
        return true;
    }
    return squared_distance(x, a_) < radius_ * radius_;
}

double SpatialShape::boundary_distance(std::span<const double> x) const {
    if (kind_ == Kind::Ball) return std::abs(std::sqrt(squared_distance(x, a_)) - radius_);
    if (contains(x)) {
        double d = kInf;
        for (std::size_t i = 0; i < a_.size(); ++i) d = std::min({d, x[i] - a_[i], b_[i] - x[i]});
        return d;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        const double e = std::max({a_[i] - x[i], 0.0, x[i] - b_[i]});
        s += e * e;
    }
    return std::sqrt(s);
}

void SpatialShape::bounds(std::vector<double>& lo, std::vector<double>& hi) const {
    if (kind_ == Kind::Box) {
        lo = a_;
        hi = b_;
        return;
    }
    lo = a_;
    hi = a_;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        lo[i] -= radius_;
        hi[i] += radius_;
    }
}

double SpatialShape::diameter() const {
    if (kind_ == Kind::Ball) return 2.0 * radius_;
    return std::sqrt(squared_distance(a_, b_));
}

// ------------------------------------------------------------------------ Box

bool Box::empty() const {
    if (t_lo > t_hi) return true;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) return true;
    return false;
}

bool Box::bounded() const {
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
    return true;
}

double Box::diagonal() const {
    if (empty()) return 0.0;
    double s = (t_hi - t_lo) * (t_hi - t_lo);
    for (std::size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    return std::sqrt(s);
}

// --------------------------------------------------------------- CrossSection

bool CrossSection::eval(std::uint32_t i, std::span<const double> x) const {
    const Node& nd = nodes_[i];
    switch (nd.kind) {
        case Kind::None: return false;
        case Kind::All: return true;
        case Kind::Ball: {
            const double* c = params_.data() + nd.a;
            double s = 0.0;
            for (std::size_t d = 0; d < dim_; ++d) {
                const double e = x[d] - c[d];
                s += e * e;
            }
            return s < nd.r2;
        }
        case Kind::Box: {
            const double* lo = params_.data() + nd.a;
            const double* hi = lo + dim_;
            for (std::size_t d = 0; d < dim_; ++d)
                if (!(x[d] > lo[d] && x[d] < hi[d])) return false;
            return true;
        }
        case Kind::Union: return eval(nd.a, x) || eval(nd.b, x);
        case Kind::Intersection: return eval(nd.a, x) && eval(nd.b, x);
        case Kind::Difference: return eval(nd.a, x) && !eval(nd.b, x);
    }
    return false;
}

bool CrossSection::contains(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("CrossSection::contains: dimension mismatch");
    return eval(root_, x);
}

// --------------------------------------------------------------------- Region

struct Region::Node {
    std::size_t n = 1;
    std::optional<Primitive> prim;
    CsgOp op = CsgOp::Union;
    std::optional<Region> left, right;
};

namespace {

double level_scaled_radius(double k, double alpha, double c, double L) {
    const double lnL = std::log(L);
    return (alpha + 1.0) / k * lnL + std::log(1.0 / lnL - c) / k;
}

}  // namespace

double petrovsky_squared_radius(double factor, double t) {
    if (!(t < 0.0 && t > -1.0)) return 0.0;
    const double L = -std::log(-t);
    return -factor * t * std::log(L);
}

double heat_ball_squared_radius(double level, double s) {
    if (!(s > 0.0)) return 0.0;
    return -4.0 * s * (std::log(level) + 0.5 * std::log(s));
}

double irregular_level_squared_radius(double k, double alpha, double c, double t) {
    if (!(t < 0.0 && t > -1.0)) return 0.0;
    const double L = -std::log(-t);
    if (!(L > 1.0)) return 0.0;
    return -4.0 * t * level_scaled_radius(k, alpha, c, L);
}

Region Region::cylinder(SpatialShape base, double t_start, double t_end) {
    require(std::isfinite(t_start) && std::isfinite(t_end) && t_start < t_end,
            "cylinder: t_start < t_end required");
    auto node = std::make_shared<Node>();
    node->n = base.dim();
    node->prim = CylinderSpec{std::move(base), t_start, t_end};
    return Region(node);
}

Region Region::space_time_ball(SpaceTimePoint center, double radius) {
    require(center.dim() >= 1 && center.finite(), "space-time ball: finite center with n >= 1 required");
    require(std::isfinite(radius) && radius > 0.0, "space-time ball: radius > 0 required");
    auto node = std::make_shared<Node>();
    node->n = center.dim();
    node->prim = SpaceTimeBallSpec{std::move(center), radius};
    return Region(node);
}

Region Region::petrovsky(std::size_t n, double factor, double cutoff, double t_floor) {
    require(n >= 1, "petrovsky: n >= 1 required");
    require(std::isfinite(factor) && factor > 0.0, "petrovsky: factor A > 0 required");
    require(cutoff > 0.0 && cutoff < 1.0, "petrovsky: cutoff c in (0,1) required");
    require(t_floor >= 0.0 && t_floor < cutoff, "petrovsky: 0 <= t_floor < cutoff required");
    auto node = std::make_shared<Node>();
    node->n = n;
    node->prim = PetrovskySpec{n, factor, cutoff, t_floor};
    return Region(node);
}

Region Region::heat_ball(SpaceTimePoint center, double level, double t_floor) {
    require(center.dim() >= 1 && center.finite(), "heat ball: finite center with n >= 1 required");
    require(std::isfinite(level) && level > 0.0, "heat ball: level c > 0 required");
    require(t_floor >= 0.0 && t_floor < 1.0 / (level * level), "heat ball: 0 <= t_floor < 1/c^2 required");
    auto node = std::make_shared<Node>();
    node->n = center.dim();
    node->prim = HeatBallSpec{std::move(center), level, t_floor};
    return Region(node);
}

Region Region::half_space(std::size_t n, double tau, TimeSide side) {
    require(n >= 1, "half-space: n >= 1 required");
    require(std::isfinite(tau), "half-space: finite tau required");
    auto node = std::make_shared<Node>();
    node->n = n;
    node->prim = HalfSpaceSpec{n, tau, side};
    return Region(node);
}

Region Region::irregular_subdomain(std::size_t n, double k, double alpha, double level, double cutoff,
                                   double t_floor) {
    require(n >= 1, "irregular subdomain: n >= 1 required");
    require(k > 0.5 && k < 1.0, "irregular subdomain: 1/2 < k < 1 required");
    require(alpha > 0.0 && std::isfinite(alpha), "irregular subdomain: alpha > 0 required");
    require(level < 0.0 && std::isfinite(level), "irregular subdomain: level c < 0 required");
    require(cutoff > -1.0 / std::exp(1.0) && cutoff < 0.0,
            "irregular subdomain: cutoff t0 in (-1/e, 0) required");
    require(t_floor >= 0.0 && t_floor < -cutoff, "irregular subdomain: 0 <= t_floor < |t0| required");
    auto node = std::make_shared<Node>();
    node->n = n;
    node->prim = IrregularSubdomainSpec{n, k, alpha, level, cutoff, t_floor};
    return Region(node);
}

Region Region::empty(std::size_t n) {
    require(n >= 1, "empty region: n >= 1 required");
    auto node = std::make_shared<Node>();
    node->n = n;
    node->prim = EmptySpec{n};
    return Region(node);
}

Region Region::combine(CsgOp op, Region left, Region right) {
    require(left.dim() == right.dim(), "region combination: dimension mismatch");
    auto node = std::make_shared<Node>();
    node->n = left.dim();
    node->op = op;
    node->left = std::move(left);
    node->right = std::move(right);
    return Region(node);
}

Region operator|(Region a, Region b) { return Region::combine(CsgOp::Union, std::move(a), std::move(b)); }
Region operator&(Region a, Region b) {
    return Region::combine(CsgOp::Intersection, std::move(a), std::move(b));
}
Region operator-(Region a, Region b) {
    return Region::combine(CsgOp::Difference, std::move(a), std::move(b));
}

std::size_t Region::dim() const { return node_->n; }

const Primitive* Region::primitive() const { return node_->prim ? &*node_->prim : nullptr; }

std::optional<CsgOp> Region::op() const {
    if (node_->prim) return std::nullopt;
    return node_->op;
}

const Region& Region::left() const {
    if (!node_->left) throw std::logic_error("Region::left on a primitive");
    return *node_->left;
}

const Region& Region::right() const {
    if (!node_->right) throw std::logic_error("Region::right on a primitive");
    return *node_->right;
}

CrossSection Region::cross_section(double t) const {
    CrossSection cs;
    cs.dim_ = dim();
    using K = CrossSection::Kind;
    using CsNode = CrossSection::Node;

    auto push = [&](CsNode nd) {
        cs.nodes_.push_back(nd);
        return static_cast<std::uint32_t>(cs.nodes_.size() - 1);
    };
    auto push_ball = [&](std::span<const double> center, double r2) {
        if (!(r2 > 0.0)) return push({K::None});
        CsNode nd{K::Ball, static_cast<std::uint32_t>(cs.params_.size()), 0, r2};
        cs.params_.insert(cs.params_.end(), center.begin(), center.end());
        return push(nd);
    };
    const std::vector<double> origin(dim(), 0.0);

    auto build = [&](auto&& self, const Region& r) -> std::uint32_t {
        if (const Primitive* prim = r.primitive()) {
            return std::visit(
                overloaded{
                    [&](const CylinderSpec& c) -> std::uint32_t {
                        if (!(t > c.t_start && t < c.t_end)) return push({K::None});
                        if (c.base.kind() == SpatialShape::Kind::Ball)
                            return push_ball(c.base.center(), c.base.radius() * c.base.radius());
                        CsNode nd{K::Box, static_cast<std::uint32_t>(cs.params_.size()), 0, 0.0};
                        cs.params_.insert(cs.params_.end(), c.base.lo().begin(), c.base.lo().end());
                        cs.params_.insert(cs.params_.end(), c.base.hi().begin(), c.base.hi().end());
                        return push(nd);
                    },
                    [&](const SpaceTimeBallSpec& b) -> std::uint32_t {
                        const double dt = t - b.center.t;
                        return push_ball(b.center.x, b.radius * b.radius - dt * dt);
                    },
                    [&](const PetrovskySpec& p) -> std::uint32_t {
                        if (!(t > -p.cutoff && t < 0.0 && -t >= p.t_floor)) return push({K::None});
                        return push_ball(origin, petrovsky_squared_radius(p.factor, t));
                    },
                    [&](const HeatBallSpec& h) -> std::uint32_t {
                        const double s = h.center.t - t;
                        if (!(s > 0.0 && s >= h.t_floor)) return push({K::None});
                        return push_ball(h.center.x, heat_ball_squared_radius(h.level, s));
                    },
                    [&](const HalfSpaceSpec& h) -> std::uint32_t {
                        const bool in = h.side == TimeSide::Before ? t < h.tau : t > h.tau;
                        return push({in ? K::All : K::None});
                    },
                    [&](const IrregularSubdomainSpec& s) -> std::uint32_t {
                        if (!(t > s.cutoff && t < 0.0 && -t >= s.t_floor)) return push({K::None});
                        return push_ball(origin, irregular_level_squared_radius(s.k, s.alpha, s.level, t));
                    },
                    [&](const EmptySpec&) -> std::uint32_t { return push({K::None}); },
                },
                *prim);
        }
        const std::uint32_t a = self(self, r.left());
        const std::uint32_t b = self(self, r.right());
        const K ka = cs.nodes_[a].kind, kb = cs.nodes_[b].kind;
        switch (*r.op()) {
            case CsgOp::Union:
                if (ka == K::None || kb == K::All) return b;
                if (kb == K::None || ka == K::All) return a;
                return push({K::Union, a, b});
            case CsgOp::Intersection:
                if (ka == K::None || kb == K::All) return a;
                if (kb == K::None || ka == K::All) return b;
                return push({K::Intersection, a, b});
            case CsgOp::Difference:
                if (ka == K::None || kb == K::None) return a;
                if (kb == K::All) return push({K::None});
                return push({K::Difference, a, b});
        }
        return push({K::None});
    };
    cs.root_ = build(build, *this);

    const std::size_t n = dim();
    auto bounds = [&](auto&& self, std::uint32_t i, std::vector<double>& lo, std::vector<double>& hi) -> void {
        const CsNode& nd = cs.nodes_[i];
        lo.assign(n, kInf);
        hi.assign(n, -kInf);
        switch (nd.kind) {
            case K::None: return;
            case K::All:
                lo.assign(n, -kInf);
                hi.assign(n, kInf);
                return;
            case K::Ball: {
                const double r = std::sqrt(nd.r2);
                for (std::size_t d = 0; d < n; ++d) {
                    lo[d] = cs.params_[nd.a + d] - r;
                    hi[d] = cs.params_[nd.a + d] + r;
                }
                return;
            }
            case K::Box:
                for (std::size_t d = 0; d < n; ++d) {
                    lo[d] = cs.params_[nd.a + d];
                    hi[d] = cs.params_[nd.a + n + d];
                }
                return;
            default: break;
        }
        std::vector<double> lo2, hi2;
        self(self, nd.a, lo, hi);
        if (nd.kind == K::Difference) return;
        self(self, nd.b, lo2, hi2);
        for (std::size_t d = 0; d < n; ++d) {
            if (nd.kind == K::Union) {
                lo[d] = std::min(lo[d], lo2[d]);
                hi[d] = std::max(hi[d], hi2[d]);
            } else {
                lo[d] = std::max(lo[d], lo2[d]);
                hi[d] = std::min(hi[d], hi2[d]);
            }
        }
    };
    bounds(bounds, cs.root_, cs.lo_, cs.hi_);
    return cs;
}

bool Region::contains(const SpaceTimePoint& p) const {
    if (p.dim() != dim())
        throw std::invalid_argument("contains: point dimension " + std::to_string(p.dim()) +
                                    " does not match region dimension " + std::to_string(dim()));
    return cross_section(p.t).contains(p.x);
}

Box Region::bounding_box() const {
    const std::size_t n = dim();
    Box box;
    box.lo.assign(n, 0.0);
    box.hi.assign(n, 0.0);
    auto set_radial = [&](std::span<const double> center, double r, double t_lo, double t_hi) {
        for (std::size_t d = 0; d < n; ++d) {
            box.lo[d] = center[d] - r;
            box.hi[d] = center[d] + r;
        }
        box.t_lo = t_lo;
        box.t_hi = t_hi;
    };
    if (const Primitive* prim = primitive()) {
        std::visit(overloaded{
                       [&](const CylinderSpec& c) {
                           c.base.bounds(box.lo, box.hi);
                           box.t_lo = c.t_start;
                           box.t_hi = c.t_end;
                       },
                       [&](const SpaceTimeBallSpec& b) {
                           set_radial(b.center.x, b.radius, b.center.t - b.radius, b.center.t + b.radius);
                       },
                       [&](const PetrovskySpec& p) {
                           const double s_hi = std::min(p.cutoff, std::exp(-1.0));
                           const double s_lo = std::max(p.t_floor, 1e-300);
                           const double r2 = max_over_log_time(
                               s_lo, s_hi, [&](double s) { return petrovsky_squared_radius(p.factor, -s); });
                           const double r = std::sqrt(std::max(r2, 0.0)) * (1.0 + 1e-9) + 1e-300;
                           std::vector<double> origin(n, 0.0);
                           set_radial(origin, r, -p.cutoff, 0.0);
                       },
                       [&](const HeatBallSpec& h) {
                           const double r = std::sqrt(2.0 / (std::exp(1.0) * h.level * h.level)) * (1.0 + 1e-9);
                           set_radial(h.center.x, r, h.center.t - 1.0 / (h.level * h.level), h.center.t);
                       },
                       [&](const HalfSpaceSpec& h) {
                           box.lo.assign(n, -kInf);
                           box.hi.assign(n, kInf);
                           box.t_lo = h.side == TimeSide::Before ? -kInf : h.tau;
                           box.t_hi = h.side == TimeSide::Before ? h.tau : kInf;
                       },
                       [&](const IrregularSubdomainSpec& s) {
                           const double s_lo = std::max(s.t_floor, 1e-300);
                           const double r2 = max_over_log_time(s_lo, -s.cutoff, [&](double a) {
                               return irregular_level_squared_radius(s.k, s.alpha, s.level, -a);
                           });
                           // the level curve is smooth in log|t|; a small margin covers the scan error
                           const double r = std::sqrt(std::max(r2, 0.0)) * 1.001 + 1e-300;
                           std::vector<double> origin(n, 0.0);
                           set_radial(origin, r, s.cutoff, 0.0);
                       },
                       [&](const EmptySpec&) {
                           box.lo.assign(n, kInf);
                           box.hi.assign(n, -kInf);
                           box.t_lo = kInf;
                           box.t_hi = -kInf;
                       },
                   },
                   *prim);
        return box;
    }
    const Box a = left().bounding_box();
    const Box b = right().bounding_box();
    switch (*op()) {
        case CsgOp::Union:
            if (a.empty()) return b;
            if (b.empty()) return a;
            box = a;
            for (std::size_t d = 0; d < n; ++d) {
                box.lo[d] = std::min(a.lo[d], b.lo[d]);
                box.hi[d] = std::max(a.hi[d], b.hi[d]);
            }
            box.t_lo = std::min(a.t_lo, b.t_lo);
            box.t_hi = std::max(a.t_hi, b.t_hi);
            return box;
        case CsgOp::Intersection:
            box = a;
            for (std::size_t d = 0; d < n; ++d) {
                box.lo[d] = std::max(a.lo[d], b.lo[d]);
                box.hi[d] = std::min(a.hi[d], b.hi[d]);
            }
            box.t_lo = std::max(a.t_lo, b.t_lo);
            box.t_hi = std::min(a.t_hi, b.t_hi);
            return box;
        case CsgOp::Difference: return a;
    }
    return a;
}

namespace {

// Returns the leaf tag for a crossing if this primitive's membership flips.
std::optional<BoundaryClass> primitive_tag(const Primitive& prim, const Region& leaf, const SpaceTimePoint& in,
                                           const SpaceTimePoint& out) {
    if (leaf.contains(in) == leaf.contains(out)) return std::nullopt;
    return std::visit(
        overloaded{
            [&](const CylinderSpec& c) -> BoundaryClass {
                const bool flip_lo = (in.t > c.t_start) != (out.t > c.t_start);
                const bool flip_hi = (in.t < c.t_end) != (out.t < c.t_end);
                const bool flip_q = c.base.contains(in.x) != c.base.contains(out.x);
                const double gap = 4.0 * distance(in, out) + 1e-300;
                const bool near_q = c.base.boundary_distance(out.x) <= gap;
                if (flip_lo) return flip_q || near_q ? BoundaryClass::BottomEdge : BoundaryClass::Bottom;
                if (flip_q) return BoundaryClass::Wall;
                if (flip_hi) return near_q ? BoundaryClass::Wall : BoundaryClass::Top;
                return BoundaryClass::Other;
            },
            [&](const SpaceTimeBallSpec&) -> BoundaryClass { return BoundaryClass::Curved; },
            [&](const PetrovskySpec& p) -> BoundaryClass {
                if ((in.t > -p.cutoff) != (out.t > -p.cutoff)) return BoundaryClass::Earliest;
                if ((-in.t >= p.t_floor) != (-out.t >= p.t_floor) || !(out.t < 0.0)) return BoundaryClass::Other;
                return BoundaryClass::Curved;
            },
            [&](const HeatBallSpec& h) -> BoundaryClass {
                const double si = h.center.t - in.t, so = h.center.t - out.t;
                if ((si >= h.t_floor) != (so >= h.t_floor) || !(so > 0.0)) return BoundaryClass::Other;
                return BoundaryClass::Curved;
            },
            [&](const HalfSpaceSpec& h) -> BoundaryClass {
                return h.side == TimeSide::Before ? BoundaryClass::Top : BoundaryClass::Bottom;
            },
            [&](const IrregularSubdomainSpec& s) -> BoundaryClass {
                if ((in.t > s.cutoff) != (out.t > s.cutoff)) return BoundaryClass::Earliest;
                if ((-in.t >= s.t_floor) != (-out.t >= s.t_floor) || !(out.t < 0.0)) return BoundaryClass::Other;
                return BoundaryClass::Curved;
            },
            [&](const EmptySpec&) -> BoundaryClass { return BoundaryClass::Other; },
        },
        prim);
}

}  // namespace

BoundaryClass Region::classify_crossing(const SpaceTimePoint& inside, const SpaceTimePoint& outside) const {
    if (const Primitive* prim = primitive()) {
        return primitive_tag(*prim, *this, inside, outside).value_or(BoundaryClass::Other);
    }
    // first flipping leaf in depth-first order
    auto find = [&](auto&& self, const Region& r) -> std::optional<BoundaryClass> {
        if (const Primitive* prim = r.primitive()) return primitive_tag(*prim, r, inside, outside);
        if (auto t = self(self, r.left())) return t;
        return self(self, r.right());
    };
    return find(find, *this).value_or(BoundaryClass::Other);
}

std::optional<double> Region::tip_scaled_radius(double L) const {
    const Primitive* prim = primitive();
    if (!prim || !(L > 1.0)) return std::nullopt;
    if (const auto* p = std::get_if<PetrovskySpec>(prim)) {
        if (!(L > -std::log(p->cutoff))) return std::nullopt;
        const double q = p->factor / 4.0 * std::log(L);
        if (!(q > 0.0)) return std::nullopt;
        return q;
    }
    if (const auto* s = std::get_if<IrregularSubdomainSpec>(prim)) {
        if (!(L > -std::log(-s->cutoff))) return std::nullopt;
        const double q = level_scaled_radius(s->k, s->alpha, s->level, L);
        if (!(q > 0.0)) return std::nullopt;
        return q;
    }
    return std::nullopt;
}

std::string Region::describe() const {
    std::ostringstream os;
    os.precision(10);
    auto vec = [&](std::span<const double> v) {
        os << "[";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "]";
    };
    if (const Primitive* prim = primitive()) {
        std::visit(overloaded{
                       [&](const CylinderSpec& c) {
                           os << "cylinder(";
                           if (c.base.kind() == SpatialShape::Kind::Box) {
                               os << "box ";
                               vec(c.base.lo());
                               os << "-";
                               vec(c.base.hi());
                           } else {
                               os << "ball ";
                               vec(c.base.center());
                               os << " r=" << c.base.radius();
                           }
                           os << ", t=(" << c.t_start << "," << c.t_end << "))";
                       },
                       [&](const SpaceTimeBallSpec& b) {
                           os << "ball(center=" << to_string(b.center) << ", R=" << b.radius << ")";
                       },
                       [&](const PetrovskySpec& p) {
                           os << "petrovsky(n=" << p.n << ", A=" << p.factor << ", c=" << p.cutoff << ")";
                       },
                       [&](const HeatBallSpec& h) {
                           os << "heat-ball(center=" << to_string(h.center) << ", c=" << h.level << ")";
                       },
                       [&](const HalfSpaceSpec& h) {
                           os << "half-space(t " << (h.side == TimeSide::Before ? "<" : ">") << " " << h.tau << ")";
                       },
                       [&](const IrregularSubdomainSpec& s) {
                           os << "irregular-subdomain(n=" << s.n << ", k=" << s.k << ", alpha=" << s.alpha
                              << ", c=" << s.level << ", t0=" << s.cutoff << ")";
                       },
                       [&](const EmptySpec& e) { os << "empty(n=" << e.n << ")"; },
                   },
                   *prim);
        return os.str();
    }
    os << to_string(*op()) << "(" << left().describe() << ", " << right().describe() << ")";
    return os.str();
}

// ------------------------------------------------------------ sampling & co.

double default_boundary_tolerance(const Region& region) {
    const Box box = region.bounding_box();
    return 1e-8 * box.diagonal();
}

namespace {

Box checked_box(const Region& region, const char* what) {
    const Box box = region.bounding_box();
    if (box.empty()) throw std::invalid_argument(std::string(what) + ": region is empty");
    if (!box.bounded()) throw std::invalid_argument(std::string(what) + ": region is unbounded");
    return box;
}

SpaceTimePoint uniform_in_box(const Box& box, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SpaceTimePoint p;
    p.x.resize(box.dim());
    for (std::size_t d = 0; d < box.dim(); ++d) p.x[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * u(rng);
    p.t = box.t_lo + (box.t_hi - box.t_lo) * u(rng);
    return p;
}

constexpr std::size_t kMaxRejections = 2'000'000;

SpaceTimePoint interior_seed(const Region& region, const Box& box, std::mt19937_64& rng, const char* what) {
    for (std::size_t i = 0; i < kMaxRejections; ++i) {
        SpaceTimePoint p = uniform_in_box(box, rng);
        if (region.contains(p)) return p;
    }
    throw std::invalid_argument(std::string(what) + ": no interior point found; region is empty or too thin");
}

SpaceTimePoint along(const SpaceTimePoint& p, std::span<const double> dir, double s) {
    SpaceTimePoint q = p;
    for (std::size_t d = 0; d < q.x.size(); ++d) q.x[d] += s * dir[d];
    q.t += s * dir[q.x.size()];
    return q;
}

}  // namespace

std::vector<SpaceTimePoint> sample_interior(const Region& region, std::size_t count, std::uint64_t seed) {
    const Box box = checked_box(region, "sample_interior");
    std::mt19937_64 rng(seed);
    std::vector<SpaceTimePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(interior_seed(region, box, rng, "sample_interior"));
    return out;
}

std::vector<BoundarySample> sample_boundary(const Region& region, std::size_t count, std::uint64_t seed,
                                            double tol) {
    if (count < 1) throw std::invalid_argument("sample_boundary: count >= 1 required");
    const Box box = checked_box(region, "sample_boundary");
    if (!(tol > 0.0)) tol = 1e-8 * box.diagonal();
    const std::size_t n = region.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> extent(n + 1);
    for (std::size_t d = 0; d < n; ++d) extent[d] = box.hi[d] - box.lo[d];
    extent[n] = box.t_hi - box.t_lo;
    const double diag = box.diagonal();
    const double step = diag / 512.0;

    std::vector<BoundarySample> out;
    out.reserve(count);
    std::vector<double> dir(n + 1);
    while (out.size() < count) {
        const SpaceTimePoint seed_pt = interior_seed(region, box, rng, "sample_boundary");
        double norm = 0.0;
        for (std::size_t d = 0; d <= n; ++d) {
            dir[d] = normal(rng) * extent[d];
            norm += dir[d] * dir[d];
        }
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) continue;
        for (double& c : dir) c /= norm;

        double s_in = 0.0, s_out = 0.0;
        bool exited = false;
        for (int k = 1; k <= 4096; ++k) {
            const double s = k * step;
            if (!region.contains(along(seed_pt, dir, s))) {
                s_out = s;
                exited = true;
                break;
            }
            s_in = s;
        }
        if (!exited) continue;
        while (s_out - s_in > tol) {
            const double mid = 0.5 * (s_in + s_out);
            if (mid <= s_in || mid >= s_out) break;
            if (region.contains(along(seed_pt, dir, mid)))
                s_in = mid;
            else
                s_out = mid;
        }
        BoundarySample bs;
        bs.point = along(seed_pt, dir, s_out);
        bs.inside = along(seed_pt, dir, s_in);
        bs.tag = region.classify_crossing(bs.inside, bs.point);
        out.push_back(std::move(bs));
    }
    return out;
}

Region clip_time(const Region& region, double t0, TimeSide side) {
    const std::size_t n = region.dim();
    if (const Primitive* prim = region.primitive()) {
        if (const auto* c = std::get_if<CylinderSpec>(prim)) {
            double a = c->t_start, b = c->t_end;
            if (side == TimeSide::Before)
                b = std::min(b, t0);
            else
                a = std::max(a, t0);
            if (!(a < b)) return Region::empty(n);
            return Region::cylinder(c->base, a, b);
        }
        if (std::holds_alternative<EmptySpec>(*prim)) return region;
    }
    const Box box = region.bounding_box();
    if (box.empty()) return Region::empty(n);
    if (side == TimeSide::Before && t0 <= box.t_lo) return Region::empty(n);
    if (side == TimeSide::After && t0 >= box.t_hi) return Region::empty(n);
    if (side == TimeSide::Before && t0 > box.t_hi) return region;
    if (side == TimeSide::After && t0 < box.t_lo) return region;
    return region & Region::half_space(n, t0, side);
}

double diameter(const Region& region) {
    const Box box = region.bounding_box();
    if (box.empty()) throw std::invalid_argument("diameter: region is empty");
    if (!box.bounded()) throw std::invalid_argument("diameter: region is unbounded");
    if (const Primitive* prim = region.primitive()) {
        if (const auto* c = std::get_if<CylinderSpec>(prim)) {
            const double a = c->base.diameter(), T = c->t_end - c->t_start;
            return std::sqrt(a * a + T * T);
        }
        if (const auto* b = std::get_if<SpaceTimeBallSpec>(prim)) return 2.0 * b->radius;
    }
    const auto samples = sample_boundary(region, 600, 0x5eedULL);
    double best = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            best = std::max(best, distance(samples[i].point, samples[j].point));
    return std::min(box.diagonal(), 1.01 * best);
}

double spatial_clearance(const Region& region, const SpaceTimePoint& p) {
    if (p.dim() != region.dim()) throw std::invalid_argument("spatial_clearance: dimension mismatch");
    const CrossSection cs = region.cross_section(p.t);
    if (!cs.contains(p.x)) return 0.0;
    const std::size_t n = region.dim();
    const Box box = region.bounding_box();
    double reach = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        const double e = std::isfinite(box.hi[d] - box.lo[d]) ? box.hi[d] - box.lo[d] : 1.0;
        reach += e * e;
    }
    reach = std::sqrt(reach);

    std::vector<std::vector<double>> dirs;
    for (std::size_t d = 0; d < n; ++d)
        for (double s : {1.0, -1.0}) {
            std::vector<double> v(n, 0.0);
            v[d] = s;
            dirs.push_back(std::move(v));
        }
    if (n >= 2) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            std::vector<double> v(n);
            for (std::size_t d = 0; d < n; ++d) v[d] = ((mask >> d) & 1 ? -1.0 : 1.0) / std::sqrt(double(n));
            dirs.push_back(std::move(v));
        }
    }
    double best = kInf;
    std::vector<double> q(n);
    auto inside = [&](const std::vector<double>& v, double s) {
        for (std::size_t d = 0; d < n; ++d) q[d] = p.x[d] + s * v[d];
        return cs.contains(q);
    };
    for (const auto& v : dirs) {
        double s_in = 0.0, s_out = reach;
        const double step = reach / 256.0;
        for (int k = 1; k <= 256; ++k) {
            if (!inside(v, k * step)) {
                s_out = k * step;
                break;
            }
            s_in = k * step;
        }
        for (int it = 0; it < 60 && s_out - s_in > 1e-14 * reach; ++it) {
            const double mid = 0.5 * (s_in + s_out);
            if (inside(v, mid))
                s_in = mid;
            else
                s_out = mid;
        }
        best = std::min(best, s_in);
    }
    return best;
}

}  // namespace infheat
