#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "infheat/region.hpp"

namespace infheat {

/// Boundary data g(x, t), defined on all of space-time.
using BoundaryData = std::function<double(std::span<const double> x, double t)>;

/// Uniform spatial grid: node i has coordinates origin + i * h.
class Grid {
public:
    Grid() = default;
    Grid(std::vector<double> origin, double h, std::vector<std::size_t> counts);

    std::size_t dim() const { return origin_.size(); }
    std::size_t size() const { return size_; }
    double h() const { return h_; }
    const std::vector<double>& origin() const { return origin_; }
    const std::vector<std::size_t>& counts() const { return counts_; }
    const std::vector<std::size_t>& strides() const { return strides_; }

    double coordinate(std::size_t d, std::int64_t i) const { return origin_[d] + static_cast<double>(i) * h_; }
    void position(std::size_t flat, std::span<double> out) const;
    void unflatten(std::size_t flat, std::span<std::int64_t> idx) const;

private:
    std::vector<double> origin_;
    double h_ = 1.0;
    std::vector<std::size_t> counts_, strides_;
    std::size_t size_ = 0;
};

/// Read-only view of one time level. A null values pointer denotes the
/// initial level, where every read goes to the boundary data.
struct SliceView {
    double t = 0.0;
    const double* values = nullptr;
    const std::uint8_t* mask = nullptr;
};

struct SphereExtremes {
    double max = 0.0;
    double min = 0.0;
};

/// Grid plus the radius-eps sphere stencil.
class Stencil {
public:
    Stencil() = default;
    /// dirs is forced to 2 in one space dimension.
    Stencil(Grid grid, int K, int dirs, std::vector<double> box_lo, std::vector<double> box_hi);

    const Grid& grid() const { return grid_; }
    std::size_t dim() const { return grid_.dim(); }
    int stencil_ratio() const { return K_; }
    double eps() const { return eps_; }
    std::size_t direction_count() const { return dirs_; }
    std::span<const double> direction(std::size_t j) const {
        return {directions_.data() + j * dim(), dim()};
    }
    const std::vector<double>& box_lo() const { return box_lo_; }
    const std::vector<double>& box_hi() const { return box_hi_; }

    /// Multilinear interpolation; exterior corners read g, points outside the
    /// enclosing box return g directly.
    double interpolate(const SliceView& view, const BoundaryData& g, std::span<const double> x) const;
    SphereExtremes sphere_values(const SliceView& view, const BoundaryData& g, std::span<const double> x) const;
    /// Sphere extremes around grid node `flat` (exact index-space offsets).
    SphereExtremes sphere_values_at_node(const SliceView& view, const BoundaryData& g, std::size_t flat) const;
    /// Value of the level at a node: stored value if interior, else g.
    double node_value(const SliceView& view, const BoundaryData& g, std::size_t flat) const;

private:
    double sample_index_space(const SliceView& view, const BoundaryData& g, const double* s) const;
    double corner_value(const SliceView& view, const BoundaryData& g, const std::int64_t* idx) const;

    Grid grid_;
    int K_ = 1;
    double eps_ = 0.0;
    std::size_t dirs_ = 0;
    std::vector<double> directions_;  // dirs x n
    std::vector<double> offsets_;     // K * directions, index units
    std::vector<std::int64_t> int_offsets_;
    std::vector<std::uint8_t> integral_;  // direction lands on nodes exactly
    std::vector<double> box_lo_, box_hi_;
};

/// Sphere direction set: {+1,-1} in n=1, angles 2*pi*j/dirs in n=2,
/// Fibonacci hemisphere plus antipodes in n=3. Always antipodally paired.
std::vector<double> sphere_directions(std::size_t n, std::size_t dirs);

/// Space-time lattice over a region's enclosing box with uniform time levels
/// t_s = t_lo + (s+1) dt, s = 0..N-1; level t_lo is pure boundary data.
class Lattice {
public:
    Lattice(Region region, double h, int K, double dt, int dirs);

    const Region& region() const { return region_; }
    const Stencil& stencil() const { return stencil_; }
    const Grid& grid() const { return stencil_.grid(); }
    std::size_t dim() const { return grid().dim(); }
    double h() const { return grid().h(); }
    int stencil_ratio() const { return stencil_.stencil_ratio(); }
    double eps() const { return stencil_.eps(); }
    double dt() const { return dt_; }
    std::size_t direction_count() const { return stencil_.direction_count(); }
    std::span<const double> direction(std::size_t j) const { return stencil_.direction(j); }

    std::size_t slice_count() const { return slices_; }
    double initial_time() const { return t0_; }
    double time(std::size_t s) const { return t0_ + static_cast<double>(s + 1) * dt_; }

    /// Interior flags of the nodes at time t (contains(region, node)).
    /// Returns a flat index range [first, last) holding every interior node.
    std::pair<std::size_t, std::size_t> interior_mask(double t, std::vector<std::uint8_t>& mask) const;
    std::size_t interior_count(std::size_t s) const;

private:
    Region region_;
    Stencil stencil_;
    double dt_ = 0.0;
    double t0_ = 0.0;
    std::size_t slices_ = 0;
};

/// Per-slice values at the interior nodes of a lattice plus boundary data.
class LatticeField {
public:
    LatticeField(std::shared_ptr<const Lattice> lattice, BoundaryData g);

    /// Field whose interior node values are f(node, t_slice) on every slice.
    static LatticeField from_function(std::shared_ptr<const Lattice> lattice, BoundaryData g,
                                      const BoundaryData& f);

    const Lattice& lattice() const { return *lattice_; }
    std::shared_ptr<const Lattice> lattice_ptr() const { return lattice_; }
    const BoundaryData& boundary() const { return g_; }

    std::size_t slice_count() const { return values_.size(); }
    double time(std::size_t s) const { return lattice_->time(s); }
    void append(std::vector<double> values, std::vector<std::uint8_t> mask);

    SliceView view(std::size_t s) const;
    SliceView initial_view() const { return {lattice_->initial_time(), nullptr, nullptr}; }
    std::span<const double> values(std::size_t s) const { return values_.at(s); }
    std::span<double> values(std::size_t s) { return values_.at(s); }
    std::span<const std::uint8_t> mask(std::size_t s) const { return masks_.at(s); }
    bool interior(std::size_t s, std::size_t flat) const { return masks_.at(s)[flat] != 0; }

    double node_value(std::size_t s, std::size_t flat) const;
    double interpolate(std::size_t s, std::span<const double> x) const;
    SphereExtremes sphere_values(std::size_t s, std::span<const double> x) const;

    /// CSV dump: slice,t,x0[,x1,x2],value over interior nodes.
    void write_csv(std::ostream& os) const;

private:
    std::shared_ptr<const Lattice> lattice_;
    BoundaryData g_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<std::uint8_t>> masks_;
};

}  // namespace infheat
