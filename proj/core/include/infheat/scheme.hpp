#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "infheat/lattice.hpp"
#include "infheat/region.hpp"

namespace infheat {

/// Discretization knobs. eps = K * h; dt = 0 selects eps^2 / 2.
struct SchemeConfig {
    double h = 0.01;
    int K = 1;
    int dirs = 2;
    double dt = 0.0;
    int max_iter = 2'000'000;
    double fix_tol = 1e-12;

    double eps() const { return K * h; }
    double time_step() const { return dt > 0.0 ? dt : eps() * eps() / 2.0; }
    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

std::shared_ptr<const Lattice> make_lattice(const Region& region, const SchemeConfig& cfg);

/// One explicit Euler step u + lambda (M + m - 2u), lambda = dt / eps^2 <= 1/2,
/// evaluated as a clamped convex combination so that it is exactly monotone
/// in (u, M, m) and fixes constants.
double scheme_update(double u, double max_val, double min_val, double lambda);

/// (max + min - 2 u(x)) / eps^2 over the sphere stencil.
double discrete_inf_laplacian(const Stencil& stencil, const SliceView& view, const BoundaryData& g,
                              std::span<const double> x);
double discrete_inf_laplacian(const LatticeField& field, std::size_t slice, std::span<const double> x);

/// |D_h u|^2 times the normalized operator, D_h the central difference with spacing h.
double discrete_inf_laplacian_nonnormalized(const Stencil& stencil, const SliceView& view, const BoundaryData& g,
                                            std::span<const double> x);
double discrete_inf_laplacian_nonnormalized(const LatticeField& field, std::size_t slice,
                                            std::span<const double> x);

/// Called after each completed slice; return false to stop marching.
using SliceObserver = std::function<bool(std::size_t slice, const SliceView& view)>;

enum class StepRule { Euler, MidRange };

/// Marches slice by slice, keeping only two levels in memory.
void march_stream(const Lattice& lattice, const BoundaryData& g, const SliceObserver& observer,
                  StepRule rule = StepRule::Euler);

LatticeField march(std::shared_ptr<const Lattice> lattice, const BoundaryData& g);
LatticeField march(const Region& region, const BoundaryData& g, const SchemeConfig& cfg);

/// u_next = (max + min) / 2; requires dt == eps^2 / 2.
LatticeField dpp_march(std::shared_ptr<const Lattice> lattice, const BoundaryData& g);
LatticeField dpp_march(const Region& region, const BoundaryData& g, const SchemeConfig& cfg);

/// Replaces the field inside the cylinder `box` by the scheme solution that
/// takes the field's own values as data on the parabolic boundary of the box.
LatticeField parabolic_modification(const LatticeField& field, const Region& box);

using SpatialData = std::function<double(std::span<const double> x)>;

/// Values on the grid nodes of a spatial domain plus boundary data phi.
class SpatialField {
public:
    SpatialField(Stencil stencil, SpatialData phi);

    const Stencil& stencil() const { return stencil_; }
    const Grid& grid() const { return stencil_.grid(); }
    const SpatialData& phi() const { return phi_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<std::uint8_t>& mask() { return mask_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    SliceView view() const { return {0.0, values_.data(), mask_.data()}; }
    BoundaryData boundary() const;
    double interpolate(std::span<const double> x) const;

private:
    Stencil stencil_;
    SpatialData phi_;
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
};

struct StationaryResult {
    std::shared_ptr<const SpatialField> field;
    int iterations = 0;
    double last_change = 0.0;
    /// Estimated distance to the exact discrete fixed point,
    /// last_change / (1 - contraction).
    double fixed_point_error = 0.0;
};

class StationaryError : public std::runtime_error {
public:
    StationaryError(const std::string& what, double last_change, int iterations)
        : std::runtime_error(what), last_change_(last_change), iterations_(iterations) {}
    double last_change() const { return last_change_; }
    int iterations() const { return iterations_; }

private:
    double last_change_;
    int iterations_;
};

/// Jacobi iteration nu <- (max + min)/2 - (eps^2/2) rhs for the discrete
/// problem Delta_inf^N nu = rhs in the open domain, nu = phi outside.
/// Progress lines "slice=<sweep> t=<sweep*eps^2/2> max|Δu|=<v>" go to log.
StationaryResult stationary_solve(const SpatialShape& domain, double rhs, SpatialData phi,
                                  const SchemeConfig& cfg, std::ostream* log = nullptr,
                                  int log_every = 10000);

}  // namespace infheat
