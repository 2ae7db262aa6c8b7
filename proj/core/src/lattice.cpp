#include "infheat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "infheat/format.hpp"

namespace infheat {

namespace {

constexpr std::size_t kMaxDim = 3;
constexpr double kSnap = 1e-10;       // index-space snapping of sample positions
constexpr std::size_t kMaxNodes = 50'000'000;

double snap_unit(double c) {
    if (std::abs(c) < 1e-15) return 0.0;
    if (std::abs(c - 1.0) < 1e-15) return 1.0;
    if (std::abs(c + 1.0) < 1e-15) return -1.0;
    return c;
}

}  // namespace

// ----------------------------------------------------------------------- Grid

Grid::Grid(std::vector<double> origin, double h, std::vector<std::size_t> counts)
    : origin_(std::move(origin)), h_(h), counts_(std::move(counts)) {
    if (origin_.size() != counts_.size() || origin_.empty())
        throw std::invalid_argument("Grid: origin and counts must have equal nonzero length");
    strides_.assign(counts_.size(), 1);
    size_ = 1;
    for (std::size_t d = counts_.size(); d-- > 0;) {
        strides_[d] = size_;
        size_ *= counts_[d];
    }
}

void Grid::unflatten(std::size_t flat, std::span<std::int64_t> idx) const {
    for (std::size_t d = 0; d < dim(); ++d) {
        idx[d] = static_cast<std::int64_t>(flat / strides_[d]);
        flat %= strides_[d];
    }
}

void Grid::position(std::size_t flat, std::span<double> out) const {
    for (std::size_t d = 0; d < dim(); ++d) {
        const auto i = static_cast<std::int64_t>(flat / strides_[d]);
        flat %= strides_[d];
        out[d] = coordinate(d, i);
    }
}

// ----------------------------------------------------------------- directions

std::vector<double> sphere_directions(std::size_t n, std::size_t dirs) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("sphere_directions: 1 <= n <= 3 required");
    if (n == 1) return {1.0, -1.0};
    if (dirs < 2 || dirs % 2 != 0) throw std::invalid_argument("directions: dirs must be even and >= 2");
    const std::size_t half = dirs / 2;
    std::vector<double> v(dirs * n);
    for (std::size_t j = 0; j < half; ++j) {
        double* p = v.data() + j * n;
        if (n == 2) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(dirs);
            p[0] = snap_unit(std::cos(th));
            p[1] = snap_unit(std::sin(th));
        } else {
            const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
            const double z = (static_cast<double>(j) + 0.5) / static_cast<double>(half);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * static_cast<double>(j);
            p[0] = snap_unit(r * std::cos(phi));
            p[1] = snap_unit(r * std::sin(phi));
            p[2] = snap_unit(z);
        }
        double* q = v.data() + (j + half) * n;
        for (std::size_t d = 0; d < n; ++d) q[d] = -p[d];
    }
    return v;
}

// -------------------------------------------------------------------- Stencil

Stencil::Stencil(Grid grid, int K, int dirs, std::vector<double> box_lo, std::vector<double> box_hi)
    : grid_(std::move(grid)), K_(K), box_lo_(std::move(box_lo)), box_hi_(std::move(box_hi)) {
    const std::size_t n = grid_.dim();
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("lattice: grid solving supports 1 <= n <= 3");
    if (K < 1) throw std::invalid_argument("lattice: K >= 1 required");
    if (n > 1 && (dirs < 2 || dirs % 2 != 0))
        throw std::invalid_argument("lattice: dirs must be even and >= 2");
    eps_ = K * grid_.h();
    directions_ = sphere_directions(n, n == 1 ? 2 : static_cast<std::size_t>(dirs));
    dirs_ = directions_.size() / n;
    offsets_.resize(directions_.size());
    int_offsets_.resize(directions_.size());
    integral_.assign(dirs_, 1);
    for (std::size_t j = 0; j < dirs_; ++j) {
        for (std::size_t d = 0; d < n; ++d) {
            const double o = K * directions_[j * n + d];
            offsets_[j * n + d] = o;
            const double r = std::round(o);
            int_offsets_[j * n + d] = static_cast<std::int64_t>(r);
            if (std::abs(o - r) > kSnap) integral_[j] = 0;
        }
    }
}

double Stencil::corner_value(const SliceView& view, const BoundaryData& g, const std::int64_t* idx) const {
    const std::size_t n = dim();
    const auto& counts = grid_.counts();
    bool in_range = true;
    std::size_t flat = 0;
    for (std::size_t d = 0; d < n; ++d) {
        if (idx[d] < 0 || idx[d] >= static_cast<std::int64_t>(counts[d])) {
            in_range = false;
            break;
        }
        flat += static_cast<std::size_t>(idx[d]) * grid_.strides()[d];
    }
    if (in_range && view.values && view.mask[flat]) return view.values[flat];
    double x[kMaxDim];
    for (std::size_t d = 0; d < n; ++d) x[d] = grid_.coordinate(d, idx[d]);
    return g(std::span<const double>(x, n), view.t);
}

double Stencil::sample_index_space(const SliceView& view, const BoundaryData& g, const double* s) const {
    const std::size_t n = dim();
    double x[kMaxDim];
    bool outside = false;
    for (std::size_t d = 0; d < n; ++d) {
        x[d] = grid_.origin()[d] + s[d] * grid_.h();
        if (x[d] < box_lo_[d] || x[d] > box_hi_[d]) outside = true;
    }
    if (outside) return g(std::span<const double>(x, n), view.t);

    std::int64_t base[kMaxDim];
    double frac[kMaxDim];
    std::size_t active[kMaxDim];
    std::size_t m = 0;
    for (std::size_t d = 0; d < n; ++d) {
        double fl = std::floor(s[d]);
        double fr = s[d] - fl;
        if (fr < kSnap) {
            fr = 0.0;
        } else if (fr > 1.0 - kSnap) {
            fl += 1.0;
            fr = 0.0;
        }
        base[d] = static_cast<std::int64_t>(fl);
        frac[d] = fr;
        if (fr > 0.0) active[m++] = d;
    }
    if (m == 0) return corner_value(view, g, base);

    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::int64_t idx[kMaxDim];
    for (std::size_t c = 0; c < (std::size_t{1} << m); ++c) {
        std::copy(base, base + n, idx);
        double w = 1.0;
        for (std::size_t a = 0; a < m; ++a) {
            const std::size_t d = active[a];
            if ((c >> a) & 1U) {
                idx[d] += 1;
                w *= frac[d];
            } else {
                w *= 1.0 - frac[d];
            }
        }
        const double v = corner_value(view, g, idx);
        sum += w * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // the clamp keeps the rounded result inside the corner range, which makes
    // the interpolant exactly monotone and constant-preserving
    return std::clamp(sum, lo, hi);
}

double Stencil::interpolate(const SliceView& view, const BoundaryData& g, std::span<const double> x) const {
    const std::size_t n = dim();
    if (x.size() != n) throw std::invalid_argument("interpolate: dimension mismatch");
    double s[kMaxDim];
    for (std::size_t d = 0; d < n; ++d) s[d] = (x[d] - grid_.origin()[d]) / grid_.h();
    for (std::size_t d = 0; d < n; ++d)
        if (x[d] < box_lo_[d] || x[d] > box_hi_[d]) return g(x, view.t);
    return sample_index_space(view, g, s);
}

SphereExtremes Stencil::sphere_values(const SliceView& view, const BoundaryData& g, std::span<const double> x) const {
    const std::size_t n = dim();
    if (x.size() != n) throw std::invalid_argument("sphere_values: dimension mismatch");
    SphereExtremes e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double y[kMaxDim];
    for (std::size_t j = 0; j < dirs_; ++j) {
        for (std::size_t d = 0; d < n; ++d) y[d] = x[d] + eps_ * directions_[j * n + d];
        const double v = interpolate(view, g, std::span<const double>(y, n));
        if (v > e.max) e.max = v;
        if (v < e.min) e.min = v;
    }
    return e;
}

SphereExtremes Stencil::sphere_values_at_node(const SliceView& view, const BoundaryData& g, std::size_t flat) const {
    const std::size_t n = dim();
    std::int64_t idx[kMaxDim];
    grid_.unflatten(flat, std::span<std::int64_t>(idx, n));
    SphereExtremes e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    std::int64_t nb[kMaxDim];
    double s[kMaxDim];
    for (std::size_t j = 0; j < dirs_; ++j) {
        double v;
        if (integral_[j]) {
            for (std::size_t d = 0; d < n; ++d) nb[d] = idx[d] + int_offsets_[j * n + d];
            v = corner_value(view, g, nb);
        } else {
            for (std::size_t d = 0; d < n; ++d) s[d] = static_cast<double>(idx[d]) + offsets_[j * n + d];
            v = sample_index_space(view, g, s);
        }
        if (v > e.max) e.max = v;
        if (v < e.min) e.min = v;
    }
    return e;
}

double Stencil::node_value(const SliceView& view, const BoundaryData& g, std::size_t flat) const {
    if (view.values && view.mask[flat]) return view.values[flat];
    double x[kMaxDim];
    grid_.position(flat, std::span<double>(x, dim()));
    return g(std::span<const double>(x, dim()), view.t);
}

// -------------------------------------------------------------------- Lattice

Lattice::Lattice(Region region, double h, int K, double dt, int dirs) : region_(std::move(region)), dt_(dt) {
    if (!(std::isfinite(h) && h > 0.0)) throw std::invalid_argument("lattice: h > 0 required");
    if (K < 1) throw std::invalid_argument("lattice: K >= 1 required");
    if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("lattice: dt > 0 required");
    const double eps = K * h;
    const double bound = eps * eps / 2.0;
    if (dt > bound * (1.0 + 1e-12)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "CFL violated: dt ≤ ε²/2 = %.6g", bound);
        throw std::invalid_argument(buf);
    }
    const std::size_t n = region_.dim();
    if (n > kMaxDim) throw std::invalid_argument("lattice: grid solving supports 1 <= n <= 3");
    const Box box = region_.bounding_box();
    if (box.empty()) throw std::invalid_argument("lattice: region is empty");
    if (!box.bounded()) throw std::invalid_argument("lattice: region is unbounded");

    std::vector<std::size_t> counts(n);
    double total = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
        counts[d] = static_cast<std::size_t>(std::floor((box.hi[d] - box.lo[d]) / h + 1e-9)) + 1;
        total *= static_cast<double>(counts[d]);
    }
    if (total > static_cast<double>(kMaxNodes))
        throw std::invalid_argument("lattice: too many spatial nodes (" + format_double(total) + ")");
    stencil_ = Stencil(Grid(box.lo, h, std::move(counts)), K, dirs, box.lo, box.hi);
    t0_ = box.t_lo;
    slices_ = static_cast<std::size_t>(std::max(1.0, std::ceil((box.t_hi - box.t_lo) / dt - 1e-9)));
}

std::pair<std::size_t, std::size_t> Lattice::interior_mask(double t, std::vector<std::uint8_t>& mask) const {
    const Grid& g = grid();
    const std::size_t n = g.dim();
    mask.assign(g.size(), 0);
    const CrossSection cs = region_.cross_section(t);
    if (cs.empty()) return {0, 0};
    std::int64_t lo[kMaxDim], hi[kMaxDim];
    for (std::size_t d = 0; d < n; ++d) {
        const double a = std::max(0.0, std::floor((cs.lo()[d] - g.origin()[d]) / g.h()));
        const double b = std::min(static_cast<double>(g.counts()[d]) - 1.0,
                                  std::ceil((cs.hi()[d] - g.origin()[d]) / g.h()));
        if (!(a <= b)) return {0, 0};
        lo[d] = static_cast<std::int64_t>(a);
        hi[d] = static_cast<std::int64_t>(b);
    }
    std::int64_t idx[kMaxDim];
    double x[kMaxDim];
    std::copy(lo, lo + n, idx);
    while (true) {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < n; ++d) {
            x[d] = g.coordinate(d, idx[d]);
            flat += static_cast<std::size_t>(idx[d]) * g.strides()[d];
        }
        if (cs.contains(std::span<const double>(x, n))) mask[flat] = 1;
        std::size_t d = n;
        while (d-- > 0) {
            if (++idx[d] <= hi[d]) break;
            idx[d] = lo[d];
        }
        if (d == static_cast<std::size_t>(-1)) break;
    }
    std::size_t first = 0, last = 0;
    for (std::size_t d = 0; d < n; ++d) {
        first += static_cast<std::size_t>(lo[d]) * g.strides()[d];
        last += static_cast<std::size_t>(hi[d]) * g.strides()[d];
    }
    return {first, last + 1};
}

std::size_t Lattice::interior_count(std::size_t s) const {
    std::vector<std::uint8_t> mask;
    interior_mask(time(s), mask);
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

// --------------------------------------------------------------- LatticeField

LatticeField::LatticeField(std::shared_ptr<const Lattice> lattice, BoundaryData g)
    : lattice_(std::move(lattice)), g_(std::move(g)) {
    if (!lattice_) throw std::invalid_argument("LatticeField: null lattice");
    if (!g_) throw std::invalid_argument("LatticeField: boundary data required");
}

LatticeField LatticeField::from_function(std::shared_ptr<const Lattice> lattice, BoundaryData g,
                                         const BoundaryData& f) {
    LatticeField field(std::move(lattice), std::move(g));
    const Lattice& lat = field.lattice();
    const std::size_t n = lat.dim();
    double x[kMaxDim];
    for (std::size_t s = 0; s < lat.slice_count(); ++s) {
        std::vector<std::uint8_t> mask;
        lat.interior_mask(lat.time(s), mask);
        std::vector<double> values(mask.size(), 0.0);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask[i]) continue;
            lat.grid().position(i, std::span<double>(x, n));
            values[i] = f(std::span<const double>(x, n), lat.time(s));
        }
        field.append(std::move(values), std::move(mask));
    }
    return field;
}

void LatticeField::append(std::vector<double> values, std::vector<std::uint8_t> mask) {
    if (values.size() != lattice_->grid().size() || mask.size() != values.size())
        throw std::invalid_argument("LatticeField::append: slice size mismatch");
    if (values_.size() >= lattice_->slice_count())
        throw std::invalid_argument("LatticeField::append: all slices already present");
    values_.push_back(std::move(values));
    masks_.push_back(std::move(mask));
}

SliceView LatticeField::view(std::size_t s) const {
    if (s >= values_.size()) throw std::out_of_range("LatticeField: slice index out of range");
    return {lattice_->time(s), values_[s].data(), masks_[s].data()};
}

double LatticeField::node_value(std::size_t s, std::size_t flat) const {
    return lattice_->stencil().node_value(view(s), g_, flat);
}

double LatticeField::interpolate(std::size_t s, std::span<const double> x) const {
    return lattice_->stencil().interpolate(view(s), g_, x);
}

SphereExtremes LatticeField::sphere_values(std::size_t s, std::span<const double> x) const {
    return lattice_->stencil().sphere_values(view(s), g_, x);
}

void LatticeField::write_csv(std::ostream& os) const {
    const std::size_t n = lattice_->dim();
    os << "slice,t";
    for (std::size_t d = 0; d < n; ++d) os << ",x" << d;
    os << ",value\n";
    double x[kMaxDim];
    for (std::size_t s = 0; s < values_.size(); ++s) {
        const std::string ts = format_double(time(s));
        for (std::size_t i = 0; i < values_[s].size(); ++i) {
            if (!masks_[s][i]) continue;
            lattice_->grid().position(i, std::span<double>(x, n));
            os << s << ',' << ts;
            for (std::size_t d = 0; d < n; ++d) os << ',' << format_double(x[d]);
            os << ',' << format_double(values_[s][i]) << '\n';
        }
    }
}

}  // namespace infheat
