#include "infheat/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <variant>

#include "infheat/format.hpp"

namespace infheat {

namespace {

constexpr std::size_t kMaxDim = 3;
constexpr double kMaxStoredValues = 4e7;
// slices with fewer interior nodes run serially; thread start-up dominates otherwise
constexpr std::ptrdiff_t kParallelThreshold = 4096;

}  // namespace

void SchemeConfig::validate() const {
    if (!(std::isfinite(h) && h > 0.0)) throw std::invalid_argument("scheme: h > 0 required");
    if (K < 1) throw std::invalid_argument("scheme: K >= 1 required");
    if (dirs < 2 || dirs % 2 != 0) throw std::invalid_argument("scheme: dirs must be even and >= 2");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("scheme: dt >= 0 required");
    const double bound = eps() * eps() / 2.0;
    if (dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument("CFL: dt ≤ ε²/2 (dt=" + format_double(dt) + ", ε²/2=" + format_double(bound) +
                                    ")");
    if (!(fix_tol > 0.0)) throw std::invalid_argument("scheme: fixTol > 0 required");
    if (max_iter < 1) throw std::invalid_argument("scheme: maxIter >= 1 required");
}

std::shared_ptr<const Lattice> make_lattice(const Region& region, const SchemeConfig& cfg) {
    cfg.validate();
    return std::make_shared<const Lattice>(region, cfg.h, cfg.K, cfg.time_step(), cfg.dirs);
}

double scheme_update(double u, double max_val, double min_val, double lambda) {
    const double w = 1.0 - 2.0 * lambda;
    const double v = w * u + lambda * max_val + lambda * min_val;
    return std::clamp(v, std::min(u, min_val), std::max(u, max_val));
}

double discrete_inf_laplacian(const Stencil& stencil, const SliceView& view, const BoundaryData& g,
                              std::span<const double> x) {
    const SphereExtremes e = stencil.sphere_values(view, g, x);
    const double u = stencil.interpolate(view, g, x);
    const double eps = stencil.eps();
    return (e.max + e.min - 2.0 * u) / (eps * eps);
}

double discrete_inf_laplacian(const LatticeField& field, std::size_t slice, std::span<const double> x) {
    return discrete_inf_laplacian(field.lattice().stencil(), field.view(slice), field.boundary(), x);
}

double discrete_inf_laplacian_nonnormalized(const Stencil& stencil, const SliceView& view, const BoundaryData& g,
                                            std::span<const double> x) {
    const std::size_t n = stencil.dim();
    const double h = stencil.grid().h();
    double y[kMaxDim];
    double grad2 = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        std::copy(x.begin(), x.end(), y);
        y[d] = x[d] + h;
        const double up = stencil.interpolate(view, g, std::span<const double>(y, n));
        y[d] = x[d] - h;
        const double dn = stencil.interpolate(view, g, std::span<const double>(y, n));
        const double gd = (up - dn) / (2.0 * h);
        grad2 += gd * gd;
    }
    return grad2 * discrete_inf_laplacian(stencil, view, g, x);
}

double discrete_inf_laplacian_nonnormalized(const LatticeField& field, std::size_t slice,
                                            std::span<const double> x) {
    return discrete_inf_laplacian_nonnormalized(field.lattice().stencil(), field.view(slice), field.boundary(), x);
}

namespace {

// One step of the scheme over the flat index range [first, last).
void step_slice(const Stencil& st, const BoundaryData& g, const SliceView& prev, const std::uint8_t* mask,
                double* out, std::size_t first, std::size_t last, double lambda, StepRule rule) {
    const std::size_t n = st.dim();
    const auto a = static_cast<std::ptrdiff_t>(first), b = static_cast<std::ptrdiff_t>(last);

    if (n == 1) {
        // nodes i +- K are exact sphere samples
        const auto K = static_cast<std::ptrdiff_t>(st.stencil_ratio());
        const auto count = static_cast<std::ptrdiff_t>(st.grid().counts()[0]);
        const double x0 = st.grid().origin()[0], h = st.grid().h();
        auto read = [&](std::ptrdiff_t j) {
            if (j >= 0 && j < count && prev.values && prev.mask[j]) return prev.values[j];
            const double x = x0 + static_cast<double>(j) * h;
            return g(std::span<const double>(&x, 1), prev.t);
        };
#pragma omp parallel for schedule(static) if (b - a > kParallelThreshold)
        for (std::ptrdiff_t i = a; i < b; ++i) {
            if (!mask[i]) continue;
            const double u = read(i), p = read(i + K), q = read(i - K);
            const double M = std::max(p, q), m = std::min(p, q);
            out[i] = rule == StepRule::MidRange ? 0.5 * (M + m) : scheme_update(u, M, m, lambda);
        }
        return;
    }
#pragma omp parallel for schedule(static) if (b - a > kParallelThreshold)
    for (std::ptrdiff_t i = a; i < b; ++i) {
        if (!mask[i]) continue;
        const auto flat = static_cast<std::size_t>(i);
        const SphereExtremes e = st.sphere_values_at_node(prev, g, flat);
        out[i] = rule == StepRule::MidRange ? 0.5 * (e.max + e.min)
                                            : scheme_update(st.node_value(prev, g, flat), e.max, e.min, lambda);
    }
}

void check_dpp_step(const Lattice& lattice) {
    const double eps = lattice.eps();
    const double want = eps * eps / 2.0;
    if (std::abs(lattice.dt() - want) > 1e-12 * want)
        throw std::invalid_argument("dpp_march: dt = ε²/2 required (dt=" + format_double(lattice.dt()) +
                                    ", ε²/2=" + format_double(want) + ")");
}

}  // namespace

void march_stream(const Lattice& lattice, const BoundaryData& g, const SliceObserver& observer, StepRule rule) {
    if (!g) throw std::invalid_argument("march: boundary data required");
    if (rule == StepRule::MidRange) check_dpp_step(lattice);
    const Stencil& st = lattice.stencil();
    const double eps = lattice.eps();
    const double lambda = lattice.dt() / (eps * eps);
    const std::size_t size = lattice.grid().size();

    std::vector<double> prev_vals(size, 0.0), cur_vals(size, 0.0);
    std::vector<std::uint8_t> prev_mask, cur_mask;
    SliceView prev{lattice.initial_time(), nullptr, nullptr};
    for (std::size_t s = 0; s < lattice.slice_count(); ++s) {
        const double t = lattice.time(s);
        const auto [first, last] = lattice.interior_mask(t, cur_mask);
        step_slice(st, g, prev, cur_mask.data(), cur_vals.data(), first, last, lambda, rule);
        const SliceView cur{t, cur_vals.data(), cur_mask.data()};
        if (observer && !observer(s, cur)) return;
        std::swap(prev_vals, cur_vals);
        std::swap(prev_mask, cur_mask);
        prev = SliceView{t, prev_vals.data(), prev_mask.data()};
    }
}

namespace {

LatticeField collect(std::shared_ptr<const Lattice> lattice, const BoundaryData& g, StepRule rule) {
    const double stored =
        static_cast<double>(lattice->slice_count()) * static_cast<double>(lattice->grid().size());
    if (stored > kMaxStoredValues)
        throw std::invalid_argument("march: field too large to store (" + format_double(stored) +
                                    " values); use march_stream");
    LatticeField field(lattice, g);
    march_stream(
        *lattice, g,
        [&](std::size_t, const SliceView& v) {
            const std::size_t size = lattice->grid().size();
            std::vector<double> vals(v.values, v.values + size);
            std::vector<std::uint8_t> mask(v.mask, v.mask + size);
            for (std::size_t i = 0; i < size; ++i)
                if (!mask[i]) vals[i] = 0.0;
            field.append(std::move(vals), std::move(mask));
            return true;
        },
        rule);
    return field;
}

}  // namespace

LatticeField march(std::shared_ptr<const Lattice> lattice, const BoundaryData& g) {
    return collect(std::move(lattice), g, StepRule::Euler);
}

LatticeField march(const Region& region, const BoundaryData& g, const SchemeConfig& cfg) {
    return march(make_lattice(region, cfg), g);
}

LatticeField dpp_march(std::shared_ptr<const Lattice> lattice, const BoundaryData& g) {
    check_dpp_step(*lattice);
    return collect(std::move(lattice), g, StepRule::MidRange);
}

LatticeField dpp_march(const Region& region, const BoundaryData& g, const SchemeConfig& cfg) {
    return dpp_march(make_lattice(region, cfg), g);
}

LatticeField parabolic_modification(const LatticeField& field, const Region& box) {
    const Primitive* prim = box.primitive();
    if (!prim || !std::holds_alternative<CylinderSpec>(*prim))
        throw std::invalid_argument("parabolic_modification: box must be a cylinder region");
    const Lattice& lat = field.lattice();
    if (box.dim() != lat.dim()) throw std::invalid_argument("parabolic_modification: dimension mismatch");
    if (field.slice_count() != lat.slice_count())
        throw std::invalid_argument("parabolic_modification: field must cover all slices");

    const Stencil& st = lat.stencil();
    const std::size_t size = lat.grid().size();
    const double eps = lat.eps();
    const double lambda = lat.dt() / (eps * eps);

    // box nodes per slice, checked against the field's interior
    std::vector<std::vector<std::uint8_t>> box_masks(lat.slice_count());
    std::vector<double> x(lat.dim());
    bool any = false;
    for (std::size_t s = 0; s < lat.slice_count(); ++s) {
        const CrossSection cs = box.cross_section(lat.time(s));
        if (cs.empty()) continue;
        auto& bm = box_masks[s];
        bm.assign(size, 0);
        for (std::size_t i = 0; i < size; ++i) {
            lat.grid().position(i, x);
            if (!cs.contains(x)) continue;
            if (!field.interior(s, i))
                throw std::invalid_argument("parabolic_modification: box not contained in the field's region");
            bm[i] = 1;
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("parabolic_modification: box contains no lattice nodes");

    LatticeField out(field.lattice_ptr(), field.boundary());
    for (std::size_t s = 0; s < lat.slice_count(); ++s) {
        std::vector<double> vals(field.values(s).begin(), field.values(s).end());
        std::vector<std::uint8_t> mask(field.mask(s).begin(), field.mask(s).end());
        if (!box_masks[s].empty()) {
            const SliceView prev = s == 0 ? field.initial_view() : out.view(s - 1);
            const auto& bm = box_masks[s];
            for (std::size_t i = 0; i < size; ++i) {
                if (!bm[i]) continue;
                const SphereExtremes e = st.sphere_values_at_node(prev, field.boundary(), i);
                vals[i] = scheme_update(st.node_value(prev, field.boundary(), i), e.max, e.min, lambda);
            }
        }
        out.append(std::move(vals), std::move(mask));
    }
    return out;
}

// ---------------------------------------------------------------- stationary

SpatialField::SpatialField(Stencil stencil, SpatialData phi) : stencil_(std::move(stencil)), phi_(std::move(phi)) {
    if (!phi_) throw std::invalid_argument("SpatialField: boundary function required");
    values_.assign(stencil_.grid().size(), 0.0);
    mask_.assign(stencil_.grid().size(), 0);
}

BoundaryData SpatialField::boundary() const {
    SpatialData phi = phi_;
    return [phi](std::span<const double> x, double) { return phi(x); };
}

double SpatialField::interpolate(std::span<const double> x) const {
    return stencil_.interpolate(view(), boundary(), x);
}

StationaryResult stationary_solve(const SpatialShape& domain, double rhs, SpatialData phi, const SchemeConfig& cfg,
                                  std::ostream* log, int log_every) {
    cfg.validate();
    if (!std::isfinite(rhs)) throw std::invalid_argument("stationary_solve: rhs must be finite");
    if (!phi) throw std::invalid_argument("stationary_solve: boundary function required");
    const std::size_t n = domain.dim();
    if (n > kMaxDim) throw std::invalid_argument("stationary_solve: 1 <= n <= 3 required");

    std::vector<double> lo, hi;
    domain.bounds(lo, hi);
    std::vector<std::size_t> counts(n);
    for (std::size_t d = 0; d < n; ++d)
        counts[d] = static_cast<std::size_t>(std::floor((hi[d] - lo[d]) / cfg.h + 1e-9)) + 1;
    auto field = std::make_shared<SpatialField>(Stencil(Grid(lo, cfg.h, counts), cfg.K, cfg.dirs, lo, hi), phi);
    const Stencil& st = field->stencil();
    const std::size_t size = st.grid().size();
    auto& mask = field->mask();
    auto& vals = field->values();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < size; ++i) {
        st.grid().position(i, x);
        if (domain.contains(x)) {
            mask[i] = 1;
            vals[i] = phi(x);
        }
    }
    const BoundaryData g = field->boundary();
    const double eps = st.eps();
    const double shift = eps * eps / 2.0 * rhs;
    std::vector<double> next = vals;
    double change = std::numeric_limits<double>::infinity(), prev_change = change;
    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        const SliceView view = field->view();
        double local = 0.0;
        const auto total = static_cast<std::ptrdiff_t>(size);
#pragma omp parallel for schedule(static) reduction(max : local) if (total > kParallelThreshold)
        for (std::ptrdiff_t i = 0; i < total; ++i) {
            if (!mask[i]) continue;
            const SphereExtremes e = st.sphere_values_at_node(view, g, static_cast<std::size_t>(i));
            next[i] = 0.5 * (e.max + e.min) - shift;
            local = std::max(local, std::abs(next[i] - vals[i]));
        }
        std::swap(vals, next);
        prev_change = change;
        change = local;
        if (log && log_every > 0 && (it + 1) % log_every == 0)
            *log << "slice=" << it + 1 << " t=" << format_double((it + 1) * eps * eps / 2.0)
                 << " max|Δu|=" << format_double(change) << '\n';
        if (change < cfg.fix_tol) break;
    }
    if (!(change < cfg.fix_tol))
        throw StationaryError("stationary_solve: no convergence within maxIter=" + std::to_string(cfg.max_iter) +
                                  " (last max|Δu|=" + format_double(change) + ")",
                              change, it);
    StationaryResult res;
    res.iterations = it + 1;
    res.last_change = change;
    const double rho = prev_change > 0.0 && std::isfinite(prev_change) ? std::min(change / prev_change, 0.999999) : 0.0;
    res.fixed_point_error = change / (1.0 - rho);
    if (log) *log << "slice=" << res.iterations << " t=" << format_double(res.iterations * eps * eps / 2.0)
                  << " max|Δu|=" << format_double(change) << '\n';
    res.field = std::move(field);
    return res;
}

}  // namespace infheat
