#include "infheat/barriers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "infheat/format.hpp"

namespace infheat {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> offset_from(std::span<const double> x, std::span<const double> c) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - c[i];
    return y;
}

std::vector<double> scaled(const std::vector<double>& v, double s) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

FormParam param(std::string name, double v) { return {std::move(name), {v}}; }
FormParam param(std::string name, std::vector<double> v) { return {std::move(name), std::move(v)}; }

void check_dim(const SpaceTimePoint& p, std::size_t n) {
    if (p.dim() != n)
        throw std::invalid_argument("form: point dimension " + std::to_string(p.dim()) + " != form dimension " +
                                    std::to_string(n));
}

double abs_log_abs(double t) { return std::abs(std::log(std::abs(t))); }

}  // namespace

std::string_view to_string(FormKind k) {
    switch (k) {
        case FormKind::QuadraticProbe: return "QuadraticProbe";
        case FormKind::BottomBarrier: return "BottomBarrier";
        case FormKind::ExteriorSphere: return "ExteriorSphere";
        case FormKind::PetrovskyBarrier: return "PetrovskyBarrier";
        case FormKind::IrregularityFunction: return "IrregularityFunction";
        case FormKind::FundamentalW: return "FundamentalW";
        case FormKind::WallBarrier: return "WallBarrier";
        case FormKind::AppendixFamily: return "AppendixFamily";
        case FormKind::TopShift: return "TopShift";
    }
    return "?";
}

std::optional<FormKind> form_kind_from_string(std::string_view s) {
    for (FormKind k : {FormKind::QuadraticProbe, FormKind::BottomBarrier, FormKind::ExteriorSphere,
                       FormKind::PetrovskyBarrier, FormKind::IrregularityFunction, FormKind::FundamentalW,
                       FormKind::WallBarrier, FormKind::AppendixFamily, FormKind::TopShift})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::string_view to_string(Side s) { return s == Side::Super ? "super" : "sub"; }
std::string_view to_string(Equation e) { return e == Equation::Normalized ? "normalized" : "non-normalized"; }
std::string_view to_string(ResidualRule r) {
    switch (r) {
        case ResidualRule::Gradient: return "gradient";
        case ResidualRule::EigenMin: return "eigen-min";
        case ResidualRule::EigenMax: return "eigen-max";
        case ResidualRule::Discrete: return "discrete";
    }
    return "?";
}

// -------------------------------------------------------------------- Hessian

Hessian Hessian::radial(double c1, double c2, std::vector<double> y) {
    Hessian h;
    h.n_ = y.size();
    h.radial_ = true;
    h.c1_ = c1;
    h.c2_ = c2;
    h.y_ = std::move(y);
    return h;
}

Hessian Hessian::dense(std::size_t n, std::vector<double> entries) {
    if (entries.size() != n * n) throw std::invalid_argument("Hessian::dense: n*n entries required");
    Hessian h;
    h.n_ = n;
    h.radial_ = false;
    h.a_ = std::move(entries);
    return h;
}

double Hessian::entry(std::size_t i, std::size_t j) const {
    if (!radial_) return a_[i * n_ + j];
    return (i == j ? c1_ : 0.0) + c2_ * y_[i] * y_[j];
}

std::vector<double> Hessian::to_dense() const {
    if (!radial_) return a_;
    std::vector<double> out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] = entry(i, j);
    return out;
}

double Hessian::quadratic(std::span<const double> v) const {
    if (radial_) {
        double vv = 0.0, yv = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            vv += v[i] * v[i];
            yv += y_[i] * v[i];
        }
        return c1_ * vv + c2_ * yv * yv;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) s += v[i] * a_[i * n_ + j] * v[j];
    return s;
}

namespace {

Eigen::VectorXd dense_eigenvalues(std::size_t n, const std::vector<double>& a) {
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (a[i * n + j] + a[j * n + i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace

double Hessian::eigen_min() const {
    if (radial_) {
        const double along = c1_ + c2_ * squared_norm(y_);
        return n_ == 1 ? along : std::min(c1_, along);
    }
    return dense_eigenvalues(n_, a_).minCoeff();
}

double Hessian::eigen_max() const {
    if (radial_) {
        const double along = c1_ + c2_ * squared_norm(y_);
        return n_ == 1 ? along : std::max(c1_, along);
    }
    return dense_eigenvalues(n_, a_).maxCoeff();
}

Hessian Hessian::scaled(double s) const {
    if (radial_) return radial(s * c1_, s * c2_, y_);
    return dense(n_, infheat::scaled(a_, s));
}

// ------------------------------------------------------------------- residual

double Residual::value(Side s) const {
    if (!degenerate) return gradient;
    return s == Side::Super ? eigen_min : eigen_max;
}

ResidualRule Residual::rule(Side s) const {
    if (discrete) return ResidualRule::Discrete;
    if (!degenerate) return ResidualRule::Gradient;
    return s == Side::Super ? ResidualRule::EigenMin : ResidualRule::EigenMax;
}

Residual residual_from_jet(const Jet& jet, Equation eq) {
    Residual r;
    const double g2 = squared_norm(jet.gradient);
    if (g2 > 0.0) {
        const double q = jet.hessian.quadratic(jet.gradient);
        r.gradient = eq == Equation::Normalized ? jet.u_t - q / g2 : jet.u_t - q;
        r.eigen_min = r.eigen_max = r.gradient;
        return r;
    }
    r.degenerate = true;
    if (eq == Equation::Normalized) {
        r.eigen_min = jet.u_t - jet.hessian.eigen_min();
        r.eigen_max = jet.u_t - jet.hessian.eigen_max();
    } else {
        r.eigen_min = r.eigen_max = jet.u_t;
    }
    r.gradient = r.eigen_min;
    return r;
}

Residual residual(const BarrierForm& form, const SpaceTimePoint& p, Equation eq) {
    if (p.dim() != form.dim()) throw std::invalid_argument("residual: point dimension does not match form");
    if (!form.valid(p))
        throw std::domain_error("residual: " + to_string(p) + " outside the validity set of " + form.name() + " (" +
                                form.validity() + ")");
    if (auto r = form.numeric_residual(p, eq)) return *r;
    return residual_from_jet(form.jet(p), eq);
}

// ------------------------------------------------------------------ FormModel

FdSteps FormModel::fd_steps(const SpaceTimePoint&) const { return {}; }

std::optional<double> FormModel::log_time_residual(double, double) const { return std::nullopt; }

BarrierForm::BarrierForm(std::shared_ptr<const FormModel> model, double sign) : model_(std::move(model)), sign_(sign) {
    if (!model_) throw std::invalid_argument("BarrierForm: null model");
}

std::string BarrierForm::name() const { return (negated() ? "-" : "") + std::string(to_string(kind())); }

double BarrierForm::value(const SpaceTimePoint& p) const { return sign_ * model_->value(p); }

Jet BarrierForm::jet(const SpaceTimePoint& p) const {
    Jet j = model_->jet(p);
    if (sign_ < 0.0) {
        j.value = -j.value;
        j.u_t = -j.u_t;
        for (double& g : j.gradient) g = -g;
        j.hessian = j.hessian.scaled(-1.0);
    }
    return j;
}

std::optional<Residual> BarrierForm::numeric_residual(const SpaceTimePoint& p, Equation e) const {
    auto r = model_->numeric_residual(p, e);
    if (r && sign_ < 0.0) {
        // -u: every one-sided value flips sign and the eigenvalue roles swap
        Residual m = *r;
        m.gradient = -r->gradient;
        m.eigen_min = -r->eigen_max;
        m.eigen_max = -r->eigen_min;
        return m;
    }
    return r;
}

std::optional<double> BarrierForm::log_time_residual(double q, double L) const {
    auto r = model_->log_time_residual(q, L);
    if (r) return sign_ * *r;
    return r;
}

// --------------------------------------------------------------------- models

namespace {

class QuadraticProbeModel final : public FormModel {
public:
    QuadraticProbeModel(SpaceTimePoint c, double eps) : c_(std::move(c)), eps_(eps) {}
    FormKind kind() const override { return FormKind::QuadraticProbe; }
    std::size_t dim() const override { return c_.dim(); }
    std::vector<FormParam> params() const override {
        return {param("x0", c_.x), param("t0", c_.t), param("eps", eps_)};
    }
    bool valid(const SpaceTimePoint& p) const override { return p.finite(); }
    std::string validity() const override { return "all of space-time"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, dim());
        auto y = offset_from(p.x, c_.x);
        const double tt = p.t - c_.t;
        Jet j;
        j.value = squared_norm(y) + eps_ * tt * tt;
        j.u_t = 2.0 * eps_ * tt;
        j.gradient = scaled(y, 2.0);
        j.hessian = Hessian::radial(2.0, 0.0, std::move(y));
        return j;
    }

private:
    SpaceTimePoint c_;
    double eps_;
};

class BottomBarrierModel final : public FormModel {
public:
    explicit BottomBarrierModel(SpaceTimePoint c) : c_(std::move(c)) {}
    FormKind kind() const override { return FormKind::BottomBarrier; }
    std::size_t dim() const override { return c_.dim(); }
    std::vector<FormParam> params() const override { return {param("x0", c_.x), param("t0", c_.t)}; }
    bool valid(const SpaceTimePoint& p) const override { return p.finite(); }
    std::string validity() const override { return "all of space-time"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, dim());
        auto y = offset_from(p.x, c_.x);
        Jet j;
        j.value = squared_norm(y) + 2.0 * (p.t - c_.t);
        j.u_t = 2.0;
        j.gradient = scaled(y, 2.0);
        j.hessian = Hessian::radial(2.0, 0.0, std::move(y));
        return j;
    }

private:
    SpaceTimePoint c_;
};

class ExteriorSphereModel final : public FormModel {
public:
    ExteriorSphereModel(SpaceTimePoint c, double R0, double a) : c_(std::move(c)), R0_(R0), a_(a) {}
    FormKind kind() const override { return FormKind::ExteriorSphere; }
    std::size_t dim() const override { return c_.dim(); }
    std::vector<FormParam> params() const override {
        return {param("center_x", c_.x), param("center_t", c_.t), param("R0", R0_), param("a", a_)};
    }
    bool valid(const SpaceTimePoint& p) const override { return p.finite(); }
    std::string validity() const override { return "all of space-time"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, dim());
        auto y = offset_from(p.x, c_.x);
        const double tt = p.t - c_.t;
        const double R2 = squared_norm(y) + tt * tt;
        const double E = std::exp(-a_ * R2);
        Jet j;
        j.value = std::exp(-a_ * R0_ * R0_) - E;
        j.u_t = 2.0 * a_ * E * tt;
        j.gradient = scaled(y, 2.0 * a_ * E);
        j.hessian = Hessian::radial(2.0 * a_ * E, -4.0 * a_ * a_ * E, std::move(y));
        return j;
    }

private:
    SpaceTimePoint c_;
    double R0_, a_;
};

// Shared shape f(t) exp(-k|x|^2/4t) + g(t) of the two tip forms.
struct TipJet {
    double f, fp, g, gp, k;
};

Jet tip_jet(const SpaceTimePoint& p, const TipJet& c) {
    const double t = p.t;
    const double r2 = squared_norm(p.x);
    const double phi = std::exp(-c.k * r2 / (4.0 * t));
    Jet j;
    j.value = c.f * phi + c.g;
    j.u_t = c.fp * phi + c.f * phi * c.k * r2 / (4.0 * t * t) + c.gp;
    j.gradient = scaled(p.x, -c.f * phi * c.k / (2.0 * t));
    j.hessian = Hessian::radial(-c.f * phi * c.k / (2.0 * t), c.f * phi * c.k * c.k / (4.0 * t * t), p.x);
    return j;
}

FdSteps tip_steps(const SpaceTimePoint& p) {
    const double s = std::abs(p.t);
    return {1e-4 * std::sqrt(s), 1e-4 * s};
}

class PetrovskyModel final : public FormModel {
public:
    PetrovskyModel(std::size_t n, double delta) : n_(n), delta_(delta) {}
    FormKind kind() const override { return FormKind::PetrovskyBarrier; }
    std::size_t dim() const override { return n_; }
    std::vector<FormParam> params() const override { return {param("delta", delta_)}; }
    bool valid(const SpaceTimePoint& p) const override { return p.finite() && p.t > -1.0 && p.t < 0.0; }
    std::string validity() const override { return "-1 < t < 0"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, n_);
        const double t = p.t;
        const double L = abs_log_abs(t);
        const double d = delta_;
        TipJet c;
        c.f = -0.5 * std::pow(L, -(d + 1.0));
        c.fp = -(d + 1.0) / (2.0 * t * std::pow(L, d + 2.0));
        c.g = std::pow(L, -d);
        c.gp = d / (t * std::pow(L, d + 1.0));
        c.k = 1.0;
        return tip_jet(p, c);
    }
    FdSteps fd_steps(const SpaceTimePoint& p) const override { return tip_steps(p); }
    std::optional<double> log_time_residual(double q, double L) const override {
        // residual * |t| L^{delta+1} = e^q ((delta+1)/(2L) + 1/4) - delta, arranged
        // so that no terms cancel when delta <= 1/4 and L is huge
        return std::exp(q) * (delta_ + 1.0) / (2.0 * L) + 0.25 * std::expm1(q) + (0.25 - delta_);
    }

private:
    std::size_t n_;
    double delta_;
};

class IrregularityModel final : public FormModel {
public:
    IrregularityModel(std::size_t n, double k, double alpha)
        : n_(n), k_(k), alpha_(alpha), L0_(irregularity_premise_threshold(k, alpha)) {}
    FormKind kind() const override { return FormKind::IrregularityFunction; }
    std::size_t dim() const override { return n_; }
    std::vector<FormParam> params() const override { return {param("k", k_), param("alpha", alpha_)}; }
    bool valid(const SpaceTimePoint& p) const override {
        return p.finite() && p.t > -std::exp(-1.0) && p.t < 0.0;
    }
    std::string validity() const override { return "-1/e < t < 0"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, n_);
        const double t = p.t;
        const double L = abs_log_abs(t);
        const double lnL = std::log(L);
        TipJet c;
        c.f = -std::pow(L, -(1.0 + alpha_));
        c.fp = -(1.0 + alpha_) / (t * std::pow(L, 2.0 + alpha_));
        c.g = 1.0 / lnL;
        c.gp = 1.0 / (t * L * lnL * lnL);
        c.k = k_;
        return tip_jet(p, c);
    }
    FdSteps fd_steps(const SpaceTimePoint& p) const override { return tip_steps(p); }
    std::optional<std::string> premise_violation(const SpaceTimePoint& p) const override {
        const double L = abs_log_abs(p.t);
        if (L >= L0_) return std::nullopt;
        return "premise k e^{1/(1-k)} <= L^alpha / log^2 L with (alpha+1)/L < k/2 needs L = |log|t|| >= " +
               format_double(L0_) + ", got L = " + format_double(L);
    }
    std::optional<double> log_time_residual(double q, double L) const override {
        // residual * |t| L^{1+alpha} e^{-kq} = (1+alpha)/L + k/2 - q(k-k^2) - e^{-kq} L^alpha / log^2 L
        const double lnL = std::log(L);
        const double last = std::exp(-k_ * q + alpha_ * std::log(L) - 2.0 * std::log(lnL));
        return (1.0 + alpha_) / L + k_ / 2.0 - q * (k_ - k_ * k_) - last;
    }

private:
    std::size_t n_;
    double k_, alpha_;
    double L0_;
};

class FundamentalModel final : public FormModel {
public:
    explicit FundamentalModel(SpaceTimePoint c) : c_(std::move(c)) {}
    FormKind kind() const override { return FormKind::FundamentalW; }
    std::size_t dim() const override { return c_.dim(); }
    std::vector<FormParam> params() const override { return {param("x0", c_.x), param("t0", c_.t)}; }
    bool valid(const SpaceTimePoint& p) const override { return p.finite() && p.t > c_.t; }
    std::string validity() const override { return "t > t0"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, dim());
        auto y = offset_from(p.x, c_.x);
        const double s = p.t - c_.t;
        const double r2 = squared_norm(y);
        const double W = std::exp(-r2 / (4.0 * s)) / std::sqrt(s);
        Jet j;
        j.value = W;
        j.u_t = W * (-1.0 / (2.0 * s) + r2 / (4.0 * s * s));
        j.gradient = scaled(y, -W / (2.0 * s));
        j.hessian = Hessian::radial(-W / (2.0 * s), W / (4.0 * s * s), std::move(y));
        return j;
    }
    FdSteps fd_steps(const SpaceTimePoint& p) const override {
        const double s = p.t - c_.t;
        return {1e-4 * std::sqrt(s), 1e-4 * s};
    }

private:
    SpaceTimePoint c_;
};

class WallModel final : public FormModel {
public:
    WallModel(std::shared_ptr<const SpatialField> nu, double t0) : nu_(std::move(nu)), t0_(t0) {}
    FormKind kind() const override { return FormKind::WallBarrier; }
    std::size_t dim() const override { return nu_->grid().dim(); }
    std::vector<FormParam> params() const override {
        return {param("t0", t0_), param("h", nu_->grid().h()), param("eps", nu_->stencil().eps())};
    }
    bool valid(const SpaceTimePoint& p) const override {
        if (!p.finite() || p.dim() != dim()) return false;
        const Grid& g = nu_->grid();
        for (std::size_t d = 0; d < dim(); ++d) {
            const double s = (p.x[d] - g.origin()[d]) / g.h();
            if (s < 0.0 || s > static_cast<double>(g.counts()[d] - 1)) return false;
        }
        return true;
    }
    std::string validity() const override { return "x inside the grid of nu"; }

    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, dim());
        const Grid& g = nu_->grid();
        const std::size_t n = dim();
        const double h = g.h();
        std::vector<std::int64_t> base(n);
        std::vector<double> fr(n);
        for (std::size_t d = 0; d < n; ++d) {
            const double s = (p.x[d] - g.origin()[d]) / h;
            const auto top = static_cast<std::int64_t>(g.counts()[d]) - 2;
            base[d] = std::clamp(static_cast<std::int64_t>(std::floor(s)), std::int64_t{0}, std::max<std::int64_t>(top, 0));
            fr[d] = s - static_cast<double>(base[d]);
        }
        const BoundaryData bd = nu_->boundary();
        const SliceView view = nu_->view();
        Jet j;
        j.gradient.assign(n, 0.0);
        std::vector<double> hess(n * n, 0.0);
        std::vector<double> xc(n);
        for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
            std::size_t flat = 0;
            bool in_range = true;
            for (std::size_t d = 0; d < n; ++d) {
                const std::int64_t i = base[d] + static_cast<std::int64_t>((c >> d) & 1U);
                if (i < 0 || i >= static_cast<std::int64_t>(g.counts()[d])) in_range = false;
                xc[d] = g.coordinate(d, i);
                if (in_range) flat += static_cast<std::size_t>(i) * g.strides()[d];
            }
            const double v = in_range ? nu_->stencil().node_value(view, bd, flat) : nu_->phi()(xc);
            // weight w = prod_d w_d with w_d = fr or 1 - fr; dw_d/dx = +-1/h
            std::vector<double> w(n), dw(n);
            for (std::size_t d = 0; d < n; ++d) {
                const bool up = (c >> d) & 1U;
                w[d] = up ? fr[d] : 1.0 - fr[d];
                dw[d] = (up ? 1.0 : -1.0) / h;
            }
            auto prod_except = [&](std::size_t a, std::size_t b) {
                double s = 1.0;
                for (std::size_t d = 0; d < n; ++d)
                    if (d != a && d != b) s *= w[d];
                return s;
            };
            j.value += prod_except(n, n) * v;
            for (std::size_t d = 0; d < n; ++d) {
                j.gradient[d] += dw[d] * prod_except(d, n) * v;
                for (std::size_t e = 0; e < n; ++e)
                    if (e != d) hess[d * n + e] += dw[d] * dw[e] * prod_except(d, e) * v;
            }
        }
        j.value += t0_ - p.t;
        j.u_t = -1.0;
        j.hessian = Hessian::dense(n, std::move(hess));
        return j;
    }

    FdSteps fd_steps(const SpaceTimePoint& p) const override {
        // stay inside the current cell: the interpolant is smooth only there
        const Grid& g = nu_->grid();
        double gap = g.h();
        for (std::size_t d = 0; d < dim(); ++d) {
            const double s = (p.x[d] - g.origin()[d]) / g.h();
            const double f = s - std::floor(s);
            gap = std::min(gap, std::min(f, 1.0 - f) * g.h());
        }
        return {0.25 * gap, 1e-3};
    }

    std::optional<Residual> numeric_residual(const SpaceTimePoint& p, Equation eq) const override {
        const Stencil& st = nu_->stencil();
        const SliceView view = nu_->view();
        const BoundaryData bd = nu_->boundary();
        const double lap = eq == Equation::Normalized ? discrete_inf_laplacian(st, view, bd, p.x)
                                                      : discrete_inf_laplacian_nonnormalized(st, view, bd, p.x);
        Residual r;
        r.discrete = true;
        r.gradient = r.eigen_min = r.eigen_max = -1.0 - lap;
        return r;
    }

    double tolerance_floor() const override { return 10.0 * nu_->stencil().eps(); }

private:
    std::shared_ptr<const SpatialField> nu_;
    double t0_;
};

class AppendixModel final : public FormModel {
public:
    AppendixModel(SpaceTimePoint c, int j, double alpha, double beta, double m)
        : c_(std::move(c)), j_(j), alpha_(alpha), beta_(beta), m_(m) {}
    FormKind kind() const override { return FormKind::AppendixFamily; }
    std::size_t dim() const override { return c_.dim(); }
    std::vector<FormParam> params() const override {
        return {param("x0", c_.x), param("t0", c_.t), param("j", j_), param("alpha", alpha_), param("beta", beta_),
                param("m", m_)};
    }
    bool valid(const SpaceTimePoint& p) const override {
        return p.finite() && p.dim() == dim() && squared_distance(p.x, c_.x) > 0.0;
    }
    std::string validity() const override { return "x != x0"; }
    Jet jet(const SpaceTimePoint& p) const override {
        check_dim(p, dim());
        auto y = offset_from(p.x, c_.x);
        const double r = std::sqrt(squared_norm(y));
        const double ja = j_ * alpha_;
        const double tt = p.t - c_.t;
        const double jm = std::pow(static_cast<double>(j_), m_);
        Jet jt;
        jt.value = ja * std::pow(r, 4.0 / 3.0) + beta_ * jm * tt * tt;
        jt.u_t = 2.0 * beta_ * jm * tt;
        jt.gradient = scaled(y, 4.0 / 3.0 * ja * std::pow(r, -2.0 / 3.0));
        jt.hessian = Hessian::radial(4.0 / 3.0 * ja * std::pow(r, -2.0 / 3.0), -8.0 / 9.0 * ja * std::pow(r, -8.0 / 3.0),
                                     std::move(y));
        return jt;
    }
    FdSteps fd_steps(const SpaceTimePoint& p) const override {
        return {1e-4 * std::sqrt(squared_distance(p.x, c_.x)), 1e-4};
    }

private:
    SpaceTimePoint c_;
    int j_;
    double alpha_, beta_, m_;
};

class TopShiftModel final : public FormModel {
public:
    TopShiftModel(BarrierForm base, double eps, double T) : base_(std::move(base)), eps_(eps), T_(T) {}
    FormKind kind() const override { return FormKind::TopShift; }
    std::size_t dim() const override { return base_.dim(); }
    std::vector<FormParam> params() const override {
        auto ps = base_.params();
        for (auto& p : ps) p.name = "base." + p.name;
        ps.insert(ps.begin(), {param("eps", eps_), param("T", T_)});
        return ps;
    }
    bool valid(const SpaceTimePoint& p) const override { return p.t < T_ && base_.valid(p); }
    std::string validity() const override { return "t < T and base valid (" + base_.validity() + ")"; }
    Jet jet(const SpaceTimePoint& p) const override {
        Jet j = base_.jet(p);
        const double s = T_ - p.t;
        j.value += eps_ / s;
        j.u_t += eps_ / (s * s);
        return j;
    }
    FdSteps fd_steps(const SpaceTimePoint& p) const override {
        FdSteps s = base_.fd_steps(p);
        s.t = std::min(s.t, 1e-4 * (T_ - p.t));
        return s;
    }
    std::optional<Residual> numeric_residual(const SpaceTimePoint& p, Equation eq) const override {
        auto r = base_.numeric_residual(p, eq);
        if (!r) return r;
        const double add = eps_ / ((T_ - p.t) * (T_ - p.t));
        r->gradient += add;
        r->eigen_min += add;
        r->eigen_max += add;
        return r;
    }
    double tolerance_floor() const override { return base_.tolerance_floor(); }

private:
    BarrierForm base_;
    double eps_, T_;
};

}  // namespace

BarrierForm quadratic_probe(SpaceTimePoint center, double eps) {
    require(center.dim() >= 1 && center.finite(), "QuadraticProbe: finite center required");
    require(std::isfinite(eps) && eps > 0.0, "QuadraticProbe: eps > 0 required");
    return BarrierForm(std::make_shared<QuadraticProbeModel>(std::move(center), eps));
}

BarrierForm bottom_barrier(SpaceTimePoint base) {
    require(base.dim() >= 1 && base.finite(), "BottomBarrier: finite base point required");
    return BarrierForm(std::make_shared<BottomBarrierModel>(std::move(base)));
}

BarrierForm exterior_sphere(SpaceTimePoint center, double R0, double a) {
    require(center.dim() >= 1 && center.finite(), "ExteriorSphere: finite center required");
    require(std::isfinite(R0) && R0 > 0.0, "ExteriorSphere: R0 > 0 required");
    require(std::isfinite(a) && a > 0.0, "ExteriorSphere: a > 0 required");
    return BarrierForm(std::make_shared<ExteriorSphereModel>(std::move(center), R0, a));
}

double exterior_sphere_rate(double R0, double delta) {
    require(R0 > 0.0 && delta > 0.0, "exterior_sphere_rate: R0 > 0 and delta > 0 required");
    return (2.0 * R0 + 1.0) / (2.0 * delta * delta);
}

BarrierForm petrovsky_barrier(std::size_t n, double delta) {
    require(n >= 1, "PetrovskyBarrier: n >= 1 required");
    require(delta > 0.0 && delta <= 0.25, "PetrovskyBarrier: 0 < delta <= 1/4 required");
    return BarrierForm(std::make_shared<PetrovskyModel>(n, delta));
}

BarrierForm irregularity_function(std::size_t n, double k, double alpha) {
    require(n >= 1, "IrregularityFunction: n >= 1 required");
    require(k > 0.5 && k < 1.0, "IrregularityFunction: 1/2 < k < 1 required");
    require(std::isfinite(alpha) && alpha > 0.0, "IrregularityFunction: alpha > 0 required");
    return BarrierForm(std::make_shared<IrregularityModel>(n, k, alpha));
}

BarrierForm fundamental_w(SpaceTimePoint center) {
    require(center.dim() >= 1 && center.finite(), "FundamentalW: finite center required");
    return BarrierForm(std::make_shared<FundamentalModel>(std::move(center)));
}

BarrierForm wall_barrier(std::shared_ptr<const SpatialField> nu, double t0) {
    require(nu != nullptr, "WallBarrier: stationary field required");
    require(std::isfinite(t0), "WallBarrier: finite t0 required");
    return BarrierForm(std::make_shared<WallModel>(std::move(nu), t0));
}

BarrierForm appendix_family(SpaceTimePoint center, int j, double alpha, double beta, double m) {
    require(center.dim() >= 1 && center.finite(), "AppendixFamily: finite center required");
    require(j >= 1, "AppendixFamily: j >= 1 required");
    require(std::isfinite(alpha) && alpha > 0.0, "AppendixFamily: alpha > 0 required");
    require(std::isfinite(beta) && beta > 0.0, "AppendixFamily: beta > 0 required");
    require(std::isfinite(m), "AppendixFamily: finite m required");
    return BarrierForm(std::make_shared<AppendixModel>(std::move(center), j, alpha, beta, m));
}

BarrierForm appendix_family(SpaceTimePoint center, int j, double diam) {
    require(std::isfinite(diam) && diam > 0.0, "AppendixFamily: diam > 0 required");
    return appendix_family(std::move(center), j, 1.0, 1.0 / (2.0 * diam), 3.0);
}

BarrierForm top_shift(BarrierForm base, double eps, double T) {
    require(std::isfinite(eps) && eps > 0.0, "TopShift: eps > 0 required");
    require(std::isfinite(T), "TopShift: finite T required");
    return BarrierForm(std::make_shared<TopShiftModel>(std::move(base), eps, T));
}

double appendix_distance(const SpaceTimePoint& center, double diam, const SpaceTimePoint& p) {
    const double r = std::sqrt(squared_distance(p.x, center.x));
    const double tt = p.t - center.t;
    return std::pow(r, 4.0 / 3.0) + tt * tt / (2.0 * diam);
}

double irregularity_premise_threshold(double k, double alpha) {
    require(k > 0.5 && k < 1.0 && alpha > 0.0, "irregularity premise: 1/2 < k < 1 and alpha > 0 required");
    // with y = log L: alpha y - 2 log y >= log k + 1/(1-k); increasing for y > 2/alpha
    const double rhs = std::log(k) + 1.0 / (1.0 - k);
    auto h = [&](double y) { return alpha * y - 2.0 * std::log(y) - rhs; };
    double lo = std::max(2.0 / alpha, 1e-12);
    double hi = lo;
    while (h(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw std::invalid_argument("irregularity premise: threshold out of range");
    }
    if (h(lo) >= 0.0) hi = lo;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) >= 0.0 ? hi : lo) = mid;
    }
    const double L = std::max(std::exp(hi), 2.0 * (alpha + 1.0) / k * (1.0 + 1e-12));
    if (!std::isfinite(L)) throw std::invalid_argument("irregularity premise: threshold overflows a double");
    return L;
}

double petrovsky_level_curve(double k, double alpha, double c, double t) {
    if (!(t > -1.0 && t < 0.0)) throw std::invalid_argument("petrovsky_level_curve: -1 < t < 0 required");
    require(c < 0.0, "petrovsky_level_curve: c < 0 required");
    require(k > 0.0 && alpha > 0.0, "petrovsky_level_curve: k > 0 and alpha > 0 required");
    const double L = abs_log_abs(t);
    if (!(std::log(L) > 0.0))
        throw std::invalid_argument("petrovsky_level_curve: log|log|t|| > 0 required (|t| < 1/e)");
    return irregular_level_squared_radius(k, alpha, c, t);
}

double petrovsky_barrier_zero_level(double t) {
    if (!(t > -1.0 && t < 0.0)) throw std::invalid_argument("petrovsky_barrier_zero_level: -1 < t < 0 required");
    return -4.0 * t * (std::log(abs_log_abs(t)) + std::log(2.0));
}

std::vector<CatalogEntry> form_catalog() {
    return {
        {"QuadraticProbe", "center (x0,t0), eps", "0 < ε·diam(Ω) < 1", "probe data |x−x0|² + ε(t−t0)²"},
        {"BottomBarrier", "base (x0,t0)", "none", "barrier |x−x0|² + 2(t−t0) at bottom points of a cylinder"},
        {"ExteriorSphere", "center (x′,t′), R0, a", "a > 0; 2aδ² ≥ 2R₀+1 on |x−x′| > δ; north pole needs R₀ ≥ 1",
         "barrier e^{−aR₀²} − e^{−aR²} at a point touched by an exterior space-time ball"},
        {"PetrovskyBarrier", "delta", "0 < δ ≤ 1/4; −1 < t < 0",
         "barrier f(t)e^{−|x|²/4t} + g(t) at the tip of the factor-4 region"},
        {"IrregularityFunction", "k, alpha", "1/2 < k < 1; α > 0; −1/e < t < 0; k e^{1/(1−k)} ≤ L^α/log²L",
         "subsolution f(t)e^{−k|x|²/4t} + g(t) witnessing an irregular tip"},
        {"FundamentalW", "center (x0,t0)", "t > t0", "solution t^{−1/2}e^{−|x|²/4t}; its super-level sets are heat balls"},
        {"WallBarrier", "nu (stationary field), t0", "nu solves Δ∞ᴺν = −1 with ν = |x−x0| on ∂Q",
         "barrier ν(x) + (t0 − t) at lateral points of a cylinder"},
        {"AppendixFamily", "center (x0,t0), j, alpha, beta, m",
         "defaults β=1/(2·diam(Ω)), α=1, m=3; x ≠ x0",
         "family jα|x−x0|^{4/3} + βj^m(t−t0)² for the non-normalized equation"},
        {"TopShift", "base form, eps, T", "ε > 0; t < T", "strict supersolution base + ε/(T−t)"},
    };
}

std::string catalog_text() {
    std::ostringstream os;
    for (const auto& e : form_catalog())
        os << e.kind << " | params: " << e.parameters << " | constraints: " << e.constraints << " | " << e.role
           << '\n';
    return os.str();
}

}  // namespace infheat
