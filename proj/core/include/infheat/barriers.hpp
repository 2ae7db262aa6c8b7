#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infheat/point.hpp"
#include "infheat/scheme.hpp"

namespace infheat {

enum class FormKind {
    QuadraticProbe,
    BottomBarrier,
    ExteriorSphere,
    PetrovskyBarrier,
    IrregularityFunction,
    FundamentalW,
    WallBarrier,
    AppendixFamily,
    TopShift,
};
std::string_view to_string(FormKind k);
std::optional<FormKind> form_kind_from_string(std::string_view s);

/// Symmetric Hessian: radial c1 Id + c2 y y^T, or a dense n x n matrix.
class Hessian {
public:
    Hessian() = default;
    static Hessian radial(double c1, double c2, std::vector<double> y);
    static Hessian dense(std::size_t n, std::vector<double> entries);

    std::size_t dim() const { return n_; }
    bool is_radial() const { return radial_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    const std::vector<double>& offset() const { return y_; }

    double entry(std::size_t i, std::size_t j) const;
    std::vector<double> to_dense() const;
    /// v^T H v.
    double quadratic(std::span<const double> v) const;
    double eigen_min() const;
    double eigen_max() const;
    Hessian scaled(double s) const;

private:
    std::size_t n_ = 0;
    bool radial_ = true;
    double c1_ = 0.0, c2_ = 0.0;
    std::vector<double> y_;
    std::vector<double> a_;
};

/// Value and exact first/second derivatives of a form at one point.
struct Jet {
    double value = 0.0;
    double u_t = 0.0;
    std::vector<double> gradient;
    Hessian hessian;
};

struct FormParam {
    std::string name;
    std::vector<double> values;
};

/// Finite-difference step sizes for derivative audits.
struct FdSteps {
    double x = 1e-4;
    double t = 1e-4;
};

enum class Side { Super, Sub };
std::string_view to_string(Side s);

enum class Equation { Normalized, NonNormalized };
std::string_view to_string(Equation e);

enum class ResidualRule { Gradient, EigenMin, EigenMax, Discrete };
std::string_view to_string(ResidualRule r);

/// Viscosity residual u_t - (operator) at one point. With Du = 0 both
/// one-sided values are kept: eigen_min for supersolutions, eigen_max for subsolutions.
struct Residual {
    bool degenerate = false;
    bool discrete = false;
    double gradient = 0.0;
    double eigen_min = 0.0;
    double eigen_max = 0.0;

    double value(Side s) const;
    ResidualRule rule(Side s) const;
};

/// Closed-form model behind a BarrierForm.
class FormModel {
public:
    virtual ~FormModel() = default;
    virtual FormKind kind() const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::vector<FormParam> params() const = 0;
    virtual bool valid(const SpaceTimePoint& p) const = 0;
    virtual std::string validity() const = 0;
    virtual Jet jet(const SpaceTimePoint& p) const = 0;
    virtual double value(const SpaceTimePoint& p) const { return jet(p).value; }
    virtual FdSteps fd_steps(const SpaceTimePoint& p) const;
    /// Reason the certificate premise fails at p, if the form carries one.
    virtual std::optional<std::string> premise_violation(const SpaceTimePoint&) const { return std::nullopt; }
    /// Residual from a discrete operator instead of the jet (numeric forms).
    virtual std::optional<Residual> numeric_residual(const SpaceTimePoint&, Equation) const { return std::nullopt; }
    /// Certification tolerance floor (numeric forms are only accurate to O(eps)).
    virtual double tolerance_floor() const { return 0.0; }
    /// For tip forms centred at the origin: a quantity with the sign of the
    /// normalized residual at |x|^2 = 4|t| q, L = |log|t||.
    virtual std::optional<double> log_time_residual(double q, double L) const;
};

/// Immutable handle to a catalog form, possibly negated.
class BarrierForm {
public:
    explicit BarrierForm(std::shared_ptr<const FormModel> model, double sign = 1.0);

    FormKind kind() const { return model_->kind(); }
    std::string name() const;
    std::size_t dim() const { return model_->dim(); }
    bool negated() const { return sign_ < 0.0; }
    std::vector<FormParam> params() const { return model_->params(); }
    bool valid(const SpaceTimePoint& p) const { return model_->valid(p); }
    std::string validity() const { return model_->validity(); }
    double value(const SpaceTimePoint& p) const;
    Jet jet(const SpaceTimePoint& p) const;
    FdSteps fd_steps(const SpaceTimePoint& p) const { return model_->fd_steps(p); }
    std::optional<std::string> premise_violation(const SpaceTimePoint& p) const {
        return model_->premise_violation(p);
    }
    std::optional<Residual> numeric_residual(const SpaceTimePoint& p, Equation e) const;
    double tolerance_floor() const { return model_->tolerance_floor(); }
    std::optional<double> log_time_residual(double q, double L) const;

    BarrierForm operator-() const { return BarrierForm(model_, -sign_); }
    const FormModel& model() const { return *model_; }
    std::shared_ptr<const FormModel> model_ptr() const { return model_; }

private:
    std::shared_ptr<const FormModel> model_;
    double sign_ = 1.0;
};

// ------------------------------------------------------------------ catalog

/// |x - x0|^2 + eps (t - t0)^2, eps > 0.
BarrierForm quadratic_probe(SpaceTimePoint center, double eps);
/// |x - x0|^2 + 2 (t - t0).
BarrierForm bottom_barrier(SpaceTimePoint base);
/// exp(-a R0^2) - exp(-a R^2), R^2 = |x - x'|^2 + (t - t')^2.
BarrierForm exterior_sphere(SpaceTimePoint center, double R0, double a);
/// Rate a = (2 R0 + 1) / (2 delta^2) certifying the barrier on |x - x'| > delta.
double exterior_sphere_rate(double R0, double delta);
/// f(t) exp(-|x|^2/4t) + g(t), f = -L^{-(delta+1)}/2, g = L^{-delta}, L = |log|t||, 0 < delta <= 1/4.
BarrierForm petrovsky_barrier(std::size_t n, double delta = 0.25);
/// f(t) exp(-k|x|^2/4t) + g(t), f = -L^{-(1+alpha)}, g = 1/log L, 1/2 < k < 1, alpha > 0.
BarrierForm irregularity_function(std::size_t n, double k, double alpha);
/// t^{-1/2} exp(-|x - x0|^2 / 4(t - t0)), t > t0.
BarrierForm fundamental_w(SpaceTimePoint center);
/// nu(x) + (t0 - t) with nu a stationary solution on a spatial grid.
BarrierForm wall_barrier(std::shared_ptr<const SpatialField> nu, double t0);
/// j alpha |x - x0|^{4/3} + beta j^m (t - t0)^2.
BarrierForm appendix_family(SpaceTimePoint center, int j, double alpha, double beta, double m);
/// Defaults beta = 1/(2 diam), alpha = 1, m = 3.
BarrierForm appendix_family(SpaceTimePoint center, int j, double diam);
/// base + eps / (T - t), valid for t < T.
BarrierForm top_shift(BarrierForm base, double eps, double T);

/// d(x,t) = |x - x0|^{4/3} + (t - t0)^2 / (2 diam).
double appendix_distance(const SpaceTimePoint& center, double diam, const SpaceTimePoint& p);

/// Smallest L = |log|t|| satisfying k e^{1/(1-k)} <= L^alpha / log^2 L and
/// (alpha+1)/L < k/2 (both then hold for all larger L).
double irregularity_premise_threshold(double k, double alpha);

struct CatalogEntry {
    std::string kind;
    std::string parameters;
    std::string constraints;
    std::string role;
};
std::vector<CatalogEntry> form_catalog();
std::string catalog_text();

// ----------------------------------------------------------------- residual

Residual residual_from_jet(const Jet& jet, Equation eq = Equation::Normalized);
/// Throws std::domain_error when p is outside the form's validity set.
Residual residual(const BarrierForm& form, const SpaceTimePoint& p, Equation eq = Equation::Normalized);

/// Squared radius of the level set {v = c} of the irregularity function at t.
/// Requires -1 < t < 0, c < 0 and log|log|t|| > 0.
double petrovsky_level_curve(double k, double alpha, double c, double t);
/// Squared radius of the zero level of the Petrovsky barrier:
/// |x|^2 = -4t (log|log|t|| + log 2).
double petrovsky_barrier_zero_level(double t);

}  // namespace infheat
