#pragma once

// Closed-form reference values, derived by hand and kept independent of the
// library: nothing here calls into infheat.

#include <cmath>
#include <numbers>
#include <span>

namespace infheat::oracle {

// n = 1 heat equation on (0, pi) with data sin x.
inline double heat_sine(double x, double t) { return std::exp(-t) * std::sin(x); }

// nu'' = -1 on (0, 1), nu(0) = 0, nu(1) = 1.
inline double stationary_quadratic(double x) { return -0.5 * x * x + 1.5 * x; }

// t^{-1/2} exp(-r^2 / 4t) and its derivatives; r = |x|.
struct Fundamental {
    double value, u_t, u_r, u_rr;
};
inline Fundamental fundamental(double r, double t) {
    const double w = std::exp(-r * r / (4.0 * t)) / std::sqrt(t);
    return {w,
            w * (r * r / (4.0 * t * t) - 1.0 / (2.0 * t)),
            -w * r / (2.0 * t),
            w * (r * r / (4.0 * t * t) - 1.0 / (2.0 * t))};
}

// |x - x0|^2 + eps (t - t0)^2: normalized residual is 2 eps (t - t0) - 2 everywhere.
inline double quadratic_probe_residual(double eps, double t, double t0) { return 2.0 * eps * (t - t0) - 2.0; }

// Petrovsky barrier with delta = 1/4 on |x|^2 = -4 t log|log|t||.
inline double petrovsky_trace(double t) {
    const double L = std::abs(std::log(std::abs(t)));
    return 0.5 * std::pow(L, -0.25);
}

// j alpha r^{4/3} + beta j^m (t - t0)^2. In the radial direction
// psi_r = (4/3) j alpha r^{1/3}, psi_rr = (4/9) j alpha r^{-2/3}, so
// psi_r^2 psi_rr = (64/81) j^3 alpha^3, independent of r.
inline double appendix_nonnormalized_residual(int j, double alpha, double beta, double m, double dt) {
    const double jd = j;
    return 2.0 * beta * std::pow(jd, m) * dt - 64.0 / 81.0 * jd * jd * jd * alpha * alpha * alpha;
}

// Stated closed form with the 64/27 coefficient.
inline double appendix_stated_residual(int j, double alpha, double beta, double m, double dt) {
    const double jd = j;
    return 2.0 * beta * std::pow(jd, m) * dt - 64.0 / 27.0 * jd * jd * jd * alpha * alpha * alpha;
}

inline double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

}  // namespace infheat::oracle
