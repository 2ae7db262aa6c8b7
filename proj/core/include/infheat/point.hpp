#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace infheat {

/// A point (x, t) of space-time.
struct SpaceTimePoint {
    std::vector<double> x;
    double t = 0.0;

    SpaceTimePoint() = default;
    SpaceTimePoint(std::vector<double> x_, double t_) : x(std::move(x_)), t(t_) {}

    std::size_t dim() const { return x.size(); }
    bool finite() const;
};

/// Euclidean distance in R^{n+1}.
double distance(const SpaceTimePoint& a, const SpaceTimePoint& b);

double squared_norm(std::span<const double> v);
double squared_distance(std::span<const double> a, std::span<const double> b);

std::string to_string(const SpaceTimePoint& p);

}  // namespace infheat
