#include "infheat/point.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace infheat {

bool SpaceTimePoint::finite() const {
    if (!std::isfinite(t)) return false;
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("squared_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double distance(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    const double dt = a.t - b.t;
    return std::sqrt(squared_distance(a.x, b.x) + dt * dt);
}

std::string to_string(const SpaceTimePoint& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(x=[";
    for (std::size_t i = 0; i < p.x.size(); ++i) os << (i ? ", " : "") << p.x[i];
    os << "], t=" << p.t << ")";
    return os.str();
}

}  // namespace infheat
