#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace gsd {

// A point in R^d. Dimensions are small (d <= 3 on full grids), so a plain
// vector is fine everywhere outside the path-sampling hot loops, which use
// stack buffers internally.
using Point = std::vector<double>;

inline double norm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

inline double norm_sq(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return s;
}

inline double dist(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - x[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Point scaled(std::span<const double> x, double a) {
    Point p(x.begin(), x.end());
    for (double& c : p) c *= a;
    return p;
}

}  // namespace gsd
