#ifndef ERGOLAB_COMMON_HPP
#define ERGOLAB_COMMON_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ergolab {

// Points live in at most two coordinates; 1-D code uses p[0].
using Point = std::array<double, 2>;

inline Point point1(double x) { return {x, 0.0}; }

constexpr double kInfDist = std::numeric_limits<double>::infinity();

// Validation failures (bad parameters, bad configs).  The CLI maps these
// to exit code 2.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numeric failures (non-convergence, escapes, budget overruns).  Exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }

    Interval intersect(const Interval& o) const {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }
    bool empty(double tol = 0.0) const { return hi - lo <= tol; }
};

struct Mat2 {
    // row-major [[a, b], [c, d]]
    double a = 0, b = 0, c = 0, d = 0;

    double det() const { return a * d - b * c; }

    // Largest / smallest singular values via the closed 2x2 form.
    double sigma_max() const {
        double q1 = a * a + b * b + c * c + d * d;
        double q2 = std::hypot(a * a + b * b - c * c - d * d, 2 * (a * c + b * d));
        return std::sqrt(0.5 * (q1 + q2));
    }
    double sigma_min() const {
        double q1 = a * a + b * b + c * c + d * d;
        double q2 = std::hypot(a * a + b * b - c * c - d * d, 2 * (a * c + b * d));
        double v = 0.5 * (q1 - q2);
        return std::sqrt(v > 0 ? v : 0);
    }
};

inline double sqr(double x) { return x * x; }

inline double fract(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

} // namespace ergolab

#endif
