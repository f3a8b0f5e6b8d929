#ifndef ERGOLAB_FIT_HPP
#define ERGOLAB_FIT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "ergolab/common.hpp"

namespace ergolab {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    double residual_max = 0;
    std::size_t n = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw precondition_error("linear_fit: size mismatch");
    LinearFit out;
    out.n = x.size();
    if (out.n < 2) throw precondition_error("linear_fit: need at least 2 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < out.n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / double(out.n), my = sy / double(out.n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < out.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0) throw precondition_error("linear_fit: degenerate abscissae");
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < out.n; ++i) {
        double r = y[i] - (out.slope * x[i] + out.intercept);
        ss_res += r * r;
        out.residual_max = std::max(out.residual_max, std::fabs(r));
    }
    out.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return out;
}

// log-log slope of (x, y) restricted to positive entries
inline LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) throw numeric_error("loglog_fit: fewer than 2 positive points");
    return linear_fit(lx, ly);
}

inline double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / double(v.size() - 1));
}

// Standard error of the mean by batch means: orbits are autocorrelated, so
// iid errors understate variance.
inline double batch_se(const std::vector<double>& v, int batches = 32) {
    if (v.size() < std::size_t(2 * batches)) {
        // fall back to iid error for tiny samples
        return v.empty() ? 0.0 : sample_sd(v) / std::sqrt(double(v.size()));
    }
    std::vector<double> bm(batches, 0.0);
    std::size_t n = v.size();
    for (int b = 0; b < batches; ++b) {
        std::size_t lo = n * std::size_t(b) / batches;
        std::size_t hi = n * std::size_t(b + 1) / batches;
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        bm[b] = s / double(hi - lo);
    }
    return sample_sd(bm) / std::sqrt(double(batches));
}

} // namespace ergolab

#endif
