#ifndef ERGOLAB_ENSEMBLE_HPP
#define ERGOLAB_ENSEMBLE_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/fit.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/observable.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

// Monte-Carlo carrier for the invariant measure: iterate uniform initial
// conditions past a burn-in.  Point i draws from stream (seed, i), so the
// sample is identical for any worker count.
struct OrbitEnsemble {
    std::string map_label;
    std::size_t count = 0;
    int burn_in = 0;
    std::uint64_t seed = 0;
    int dim = 1;
    std::vector<Point> points;
};

inline OrbitEnsemble simulate_ensemble(const PiecewiseMap& map, std::size_t count, int burn_in,
                                       std::uint64_t seed) {
    if (count < 1) throw precondition_error("simulate_ensemble: count must be >= 1");
    OrbitEnsemble ens;
    ens.map_label = map.label;
    ens.count = count;
    ens.burn_in = burn_in;
    ens.seed = seed;
    ens.dim = map.dim;
    ens.points.resize(count);
    parallel_for(count, [&](std::size_t i) {
        Rng rng(derive_stream(seed, i));
        Point x = map.uniform_point(rng);
        for (int k = 0; k < burn_in; ++k) x = map.step_typical(x, rng);
        ens.points[i] = x;
    });
    return ens;
}

struct DensityHistogram {
    std::vector<double> edges;
    std::vector<double> mass;
    std::size_t count = 0;

    double bin_width() const { return edges[1] - edges[0]; }
};

inline DensityHistogram empirical_density(const OrbitEnsemble& ens, int bins) {
    if (bins < 2) throw precondition_error("empirical_density: bins must be >= 2");
    if (ens.dim != 1) throw precondition_error("unsupported-dimension: histogram is 1-D only");
    double lo = ens.points[0][0], hi = lo;
    for (const auto& p : ens.points) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    if (!(hi > lo)) hi = lo + 1.0; // single-point ensemble
    DensityHistogram h;
    h.count = ens.points.size();
    h.edges.resize(std::size_t(bins) + 1);
    for (int k = 0; k <= bins; ++k)
        h.edges[std::size_t(k)] = lo + (hi - lo) * double(k) / bins;
    h.mass.assign(std::size_t(bins), 0.0);
    for (const auto& p : ens.points) {
        int i = int((p[0] - lo) / (hi - lo) * bins);
        i = std::clamp(i, 0, bins - 1);
        h.mass[std::size_t(i)] += 1.0;
    }
    for (auto& m : h.mass) m /= double(h.count);
    return h;
}

// Push an ensemble one map step forward (used by the invariance property).
inline OrbitEnsemble push_forward(const PiecewiseMap& map, const OrbitEnsemble& ens) {
    OrbitEnsemble out = ens;
    parallel_for(ens.points.size(), [&](std::size_t i) {
        Rng rng(derive_stream(ens.seed ^ 0x9e3779b97f4a7c15ULL, i));
        out.points[i] = map.step_typical(ens.points[i], rng);
    });
    return out;
}

// (1/n) sum phi(f^i x0).  The orbit is measure-typical: integer-slope
// branches refresh their shifted-out low bits from a stream derived from x0,
// so the result is a deterministic function of (map, x0, n).
inline double birkhoff(const PiecewiseMap& map, const Observable& phi, const Point& x0, std::size_t n) {
    if (n < 1) throw precondition_error("birkhoff: n must be >= 1");
    Rng rng(derive_stream(std::bit_cast<std::uint64_t>(x0[0]) ^ std::bit_cast<std::uint64_t>(x0[1]),
                          label_stream("birkhoff")));
    if (!map.in_domain(x0)) throw numeric_error("orbit-escape: x0 outside domain");
    Point x = x0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += phi(x);
        x = map.step_typical(x, rng);
    }
    return s / double(n);
}

struct LyapunovReport {
    double estimate = 0;    // int log||Df^{-1}|| dmu
    double stderr_est = 0;  // batch-means standard error
    bool expanding = false; // estimate + 3 se < 0
    std::size_t skipped = 0;
    std::size_t evaluations = 0;
};

inline LyapunovReport lyapunov_check(const PiecewiseMap& map, const OrbitEnsemble& ens, std::size_t n) {
    if (n < 100) throw precondition_error("lyapunov_check: n must be >= 100");
    std::vector<double> means(ens.points.size(), 0.0);
    std::vector<std::size_t> skips(ens.points.size(), 0);
    parallel_for(ens.points.size(), [&](std::size_t i) {
        Rng rng(derive_stream(ens.seed ^ label_stream("lyapunov"), i));
        Point x = ens.points[i];
        double s = 0;
        std::size_t used = 0;
        for (std::size_t k = 0; k < n; ++k) {
            try {
                s += std::log(map.deriv_inv_norm(x));
                ++used;
            } catch (const precondition_error&) {
                ++skips[i]; // measure-zero hit on the critical set
            }
            x = map.step_typical(x, rng);
        }
        means[i] = used > 0 ? s / double(used) : 0.0;
    });
    LyapunovReport rep;
    rep.evaluations = ens.points.size() * n;
    for (auto s : skips) rep.skipped += s;
    if (double(rep.skipped) > 0.001 * double(rep.evaluations))
        throw numeric_error("lyapunov_check: more than 0.1% of derivative evaluations skipped");
    rep.estimate = mean(means);
    rep.stderr_est = batch_se(means, 32);
    rep.expanding = rep.estimate + 3.0 * rep.stderr_est < 0.0;
    return rep;
}

} // namespace ergolab

#endif
