#ifndef ERGOLAB_OBSERVABLE_HPP
#define ERGOLAB_OBSERVABLE_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "ergolab/common.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

enum class Provenance { exact, estimated };

// Real observable on the phase space with Hölder metadata.  Norms are cached
// with provenance; estimated values are lower bounds by construction.
struct Observable {
    std::string name;
    std::function<double(const Point&)> eval;
    double alpha = 1.0;
    int dim = 1;
    Interval box0{0.0, 1.0}; // sampling box, first coordinate
    Interval box1{0.0, 1.0}; // second coordinate (dim == 2)

    double sup_norm = std::numeric_limits<double>::quiet_NaN();
    Provenance sup_prov = Provenance::estimated;
    double holder_semi = std::numeric_limits<double>::quiet_NaN();
    Provenance semi_prov = Provenance::estimated;

    double operator()(const Point& p) const { return eval(p); }
    double operator()(double x) const { return eval(point1(x)); }

    bool norms_known() const { return std::isfinite(sup_norm) && std::isfinite(holder_semi); }
    double holder_norm() const { return sup_norm + holder_semi; }

    Observable& with_exact_norms(double sup, double semi) {
        sup_norm = sup;
        sup_prov = Provenance::exact;
        holder_semi = semi;
        semi_prov = Provenance::exact;
        return *this;
    }
};

inline Observable make_observable(std::string name, std::function<double(const Point&)> f,
                                  double alpha = 1.0, Interval box = {0.0, 1.0}) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw precondition_error("invalid-parameter: Hölder exponent alpha must be in (0,1]");
    Observable o;
    o.name = std::move(name);
    o.eval = std::move(f);
    o.alpha = alpha;
    o.box0 = box;
    return o;
}

inline Observable coordinate_observable(Interval box = {0.0, 1.0}) {
    auto o = make_observable("coordinate", [](const Point& p) { return p[0]; }, 1.0, box);
    o.with_exact_norms(std::max(std::fabs(box.lo), std::fabs(box.hi)), 1.0);
    return o;
}

inline Observable constant_observable(double c, Interval box = {0.0, 1.0}) {
    auto o = make_observable("constant", [c](const Point&) { return c; }, 1.0, box);
    o.with_exact_norms(std::fabs(c), 0.0);
    return o;
}

// ||phi||_inf + sup |phi(x)-phi(y)| / |x-y|^alpha over sampled pairs; a lower
// bound by construction, flagged as estimated.  Endpoint-anchored and
// near-diagonal pairs are included, which makes the estimate exact for the
// usual calibration cases (identity, sqrt).
inline double holder_norm(Observable& phi, double alpha, std::size_t pair_count, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw precondition_error("invalid-parameter: alpha must be in (0,1]");
    Rng rng(derive_stream(seed, label_stream("holder")));
    const Interval box = phi.box0;
    const int grid_n = 4096;

    double sup = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        double x = box.lo + box.length() * double(i) / grid_n;
        sup = std::max(sup, std::fabs(phi(point1(x))));
    }

    auto ratio = [&](double x, double y) -> double {
        double dx = std::fabs(x - y);
        if (dx == 0) return 0.0;
        return std::fabs(phi(point1(x)) - phi(point1(y))) / std::pow(dx, alpha);
    };

    double semi = 0.0;
    for (std::size_t k = 0; k < pair_count; ++k) {
        double x = rng.uniform(box.lo, box.hi), y = rng.uniform(box.lo, box.hi);
        semi = std::max(semi, ratio(x, y));
        semi = std::max(semi, ratio(box.lo, y));
        semi = std::max(semi, ratio(box.hi, x));
        double h = box.length() * 1e-5 * (1.0 + rng.uniform01());
        if (x + h <= box.hi) semi = std::max(semi, ratio(x, x + h));
    }

    phi.alpha = alpha;
    phi.sup_norm = sup;
    phi.sup_prov = Provenance::estimated;
    phi.holder_semi = semi;
    phi.semi_prov = Provenance::estimated;
    return sup + semi;
}

} // namespace ergolab

#endif
