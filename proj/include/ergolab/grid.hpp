#ifndef ERGOLAB_GRID_HPP
#define ERGOLAB_GRID_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergolab/common.hpp"

namespace ergolab {

// Uniform bin grid over an interval.  Bin membership follows the global
// boundary rule: a point exactly on an interior edge belongs to the lower bin.
struct Grid {
    double lo = 0.0, hi = 1.0;
    int n = 0;
    std::vector<double> edges;

    static Grid uniform(double lo, double hi, int n) {
        if (n < 1 || !(hi > lo)) throw precondition_error("Grid: need n >= 1 and hi > lo");
        Grid g;
        g.lo = lo;
        g.hi = hi;
        g.n = n;
        g.edges.resize(std::size_t(n) + 1);
        for (int k = 0; k <= n; ++k)
            g.edges[std::size_t(k)] = lo + (hi - lo) * double(k) / double(n);
        g.edges[0] = lo;
        g.edges[std::size_t(n)] = hi;
        return g;
    }

    double width() const { return (hi - lo) / double(n); }
    double center(int i) const { return 0.5 * (edges[std::size_t(i)] + edges[std::size_t(i) + 1]); }

    int bin_of(double x) const {
        if (x <= edges[0]) return 0;
        if (x >= edges[std::size_t(n)]) return n - 1;
        int i = int(std::floor((x - lo) / width()));
        i = std::clamp(i, 0, n - 1);
        while (i > 0 && x <= edges[std::size_t(i)]) --i;
        while (i < n - 1 && x > edges[std::size_t(i) + 1]) ++i;
        return i;
    }

    bool same_as(const Grid& o) const { return n == o.n && lo == o.lo && hi == o.hi; }
};

struct GridFunction {
    Grid grid;
    std::vector<double> v;

    GridFunction() = default;
    GridFunction(Grid g, std::vector<double> vals) : grid(std::move(g)), v(std::move(vals)) {
        if (int(v.size()) != grid.n) throw precondition_error("GridFunction: size mismatch");
    }
    explicit GridFunction(Grid g) : grid(std::move(g)), v(std::size_t(grid.n), 0.0) {}

    double operator()(double x) const { return v[std::size_t(grid.bin_of(x))]; }

    double sup_norm() const {
        double m = 0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!a.same_as(b)) throw precondition_error("grid-mismatch");
}

// sample a pointwise function on bin centers
template <typename F>
GridFunction sample_on_grid(const Grid& g, F&& f) {
    GridFunction out(g);
    for (int i = 0; i < g.n; ++i) out.v[std::size_t(i)] = f(g.center(i));
    return out;
}

} // namespace ergolab

#endif
