#include "carleman/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carleman {

GridFn::GridFn(GridPtr g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw error(errc::invalid_argument, "GridFn requires a grid");
    if (values.size() != grid->size())
        throw error(errc::invalid_argument, "GridFn values length must match grid");
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() == b.get()) return a != nullptr;
    if (!a || !b) return false;
    return *a == *b;
}

namespace {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
void gauss_legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
    constexpr double tol = 1e-14;
    constexpr int max_newton = 100;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < max_newton; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= tol) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    if (n == 1) {
        x[0] = 0.0;
        w[0] = 2.0;
    }
}

} // namespace

GridPtr make_grid(double cutoff, int count, QuadRule rule) {
    if (!(cutoff > 0.0)) throw error(errc::invalid_argument, "cutoff must be positive");
    if (count < 1) throw error(errc::invalid_argument, "node count must be positive");

    Grid g;
    g.cutoff = cutoff;
    switch (rule) {
        case QuadRule::trapezoid: {
            if (count == 1) {
                // degenerate single-node rule: midpoint with the full mass
                g.points = {cutoff / 2.0};
                g.weights = {cutoff};
                break;
            }
            const double h = cutoff / (count - 1);
            g.points.resize(count);
            g.weights.resize(count);
            for (int i = 0; i < count; ++i) {
                g.points[i] = h * i;
                g.weights[i] = (i == 0 || i == count - 1) ? h / 2.0 : h;
            }
            g.points.back() = cutoff;
            break;
        }
        case QuadRule::gauss_legendre: {
            std::vector<double> x, w;
            gauss_legendre_reference(count, x, w);
            g.points.resize(count);
            g.weights.resize(count);
            for (int i = 0; i < count; ++i) {
                g.points[i] = cutoff / 2.0 * (x[i] + 1.0);
                g.weights[i] = cutoff / 2.0 * w[i];
            }
            break;
        }
    }
    return std::make_shared<const Grid>(std::move(g));
}

cplx inner(const GridFn& f, const GridFn& g) {
    if (!same_grid(f.grid, g.grid))
        throw error(errc::incompatible_grids, "inner: functions live on different grids");
    const auto& w = f.grid->weights;
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * f.values[i] * std::conj(g.values[i]);
    return acc;
}

double l2_norm(const GridFn& f) {
    const auto& w = f.grid->weights;
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::norm(f.values[i]);
    return std::sqrt(acc);
}

double sup_norm(const GridFn& f) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace carleman
