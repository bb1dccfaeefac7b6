#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "carleman/errors.hpp"

namespace carleman {

using cplx = std::complex<double>;

enum class QuadRule { trapezoid, gauss_legendre };

/// Quadrature nodes and weights on [0, cutoff], the discrete model of L2(R+).
/// Immutable after construction; shared between functions and kernels.
struct Grid {
    std::vector<double> points;   // strictly increasing, inside [0, cutoff]
    std::vector<double> weights;  // strictly positive, sum ~ cutoff
    double cutoff = 0.0;

    std::size_t size() const noexcept { return points.size(); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.cutoff == b.cutoff && a.points == b.points && a.weights == b.weights;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Complex sample values f_i = f(s_i) on a shared grid.
struct GridFn {
    GridPtr grid;
    std::vector<cplx> values;

    GridFn() = default;
    GridFn(GridPtr g, std::vector<cplx> v);

    std::size_t size() const noexcept { return values.size(); }
};

/// True when both functions reference the same quadrature (pointer or content equality).
bool same_grid(const GridPtr& a, const GridPtr& b);

GridPtr make_grid(double cutoff, int count, QuadRule rule);

/// <f, g> = sum_i w_i f_i conj(g_i): linear in f, conjugate-linear in g.
cplx inner(const GridFn& f, const GridFn& g);

double l2_norm(const GridFn& f);

/// max_i |f_i|, the grid restriction of the C(R+) sup norm.
double sup_norm(const GridFn& f);

} // namespace carleman
