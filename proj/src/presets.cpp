#include "carleman/presets.hpp"

#include <algorithm>
#include <cmath>

namespace carleman {

double laguerre_scale(int count, double cutoff) {
    // Compresses the oscillatory support (~ 4n+2) of the highest-order function
    // into the first half of [0, cutoff]; floored so low orders still decay
    // well before the tail decile.
    return std::max(2.0, (4.0 * count + 2.0) / (0.45 * cutoff));
}

std::vector<GridFn> laguerre_family(const GridPtr& grid, int count, double scale) {
    if (!grid) throw error(errc::invalid_argument, "laguerre_family requires a grid");
    if (count < 1) throw error(errc::invalid_argument, "laguerre_family: count must be >= 1");
    const std::size_t n = grid->size();
    const double sq = std::sqrt(scale);

    // Three-term recurrence run directly on L_k(x) e^{-x/2}: the weighted form
    // keeps every intermediate O(1) instead of pairing huge polynomials with
    // tiny exponentials.
    std::vector<GridFn> family;
    family.reserve(count);
    std::vector<std::vector<cplx>> vals(count, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = scale * grid->points[i];
        double prev = 0.0;
        double cur = std::exp(-x / 2.0);
        for (int k = 0; k < count; ++k) {
            vals[k][i] = cplx{sq * cur, 0.0};
            const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
            prev = cur;
            cur = next;
        }
    }
    for (int k = 0; k < count; ++k) family.emplace_back(grid, std::move(vals[k]));
    return family;
}

std::vector<cplx> preset_alphas(const Preset& p) {
    if (p.count < 1) throw error(errc::invalid_argument, "preset: count must be >= 1");
    if (!(p.theta_max >= 0.0) || p.theta_max >= std::acos(-1.0) / 2.0)
        throw error(errc::invalid_argument, "preset: angle spread must be in [0, pi/2)");
    std::vector<cplx> alphas(p.count);
    for (int k = 0; k < p.count; ++k) {
        const double theta =
            p.count == 1 ? 0.0 : p.theta_max * (2.0 * k / (p.count - 1.0) - 1.0);
        const double mag = p.law == EigenvalueLaw::linear_growth
                               ? p.base * (k + 1)
                               : p.base / ((k + 1.0) * (k + 1.0));
        alphas[k] = std::polar(mag, theta);
    }
    return alphas;
}

SynthesizedSystem build_preset(const Preset& p) {
    const GridPtr grid = make_grid(p.cutoff, p.grid_n, p.rule);
    const double scale = laguerre_scale(p.count, p.cutoff);
    std::vector<GridFn> family = laguerre_family(grid, p.count, scale);

    EigenSystem probe;
    probe.grid = grid;
    probe.alphas.assign(p.count, cplx{0.0, 0.0});
    probe.vectors = family;
    const double defect = orthonormality_defect(probe);
    if (defect > 1e-6)
        throw error(errc::grid_too_coarse,
                    "grid too coarse for the requested count: family orthonormality defect " +
                        std::to_string(defect));

    SynthesizedSystem out;
    out.family_defect = defect;
    out.system = make_eigensystem(preset_alphas(p), std::move(family), 1e-6);
    out.kernel = reconstruct(out.system);
    return out;
}

} // namespace carleman
