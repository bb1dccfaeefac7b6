#pragma once

#include "carleman/spectral.hpp"

namespace carleman {

enum class EigenvalueLaw { linear_growth, inverse_square };

/// Built-in synthesis recipe: a scaled Laguerre orthonormal family with
/// eigenvalues on a deterministic angular ramp inside a sector.
struct Preset {
    int count = 16;
    EigenvalueLaw law = EigenvalueLaw::linear_growth;
    double base = 1.0;        // base magnitude of the eigenvalue law
    double theta_max = 0.4;   // angle spread, must stay < pi/2
    double cutoff = 40.0;
    int grid_n = 64;
    QuadRule rule = QuadRule::gauss_legendre;
};

/// Argument scale for the Laguerre family: compresses the oscillatory support
/// of the first `count` functions into the grid so truncation to [0, cutoff]
/// keeps them orthonormal.
double laguerre_scale(int count, double cutoff);

/// Orthonormal functions sqrt(c) L_n(c s) e^{-c s / 2}, n = 0..count-1, sampled
/// on the grid. Evaluated by the three-term recurrence directly on the
/// exponentially weighted form.
std::vector<GridFn> laguerre_family(const GridPtr& grid, int count, double scale);

/// Eigenvalues of the preset law: base*(n+1) or base/(n+1)^2 times e^{i theta_n},
/// theta_n ramping linearly over [-theta_max, theta_max].
std::vector<cplx> preset_alphas(const Preset& p);

struct SynthesizedSystem {
    KernelMatrix kernel;
    EigenSystem system;      // ground truth, sorted and phase-canonical
    double family_defect;    // measured orthonormality defect of the family
};

/// Builds the preset kernel and its ground-truth eigensystem.
/// Throws grid-too-coarse when the family defect exceeds 1e-6.
SynthesizedSystem build_preset(const Preset& p);

} // namespace carleman
