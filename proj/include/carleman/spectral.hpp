#pragma once

#include "carleman/kernel.hpp"

namespace carleman {

/// Eigenvalues and grid-orthonormal eigenfunctions of a normal kernel.
/// Alphas are sorted by descending modulus, ties by ascending arg in (-pi, pi];
/// each eigenfunction's largest-modulus component is made real and positive.
struct EigenSystem {
    GridPtr grid;
    std::vector<cplx> alphas;
    std::vector<GridFn> vectors;

    std::size_t count() const noexcept { return alphas.size(); }
};

/// The sector {|Im(e^{i rotation} z)| <= slope * Re(e^{i rotation} z)}.
struct Sector {
    double rotation = 0.0;  // in [0, 2*pi)
    double slope = 0.0;     // > 0 (floored at 1e-12 for degenerate rays)
};

/// Optional diagnostics from eig_normal's eigenvalue clustering.
struct EigNormalDiagnostics {
    std::size_t cluster_count = 0;
    // Gaps within a decade of the clustering tolerance: merge/split is ambiguous there.
    std::vector<double> ambiguous_gaps;
};

/// Sup-entry norm of the commutator K∘K* − K*∘K (weighted composition).
double check_normality(const KernelMatrix& K);

/// Cyclic Jacobi on S = W^{1/2} K W^{1/2}, eigenvectors mapped back by W^{-1/2}.
/// Sweeps until the off-diagonal Frobenius mass is <= 1e-12 * ||S||_F, max 100 sweeps.
/// When offdiag_history is given it receives the off-diagonal mass per sweep.
EigenSystem eig_hermitian(const KernelMatrix& K, std::vector<double>* offdiag_history = nullptr);

/// Diagonalization of a normal kernel via the commuting Hermitian pair
/// X = (K + K*)/2, Y = (K - K*)/(2i): eigenvectors from X, with Y re-diagonalized
/// on clusters of X-eigenvalues closer than 1e-8 relative gap.
EigenSystem eig_normal(const KernelMatrix& K, EigNormalDiagnostics* diag = nullptr);

/// K_ij = sum_n alpha_n phi_n(s_i) conj(phi_n(s_j)).
KernelMatrix reconstruct(const EigenSystem& E);

/// Assembles a sorted, phase-canonical EigenSystem from eigenvalues and an
/// orthonormal family (defect <= ortho_tol, else invalid-family).
EigenSystem make_eigensystem(std::vector<cplx> alphas, std::vector<GridFn> family,
                             double ortho_tol = 1e-8);

KernelMatrix synthesize_from_diagonal(const std::vector<cplx>& alphas,
                                      const std::vector<GridFn>& family,
                                      double ortho_tol = 1e-8);

/// Fits a sector around the nonzero eigenvalues: rotation from the circular mean
/// of their arguments, slope from the worst Im/Re ratio after rotation.
Sector sector_fit(const std::vector<cplx>& alphas, double atol);

/// Multiplies every eigenvalue by e^{i alpha}; vectors and ordering unchanged.
EigenSystem rotate(const EigenSystem& E, double alpha);

/// Max |<phi_m, phi_n> - delta_mn| over all pairs.
double orthonormality_defect(const EigenSystem& E);

/// Relative modulus below which an eigenvalue is treated as the atom at 0.
inline constexpr double kNullAtomRel = 1e-12;

/// True for eigenvalues belonging to the null atom E({0}).
bool is_null_atom(cplx alpha, double max_abs);

} // namespace carleman
