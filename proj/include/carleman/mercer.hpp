#pragma once

#include "carleman/spectral.hpp"

namespace carleman {

/// Per-order convergence diagnostics of the bilinear series.
struct ConvergenceTable {
    std::vector<int> orders;
    std::vector<double> sup_err;       // sup_(s,t) |K - S_m|
    std::vector<double> diag_sup_err;  // sup_s |K(s,s) - sum_{n<=m} x_n |phi_n(s)|^2|
    std::vector<double> abs_tail;      // sup_(s,t) sum_{n>m} |alpha_n||phi_n(s)||phi_n(t)|
};

/// S_m = sum of the first m bilinear terms, in the system's order.
KernelMatrix partial_sum(const EigenSystem& E, std::size_t m);

/// Worst value of K(s,s) - sum_{n<=m} x_n |phi_n(s)|^2 over all s and all
/// truncation orders m; nonnegative (up to tolerance) for positive kernels.
double diag_lower_bound_check(const KernelMatrix& K_herm, const EigenSystem& E_herm);

/// Worst slack of M * sum_{p..q} x_n|phi_n(s)|^2 - (sum_{p..q} x_n|phi_n(s)||phi_n(t)|)^2
/// over all grid pairs, with M = max_s K(s,s); p, q inclusive 0-based indices.
double cauchy_tail_bound_check(const KernelMatrix& K_herm, const EigenSystem& E_herm,
                               std::size_t p, std::size_t q);

/// Worst slack of max_row_l2(K)^2 - sum_n x_n^2 |phi_n(s)|^2 over s.
double bessel_check(const KernelMatrix& K_herm, const EigenSystem& E_herm);

/// Diagonal convergence table of a positive Hermitian system; the diag column
/// is nonincreasing in m and reaches ~0 at full order.
ConvergenceTable dini_table(const KernelMatrix& K_herm, const EigenSystem& E_herm);

/// Full table for the complex bilinear series of a sectorial normal system.
/// diag_sup_err is computed against the rotated Hermitian part, whose
/// eigenvalues x_n = Re(e^{i rotation} alpha_n) drive the Dini argument.
ConvergenceTable mercer_report(const KernelMatrix& K, const EigenSystem& E,
                               const Sector& sector);

/// Worst slack of sqrt(1+l^2) * max_s tail(s,m) - abs_tail(m) over m, where
/// tail(s,m) = sum_{n>m} x_n |phi_n(s)|^2: the estimate closing the uniform
/// convergence of the complex series.
double abs_tail_estimate_slack(const KernelMatrix& K, const EigenSystem& E,
                               const Sector& sector);

} // namespace carleman
