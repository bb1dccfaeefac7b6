#pragma once

#include <functional>

#include "carleman/grid.hpp"

namespace carleman {

/// Sampled kernel K_ij = K(s_i, s_j); row index is the first argument.
struct KernelMatrix {
    GridPtr grid;
    std::vector<cplx> values;  // row-major, size n*n

    KernelMatrix() = default;
    KernelMatrix(GridPtr g, std::vector<cplx> v);

    std::size_t size() const noexcept { return grid ? grid->size() : 0; }
    const cplx& at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
    cplx& at(std::size_t i, std::size_t j) { return values[i * size() + j]; }
};

/// Grid statistics standing in for the K0-kernel membership tests.
struct K0Report {
    double max_row_l2 = 0.0;       // sup_s ||k(s)||, rows as Carleman functions
    double max_col_l2 = 0.0;       // sup_t ||k*(t)||, columns
    double tail_sup = 0.0;         // max |K| with either coordinate in the last decile of [0, L]
    double hermitian_defect = 0.0; // sup |K(s,t) - conj(K(t,s))|
};

KernelMatrix sample_kernel(const std::function<cplx(double, double)>& k, const GridPtr& grid);

/// Carleman function k(s_i): conjugated row i.
GridFn carleman_row(const KernelMatrix& K, std::size_t i);

/// Carleman function k*(t_j): column j, unconjugated.
GridFn carleman_col(const KernelMatrix& K, std::size_t j);

/// (Kf)_i = sum_j w_j K_ij f_j.
GridFn apply(const KernelMatrix& K, const GridFn& f);

/// Kernel of the adjoint operator w.r.t. the weighted inner product.
/// Because apply() interleaves the weights symmetrically, this is the plain
/// conjugate transpose of the sampled values.
KernelMatrix adjoint(const KernelMatrix& K);

/// (e^{ia} K(s,t) + e^{-ia} conj(K(t,s))) / 2; Hermitian for every alpha.
KernelMatrix rotated_hermitian_part(const KernelMatrix& K, double alpha);

K0Report check_k0(const KernelMatrix& K);

/// Kernel of the operator product: C_ij = sum_k w_k A_ik B_kj.
KernelMatrix compose(const KernelMatrix& A, const KernelMatrix& B);

double hermitian_defect(const KernelMatrix& K);

/// Max adjacent-node jump of K, a discrete modulus-of-continuity proxy.
/// Reported by the CLI only; never a pass/fail invariant.
double continuity_proxy(const KernelMatrix& K);

} // namespace carleman
