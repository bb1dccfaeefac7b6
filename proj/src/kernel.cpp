#include "carleman/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace carleman {

KernelMatrix::KernelMatrix(GridPtr g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw error(errc::invalid_argument, "KernelMatrix requires a grid");
    const std::size_t n = grid->size();
    if (values.size() != n * n)
        throw error(errc::invalid_argument, "KernelMatrix values must be n*n");
    for (const cplx& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw error(errc::non_finite_kernel, "KernelMatrix entries must be finite");
}

KernelMatrix sample_kernel(const std::function<cplx(double, double)>& k, const GridPtr& grid) {
    if (!grid) throw error(errc::invalid_argument, "sample_kernel requires a grid");
    const std::size_t n = grid->size();
    std::vector<cplx> vals(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx z = k(grid->points[i], grid->points[j]);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw error(errc::non_finite_kernel, "kernel callable produced a non-finite sample");
            vals[i * n + j] = z;
        }
    return KernelMatrix(grid, std::move(vals));
}

GridFn carleman_row(const KernelMatrix& K, std::size_t i) {
    const std::size_t n = K.size();
    if (i >= n) throw error(errc::index_out_of_range, "carleman_row: index out of range");
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = std::conj(K.at(i, j));
    return GridFn(K.grid, std::move(v));
}

GridFn carleman_col(const KernelMatrix& K, std::size_t j) {
    const std::size_t n = K.size();
    if (j >= n) throw error(errc::index_out_of_range, "carleman_col: index out of range");
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = K.at(i, j);
    return GridFn(K.grid, std::move(v));
}

GridFn apply(const KernelMatrix& K, const GridFn& f) {
    if (!same_grid(K.grid, f.grid))
        throw error(errc::incompatible_grids, "apply: kernel and function grids differ");
    const std::size_t n = K.size();
    const auto& w = K.grid->weights;
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) acc += w[j] * K.at(i, j) * f.values[j];
        out[i] = acc;
    }
    return GridFn(K.grid, std::move(out));
}

KernelMatrix adjoint(const KernelMatrix& K) {
    const std::size_t n = K.size();
    std::vector<cplx> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = std::conj(K.at(j, i));
    return KernelMatrix(K.grid, std::move(v));
}

KernelMatrix rotated_hermitian_part(const KernelMatrix& K, double alpha) {
    const std::size_t n = K.size();
    const cplx phase = std::polar(1.0, alpha);
    std::vector<cplx> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            v[i * n + j] = (phase * K.at(i, j) + std::conj(phase * K.at(j, i))) / 2.0;
    return KernelMatrix(K.grid, std::move(v));
}

K0Report check_k0(const KernelMatrix& K) {
    K0Report r;
    const std::size_t n = K.size();
    for (std::size_t i = 0; i < n; ++i) {
        r.max_row_l2 = std::max(r.max_row_l2, l2_norm(carleman_row(K, i)));
        r.max_col_l2 = std::max(r.max_col_l2, l2_norm(carleman_col(K, i)));
    }
    const double tail_start = 0.9 * K.grid->cutoff;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(K.at(i, j));
            if (K.grid->points[i] >= tail_start || K.grid->points[j] >= tail_start)
                r.tail_sup = std::max(r.tail_sup, a);
            r.hermitian_defect =
                std::max(r.hermitian_defect, std::abs(K.at(i, j) - std::conj(K.at(j, i))));
        }
    return r;
}

KernelMatrix compose(const KernelMatrix& A, const KernelMatrix& B) {
    if (!same_grid(A.grid, B.grid))
        throw error(errc::incompatible_grids, "compose: kernels live on different grids");
    const std::size_t n = A.size();
    const auto& w = A.grid->weights;
    // scale A's columns by the weights once, then a plain matrix product
    std::vector<cplx> Aw(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) Aw[i * n + k] = A.at(i, k) * w[k];
    std::vector<cplx> out(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = Aw[i * n + k];
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aik * B.at(k, j);
        }
    return KernelMatrix(A.grid, std::move(out));
}

double hermitian_defect(const KernelMatrix& K) {
    const std::size_t n = K.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d = std::max(d, std::abs(K.at(i, j) - std::conj(K.at(j, i))));
    return d;
}

double continuity_proxy(const KernelMatrix& K) {
    const std::size_t n = K.size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i + 1 < n) m = std::max(m, std::abs(K.at(i + 1, j) - K.at(i, j)));
            if (j + 1 < n) m = std::max(m, std::abs(K.at(i, j + 1) - K.at(i, j)));
        }
    return m;
}

} // namespace carleman
