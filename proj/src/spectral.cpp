#include "carleman/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace carleman {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sup_entry(const KernelMatrix& K) {
    double m = 0.0;
    for (const cplx& z : K.values) m = std::max(m, std::abs(z));
    return m;
}

// Dense complex Hermitian matrix helper for the symmetrized problem.
struct HermMatrix {
    std::size_t n = 0;
    std::vector<cplx> a;  // row-major
    cplx& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

double frobenius(const HermMatrix& S) {
    double acc = 0.0;
    for (const cplx& z : S.a) acc += std::norm(z);
    return std::sqrt(acc);
}

double offdiag_mass(const HermMatrix& S) {
    double acc = 0.0;
    for (std::size_t i = 0; i < S.n; ++i)
        for (std::size_t j = 0; j < S.n; ++j)
            if (i != j) acc += std::norm(S.at(i, j));
    return std::sqrt(acc);
}

struct JacobiResult {
    std::vector<double> eigenvalues;       // diagonal after convergence
    std::vector<cplx> vectors;             // unitary, columns are eigenvectors
    std::vector<double> offdiag_history;   // off-diagonal mass per sweep, for diagnostics
};

// Cyclic Jacobi for complex Hermitian matrices. Each pivot (p, q) is
// annihilated by the unitary U = D(phase) * G(theta): the diagonal phase
// makes the pivot real, the real rotation zeroes it.
JacobiResult jacobi_hermitian(HermMatrix S, double rel_tol = 1e-12, int max_sweeps = 100) {
    const std::size_t n = S.n;
    JacobiResult res;
    res.vectors.assign(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) res.vectors[i * n + i] = 1.0;

    const double threshold = rel_tol * frobenius(S);
    auto vat = [&](std::size_t i, std::size_t j) -> cplx& { return res.vectors[i * n + j]; };

    bool converged = offdiag_mass(S) <= threshold;
    res.offdiag_history.push_back(offdiag_mass(S));
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = S.at(p, q);
                const double absb = std::abs(b);
                if (absb == 0.0) continue;
                const cplx phase = b / absb;  // e^{i arg b}
                const double app = S.at(p, p).real();
                const double aqq = S.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * absb);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx ephm = std::conj(phase);  // e^{-i arg b}

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cplx skp = S.at(k, p);
                    const cplx skq = S.at(k, q);
                    S.at(k, p) = c * skp - s * ephm * skq;
                    S.at(k, q) = s * skp + c * ephm * skq;
                    S.at(p, k) = std::conj(S.at(k, p));
                    S.at(q, k) = std::conj(S.at(k, q));
                }
                S.at(p, p) = app - t * absb;
                S.at(q, q) = aqq + t * absb;
                S.at(p, q) = S.at(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = vat(k, p);
                    const cplx vkq = vat(k, q);
                    vat(k, p) = c * vkp - s * ephm * vkq;
                    vat(k, q) = s * vkp + c * ephm * vkq;
                }
            }
        }
        res.offdiag_history.push_back(offdiag_mass(S));
        converged = res.offdiag_history.back() <= threshold;
    }
    if (!converged)
        throw error(errc::no_convergence, "jacobi: no convergence within 100 sweeps");

    res.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.eigenvalues[i] = S.at(i, i).real();
    return res;
}

HermMatrix symmetrize(const KernelMatrix& K) {
    const std::size_t n = K.size();
    std::vector<double> sqw(n);
    for (std::size_t i = 0; i < n; ++i) sqw[i] = std::sqrt(K.grid->weights[i]);
    HermMatrix S;
    S.n = n;
    S.a.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) S.at(i, j) = sqw[i] * K.at(i, j) * sqw[j];
    return S;
}

void canonical_phase(std::vector<cplx>& v) {
    std::size_t best = 0;
    double best_abs = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs == 0.0) return;
    const cplx factor = std::conj(v[best]) / best_abs;
    for (cplx& z : v) z *= factor;
    v[best] = cplx{std::abs(v[best]), 0.0};
}

// Sort key of the EigenSystem ordering: descending modulus, then ascending arg.
bool alpha_precedes(cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
}

EigenSystem assemble(GridPtr grid, std::vector<cplx> alphas,
                     std::vector<std::vector<cplx>> vectors) {
    const std::size_t m = alphas.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return alpha_precedes(alphas[a], alphas[b]);
    });
    EigenSystem E;
    E.grid = grid;
    E.alphas.reserve(m);
    E.vectors.reserve(m);
    for (std::size_t idx : order) {
        canonical_phase(vectors[idx]);
        E.alphas.push_back(alphas[idx]);
        E.vectors.emplace_back(grid, std::move(vectors[idx]));
    }
    return E;
}

} // namespace

bool is_null_atom(cplx alpha, double max_abs) {
    return std::abs(alpha) <= kNullAtomRel * max_abs;
}

double check_normality(const KernelMatrix& K) {
    const KernelMatrix Ks = adjoint(K);
    const KernelMatrix a = compose(K, Ks);
    const KernelMatrix b = compose(Ks, K);
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

EigenSystem eig_hermitian(const KernelMatrix& K, std::vector<double>* offdiag_history) {
    if (hermitian_defect(K) > 1e-10)
        throw error(errc::precondition_violation, "eig_hermitian: input is not Hermitian");
    const std::size_t n = K.size();
    JacobiResult jr = jacobi_hermitian(symmetrize(K));
    if (offdiag_history) *offdiag_history = jr.offdiag_history;

    std::vector<double> inv_sqw(n);
    for (std::size_t i = 0; i < n; ++i) inv_sqw[i] = 1.0 / std::sqrt(K.grid->weights[i]);

    std::vector<cplx> alphas(n);
    std::vector<std::vector<cplx>> vectors(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j) {
        alphas[j] = cplx{jr.eigenvalues[j], 0.0};
        for (std::size_t i = 0; i < n; ++i) vectors[j][i] = inv_sqw[i] * jr.vectors[i * n + j];
    }
    return assemble(K.grid, std::move(alphas), std::move(vectors));
}

EigenSystem eig_normal(const KernelMatrix& K, EigNormalDiagnostics* diag) {
    const double residual = check_normality(K);
    const double scale = sup_entry(K);
    if (residual > 1e-8 * scale)
        throw error(errc::not_normal, "eig_normal: normality residual " +
                                          std::to_string(residual) + " exceeds tolerance");

    const std::size_t n = K.size();
    const KernelMatrix Ks = adjoint(K);
    std::vector<cplx> xv(n * n), yv(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        xv[i] = (K.values[i] + Ks.values[i]) / 2.0;
        yv[i] = (K.values[i] - Ks.values[i]) / cplx{0.0, 2.0};
    }
    const KernelMatrix X(K.grid, std::move(xv));
    const KernelMatrix Y(K.grid, std::move(yv));

    HermMatrix Sx = symmetrize(X);
    const HermMatrix Sy = symmetrize(Y);
    JacobiResult jx = jacobi_hermitian(std::move(Sx));

    // Columns of U sorted by ascending X-eigenvalue for clustering.
    std::vector<std::size_t> byx(n);
    std::iota(byx.begin(), byx.end(), 0);
    std::sort(byx.begin(), byx.end(),
              [&](std::size_t a, std::size_t b) { return jx.eigenvalues[a] < jx.eigenvalues[b]; });

    double max_abs_x = 0.0;
    for (double x : jx.eigenvalues) max_abs_x = std::max(max_abs_x, std::abs(x));
    const double cluster_tol = 1e-8 * std::max(1.0, max_abs_x);

    auto ucol = [&](std::size_t j, std::size_t i) -> cplx& { return jx.vectors[i * n + j]; };

    std::vector<cplx> alphas(n);
    std::vector<std::vector<cplx>> vectors(n, std::vector<cplx>(n));
    std::vector<double> inv_sqw(n);
    for (std::size_t i = 0; i < n; ++i) inv_sqw[i] = 1.0 / std::sqrt(K.grid->weights[i]);

    std::size_t cluster_count = 0;
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n &&
               jx.eigenvalues[byx[stop]] - jx.eigenvalues[byx[stop - 1]] <= cluster_tol)
            ++stop;
        ++cluster_count;
        const std::size_t m = stop - start;

        if (diag) {
            if (stop < n) {
                const double gap = jx.eigenvalues[byx[stop]] - jx.eigenvalues[byx[stop - 1]];
                if (gap > cluster_tol && gap <= 10.0 * cluster_tol)
                    diag->ambiguous_gaps.push_back(gap);
            }
            for (std::size_t k = start + 1; k < stop; ++k) {
                const double gap = jx.eigenvalues[byx[k]] - jx.eigenvalues[byx[k - 1]];
                if (gap >= 0.1 * cluster_tol) diag->ambiguous_gaps.push_back(gap);
            }
        }

        // Compression of Y onto the cluster's eigenvectors, mixed by its own Jacobi.
        std::vector<std::vector<cplx>> cols(m, std::vector<cplx>(n));
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t i = 0; i < n; ++i) cols[a][i] = ucol(byx[start + a], i);

        std::vector<std::vector<cplx>> sy_cols(m, std::vector<cplx>(n));
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t i = 0; i < n; ++i) {
                cplx acc{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) acc += Sy.at(i, k) * cols[a][k];
                sy_cols[a][i] = acc;
            }

        std::vector<std::vector<cplx>> mixed(m, std::vector<cplx>(n));
        std::vector<double> yvals(m);
        if (m == 1) {
            mixed[0] = cols[0];
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) acc += std::conj(cols[0][i]) * sy_cols[0][i];
            yvals[0] = acc.real();
        } else {
            HermMatrix C;
            C.n = m;
            C.a.resize(m * m);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) {
                    cplx acc{0.0, 0.0};
                    for (std::size_t i = 0; i < n; ++i) acc += std::conj(cols[a][i]) * sy_cols[b][i];
                    C.at(a, b) = acc;
                }
            // enforce exact Hermitian symmetry before the inner Jacobi
            for (std::size_t a = 0; a < m; ++a) {
                C.at(a, a) = cplx{C.at(a, a).real(), 0.0};
                for (std::size_t b = a + 1; b < m; ++b) {
                    const cplx avg = (C.at(a, b) + std::conj(C.at(b, a))) / 2.0;
                    C.at(a, b) = avg;
                    C.at(b, a) = std::conj(avg);
                }
            }
            JacobiResult jc = jacobi_hermitian(std::move(C));
            for (std::size_t b = 0; b < m; ++b) {
                yvals[b] = jc.eigenvalues[b];
                for (std::size_t i = 0; i < n; ++i) {
                    cplx acc{0.0, 0.0};
                    for (std::size_t a = 0; a < m; ++a) acc += cols[a][i] * jc.vectors[a * m + b];
                    mixed[b][i] = acc;
                }
            }
        }

        // x from the Rayleigh quotient of the mixed vector (exact for singletons)
        for (std::size_t b = 0; b < m; ++b) {
            cplx xacc{0.0, 0.0};
            // Sx was consumed by Jacobi; use the eigen-decomposition instead:
            // u = sum_k c_k u_k with X u_k = x_k u_k, so u* X u = sum |c_k|^2 x_k.
            for (std::size_t k = start; k < stop; ++k) {
                cplx coeff{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i)
                    coeff += std::conj(ucol(byx[k], i)) * mixed[b][i];
                xacc += std::norm(coeff) * jx.eigenvalues[byx[k]];
            }
            const std::size_t slot = start + b;
            alphas[slot] = cplx{xacc.real(), yvals[b]};
            for (std::size_t i = 0; i < n; ++i) vectors[slot][i] = inv_sqw[i] * mixed[b][i];
        }
        start = stop;
    }
    if (diag) diag->cluster_count = cluster_count;
    return assemble(K.grid, std::move(alphas), std::move(vectors));
}

KernelMatrix reconstruct(const EigenSystem& E) {
    if (!E.grid) throw error(errc::invalid_argument, "reconstruct: eigensystem has no grid");
    const std::size_t n = E.grid->size();
    std::vector<cplx> vals(n * n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < E.count(); ++k) {
        const cplx a = E.alphas[k];
        const auto& phi = E.vectors[k].values;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ai = a * phi[i];
            for (std::size_t j = 0; j < n; ++j) vals[i * n + j] += ai * std::conj(phi[j]);
        }
    }
    return KernelMatrix(E.grid, std::move(vals));
}

double orthonormality_defect(const EigenSystem& E) {
    double d = 0.0;
    for (std::size_t m = 0; m < E.count(); ++m)
        for (std::size_t k = 0; k < E.count(); ++k) {
            const cplx g = inner(E.vectors[m], E.vectors[k]);
            const double target = (m == k) ? 1.0 : 0.0;
            d = std::max(d, std::abs(g - target));
        }
    return d;
}

EigenSystem make_eigensystem(std::vector<cplx> alphas, std::vector<GridFn> family,
                             double ortho_tol) {
    if (alphas.size() != family.size())
        throw error(errc::invalid_argument, "make_eigensystem: lengths differ");
    if (family.empty()) throw error(errc::invalid_argument, "make_eigensystem: empty family");
    const GridPtr grid = family.front().grid;
    std::vector<std::vector<cplx>> vectors;
    vectors.reserve(family.size());
    for (auto& f : family) {
        if (!same_grid(f.grid, grid))
            throw error(errc::incompatible_grids, "make_eigensystem: mixed grids in family");
        vectors.push_back(std::move(f.values));
    }
    EigenSystem E = assemble(grid, std::move(alphas), std::move(vectors));
    const double defect = orthonormality_defect(E);
    if (defect > ortho_tol)
        throw error(errc::invalid_family, "family orthonormality defect " +
                                              std::to_string(defect) + " exceeds tolerance");
    return E;
}

KernelMatrix synthesize_from_diagonal(const std::vector<cplx>& alphas,
                                      const std::vector<GridFn>& family, double ortho_tol) {
    return reconstruct(make_eigensystem(alphas, family, ortho_tol));
}

Sector sector_fit(const std::vector<cplx>& alphas, double atol) {
    std::vector<cplx> nonzero;
    for (cplx a : alphas)
        if (std::abs(a) > atol) nonzero.push_back(a);
    if (nonzero.empty())
        throw error(errc::zero_operator, "sector_fit: no eigenvalue exceeds the atom tolerance");

    cplx mean{0.0, 0.0};
    for (cplx a : nonzero) mean += a / std::abs(a);
    double rotation = -std::arg(mean);
    if (rotation < 0.0) rotation += kTwoPi;
    if (rotation >= kTwoPi) rotation -= kTwoPi;

    const cplx phase = std::polar(1.0, rotation);
    double slope = 0.0;
    for (cplx a : nonzero) {
        const cplx z = phase * a;
        if (!(z.real() > 0.0))
            throw error(errc::sector_too_wide,
                        "sector_fit: spectrum spans a sector of angle >= pi");
        slope = std::max(slope, std::abs(z.imag()) / z.real());
    }
    return Sector{rotation, std::max(slope, 1e-12)};
}

EigenSystem rotate(const EigenSystem& E, double alpha) {
    const cplx phase = std::polar(1.0, alpha);
    EigenSystem out = E;
    for (cplx& a : out.alphas) a *= phase;
    return out;
}

} // namespace carleman
