#include "carleman/mercer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carleman {

namespace {

// Validates the positive-Hermitian precondition shared by the diagonal checks
// and returns the eigenvalue real parts x_n (null atoms dropped).
struct PositiveSystem {
    std::vector<double> x;                    // kept eigenvalues
    std::vector<const std::vector<cplx>*> phi;  // matching eigenfunction samples
};

PositiveSystem positive_system(const KernelMatrix& K, const EigenSystem& E) {
    if (!same_grid(K.grid, E.grid))
        throw error(errc::incompatible_grids, "kernel and eigensystem grids differ");
    if (hermitian_defect(K) > 1e-10)
        throw error(errc::precondition_violation, "kernel is not Hermitian");
    double max_x = 0.0;
    for (cplx a : E.alphas) {
        if (a.real() < -1e-10)
            throw error(errc::not_positive, "eigenvalue " + std::to_string(a.real()) +
                                                " is negative beyond tolerance");
        max_x = std::max(max_x, a.real());
    }
    PositiveSystem ps;
    for (std::size_t n = 0; n < E.count(); ++n) {
        const double x = E.alphas[n].real();
        if (x <= kNullAtomRel * max_x) continue;  // null atom, contributes nothing
        ps.x.push_back(x);
        ps.phi.push_back(&E.vectors[n].values);
    }
    return ps;
}

} // namespace

KernelMatrix partial_sum(const EigenSystem& E, std::size_t m) {
    if (m > E.count()) throw error(errc::index_out_of_range, "partial_sum: order out of range");
    const std::size_t n = E.grid->size();
    std::vector<cplx> vals(n * n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < m; ++k) {
        const cplx a = E.alphas[k];
        const auto& phi = E.vectors[k].values;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ai = a * phi[i];
            for (std::size_t j = 0; j < n; ++j) vals[i * n + j] += ai * std::conj(phi[j]);
        }
    }
    return KernelMatrix(E.grid, std::move(vals));
}

double diag_lower_bound_check(const KernelMatrix& K_herm, const EigenSystem& E_herm) {
    const PositiveSystem ps = positive_system(K_herm, E_herm);
    const std::size_t n = K_herm.size();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double partial = 0.0;
        // m = 0 margin is K(s,s) itself, then each added term shrinks it
        worst = std::min(worst, K_herm.at(i, i).real());
        for (std::size_t k = 0; k < ps.x.size(); ++k) {
            partial += ps.x[k] * std::norm((*ps.phi[k])[i]);
            worst = std::min(worst, K_herm.at(i, i).real() - partial);
        }
    }
    return worst;
}

double cauchy_tail_bound_check(const KernelMatrix& K_herm, const EigenSystem& E_herm,
                               std::size_t p, std::size_t q) {
    const PositiveSystem ps = positive_system(K_herm, E_herm);
    if (p > q || q >= ps.x.size())
        throw error(errc::index_out_of_range, "cauchy_tail_bound_check: invalid order range");
    const std::size_t n = K_herm.size();
    double big_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) big_m = std::max(big_m, K_herm.at(i, i).real());

    std::vector<double> range_sq(n, 0.0);  // sum_{p..q} x_n |phi_n(s)|^2
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = p; k <= q; ++k) range_sq[i] += ps.x[k] * std::norm((*ps.phi[k])[i]);

    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double cross = 0.0;
            for (std::size_t k = p; k <= q; ++k)
                cross += ps.x[k] * std::abs((*ps.phi[k])[i]) * std::abs((*ps.phi[k])[j]);
            worst = std::min(worst, big_m * range_sq[i] - cross * cross);
        }
    return worst;
}

double bessel_check(const KernelMatrix& K_herm, const EigenSystem& E_herm) {
    const PositiveSystem ps = positive_system(K_herm, E_herm);
    const std::size_t n = K_herm.size();
    const double mrl = check_k0(K_herm).max_row_l2;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ps.x.size(); ++k)
            acc += ps.x[k] * ps.x[k] * std::norm((*ps.phi[k])[i]);
        worst = std::min(worst, mrl * mrl - acc);
    }
    return worst;
}

ConvergenceTable dini_table(const KernelMatrix& K_herm, const EigenSystem& E_herm) {
    const PositiveSystem ps = positive_system(K_herm, E_herm);
    const std::size_t n = K_herm.size();
    const std::size_t count = ps.x.size();
    ConvergenceTable t;

    std::vector<double> partial(n, 0.0);
    std::vector<double> abs_partial_row(n, 0.0);
    for (std::size_t m = 0; m <= count; ++m) {
        if (m > 0)
            for (std::size_t i = 0; i < n; ++i)
                partial[i] += ps.x[m - 1] * std::norm((*ps.phi[m - 1])[i]);
        double diag_err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diag_err = std::max(diag_err, std::abs(K_herm.at(i, i).real() - partial[i]));

        // sup_err and abs_tail of the same (real) series, filled for completeness
        double sup_err = 0.0, abs_tail = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx rem = K_herm.at(i, j);
                double tail = 0.0;
                for (std::size_t k = m; k < count; ++k)
                    tail += ps.x[k] * std::abs((*ps.phi[k])[i]) * std::abs((*ps.phi[k])[j]);
                for (std::size_t k = 0; k < m; ++k)
                    rem -= ps.x[k] * (*ps.phi[k])[i] * std::conj((*ps.phi[k])[j]);
                sup_err = std::max(sup_err, std::abs(rem));
                abs_tail = std::max(abs_tail, tail);
            }
        t.orders.push_back(static_cast<int>(m));
        t.sup_err.push_back(sup_err);
        t.diag_sup_err.push_back(diag_err);
        t.abs_tail.push_back(abs_tail);
    }
    return t;
}

namespace {

// Shared skeleton of mercer_report / abs_tail_estimate_slack: sector-validated
// rotated eigenvalues and the per-node Dini tails.
struct RotatedSystem {
    std::vector<double> x;                      // Re(e^{i rot} alpha_n), kept atoms
    std::vector<double> mod;                    // |alpha_n|
    std::vector<const std::vector<cplx>*> phi;
    std::vector<cplx> alpha;                    // original eigenvalues, kept atoms
};

RotatedSystem rotated_system(const EigenSystem& E, const Sector& sector) {
    double max_abs = 0.0;
    for (cplx a : E.alphas) max_abs = std::max(max_abs, std::abs(a));
    const cplx phase = std::polar(1.0, sector.rotation);
    RotatedSystem rs;
    for (std::size_t n = 0; n < E.count(); ++n) {
        if (is_null_atom(E.alphas[n], max_abs)) continue;
        const cplx lam = phase * E.alphas[n];
        if (!(lam.real() > 0.0) ||
            std::abs(lam.imag()) > sector.slope * lam.real() + 1e-9)
            throw error(errc::sector_required,
                        "eigenvalue outside the declared sector");
        rs.x.push_back(lam.real());
        rs.mod.push_back(std::abs(lam));
        rs.phi.push_back(&E.vectors[n].values);
        rs.alpha.push_back(E.alphas[n]);
    }
    return rs;
}

} // namespace

ConvergenceTable mercer_report(const KernelMatrix& K, const EigenSystem& E,
                               const Sector& sector) {
    if (!same_grid(K.grid, E.grid))
        throw error(errc::incompatible_grids, "mercer_report: grids differ");
    const RotatedSystem rs = rotated_system(E, sector);
    const std::size_t n = K.size();
    const std::size_t count = rs.x.size();
    const KernelMatrix X = rotated_hermitian_part(K, sector.rotation);

    ConvergenceTable t;
    std::vector<cplx> partial(n * n, cplx{0.0, 0.0});
    std::vector<double> diag_partial(n, 0.0);
    for (std::size_t m = 0; m <= count; ++m) {
        if (m > 0) {
            const auto& phi = *rs.phi[m - 1];
            const cplx a = rs.alpha[m - 1];
            for (std::size_t i = 0; i < n; ++i) {
                const cplx ai = a * phi[i];
                for (std::size_t j = 0; j < n; ++j) partial[i * n + j] += ai * std::conj(phi[j]);
                diag_partial[i] += rs.x[m - 1] * std::norm(phi[i]);
            }
        }
        double sup_err = 0.0;
        for (std::size_t i = 0; i < n * n; ++i)
            sup_err = std::max(sup_err, std::abs(K.values[i] - partial[i]));
        double diag_err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diag_err = std::max(diag_err, std::abs(X.at(i, i).real() - diag_partial[i]));
        double abs_tail = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double tail = 0.0;
                for (std::size_t k = m; k < count; ++k)
                    tail += rs.mod[k] * std::abs((*rs.phi[k])[i]) * std::abs((*rs.phi[k])[j]);
                abs_tail = std::max(abs_tail, tail);
            }
        t.orders.push_back(static_cast<int>(m));
        t.sup_err.push_back(sup_err);
        t.diag_sup_err.push_back(diag_err);
        t.abs_tail.push_back(abs_tail);
    }
    return t;
}

double abs_tail_estimate_slack(const KernelMatrix& K, const EigenSystem& E,
                               const Sector& sector) {
    if (!same_grid(K.grid, E.grid))
        throw error(errc::incompatible_grids, "abs_tail_estimate_slack: grids differ");
    const RotatedSystem rs = rotated_system(E, sector);
    const std::size_t n = K.size();
    const std::size_t count = rs.x.size();
    const double factor = std::sqrt(1.0 + sector.slope * sector.slope);

    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m <= count; ++m) {
        double abs_tail = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double tail = 0.0;
                for (std::size_t k = m; k < count; ++k)
                    tail += rs.mod[k] * std::abs((*rs.phi[k])[i]) * std::abs((*rs.phi[k])[j]);
                abs_tail = std::max(abs_tail, tail);
            }
        double max_dini_tail = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double tail = 0.0;
            for (std::size_t k = m; k < count; ++k) tail += rs.x[k] * std::norm((*rs.phi[k])[i]);
            max_dini_tail = std::max(max_dini_tail, tail);
        }
        worst = std::min(worst, factor * max_dini_tail - abs_tail);
    }
    return worst;
}

} // namespace carleman
