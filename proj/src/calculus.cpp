#include "carleman/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carleman {

cplx Symbol::v_at(cplx z) const {
    const cplx val = v(z);
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
        throw error(errc::symbol_error, "symbol '" + name + "': v produced a non-finite value");
    if (std::abs(val) > v_sup + 1e-12)
        throw error(errc::symbol_error,
                    "symbol '" + name + "': |v| exceeds the declared bound " +
                        std::to_string(v_sup));
    return val;
}

Symbol Symbol::identity() {
    return Symbol{[](cplx) { return cplx{1.0, 0.0}; }, 1.0, "identity"};
}

Symbol Symbol::clip(double eps) {
    if (!(eps > 0.0)) throw error(errc::invalid_argument, "clip symbol needs eps > 0");
    return Symbol{[eps](cplx z) { return std::abs(z) > eps ? 1.0 / z : cplx{0.0, 0.0}; },
                  1.0 / eps, "clip:" + std::to_string(eps)};
}

Symbol Symbol::cayley() {
    return Symbol{[](cplx z) { return cplx{1.0, 0.0} / (1.0 + std::abs(z)); }, 1.0, "cayley"};
}

Symbol Symbol::phase() {
    return Symbol{[](cplx z) { return cplx{std::exp(-std::abs(z)), 0.0}; }, 1.0, "phase"};
}

Symbol Symbol::parse(const std::string& name) {
    if (name == "identity") return identity();
    if (name == "cayley") return cayley();
    if (name == "phase") return phase();
    if (name.rfind("clip:", 0) == 0) {
        try {
            return clip(std::stod(name.substr(5)));
        } catch (const std::logic_error&) {
            throw error(errc::unknown_symbol, "malformed clip symbol '" + name + "'");
        }
    }
    throw error(errc::unknown_symbol, "unknown symbol '" + name + "'");
}

Region::Region(std::function<bool(cplx)> pred, double inner_r)
    : contains(std::move(pred)), inner_radius(inner_r) {
    if (!contains) throw error(errc::invalid_argument, "Region requires a predicate");
    if (contains(cplx{0.0, 0.0}))
        throw error(errc::invalid_argument, "Region must exclude 0");
}

Region Region::annulus_complement(double eps) {
    if (!(eps > 0.0)) throw error(errc::invalid_argument, "annulus_complement needs eps > 0");
    return Region([eps](cplx z) { return std::abs(z) > eps; }, eps);
}

Region Region::punctured_plane() {
    return Region([](cplx z) { return std::abs(z) > 0.0; }, 0.0);
}

Region Region::modulus_band(double lo, double hi) {
    if (!(0.0 < lo && lo < hi))
        throw error(errc::invalid_argument, "modulus_band needs 0 < lo < hi");
    return Region([lo, hi](cplx z) { const double a = std::abs(z); return lo < a && a <= hi; },
                  lo);
}

Region Region::disk(cplx center, double radius) {
    if (!(radius > 0.0)) throw error(errc::invalid_argument, "disk needs radius > 0");
    if (std::abs(center) <= radius)
        throw error(errc::invalid_argument, "disk must not contain 0");
    return Region([center, radius](cplx z) { return std::abs(z - center) < radius; },
                  std::abs(center) - radius);
}

Region Region::unite(const Region& a, const Region& b) {
    auto pa = a.contains, pb = b.contains;
    return Region([pa, pb](cplx z) { return pa(z) || pb(z); },
                  std::min(a.inner_radius, b.inner_radius));
}

namespace {

double max_abs_alpha(const EigenSystem& E) {
    double m = 0.0;
    for (cplx a : E.alphas) m = std::max(m, std::abs(a));
    return m;
}

// Accumulates sum over selected atoms of coeff_n * phi_n(s) conj(phi_n(t)),
// in ascending system order (the fixed summation order every caller shares).
KernelMatrix atom_sum(const EigenSystem& E, const std::function<bool(std::size_t)>& selected,
                      const std::function<cplx(std::size_t)>& coeff) {
    if (!E.grid) throw error(errc::invalid_argument, "eigensystem has no grid");
    const std::size_t n = E.grid->size();
    std::vector<cplx> vals(n * n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < E.count(); ++k) {
        if (!selected(k)) continue;
        const cplx c = coeff(k);
        const auto& phi = E.vectors[k].values;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ci = c * phi[i];
            for (std::size_t j = 0; j < n; ++j) vals[i * n + j] += ci * std::conj(phi[j]);
        }
    }
    return KernelMatrix(E.grid, std::move(vals));
}

double sup_entry_diff(const KernelMatrix& A, const KernelMatrix& B) {
    double m = 0.0;
    for (std::size_t i = 0; i < A.values.size(); ++i)
        m = std::max(m, std::abs(A.values[i] - B.values[i]));
    return m;
}

void require_sector(const EigenSystem& E, const Sector& sector) {
    const double max_abs = max_abs_alpha(E);
    const cplx phase = std::polar(1.0, sector.rotation);
    for (cplx a : E.alphas) {
        if (is_null_atom(a, max_abs)) continue;
        const cplx lam = phase * a;
        if (!(lam.real() > 0.0) || std::abs(lam.imag()) > sector.slope * lam.real() + 1e-9)
            throw error(errc::sector_mismatch, "eigenvalue outside the declared sector");
    }
}

} // namespace

KernelMatrix spectral_function(const EigenSystem& E, const Region& omega) {
    if (omega.contains(cplx{0.0, 0.0}))
        throw error(errc::invalid_argument, "spectral_function: region contains 0");
    return atom_sum(
        E, [&](std::size_t k) { return omega.contains(E.alphas[k]); },
        [](std::size_t) { return cplx{1.0, 0.0}; });
}

double projector_identity_check(const EigenSystem& E, const Region& omega) {
    const KernelMatrix proj = spectral_function(E, omega);
    // N v_omega(N): both factors assembled as kernels, multiplied as operators.
    const KernelMatrix full = reconstruct(E);
    const KernelMatrix vker = atom_sum(
        E, [&](std::size_t k) { return omega.contains(E.alphas[k]); },
        [&](std::size_t k) { return cplx{1.0, 0.0} / E.alphas[k]; });
    return sup_entry_diff(proj, compose(full, vker));
}

KernelMatrix phi_direct(const EigenSystem& E, const Symbol& sym) {
    const double max_abs = max_abs_alpha(E);
    return atom_sum(
        E, [&](std::size_t k) { return !is_null_atom(E.alphas[k], max_abs); },
        [&](std::size_t k) { return sym.phi_at(E.alphas[k]); });
}

PvResult phi_pv(const EigenSystem& E, const Symbol& sym, const std::vector<double>& eps_seq) {
    if (eps_seq.empty())
        throw error(errc::invalid_sequence, "phi_pv: empty epsilon sequence");
    for (std::size_t i = 0; i < eps_seq.size(); ++i) {
        if (!(eps_seq[i] > 0.0))
            throw error(errc::invalid_sequence, "phi_pv: epsilons must be positive");
        if (i > 0 && !(eps_seq[i] < eps_seq[i - 1]))
            throw error(errc::invalid_sequence, "phi_pv: epsilons must strictly decrease");
    }
    const double max_abs = max_abs_alpha(E);
    const KernelMatrix direct = phi_direct(E, sym);
    PvResult res;
    res.eps = eps_seq;
    for (double eps : eps_seq) {
        // atoms below the null threshold stay excluded at every epsilon
        const double cut = std::max(eps, kNullAtomRel * max_abs);
        KernelMatrix trunc = atom_sum(
            E, [&](std::size_t k) { return std::abs(E.alphas[k]) > cut; },
            [&](std::size_t k) { return sym.phi_at(E.alphas[k]); });
        res.dist_to_direct.push_back(sup_entry_diff(trunc, direct));
        res.kernels.push_back(std::move(trunc));
    }
    return res;
}

KernelMatrix x_epsilon(const EigenSystem& E, const Sector& sector, double eps) {
    if (!(eps > 0.0)) throw error(errc::invalid_argument, "x_epsilon: eps must be positive");
    require_sector(E, sector);
    const cplx phase = std::polar(1.0, sector.rotation);
    return atom_sum(
        E, [&](std::size_t k) { return std::abs(E.alphas[k]) > eps; },
        [&](std::size_t k) { return cplx{(phase * E.alphas[k]).real(), 0.0}; });
}

namespace {

// Diagonal of the rotated-part sum over atoms with |alpha| > cut.
std::vector<double> x_diag(const EigenSystem& E, const Sector& sector, double cut) {
    const std::size_t n = E.grid->size();
    const cplx phase = std::polar(1.0, sector.rotation);
    std::vector<double> d(n, 0.0);
    for (std::size_t k = 0; k < E.count(); ++k) {
        if (!(std::abs(E.alphas[k]) > cut)) continue;
        const double x = (phase * E.alphas[k]).real();
        const auto& phi = E.vectors[k].values;
        for (std::size_t i = 0; i < n; ++i) d[i] += x * std::norm(phi[i]);
    }
    return d;
}

} // namespace

XMonotonicity monotonicity_check(const EigenSystem& E, const Sector& sector, double eps_m,
                                 double eps_n) {
    if (!(0.0 < eps_m && eps_m <= eps_n))
        throw error(errc::invalid_argument, "monotonicity_check: need 0 < eps_m <= eps_n");
    require_sector(E, sector);
    const std::size_t n = E.grid->size();
    const double max_abs = max_abs_alpha(E);

    const std::vector<double> dm = x_diag(E, sector, eps_m);
    const std::vector<double> dn = x_diag(E, sector, eps_n);
    // X(s,s) over all non-null atoms: the eps -> 0 limit
    const std::vector<double> dfull = x_diag(E, sector, kNullAtomRel * max_abs);

    XMonotonicity out;
    out.pair_margin = std::numeric_limits<double>::infinity();
    out.full_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        out.pair_margin = std::min(out.pair_margin, dm[i] - dn[i]);
        out.full_margin = std::min(out.full_margin, dfull[i] - dm[i]);
        out.full_margin = std::min(out.full_margin, dfull[i] - dn[i]);
    }
    return out;
}

double reid_bound_check(const EigenSystem& E, const Sector& sector, const Symbol& sym,
                        double eps_m, double eps_n) {
    if (!(0.0 < eps_m && eps_m <= eps_n))
        throw error(errc::invalid_argument, "reid_bound_check: need 0 < eps_m <= eps_n");
    require_sector(E, sector);
    const std::size_t n = E.grid->size();
    const cplx phase = std::polar(1.0, sector.rotation);

    // Phi_eps in the rotated frame: coefficients phi(lambda_n), lambda = e^{i rot} alpha.
    auto phi_trunc = [&](double eps) {
        return atom_sum(
            E, [&](std::size_t k) { return std::abs(E.alphas[k]) > eps; },
            [&](std::size_t k) { return sym.phi_at(phase * E.alphas[k]); });
    };
    const KernelMatrix pm = phi_trunc(eps_m);
    const KernelMatrix pn = phi_trunc(eps_n);
    const std::vector<double> dm = x_diag(E, sector, eps_m);
    const std::vector<double> dn = x_diag(E, sector, eps_n);

    const double bound = sym.v_sup * sym.v_sup * (1.0 + sector.slope * sector.slope);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double lhs = std::norm(pm.at(i, j) - pn.at(i, j));
            const double rhs = bound * (dm[i] - dn[i]) * (dm[j] - dn[j]);
            worst = std::min(worst, rhs - lhs);
        }
    return worst;
}

} // namespace carleman
