#pragma once

#include <functional>
#include <string>

#include "carleman/spectral.hpp"

namespace carleman {

/// A symbol phi(z) = z * v(z) with v bounded by v_sup; the admissible class
/// for the spectral calculus. v is spot-checked against v_sup at every
/// evaluated point and must stay finite.
struct Symbol {
    std::function<cplx(cplx)> v;
    double v_sup = 1.0;
    std::string name;

    cplx v_at(cplx z) const;                   // checked evaluation of v
    cplx phi_at(cplx z) const { return z * v_at(z); }

    static Symbol identity();                  // v == 1
    static Symbol clip(double eps);            // v = chi_{|z|>eps} / z
    static Symbol cayley();                    // v = 1 / (1 + |z|)
    static Symbol phase();                     // v = e^{-|z|}
    /// Parses "identity" | "clip:EPS" | "cayley" | "phase"; throws unknown-symbol.
    static Symbol parse(const std::string& name);
};

/// A Borel set whose closure avoids 0, reduced to a membership predicate
/// (the discretized spectral measure is atomic on eigenvalues).
struct Region {
    std::function<bool(cplx)> contains;
    double inner_radius = 0.0;  // contains(z) implies |z| > inner_radius

    Region(std::function<bool(cplx)> pred, double inner_r);

    static Region annulus_complement(double eps);       // |z| > eps
    static Region punctured_plane();                     // |z| > 0
    static Region modulus_band(double lo, double hi);    // lo < |z| <= hi
    static Region disk(cplx center, double radius);      // |z - c| < r, 0 outside
    static Region unite(const Region& a, const Region& b);
};

/// E(s,t;omega) = sum over eigenvalue atoms in omega of phi_n(s) conj(phi_n(t)):
/// the kernel of the spectral projection. Hermitian and idempotent.
KernelMatrix spectral_function(const EigenSystem& E, const Region& omega);

/// Sup-entry residual of the identity E(omega) = N v_omega(N), with both sides
/// computed independently (projection sum vs weighted composition).
double projector_identity_check(const EigenSystem& E, const Region& omega);

/// phi(N) over the nonzero atoms: sum phi(alpha_n) phi_n(s) conj(phi_n(t)).
KernelMatrix phi_direct(const EigenSystem& E, const Symbol& sym);

struct PvResult {
    std::vector<double> eps;
    std::vector<KernelMatrix> kernels;          // Phi_eps per entry of eps
    std::vector<double> dist_to_direct;         // sup-entry distance to phi_direct
};

/// Principal-value truncations Phi_eps over a strictly decreasing eps sequence.
PvResult phi_pv(const EigenSystem& E, const Symbol& sym, const std::vector<double>& eps_seq);

/// X_eps(s,t) = sum_{|alpha_n|>eps} Re(e^{i rotation} alpha_n) phi_n(s) conj(phi_n(t)),
/// the Hermitian-part majorant in the rotated frame.
KernelMatrix x_epsilon(const EigenSystem& E, const Sector& sector, double eps);

/// The two diagonal monotonicity margins of the X_eps family.
struct XMonotonicity {
    double pair_margin = 0.0;  // min_s [X_{eps_m}(s,s) - X_{eps_n}(s,s)]
    double full_margin = 0.0;  // min over both eps of min_s [X(s,s) - X_eps(s,s)]
    double worst() const { return pair_margin < full_margin ? pair_margin : full_margin; }
};

XMonotonicity monotonicity_check(const EigenSystem& E, const Sector& sector,
                                 double eps_m, double eps_n);

/// Worst slack of the Schwarz/Reid Cauchy estimate between two PV truncations:
/// v_sup^2 (1+l^2) (X_m - X_n)(s,s) (X_m - X_n)(t,t) - |Phi_m - Phi_n|^2(s,t),
/// everything computed in the rotated frame.
double reid_bound_check(const EigenSystem& E, const Sector& sector, const Symbol& sym,
                        double eps_m, double eps_n);

} // namespace carleman
