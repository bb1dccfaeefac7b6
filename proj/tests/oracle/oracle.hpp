#pragma once

#include <cstdint>
#include <string>

#include "carleman/calculus.hpp"
#include "carleman/spectral.hpp"

// Brute-force reference implementations used only by the test suite. They
// never share summation code with the library: everything here is recomputed
// by direct loops in extended precision.
namespace carleman::oracle {

struct OracleConfig {
    int max_iters = 10000;
    double tol = 1e-10;
    std::uint64_t seed = 1;
};

/// Top-`count` eigenpairs of a Hermitian kernel by shifted power iteration
/// with deflation against the weighted inner product.
EigenSystem power_eig_hermitian(const KernelMatrix& K, int count, const OracleConfig& cfg);

/// C_ij = sum_k w_k A_ik B_kj by the naive triple loop.
KernelMatrix weighted_compose(const KernelMatrix& A, const KernelMatrix& B);

/// Inputs of one inequality instance; only the fields the named check reads
/// need to be populated.
struct SweepInstance {
    const KernelMatrix* kernel = nullptr;   // Hermitian positive kernel (diagonal checks)
    const EigenSystem* system = nullptr;
    const Sector* sector = nullptr;
    const Symbol* symbol = nullptr;
    double eps_m = 0.0;
    double eps_n = 0.0;
    std::size_t p = 0;
    std::size_t q = 0;
};

struct SweepResult {
    double margin = 0.0;  // worst (minimal) value over the sweep
    std::size_t s_index = 0;
    std::size_t t_index = 0;
    std::size_t order = 0;  // truncation order at the minimum, when applicable
};

/// Re-evaluates the named inequality by direct summation at every grid pair
/// and order, returning the arg-min witness. Check ids:
///   "diag_lower_bound"   K(s,s) - partial diagonal sums
///   "cauchy_tail_bound"  M * range sum - squared cross sum
///   "bessel_bound"       row-norm bound minus squared coefficient sums
///   "x_diag_monotonicity" diagonal ordering of the X_eps family
///   "pv_schwarz_bound"   Reid/Schwarz estimate between two PV truncations
SweepResult exhaustive_inequality_sweep(const std::string& check_id, const SweepInstance& in);

} // namespace carleman::oracle
