#pragma once

#include <string>

#include "carleman/kernel.hpp"
#include "carleman/mercer.hpp"
#include "carleman/spectral.hpp"

namespace carleman {

/// Kernel JSON: {"grid": {"points": [...], "weights": [...], "cutoff": L},
///               "values": [[re, im], ...]} row-major, exact IEEE-754 doubles.
/// An optional "k0" block carries the synthesis diagnostics.
void save_kernel(const KernelMatrix& K, const std::string& path,
                 const K0Report* report = nullptr, double continuity = -1.0);
KernelMatrix load_kernel(const std::string& path);

/// EigenSystem JSON: {"grid": {...}, "alphas": [[re,im],...],
///                    "vectors": [[[re,im],...], ...]} in alpha order.
void save_eigensystem(const EigenSystem& E, const std::string& path);
EigenSystem load_eigensystem(const std::string& path);

/// CSV with columns m, sup_err, diag_sup_err, abs_tail; one row per order.
/// Deterministic: fixed %.17g formatting, no timestamps.
void write_convergence_csv(const ConvergenceTable& table, const std::string& path);

/// CSV with columns eps, sup_dist_to_direct, reid_worst_slack, x_pair_margin,
/// x_full_margin; one row per epsilon.
struct PvReportRow {
    double eps;
    double sup_dist_to_direct;
    double reid_worst_slack;
    double x_pair_margin;
    double x_full_margin;
};
void write_pv_csv(const std::vector<PvReportRow>& rows, const std::string& path);

std::string format_double(double x);  // shared %.17g formatting

} // namespace carleman
