#include "carleman/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "carleman/calculus.hpp"
#include "carleman/io.hpp"
#include "carleman/mercer.hpp"
#include "carleman/presets.hpp"

namespace carleman {

namespace {

int exit_code_for(const error& e) {
    switch (e.code()) {
        case errc::not_normal: return exit_not_normal;
        case errc::incompatible_grids: return exit_grid_mismatch;
        case errc::unknown_symbol: return exit_unknown_symbol;
        case errc::sector_too_wide:
        case errc::sector_required:
        case errc::sector_mismatch: return exit_sector_violation;
        default: return exit_usage;
    }
}

double sup_entry(const KernelMatrix& K) {
    double m = 0.0;
    for (const cplx& z : K.values) m = std::max(m, std::abs(z));
    return m;
}

double sup_entry_diff(const KernelMatrix& A, const KernelMatrix& B) {
    double m = 0.0;
    for (std::size_t i = 0; i < A.values.size(); ++i)
        m = std::max(m, std::abs(A.values[i] - B.values[i]));
    return m;
}

double min_nonzero_abs(const std::vector<cplx>& alphas) {
    double max_abs = 0.0;
    for (cplx a : alphas) max_abs = std::max(max_abs, std::abs(a));
    double m = std::numeric_limits<double>::infinity();
    for (cplx a : alphas)
        if (!is_null_atom(a, max_abs)) m = std::min(m, std::abs(a));
    return m;
}

Sector fit_sector(const std::vector<cplx>& alphas) {
    double max_abs = 0.0;
    for (cplx a : alphas) max_abs = std::max(max_abs, std::abs(a));
    return sector_fit(alphas, kNullAtomRel * max_abs);
}

std::string derive_eigsys_path(const std::string& kernel_path) {
    const std::string suffix = ".json";
    if (kernel_path.size() > suffix.size() &&
        kernel_path.compare(kernel_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return kernel_path.substr(0, kernel_path.size() - suffix.size()) + ".eigsys.json";
    return kernel_path + ".eigsys.json";
}

EigenSystem drop_null_atoms(const EigenSystem& E) {
    double max_abs = 0.0;
    for (cplx a : E.alphas) max_abs = std::max(max_abs, std::abs(a));
    EigenSystem out;
    out.grid = E.grid;
    for (std::size_t k = 0; k < E.count(); ++k) {
        if (is_null_atom(E.alphas[k], max_abs)) continue;
        out.alphas.push_back(E.alphas[k]);
        out.vectors.push_back(E.vectors[k]);
    }
    return out;
}

// The rotated positive system carrying the real parts x_n on the original
// eigenfunctions, paired with the rotated Hermitian part of the kernel.
struct HermitianView {
    KernelMatrix X;
    EigenSystem Ex;
};

HermitianView hermitian_view(const KernelMatrix& K, const EigenSystem& E, const Sector& sector) {
    HermitianView hv;
    hv.X = rotated_hermitian_part(K, sector.rotation);
    hv.Ex.grid = E.grid;
    const cplx phase = std::polar(1.0, sector.rotation);
    for (std::size_t k = 0; k < E.count(); ++k) {
        hv.Ex.alphas.push_back(cplx{(phase * E.alphas[k]).real(), 0.0});
        hv.Ex.vectors.push_back(E.vectors[k]);
    }
    return hv;
}

std::size_t positive_count(const EigenSystem& Ex) {
    double max_x = 0.0;
    for (cplx a : Ex.alphas) max_x = std::max(max_x, a.real());
    std::size_t kept = 0;
    for (cplx a : Ex.alphas)
        if (a.real() > 1e-12 * max_x) ++kept;
    return kept;
}

std::vector<std::pair<std::size_t, std::size_t>> order_lattice(std::size_t count) {
    std::vector<std::size_t> picks;
    for (std::size_t frac = 0; frac <= 4; ++frac) {
        std::size_t idx = frac * (count - 1) / 4;
        if (picks.empty() || picks.back() != idx) picks.push_back(idx);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < picks.size(); ++a)
        for (std::size_t b = a; b < picks.size(); ++b) pairs.emplace_back(picks[a], picks[b]);
    return pairs;
}

std::vector<double> default_eps_sequence(const std::vector<cplx>& alphas) {
    const double lo = 0.5 * min_nonzero_abs(alphas);
    double hi = 0.0;
    for (cplx a : alphas) hi = std::max(hi, std::abs(a));
    hi *= 2.0;
    const int steps = 16;
    std::vector<double> eps(steps);
    for (int i = 0; i < steps; ++i)
        eps[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (steps - 1));
    return eps;
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> eps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            eps.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw error(errc::invalid_argument, "bad epsilon value '" + item + "'");
        }
    }
    if (eps.empty()) throw error(errc::invalid_argument, "empty epsilon list");
    return eps;
}

class CheckPrinter {
public:
    explicit CheckPrinter(std::ostream& out) : out_(out) {}

    void line(const std::string& name, double value, bool pass) {
        out_ << std::left << std::setw(30) << name << ' ' << std::scientific
             << std::setprecision(6) << std::setw(14) << value << ' '
             << (pass ? "PASS" : "FAIL") << '\n';
        all_pass_ = all_pass_ && pass;
    }

    bool all_pass() const { return all_pass_; }

private:
    std::ostream& out_;
    bool all_pass_ = true;
};

struct PresetFlags {
    std::string preset = "laguerre";
    int count = 16;
    std::string law = "linear_growth";
    double theta_max = 0.4;
    double base = 1.0;
    int grid_n = 64;
    double grid_cutoff = 40.0;
    std::string rule = "gauss_legendre";

    Preset to_preset() const {
        if (preset != "laguerre")
            throw error(errc::invalid_argument, "unknown preset family '" + preset + "'");
        Preset p;
        p.count = count;
        if (law == "linear_growth")
            p.law = EigenvalueLaw::linear_growth;
        else if (law == "inverse_square")
            p.law = EigenvalueLaw::inverse_square;
        else
            throw error(errc::invalid_argument, "unknown eigenvalue law '" + law + "'");
        p.theta_max = theta_max;
        p.base = base;
        p.grid_n = grid_n;
        p.cutoff = grid_cutoff;
        if (rule == "gauss_legendre")
            p.rule = QuadRule::gauss_legendre;
        else if (rule == "trapezoid")
            p.rule = QuadRule::trapezoid;
        else
            throw error(errc::invalid_argument, "unknown quadrature rule '" + rule + "'");
        return p;
    }
};

int cmd_synth(const PresetFlags& flags, const std::string& out_path, std::ostream& out) {
    const SynthesizedSystem synth = build_preset(flags.to_preset());
    const K0Report k0 = check_k0(synth.kernel);
    if (k0.tail_sup > 1e-6)
        throw error(errc::grid_too_coarse,
                    "kernel tail_sup " + std::to_string(k0.tail_sup) +
                        " exceeds the preset acceptance threshold 1e-6");
    const double cont = continuity_proxy(synth.kernel);
    save_kernel(synth.kernel, out_path, &k0, cont);
    const std::string eig_path = derive_eigsys_path(out_path);
    save_eigensystem(synth.system, eig_path);
    out << "kernel: " << out_path << '\n'
        << "eigsys: " << eig_path << '\n'
        << "family_defect: " << format_double(synth.family_defect) << '\n'
        << "k0.max_row_l2: " << format_double(k0.max_row_l2) << '\n'
        << "k0.max_col_l2: " << format_double(k0.max_col_l2) << '\n'
        << "k0.tail_sup: " << format_double(k0.tail_sup) << '\n'
        << "k0.hermitian_defect: " << format_double(k0.hermitian_defect) << '\n'
        << "k0.continuity_proxy: " << format_double(cont) << '\n';
    return exit_ok;
}

int cmd_decompose(const std::string& kernel_path, const std::string& out_path,
                  std::ostream& out) {
    const KernelMatrix K = load_kernel(kernel_path);
    const EigenSystem E = drop_null_atoms(eig_normal(K));
    save_eigensystem(E, out_path);
    out << "eigsys: " << out_path << '\n' << "atoms: " << E.count() << '\n';
    try {
        const Sector sector = fit_sector(E.alphas);
        out << "sector.rotation: " << format_double(sector.rotation) << '\n'
            << "sector.slope: " << format_double(sector.slope) << '\n';
    } catch (const error& e) {
        if (e.code() == errc::sector_too_wide)
            out << "sector: none (spectrum spans angle >= pi)\n";
        else if (e.code() == errc::zero_operator)
            out << "sector: none (zero operator)\n";
        else
            throw;
    }
    return exit_ok;
}

int cmd_mercer(const std::string& eigsys_path, const std::string& kernel_path,
               const std::string& report_path, std::ostream& out) {
    const EigenSystem E = load_eigensystem(eigsys_path);
    const KernelMatrix K = load_kernel(kernel_path);
    if (!same_grid(E.grid, K.grid))
        throw error(errc::incompatible_grids, "eigensystem and kernel grids differ");

    CheckPrinter p(out);
    if (E.count() == 0) {
        // nothing to expand: the zero system trivially reproduces a zero kernel
        p.line("full_order_sup_err", sup_entry(K), sup_entry(K) <= 1e-7);
        write_convergence_csv(ConvergenceTable{}, report_path);
        return p.all_pass() ? exit_ok : exit_invariant_fail;
    }

    const Sector sector = fit_sector(E.alphas);
    const ConvergenceTable table = mercer_report(K, E, sector);
    write_convergence_csv(table, report_path);

    const HermitianView hv = hermitian_view(K, E, sector);
    p.line("diag_lower_bound", diag_lower_bound_check(hv.X, hv.Ex),
           diag_lower_bound_check(hv.X, hv.Ex) >= -1e-8);

    double worst_cauchy = std::numeric_limits<double>::infinity();
    for (auto [a, b] : order_lattice(positive_count(hv.Ex)))
        worst_cauchy = std::min(worst_cauchy, cauchy_tail_bound_check(hv.X, hv.Ex, a, b));
    p.line("cauchy_tail_bound", worst_cauchy, worst_cauchy >= -1e-8);

    const double bessel = bessel_check(hv.X, hv.Ex);
    p.line("bessel_bound", bessel, bessel >= -1e-8);

    const ConvergenceTable dini = dini_table(hv.X, hv.Ex);
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < dini.diag_sup_err.size(); ++i)
        worst_increase = std::max(worst_increase, dini.diag_sup_err[i] - dini.diag_sup_err[i - 1]);
    p.line("dini_monotone", worst_increase,
           worst_increase <= 1e-10 && dini.diag_sup_err.back() <= 1e-8);

    const double tail_slack = abs_tail_estimate_slack(K, E, sector);
    p.line("abs_tail_estimate", tail_slack, tail_slack >= -1e-8);

    p.line("full_order_sup_err", table.sup_err.back(), table.sup_err.back() <= 1e-7);
    return p.all_pass() ? exit_ok : exit_invariant_fail;
}

int cmd_calculus(const std::string& eigsys_path, const std::string& symbol_name,
                 const std::string& eps_text, const std::string& report_path,
                 std::ostream& out) {
    const EigenSystem E = load_eigensystem(eigsys_path);
    const Symbol sym = Symbol::parse(symbol_name);
    const Sector sector = fit_sector(E.alphas);
    const std::vector<double> eps =
        eps_text.empty() ? default_eps_sequence(E.alphas) : parse_eps_list(eps_text);

    const PvResult pv = phi_pv(E, sym, eps);
    std::vector<PvReportRow> rows;
    CheckPrinter p(out);
    bool monotone = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        PvReportRow row{};
        row.eps = eps[i];
        row.sup_dist_to_direct = pv.dist_to_direct[i];
        const double eps_m = eps[i];
        const double eps_n = i == 0 ? eps[i] : eps[i - 1];
        row.reid_worst_slack = reid_bound_check(E, sector, sym, eps_m, eps_n);
        const XMonotonicity mono = monotonicity_check(E, sector, eps_m, eps_n);
        row.x_pair_margin = mono.pair_margin;
        row.x_full_margin = mono.full_margin;
        worst_margin = std::min({worst_margin, row.reid_worst_slack, row.x_pair_margin,
                                 row.x_full_margin});
        if (i > 0 && pv.dist_to_direct[i] > pv.dist_to_direct[i - 1]) monotone = false;
        rows.push_back(row);
    }
    write_pv_csv(rows, report_path);
    p.line("pv_distance_monotone", monotone ? 0.0 : 1.0, monotone);
    p.line("pv_margins", worst_margin, worst_margin >= -1e-8);
    return p.all_pass() ? exit_ok : exit_invariant_fail;
}

int cmd_verify(const std::string& kernel_path, const std::string& eps_text,
               std::ostream& out) {
    const KernelMatrix K = load_kernel(kernel_path);
    CheckPrinter p(out);

    const double normality = check_normality(K);
    const double normality_gate = 1e-8 * sup_entry(K);
    p.line("normality_residual", normality, normality <= normality_gate);
    if (normality > normality_gate) return exit_not_normal;

    const EigenSystem E = eig_normal(K);
    const double ortho = orthonormality_defect(E);
    p.line("orthonormality_defect", ortho, ortho <= 1e-8);

    const double recon = sup_entry_diff(reconstruct(E), K);
    p.line("reconstruction_residual", recon, recon <= 1e-7 * (1.0 + sup_entry(K)));

    Sector sector;
    try {
        sector = fit_sector(E.alphas);
    } catch (const error& e) {
        if (e.code() == errc::zero_operator) {
            out << "sector: zero operator, spectral checks are trivial\n";
            return p.all_pass() ? exit_ok : exit_invariant_fail;
        }
        throw;
    }

    const HermitianView hv = hermitian_view(K, E, sector);
    const double diag_margin = diag_lower_bound_check(hv.X, hv.Ex);
    p.line("diag_lower_bound", diag_margin, diag_margin >= -1e-8);

    double worst_cauchy = std::numeric_limits<double>::infinity();
    for (auto [a, b] : order_lattice(positive_count(hv.Ex)))
        worst_cauchy = std::min(worst_cauchy, cauchy_tail_bound_check(hv.X, hv.Ex, a, b));
    p.line("cauchy_tail_bound", worst_cauchy, worst_cauchy >= -1e-8);

    const double bessel = bessel_check(hv.X, hv.Ex);
    p.line("bessel_bound", bessel, bessel >= -1e-8);

    const ConvergenceTable dini = dini_table(hv.X, hv.Ex);
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < dini.diag_sup_err.size(); ++i)
        worst_increase = std::max(worst_increase, dini.diag_sup_err[i] - dini.diag_sup_err[i - 1]);
    p.line("dini_monotone", worst_increase,
           worst_increase <= 1e-10 && dini.diag_sup_err.back() <= 1e-8);

    const ConvergenceTable table = mercer_report(K, E, sector);
    p.line("full_order_sup_err", table.sup_err.back(), table.sup_err.back() <= 1e-7);

    const double tail_slack = abs_tail_estimate_slack(K, E, sector);
    p.line("abs_tail_estimate", tail_slack, tail_slack >= -1e-8);

    const std::vector<double> eps =
        eps_text.empty() ? default_eps_sequence(E.alphas) : parse_eps_list(eps_text);
    const double min_abs = min_nonzero_abs(E.alphas);
    const double max_abs = [&] {
        double m = 0.0;
        for (cplx a : E.alphas) m = std::max(m, std::abs(a));
        return m;
    }();

    const std::vector<Symbol> symbols = {Symbol::identity(), Symbol::clip(std::sqrt(min_abs * max_abs)),
                                         Symbol::cayley(), Symbol::phase()};
    for (const Symbol& sym : symbols) {
        const PvResult pv = phi_pv(E, sym, eps);
        bool monotone = true;
        for (std::size_t i = 1; i < eps.size(); ++i)
            if (pv.dist_to_direct[i] > pv.dist_to_direct[i - 1]) monotone = false;
        const bool final_ok = eps.back() >= min_abs || pv.dist_to_direct.back() <= 1e-9;
        p.line("pv_convergence[" + sym.name + "]", pv.dist_to_direct.back(),
               monotone && final_ok);
    }

    double worst_mono = std::numeric_limits<double>::infinity();
    double worst_reid = std::numeric_limits<double>::infinity();
    const Symbol reid_sym = Symbol::cayley();
    for (std::size_t i = 1; i < eps.size(); ++i) {
        const XMonotonicity mono = monotonicity_check(E, sector, eps[i], eps[i - 1]);
        worst_mono = std::min(worst_mono, mono.worst());
        worst_reid = std::min(worst_reid, reid_bound_check(E, sector, reid_sym, eps[i], eps[i - 1]));
    }
    p.line("x_monotonicity", worst_mono, worst_mono >= -1e-9);
    p.line("reid_bound", worst_reid, worst_reid >= -1e-8);

    const Region omega = Region::annulus_complement(0.5 * min_abs);
    const KernelMatrix proj = spectral_function(E, omega);
    p.line("projector_hermitian", hermitian_defect(proj), hermitian_defect(proj) <= 1e-12);
    const double idem = sup_entry_diff(compose(proj, proj), proj);
    p.line("projector_idempotent", idem, idem <= 1e-9);
    const double ident = projector_identity_check(E, omega);
    p.line("projector_identity", ident, ident <= 1e-9);

    // split the annulus at the geometric mid-modulus and compare the two halves
    const double mid = std::sqrt(min_abs * max_abs);
    const Region low = Region::modulus_band(0.5 * min_abs, mid);
    const Region high = Region::annulus_complement(mid);
    const KernelMatrix plow = spectral_function(E, low);
    const KernelMatrix phigh = spectral_function(E, high);
    double additivity = 0.0;
    for (std::size_t i = 0; i < proj.values.size(); ++i)
        additivity = std::max(additivity,
                              std::abs(proj.values[i] - (plow.values[i] + phigh.values[i])));
    p.line("projector_additivity", additivity, additivity <= 1e-13);

    return p.all_pass() ? exit_ok : exit_invariant_fail;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spectral analysis of normal Carleman kernels at quadrature scale"};
    app.require_subcommand(1);

    PresetFlags pf;
    std::string out_path, report_path, kernel_path, eigsys_path;
    std::string symbol_name, eps_text;

    CLI::App* synth = app.add_subcommand("synth", "synthesize a preset kernel + eigensystem");
    synth->add_option("--preset", pf.preset, "preset family (laguerre)");
    synth->add_option("--count", pf.count, "number of eigenpairs");
    synth->add_option("--law", pf.law, "eigenvalue law: linear_growth | inverse_square");
    synth->add_option("--theta-max", pf.theta_max, "angle spread of the eigenvalues");
    synth->add_option("--base", pf.base, "base magnitude of the eigenvalue law");
    synth->add_option("--grid-n", pf.grid_n, "quadrature node count");
    synth->add_option("--grid-cutoff", pf.grid_cutoff, "domain truncation L");
    synth->add_option("--rule", pf.rule, "quadrature rule: gauss_legendre | trapezoid");
    synth->add_option("--out", out_path, "kernel output path")->required();

    CLI::App* decomp = app.add_subcommand("decompose", "diagonalize a kernel file");
    decomp->add_option("kernel", kernel_path, "kernel JSON path")->required();
    decomp->add_option("--out", out_path, "eigensystem output path")->required();

    CLI::App* mercer = app.add_subcommand("mercer", "bilinear-series convergence report");
    mercer->add_option("eigsys", eigsys_path, "eigensystem JSON path")->required();
    mercer->add_option("kernel", kernel_path, "kernel JSON path")->required();
    mercer->add_option("--report", report_path, "CSV report path")->required();

    CLI::App* calc = app.add_subcommand("calculus", "principal-value spectral calculus report");
    calc->add_option("eigsys", eigsys_path, "eigensystem JSON path")->required();
    calc->add_option("--symbol", symbol_name, "identity | clip:EPS | cayley | phase")->required();
    calc->add_option("--eps", eps_text, "comma-separated decreasing epsilon list");
    calc->add_option("--report", report_path, "CSV report path")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the full invariant suite");
    verify->add_option("kernel", kernel_path, "kernel JSON path")->required();
    verify->add_option("--eps", eps_text, "comma-separated decreasing epsilon list");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return exit_ok;
        }
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (synth->parsed()) return cmd_synth(pf, out_path, out);
        if (decomp->parsed()) return cmd_decompose(kernel_path, out_path, out);
        if (mercer->parsed()) return cmd_mercer(eigsys_path, kernel_path, report_path, out);
        if (calc->parsed())
            return cmd_calculus(eigsys_path, symbol_name, eps_text, report_path, out);
        if (verify->parsed()) return cmd_verify(kernel_path, eps_text, out);
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    err << "usage error: no subcommand\n";
    return exit_usage;
}

} // namespace carleman
