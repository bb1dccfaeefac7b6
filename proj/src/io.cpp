#include "carleman/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace carleman {

namespace {

using nlohmann::json;

json grid_to_json(const Grid& g) {
    return json{{"points", g.points}, {"weights", g.weights}, {"cutoff", g.cutoff}};
}

GridPtr grid_from_json(const json& j) {
    Grid g;
    g.points = j.at("points").get<std::vector<double>>();
    g.weights = j.at("weights").get<std::vector<double>>();
    g.cutoff = j.at("cutoff").get<double>();
    if (g.points.size() != g.weights.size() || g.points.empty())
        throw error(errc::io_error, "grid: points/weights length mismatch");
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        if (!(g.weights[i] > 0.0)) throw error(errc::io_error, "grid: nonpositive weight");
        if (i > 0 && !(g.points[i] > g.points[i - 1]))
            throw error(errc::io_error, "grid: points not strictly increasing");
    }
    return std::make_shared<const Grid>(std::move(g));
}

json cplx_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw error(errc::io_error, "expected [re, im] pair");
    return cplx{j[0].get<double>(), j[1].get<double>()};
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_error, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw error(errc::io_error, "malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error(errc::io_error, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw error(errc::io_error, "write failed for '" + path + "'");
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void save_kernel(const KernelMatrix& K, const std::string& path, const K0Report* report,
                 double continuity) {
    json j;
    j["grid"] = grid_to_json(*K.grid);
    json vals = json::array();
    for (const cplx& z : K.values) vals.push_back(cplx_to_json(z));
    j["values"] = std::move(vals);
    if (report) {
        json k0{{"max_row_l2", report->max_row_l2},
                {"max_col_l2", report->max_col_l2},
                {"tail_sup", report->tail_sup},
                {"hermitian_defect", report->hermitian_defect}};
        if (continuity >= 0.0) k0["continuity_proxy"] = continuity;
        j["k0"] = std::move(k0);
    }
    write_file(j, path);
}

KernelMatrix load_kernel(const std::string& path) {
    const json j = parse_file(path);
    try {
        GridPtr grid = grid_from_json(j.at("grid"));
        const auto& vals = j.at("values");
        const std::size_t n = grid->size();
        if (vals.size() != n * n)
            throw error(errc::io_error, "kernel values are not n*n in '" + path + "'");
        std::vector<cplx> values(n * n);
        for (std::size_t i = 0; i < n * n; ++i) values[i] = cplx_from_json(vals[i]);
        return KernelMatrix(std::move(grid), std::move(values));
    } catch (const json::exception& e) {
        throw error(errc::io_error, "bad kernel file '" + path + "': " + e.what());
    }
}

void save_eigensystem(const EigenSystem& E, const std::string& path) {
    json j;
    j["grid"] = grid_to_json(*E.grid);
    json alphas = json::array(), vectors = json::array();
    for (const cplx& a : E.alphas) alphas.push_back(cplx_to_json(a));
    for (const GridFn& f : E.vectors) {
        json vec = json::array();
        for (const cplx& z : f.values) vec.push_back(cplx_to_json(z));
        vectors.push_back(std::move(vec));
    }
    j["alphas"] = std::move(alphas);
    j["vectors"] = std::move(vectors);
    write_file(j, path);
}

EigenSystem load_eigensystem(const std::string& path) {
    const json j = parse_file(path);
    try {
        EigenSystem E;
        E.grid = grid_from_json(j.at("grid"));
        const std::size_t n = E.grid->size();
        const auto& alphas = j.at("alphas");
        const auto& vectors = j.at("vectors");
        if (alphas.size() != vectors.size())
            throw error(errc::io_error, "alphas/vectors length mismatch in '" + path + "'");
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            E.alphas.push_back(cplx_from_json(alphas[k]));
            if (vectors[k].size() != n)
                throw error(errc::io_error, "vector length mismatch in '" + path + "'");
            std::vector<cplx> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = cplx_from_json(vectors[k][i]);
            E.vectors.emplace_back(E.grid, std::move(vals));
        }
        return E;
    } catch (const json::exception& e) {
        throw error(errc::io_error, "bad eigensystem file '" + path + "': " + e.what());
    }
}

void write_convergence_csv(const ConvergenceTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error(errc::io_error, "cannot write '" + path + "'");
    out << "m,sup_err,diag_sup_err,abs_tail\n";
    for (std::size_t i = 0; i < table.orders.size(); ++i)
        out << table.orders[i] << ',' << format_double(table.sup_err[i]) << ','
            << format_double(table.diag_sup_err[i]) << ',' << format_double(table.abs_tail[i])
            << '\n';
    if (!out) throw error(errc::io_error, "write failed for '" + path + "'");
}

void write_pv_csv(const std::vector<PvReportRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error(errc::io_error, "cannot write '" + path + "'");
    out << "eps,sup_dist_to_direct,reid_worst_slack,x_pair_margin,x_full_margin\n";
    for (const PvReportRow& r : rows)
        out << format_double(r.eps) << ',' << format_double(r.sup_dist_to_direct) << ','
            << format_double(r.reid_worst_slack) << ',' << format_double(r.x_pair_margin) << ','
            << format_double(r.x_full_margin) << '\n';
    if (!out) throw error(errc::io_error, "write failed for '" + path + "'");
}

} // namespace carleman
