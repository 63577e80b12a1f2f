#include "wabc/output.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wabc {

namespace {

constexpr const char* kErrorHeader = "step,t,rel_err_psi,rel_err_u,energy,abs_err_psi,ref_norm_psi,abs_err_u,ref_norm_u";

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_error_csv(std::ostream& out, const std::vector<ErrorRow>& rows) {
    out << kErrorHeader << '\n';
    for (const auto& r : rows) {
        out << r.step << ',' << format_double(r.t) << ',' << format_double(r.rel_err_psi) << ','
            << format_double(r.rel_err_u) << ',' << format_double(r.energy) << ',' << format_double(r.abs_err_psi)
            << ',' << format_double(r.ref_norm_psi) << ',' << format_double(r.abs_err_u) << ','
            << format_double(r.ref_norm_u) << '\n';
    }
}

std::vector<ErrorRow> read_error_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("error CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kErrorHeader) throw std::runtime_error("error CSV has an unexpected header");
    std::vector<ErrorRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 9) throw std::runtime_error("error CSV line " + std::to_string(lineno) + ": expected 9 fields");
        ErrorRow r;
        try {
            r.step = std::stoul(f[0]);
            r.t = std::stod(f[1]);
            r.rel_err_psi = std::stod(f[2]);
            r.rel_err_u = std::stod(f[3]);
            r.energy = std::stod(f[4]);
            r.abs_err_psi = std::stod(f[5]);
            r.ref_norm_psi = std::stod(f[6]);
            r.abs_err_u = std::stod(f[7]);
            r.ref_norm_u = std::stod(f[8]);
        } catch (const std::exception&) {
            throw std::runtime_error("error CSV line " + std::to_string(lineno) + ": malformed number");
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error("error CSV has no data rows");
    return rows;
}

void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> psi, std::span<const double> u,
               const std::string& title) {
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (const auto& p : mesh.nodes()) out << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
    const int npe = mesh.nodes_per_element();
    out << "CELLS " << mesh.num_elements() << ' ' << mesh.num_elements() * static_cast<std::size_t>(npe + 1) << '\n';
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        out << npe;
        for (auto id : mesh.element(e)) out << ' ' << id;
        out << '\n';
    }
    out << "CELL_TYPES " << mesh.num_elements() << '\n';
    const int type = mesh.dim() == 2 ? 5 : 10;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) out << type << '\n';
    out << "POINT_DATA " << mesh.num_nodes() << '\n';
    out << "SCALARS psi double 1\nLOOKUP_TABLE default\n";
    for (double v : psi) out << format_double(v) << '\n';
    out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (double v : u) out << format_double(v) << '\n';
}

}  // namespace wabc
