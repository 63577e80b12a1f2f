#pragma once

#include "wabc/mesh.hpp"
#include "wabc/scenario.hpp"

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace wabc {

/// %.17g
std::string format_double(double v);

/// Columns: step,t,rel_err_psi,rel_err_u,energy,abs_err_psi,ref_norm_psi,abs_err_u,ref_norm_u
void write_error_csv(std::ostream& out, const std::vector<ErrorRow>& rows);

/// Reads the format above. Throws std::runtime_error on an empty file, a
/// wrong header or a malformed row.
std::vector<ErrorRow> read_error_csv(std::istream& in);

/// Legacy ASCII VTK unstructured grid with point data psi and u.
void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> psi, std::span<const double> u,
               const std::string& title = "wabc");

}  // namespace wabc
