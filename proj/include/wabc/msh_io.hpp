#pragma once

#include "wabc/mesh.hpp"

#include <map>
#include <string>
#include <string_view>

namespace wabc {

/// Physical-group id -> boundary tag. Lives in the scenario config so that
/// mesh fixtures stay reusable.
using PhysicalTagMap = std::map<int, BoundaryTag>;

/// Reads Gmsh MSH 2.2 ASCII. Line (type 1) elements are facets in 2D;
/// triangles (type 2) are elements in 2D and facets in 3D; tetrahedra (type 4)
/// are elements. Point elements (type 15) are skipped, lower-dimensional
/// entities in 3D (lines) are ignored. Any other element type is an error, as
/// is a boundary entity whose physical group is absent from `tags`.
Mesh parse_msh(std::string_view text, const PhysicalTagMap& tags);

Mesh read_msh_file(const std::string& path, const PhysicalTagMap& tags);

/// Writes MSH 2.2 ASCII with 17 significant digits. Boundary facets carry the
/// physical id given by `physical_of` (defaults: excitation=1, absorbing=2,
/// neumann=3); volume elements use physical id 100.
std::string write_msh(const Mesh& mesh, const std::map<BoundaryTag, int>& physical_of = {});

/// The default physical numbering used by write_msh, inverted.
PhysicalTagMap default_physical_tags();

}  // namespace wabc
