#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wabc {

using Vec3 = std::array<double, 3>;

/// Boundary condition class carried by each boundary facet.
enum class BoundaryTag : std::uint8_t { Excitation, Absorbing, Neumann };

const char* to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(const std::string& name);

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A boundary facet: `dim` node ids (edge in 2D, triangle in 3D) plus its tag.
struct BoundaryFacet {
    std::array<std::int32_t, 3> nodes{-1, -1, -1};
    BoundaryTag tag = BoundaryTag::Neumann;
};

/// Geometry of a boundary facet as seen from its adjacent element.
struct FacetGeom {
    Vec3 normal{};  // unit, pointing out of the adjacent element
    double measure = 0.0;
    std::int32_t element = -1;
};

/// Immutable simplicial mesh (triangles in 2D, tetrahedra in 3D) with tagged
/// boundary facets.
///
/// Construction validates every invariant: node references exist, simplices
/// have nonzero measure, and each facet is a face of exactly one element.
/// Elements are reoriented to positive orientation so that the signed measure
/// is positive. Facet-to-element adjacency is built once from a sorted-face map.
class Mesh {
public:
    using Element = std::array<std::int32_t, 4>;

    Mesh() = default;
    Mesh(int dim, std::vector<Vec3> nodes, std::vector<Element> elements,
         std::vector<BoundaryFacet> facets);

    int dim() const { return dim_; }
    int nodes_per_element() const { return dim_ + 1; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_elements() const { return elements_.size(); }
    std::size_t num_facets() const { return facets_.size(); }

    const Vec3& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Vec3>& nodes() const { return nodes_; }

    std::span<const std::int32_t> element(std::size_t e) const {
        return {elements_[e].data(), static_cast<std::size_t>(dim_ + 1)};
    }
    std::span<const std::int32_t> facet_nodes(std::size_t f) const {
        return {facets_[f].nodes.data(), static_cast<std::size_t>(dim_)};
    }
    BoundaryTag facet_tag(std::size_t f) const { return facets_[f].tag; }
    const BoundaryFacet& facet(std::size_t f) const { return facets_[f]; }

    /// Element owning facet `f`.
    std::int32_t facet_element(std::size_t f) const { return facet_element_[f]; }

    std::vector<std::int32_t> facets_with_tag(BoundaryTag tag) const;

    /// Sorted, unique node ids lying on facets with `tag`.
    std::vector<std::int32_t> nodes_with_tag(BoundaryTag tag) const;

    Vec3 element_centroid(std::size_t e) const;

private:
    int dim_ = 2;
    std::vector<Vec3> nodes_;
    std::vector<Element> elements_;
    std::vector<BoundaryFacet> facets_;
    std::vector<std::int32_t> facet_element_;
};

/// |det(edge matrix)| / dim!
double element_measure(const Mesh& mesh, std::size_t e);

FacetGeom facet_geometry(const Mesh& mesh, std::size_t f);

/// Gradients of the barycentric (P1) basis functions on element `e`.
/// Entry a holds grad N_a; only the first dim components are meaningful.
std::array<Vec3, 4> basis_gradients(const Mesh& mesh, std::size_t e);

}  // namespace wabc
