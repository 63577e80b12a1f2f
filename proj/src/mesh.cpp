#include "wabc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wabc {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double signed_measure(int dim, const std::vector<Vec3>& x, const Mesh::Element& el) {
    const Vec3 e1 = sub(x[el[1]], x[el[0]]);
    const Vec3 e2 = sub(x[el[2]], x[el[0]]);
    if (dim == 2) return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
    const Vec3 e3 = sub(x[el[3]], x[el[0]]);
    return dot(cross(e1, e2), e3) / 6.0;
}

// Local faces of a simplex, as local vertex indices (dim entries each).
constexpr std::array<std::array<int, 3>, 3> kTriFaces{{{1, 2, -1}, {2, 0, -1}, {0, 1, -1}}};
constexpr std::array<std::array<int, 3>, 4> kTetFaces{{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

using FaceKey = std::array<std::int32_t, 3>;

FaceKey make_key(int dim, std::span<const std::int32_t> ids) {
    FaceKey key{-1, -1, -1};
    std::copy(ids.begin(), ids.begin() + dim, key.begin());
    std::sort(key.begin(), key.begin() + dim);
    return key;
}

}  // namespace

const char* to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::Excitation: return "excitation";
        case BoundaryTag::Absorbing: return "absorbing";
        case BoundaryTag::Neumann: return "neumann";
    }
    return "unknown";
}

BoundaryTag boundary_tag_from_string(const std::string& name) {
    if (name == "excitation") return BoundaryTag::Excitation;
    if (name == "absorbing") return BoundaryTag::Absorbing;
    if (name == "neumann") return BoundaryTag::Neumann;
    throw MeshError("unknown boundary tag '" + name + "'");
}

Mesh::Mesh(int dim, std::vector<Vec3> nodes, std::vector<Element> elements,
           std::vector<BoundaryFacet> facets)
    : dim_(dim), nodes_(std::move(nodes)), elements_(std::move(elements)), facets_(std::move(facets)) {
    if (dim_ != 2 && dim_ != 3) throw MeshError("mesh dimension must be 2 or 3");
    if (elements_.empty()) throw MeshError("no volume elements");

    const auto n_nodes = static_cast<std::int32_t>(nodes_.size());
    const int npe = dim_ + 1;
    auto check_ids = [&](std::span<const std::int32_t> ids, const char* what) {
        for (auto id : ids) {
            if (id < 0 || id >= n_nodes)
                throw MeshError(std::string("dangling reference: ") + what + " uses node " +
                                std::to_string(id) + " of " + std::to_string(n_nodes));
        }
    };

    for (auto& el : elements_) {
        check_ids({el.data(), static_cast<std::size_t>(npe)}, "element");
        double vol = signed_measure(dim_, nodes_, el);
        if (vol < 0.0) {
            std::swap(el[1], el[2]);
            vol = -vol;
        }
        // Scale-aware degeneracy test: compare against the longest edge^dim.
        double hmax = 0.0;
        for (int a = 0; a < npe; ++a)
            for (int b = a + 1; b < npe; ++b) {
                const Vec3 d = sub(nodes_[el[a]], nodes_[el[b]]);
                hmax = std::max(hmax, std::sqrt(dot(d, d)));
            }
        if (!(vol > 1e-12 * std::pow(hmax, dim_)))
            throw MeshError("degenerate element with measure " + std::to_string(vol));
    }

    // Sorted-face map: face key -> (owning element, number of owners).
    std::map<FaceKey, std::pair<std::int32_t, int>> faces;
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        const auto& el = elements_[e];
        for (int lf = 0; lf < npe; ++lf) {
            std::array<std::int32_t, 3> ids{-1, -1, -1};
            for (int k = 0; k < dim_; ++k) {
                const int local = dim_ == 2 ? kTriFaces[lf][k] : kTetFaces[lf][k];
                ids[k] = el[local];
            }
            auto [it, inserted] = faces.try_emplace(make_key(dim_, ids), static_cast<std::int32_t>(e), 0);
            ++it->second.second;
        }
    }

    facet_element_.resize(facets_.size());
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        const auto ids = facet_nodes(f);
        check_ids(ids, "facet");
        const auto it = faces.find(make_key(dim_, ids));
        if (it == faces.end()) throw MeshError("facet " + std::to_string(f) + " not matching any element face");
        if (it->second.second != 1)
            throw MeshError("facet " + std::to_string(f) + " is an interior face (shared by two elements)");
        facet_element_[f] = it->second.first;
    }
}

std::vector<std::int32_t> Mesh::facets_with_tag(BoundaryTag tag) const {
    std::vector<std::int32_t> out;
    for (std::size_t f = 0; f < facets_.size(); ++f)
        if (facets_[f].tag == tag) out.push_back(static_cast<std::int32_t>(f));
    return out;
}

std::vector<std::int32_t> Mesh::nodes_with_tag(BoundaryTag tag) const {
    std::vector<std::int32_t> out;
    for (std::size_t f = 0; f < facets_.size(); ++f)
        if (facets_[f].tag == tag)
            for (auto id : facet_nodes(f)) out.push_back(id);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Vec3 Mesh::element_centroid(std::size_t e) const {
    Vec3 c{0.0, 0.0, 0.0};
    for (auto id : element(e))
        for (int k = 0; k < 3; ++k) c[k] += nodes_[id][k];
    for (auto& v : c) v /= dim_ + 1;
    return c;
}

double element_measure(const Mesh& mesh, std::size_t e) {
    const auto el = mesh.element(e);
    const Vec3 e1 = sub(mesh.node(el[1]), mesh.node(el[0]));
    const Vec3 e2 = sub(mesh.node(el[2]), mesh.node(el[0]));
    if (mesh.dim() == 2) return 0.5 * std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
    const Vec3 e3 = sub(mesh.node(el[3]), mesh.node(el[0]));
    return std::abs(dot(cross(e1, e2), e3)) / 6.0;
}

FacetGeom facet_geometry(const Mesh& mesh, std::size_t f) {
    FacetGeom g;
    g.element = mesh.facet_element(f);
    const auto ids = mesh.facet_nodes(f);
    const Vec3& p = mesh.node(ids[0]);
    const Vec3& q = mesh.node(ids[1]);
    Vec3 n;
    Vec3 mid;
    if (mesh.dim() == 2) {
        const Vec3 t = sub(q, p);
        g.measure = std::hypot(t[0], t[1]);
        n = {t[1] / g.measure, -t[0] / g.measure, 0.0};
        mid = {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.0};
    } else {
        const Vec3& r = mesh.node(ids[2]);
        const Vec3 c = cross(sub(q, p), sub(r, p));
        const double len = std::sqrt(dot(c, c));
        g.measure = 0.5 * len;
        n = {c[0] / len, c[1] / len, c[2] / len};
        mid = {(p[0] + q[0] + r[0]) / 3.0, (p[1] + q[1] + r[1]) / 3.0, (p[2] + q[2] + r[2]) / 3.0};
    }
    const Vec3 centroid = mesh.element_centroid(static_cast<std::size_t>(g.element));
    if (dot(n, sub(mid, centroid)) < 0.0)
        for (auto& v : n) v = -v;
    g.normal = n;
    return g;
}

std::array<Vec3, 4> basis_gradients(const Mesh& mesh, std::size_t e) {
    const auto el = mesh.element(e);
    std::array<Vec3, 4> grads{};
    const Vec3& x0 = mesh.node(el[0]);
    if (mesh.dim() == 2) {
        const Vec3 e1 = sub(mesh.node(el[1]), x0);
        const Vec3 e2 = sub(mesh.node(el[2]), x0);
        const double det = e1[0] * e2[1] - e1[1] * e2[0];
        // Rows of J^{-1} with J = [e1 e2].
        grads[1] = {e2[1] / det, -e2[0] / det, 0.0};
        grads[2] = {-e1[1] / det, e1[0] / det, 0.0};
    } else {
        const Vec3 e1 = sub(mesh.node(el[1]), x0);
        const Vec3 e2 = sub(mesh.node(el[2]), x0);
        const Vec3 e3 = sub(mesh.node(el[3]), x0);
        const double det = dot(e1, cross(e2, e3));
        const Vec3 r1 = cross(e2, e3);
        const Vec3 r2 = cross(e3, e1);
        const Vec3 r3 = cross(e1, e2);
        for (int k = 0; k < 3; ++k) {
            grads[1][k] = r1[k] / det;
            grads[2][k] = r2[k] / det;
            grads[3][k] = r3[k] / det;
        }
    }
    for (int k = 0; k < 3; ++k) grads[0][k] = -(grads[1][k] + grads[2][k] + grads[3][k]);
    return grads;
}

}  // namespace wabc
