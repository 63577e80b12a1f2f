#include "wabc/generators.hpp"

#include <cmath>
#include <numbers>

namespace wabc {

namespace {

double dist2(const Vec3& p, const Vec3& q) {
    return (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]);
}

// Quad (a, b, c, d) in counter-clockwise lattice order, split along the
// shorter diagonal (a-c on ties).
void push_quad(std::vector<Mesh::Element>& elements, const std::vector<Vec3>& nodes, std::int32_t a, std::int32_t b,
               std::int32_t c, std::int32_t d) {
    const auto at = [&nodes](std::int32_t i) -> const Vec3& { return nodes[static_cast<std::size_t>(i)]; };
    if (dist2(at(b), at(d)) < dist2(at(a), at(c)) * (1.0 - 1e-9)) {
        elements.push_back({a, b, d, -1});
        elements.push_back({b, c, d, -1});
    } else {
        elements.push_back({a, b, c, -1});
        elements.push_back({a, c, d, -1});
    }
}

BoundaryFacet edge(std::int32_t a, std::int32_t b, BoundaryTag tag) {
    BoundaryFacet f;
    f.nodes = {a, b, -1};
    f.tag = tag;
    return f;
}

// Triangulates the strip between two node columns (each sorted bottom to top)
// by advancing along the shorter diagonal.
void zip_columns(std::vector<Mesh::Element>& elements, const std::vector<Vec3>& nodes,
                 const std::vector<std::int32_t>& left, const std::vector<std::int32_t>& right) {
    const auto at = [&nodes](std::int32_t i) -> const Vec3& { return nodes[static_cast<std::size_t>(i)]; };
    std::size_t l = 0;
    std::size_t r = 0;
    while (l + 1 < left.size() || r + 1 < right.size()) {
        bool advance_left;
        if (l + 1 == left.size())
            advance_left = false;
        else if (r + 1 == right.size())
            advance_left = true;
        else
            advance_left = dist2(at(left[l + 1]), at(right[r])) <= dist2(at(right[r + 1]), at(left[l]));
        if (advance_left) {
            elements.push_back({left[l], right[r], left[l + 1], -1});
            ++l;
        } else {
            elements.push_back({left[l], right[r], right[r + 1], -1});
            ++r;
        }
    }
}

double channel_top(const ChannelSpec& s, double x) {
    return s.length + (x - 0.5 * s.width) * std::tan(s.tilt_deg * std::numbers::pi / 180.0);
}

}  // namespace

Mesh generate_channel(const ChannelSpec& s) {
    if (!(s.width > 0.0) || !(s.length > 0.0) || !(s.h > 0.0)) throw MeshError("channel: width, length and h must be positive");
    if (!(s.tilt_deg >= 0.0 && s.tilt_deg < 90.0)) throw MeshError("channel: tilt angle must lie in [0, 90) degrees");
    if (s.h > std::min(s.width, s.length)) throw MeshError("channel: h larger than domain extent");
    if (s.extra_rows < 0) throw MeshError("channel: negative extra_rows");
    if (!(channel_top(s, 0.0) > 0.0)) throw MeshError("channel: tilted top crosses the bottom edge");

    const int nx = static_cast<int>(std::ceil(s.width / s.h));
    const int ny = static_cast<int>(std::ceil(s.length / s.h));
    const double hy = s.length / ny;

    // Column i: lattice rows j*hy strictly below the top (keeping half a row
    // clear), the top node, then the same above it for the extension.
    std::vector<Vec3> nodes;
    std::vector<std::vector<std::int32_t>> lower(static_cast<std::size_t>(nx + 1));
    std::vector<std::vector<std::int32_t>> upper(static_cast<std::size_t>(nx + 1));
    for (int i = 0; i <= nx; ++i) {
        const double x = s.width * i / nx;
        const double top = channel_top(s, x);
        auto& lo = lower[static_cast<std::size_t>(i)];
        auto& up = upper[static_cast<std::size_t>(i)];
        auto add = [&nodes](double y, double xx) {
            nodes.push_back({xx, y, 0.0});
            return static_cast<std::int32_t>(nodes.size() - 1);
        };
        for (int j = 0; j * hy < top - 0.5 * hy; ++j) lo.push_back(add(j * hy, x));
        const std::int32_t t = add(top, x);
        lo.push_back(t);
        if (s.extra_rows > 0) {
            const double roof = top + s.extra_rows * hy;
            up.push_back(t);
            for (int j = static_cast<int>(std::floor(top / hy)) + 1; j * hy < roof - 0.5 * hy; ++j)
                if (j * hy > top + 0.5 * hy) up.push_back(add(j * hy, x));
            up.push_back(add(roof, x));
        }
    }

    std::vector<Mesh::Element> elements;
    for (int i = 0; i < nx; ++i) {
        zip_columns(elements, nodes, lower[static_cast<std::size_t>(i)], lower[static_cast<std::size_t>(i + 1)]);
        if (s.extra_rows > 0) zip_columns(elements, nodes, upper[static_cast<std::size_t>(i)], upper[static_cast<std::size_t>(i + 1)]);
    }

    const auto& last_lo = [&](int i) -> const std::vector<std::int32_t>& { return lower[static_cast<std::size_t>(i)]; };
    const auto& last_up = [&](int i) -> const std::vector<std::int32_t>& { return upper[static_cast<std::size_t>(i)]; };
    std::vector<BoundaryFacet> facets;
    for (int i = 0; i < nx; ++i) {
        facets.push_back(edge(last_lo(i).front(), last_lo(i + 1).front(), s.bottom));
        if (s.extra_rows > 0)
            facets.push_back(edge(last_up(i).back(), last_up(i + 1).back(), s.top));
        else
            facets.push_back(edge(last_lo(i).back(), last_lo(i + 1).back(), s.top));
    }
    for (int side : {0, nx}) {
        const auto& lo = last_lo(side);
        for (std::size_t k = 0; k + 1 < lo.size(); ++k) facets.push_back(edge(lo[k], lo[k + 1], s.sides));
        if (s.extra_rows > 0) {
            const auto& up = last_up(side);
            for (std::size_t k = 0; k + 1 < up.size(); ++k) facets.push_back(edge(up[k], up[k + 1], s.sides));
        }
    }
    return Mesh(2, std::move(nodes), std::move(elements), std::move(facets));
}

Mesh generate_channel(double width, double length, double tilt_deg, double h) {
    ChannelSpec s;
    s.width = width;
    s.length = length;
    s.tilt_deg = tilt_deg;
    s.h = h;
    return generate_channel(s);
}

int channel_rows_for_extension(const ChannelSpec& s, double extension) {
    const int ny = static_cast<int>(std::ceil(s.length / s.h));
    return static_cast<int>(std::ceil(extension / (s.length / ny)));
}

Mesh generate_square(const SquareSpec& s) {
    if (!(s.side > 0.0) || s.cells < 1 || s.pad < 0) throw MeshError("square: invalid spec");
    const double dx = s.side / s.cells;
    const int lo = -s.pad;
    const int hi = s.cells + s.pad;
    const int n = hi - lo;
    auto id = [n, lo](int i, int j) { return static_cast<std::int32_t>((i - lo) * (n + 1) + (j - lo)); };

    std::vector<Vec3> nodes;
    nodes.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j) nodes.push_back({s.x0 + i * dx, s.y0 + j * dx, 0.0});

    std::vector<Mesh::Element> elements;
    for (int i = lo; i < hi; ++i)
        for (int j = lo; j < hi; ++j) push_quad(elements, nodes, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));

    std::vector<BoundaryFacet> facets;
    for (int k = lo; k < hi; ++k) {
        facets.push_back(edge(id(k, lo), id(k + 1, lo), s.boundary));
        facets.push_back(edge(id(k, hi), id(k + 1, hi), s.boundary));
        facets.push_back(edge(id(lo, k), id(lo, k + 1), s.boundary));
        facets.push_back(edge(id(hi, k), id(hi, k + 1), s.boundary));
    }
    return Mesh(2, std::move(nodes), std::move(elements), std::move(facets));
}

Mesh generate_plate_octant(const PlateSpec& s) {
    if (!(s.a > 0.0) || !(s.r > 0.0) || !(s.r < 0.5 * s.a) || s.rays < 1 || s.radial < 1 || s.extra_steps < 0)
        throw MeshError("plate: invalid spec");
    const int cols = s.radial + s.extra_steps;
    auto id = [cols](int k, int j) { return static_cast<std::int32_t>(k * (cols + 1) + j); };
    const double half = 0.5 * s.a;

    std::vector<Vec3> nodes;
    nodes.reserve(static_cast<std::size_t>((s.rays + 1) * (cols + 1)));
    for (int k = 0; k <= s.rays; ++k) {
        const double xt = half * k / s.rays;
        const double phi = std::atan2(xt, half);
        const double hx = s.r * std::sin(phi);
        const double hy = s.r * std::cos(phi);
        const double sx = (xt - hx) / s.radial;
        const double sy = (half - hy) / s.radial;
        for (int j = 0; j <= cols; ++j) nodes.push_back({hx + j * sx, hy + j * sy, 0.0});
    }

    std::vector<Mesh::Element> elements;
    for (int k = 0; k < s.rays; ++k)
        for (int j = 0; j < cols; ++j) push_quad(elements, nodes, id(k, j), id(k + 1, j), id(k + 1, j + 1), id(k, j + 1));

    const BoundaryTag outer = s.extra_steps == 0 ? BoundaryTag::Absorbing : BoundaryTag::Neumann;
    std::vector<BoundaryFacet> facets;
    for (int k = 0; k < s.rays; ++k) {
        facets.push_back(edge(id(k, 0), id(k + 1, 0), BoundaryTag::Excitation));
        facets.push_back(edge(id(k, cols), id(k + 1, cols), outer));
    }
    for (int j = 0; j < cols; ++j) {
        facets.push_back(edge(id(0, j), id(0, j + 1), BoundaryTag::Neumann));
        facets.push_back(edge(id(s.rays, j), id(s.rays, j + 1), BoundaryTag::Neumann));
    }
    return Mesh(2, std::move(nodes), std::move(elements), std::move(facets));
}

}  // namespace wabc
