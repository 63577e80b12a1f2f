#include "wabc/angles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wabc {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

AngleField AngleField::for_mesh(const Mesh& mesh, double initial_theta_deg) {
    AngleField f;
    f.facet_slot.assign(mesh.num_facets(), -1);
    std::vector<std::int32_t> slot_of_element(mesh.num_elements(), -1);
    for (std::size_t fc = 0; fc < mesh.num_facets(); ++fc) {
        if (mesh.facet_tag(fc) != BoundaryTag::Absorbing) continue;
        const auto e = static_cast<std::size_t>(mesh.facet_element(fc));
        if (slot_of_element[e] < 0) {
            slot_of_element[e] = static_cast<std::int32_t>(f.elements.size());
            f.elements.push_back(static_cast<std::int32_t>(e));
            f.normals.push_back({0.0, 0.0, 0.0});
        }
        const auto slot = static_cast<std::size_t>(slot_of_element[e]);
        f.facet_slot[fc] = slot_of_element[e];
        // Measure-weighted mean normal for elements touching Gamma_abc with
        // more than one facet.
        const FacetGeom g = facet_geometry(mesh, fc);
        for (int k = 0; k < 3; ++k) f.normals[slot][k] += g.measure * g.normal[k];
    }
    for (auto& n : f.normals) {
        const double len = norm(n);
        for (auto& v : n) v /= len;
    }

    std::vector<std::uint8_t> on_abc(mesh.num_nodes(), 0);
    for (auto id : mesh.nodes_with_tag(BoundaryTag::Absorbing)) on_abc[static_cast<std::size_t>(id)] = 1;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
        if (!on_abc[i]) f.reference_nodes.push_back(static_cast<std::int32_t>(i));

    const std::size_t n = f.elements.size();
    f.theta.assign(n, initial_theta_deg);
    f.last_theta.assign(n, initial_theta_deg);
    f.enabled.assign(n, 0);
    f.grad_hist_max.assign(n, -1.0);
    return f;
}

Vec3 element_gradient(const Mesh& mesh, std::span<const double> psi, std::size_t e) {
    const auto grads = basis_gradients(mesh, e);
    const auto el = mesh.element(e);
    Vec3 g{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < el.size(); ++a)
        for (int k = 0; k < 3; ++k) g[k] += psi[static_cast<std::size_t>(el[a])] * grads[a][k];
    return g;
}

double angle_from_gradient(const Vec3& grad, const Vec3& normal) {
    const double g = norm(grad);
    if (!(g > 0.0)) throw std::domain_error("angle_from_gradient: zero gradient");
    const double c = std::abs(grad[0] * normal[0] + grad[1] * normal[1] + grad[2] * normal[2]) / g;
    return std::acos(std::clamp(c, 0.0, 1.0)) * kRadToDeg;
}

AngleField update_angles(const Mesh& mesh, std::span<const double> psi_n, std::span<const double> psi_prev,
                         const AngleField& field, const AngleConfig& cfg) {
    AngleField next = field;
    next.last_theta = field.theta;
    if (!cfg.adaptive) {
        std::fill(next.theta.begin(), next.theta.end(), cfg.fixed_theta_deg);
        return next;
    }

    double reference = cfg.reference_amplitude;
    if (cfg.running_reference) {
        for (auto i : field.reference_nodes)
            next.running_reference = std::max(next.running_reference, std::abs(psi_n[static_cast<std::size_t>(i)]));
        reference = next.running_reference;
    }
    const double switch_level = cfg.p1 * reference;

    for (std::size_t s = 0; s < field.size(); ++s) {
        const auto e = static_cast<std::size_t>(field.elements[s]);
        double local = 0.0;
        for (auto id : mesh.element(e)) local = std::max(local, std::abs(psi_n[static_cast<std::size_t>(id)]));
        if (local > switch_level) next.enabled[s] = 1;

        if (!next.enabled[s]) {
            next.theta[s] = 0.0;
            continue;
        }
        const Vec3 grad = element_gradient(mesh, psi_prev, e);
        const double gnorm = norm(grad);
        const double hist = field.grad_hist_max[s];
        // Empty history (the formal infinite initial value) holds the angle.
        if (hist < 0.0 || gnorm <= cfg.p2 * hist || !(gnorm > 0.0)) {
            next.theta[s] = field.theta[s];
        } else {
            next.theta[s] = angle_from_gradient(grad, field.normals[s]);
        }
        next.grad_hist_max[s] = std::max(hist, gnorm);
    }
    return next;
}

double analytical_plate_angle(double x, double a) {
    const double half = 0.5 * a;
    return std::acos(half / std::sqrt(x * x + half * half)) * kRadToDeg;
}

void write_angle_csv_header(std::ostream& out) { out << "step,element,cx,cy,cz,theta_deg,enabled\n"; }

void write_angle_csv(std::ostream& out, const Mesh& mesh, const AngleField& field, long step) {
    const auto old = out.precision(17);
    for (std::size_t s = 0; s < field.size(); ++s) {
        const auto e = static_cast<std::size_t>(field.elements[s]);
        const Vec3 c = mesh.element_centroid(e);
        out << step << ',' << e << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << field.theta[s] << ','
            << static_cast<int>(field.enabled[s]) << '\n';
    }
    out.precision(old);
}

}  // namespace wabc
