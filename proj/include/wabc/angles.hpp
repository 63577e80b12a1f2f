#pragma once

#include "wabc/mesh.hpp"

#include <ostream>
#include <span>
#include <vector>

namespace wabc {

/// Switches and reference amplitude of the self-adaptive angle estimator.
struct AngleConfig {
    double p1 = 0.1;                   // amplitude switch fraction
    double p2 = 0.5;                   // gradient-history hold fraction
    double reference_amplitude = 0.0;  // source amplitude, m^2/s^2
    /// Use the running max of |psi| away from the absorbing boundary instead
    /// of `reference_amplitude` (volumetric-source scenarios).
    bool running_reference = false;
    bool adaptive = true;
    double fixed_theta_deg = 0.0;  // used when adaptive == false
};

/// Per-element incidence angle on the absorbing boundary. One slot per
/// element that owns at least one absorbing facet; all facets of that element
/// share its angle.
struct AngleField {
    std::vector<std::int32_t> elements;    // slot -> element id
    std::vector<std::int32_t> facet_slot;  // mesh facet -> slot, -1 if not absorbing
    std::vector<Vec3> normals;             // slot -> unit outward normal
    std::vector<std::int32_t> reference_nodes;  // nodes off the absorbing boundary

    std::vector<double> theta;       // degrees, in [0, 90]
    std::vector<double> last_theta;  // value of the previous step
    std::vector<std::uint8_t> enabled;
    /// Max gradient norm seen while enabled; negative while the history is empty.
    std::vector<double> grad_hist_max;
    double running_reference = 0.0;

    /// theta = initial_theta_deg everywhere, nothing enabled, empty histories.
    static AngleField for_mesh(const Mesh& mesh, double initial_theta_deg = 0.0);

    std::size_t size() const { return elements.size(); }
    double facet_theta(std::size_t facet) const { return theta[static_cast<std::size_t>(facet_slot[facet])]; }
};

/// Constant P1 gradient of the interpolant of `psi` on element e.
Vec3 element_gradient(const Mesh& mesh, std::span<const double> psi, std::size_t e);

/// arccos(|<grad, n>| / |grad|) in degrees. Throws std::domain_error for a
/// zero gradient.
double angle_from_gradient(const Vec3& grad, const Vec3& normal);

/// One step of the angle-computation algorithm. `psi_n` drives the amplitude
/// switch, `psi_prev` (the step before) supplies the gradients. Call exactly
/// once per time step, before the first absorbing-boundary assembly.
AngleField update_angles(const Mesh& mesh, std::span<const double> psi_n, std::span<const double> psi_prev,
                         const AngleField& field, const AngleConfig& cfg);

/// Incidence angle of a cylindrical wave from the hole center on the top edge
/// of a plate with side a, at abscissa x: arccos((a/2) / sqrt(x^2 + (a/2)^2)).
double analytical_plate_angle(double x, double a);

/// Angle dump, one row per absorbing-adjacent element:
/// step,element,cx,cy,cz,theta_deg,enabled
void write_angle_csv_header(std::ostream& out);
void write_angle_csv(std::ostream& out, const Mesh& mesh, const AngleField& field, long step);

}  // namespace wabc
