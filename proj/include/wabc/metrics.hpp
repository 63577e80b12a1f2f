#pragma once

#include "wabc/mesh.hpp"
#include "wabc/physics.hpp"
#include "wabc/sparse.hpp"

#include <span>
#include <vector>

namespace wabc {

/// u_i = rho psi_t,i
std::vector<double> pressure_field(std::span<const double> psi_dot, double rho);

/// For every node of `mesh`, the index of the coinciding node of `ref`
/// (within `tol` in every coordinate). Throws MeshError("node mismatch ...")
/// listing the first unmatched nodes.
std::vector<std::int32_t> match_nodes(const Mesh& mesh, const Mesh& ref, double tol = 1e-12);

std::vector<double> restrict_reference(std::span<const double> ref_values, std::span<const std::int32_t> node_map);

/// Convenience form that builds the node map on the fly.
std::vector<double> restrict_reference(std::span<const double> ref_values, const Mesh& ref, const Mesh& mesh);

/// sqrt(x^T M x)
double mass_norm(const SparseMatrix& mass, std::span<const double> x);

struct RelativeError {
    double value = 0.0;
    bool absolute = false;  // reference norm vanished; value is the absolute norm
};

/// ||a - b||_M / ||b||_M; falls back to ||a - b||_M with the flag set when
/// ||b||_M == 0.
RelativeError relative_l2_error(std::span<const double> a, std::span<const double> b, const SparseMatrix& mass);

/// Squared norms sampled at the snapshot times.
struct ErrorSamples {
    std::vector<double> t;
    std::vector<double> err_sq;
    std::vector<double> ref_sq;
};

/// sqrt(int ||e||^2 dt / int ||ref||^2 dt) by the composite trapezoid rule.
/// Throws std::invalid_argument on mismatched lengths or fewer than one sample.
double space_time_error(const ErrorSamples& s);

struct SpaceTimeErrors {
    double e_psi = 0.0;
    double e_u = 0.0;
};

/// Relative L2(0,T; L2) errors of psi and u = rho psi_t over two trajectories
/// sampled at times `t`.
SpaceTimeErrors space_time_error(std::span<const double> t, const std::vector<std::vector<double>>& psi,
                                 const std::vector<std::vector<double>>& psi_ref,
                                 const std::vector<std::vector<double>>& psi_dot,
                                 const std::vector<std::vector<double>>& psi_dot_ref, const SparseMatrix& mass,
                                 double rho);

/// E0 = 1/2 (w^T M w + psi^T L psi), w_i = sqrt(max(0, 1/c^2 - (k/2) psi_t,i)) psi_t,i.
double energy_diagnostic(std::span<const double> psi, std::span<const double> psi_dot, const SparseMatrix& mass,
                         const SparseMatrix& laplacian, const PhysParams& phys);

/// (e_base - e_new) / e_base
double improvement(double e_base, double e_new);

}  // namespace wabc
