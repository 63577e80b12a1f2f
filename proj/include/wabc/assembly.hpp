#pragma once

#include "wabc/angles.hpp"
#include "wabc/mesh.hpp"
#include "wabc/physics.hpp"
#include "wabc/sparse.hpp"

#include <functional>
#include <span>
#include <vector>

namespace wabc {

/// Exact integral over a simplex of a product of barycentric coordinates,
/// prod_a N_a^{p_a}:  dim! |T| prod_a p_a! / (dim + sum_a p_a)!
double simplex_moment(int dim, double measure, std::span<const int> exponents);

/// M_ij = int N_i N_j
SparseMatrix assemble_mass(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern);
/// L_ij = int grad N_i . grad N_j; stiffness K = c^2 L, damping C = b L.
SparseMatrix assemble_laplacian(const Mesh& mesh, std::shared_ptr<const SparsityPattern> pattern);

SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_laplacian(const Mesh& mesh);

/// Lagged nonlinearity matrix W(v)_{ia} = k sum_el sum_b v_b int N_a N_b N_i,
/// written into `out` (which must live on the mesh's pattern). The tensor is
/// never stored; W(v) w equals tensor_action(w, v).
void assemble_tensor_matrix(const Mesh& mesh, std::span<const double> v, double k, SparseMatrix& out);

/// T[w, v, .]_i = k sum_el sum_{a,b} w_a v_b int N_a N_b N_i.
std::vector<double> tensor_action(const Mesh& mesh, std::span<const double> w, std::span<const double> v,
                                  const PhysParams& params);

/// Weight c cos(theta) sqrt(1 - sigma k psi_t) at a boundary quadrature
/// point. Throws NumericalError(AbcDegeneracy) when the radicand is <= 0;
/// radicands in (0, 1e-14) evaluate to 0.
double abc_weight(double psi_t, double cos_theta, double sigma, const PhysParams& params);

/// A_i = int_{Gamma_abc} c sqrt(1 - sigma k psi_t) psi_t cos(theta) N_i dS.
/// Enters the residual with a plus sign (dissipative).
std::vector<double> assemble_abc_vector(const Mesh& mesh, std::span<const double> psi_dot, const AngleField& angles,
                                        double sigma, const PhysParams& params);

/// Boundary matrix B(v) with the square-root weight lagged at v:
/// B_ij = int c sqrt(1 - sigma k v) cos(theta) N_i N_j dS, so that
/// assemble_abc_vector(v) = B(v) v.
void assemble_abc_matrix(const Mesh& mesh, std::span<const double> psi_dot_lagged, const AngleField& angles,
                         double sigma, const PhysParams& params, SparseMatrix& out);

/// Nodal samples f(x_i, t).
std::vector<double> sample_nodal(const Mesh& mesh, const std::function<double(const Vec3&, double)>& f, double t);

/// Load vector int f N_i for the nodal interpolant of f: M f.
std::vector<double> assemble_source(const SparseMatrix& mass, std::span<const double> f_nodal);

/// Dirichlet (Gamma_exc) and interior node sets.
struct DofPartition {
    std::vector<std::int32_t> dirichlet;
    std::vector<std::int32_t> interior;
    std::vector<std::uint8_t> is_dirichlet;  // per node

    static DofPartition from_mesh(const Mesh& mesh);
};

/// Values of psi, psi_t, psi_tt on the Dirichlet nodes, ordered as
/// DofPartition::dirichlet.
struct DirichletValues {
    std::vector<double> psi;
    std::vector<double> psi_dot;
    std::vector<double> psi_ddot;
};

/// Interior load from the Dirichlet data:
/// F = -M_ID psi_tt,D - K_ID psi_D - C_ID psi_t,D + T_DDI[psi_tt,D, psi_t,D, .]
/// with K = c^2 L and C = b L, consistent with the residual
/// M a + K psi + C v - T[a, v] + A - f. Result ordered as DofPartition::interior.
std::vector<double> dirichlet_rhs(const Mesh& mesh, const SparseMatrix& mass, const SparseMatrix& laplacian,
                                  const PhysParams& params, const DirichletValues& values,
                                  const DofPartition& partition);

}  // namespace wabc
