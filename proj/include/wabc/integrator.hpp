#pragma once

#include "wabc/angles.hpp"
#include "wabc/assembly.hpp"
#include "wabc/linear_solver.hpp"
#include "wabc/mesh.hpp"
#include "wabc/physics.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace wabc {

/// Generalized-alpha / Newmark constants, all derived from rho_inf:
///   alpha_m = (2 rho - 1)/(1 + rho),  alpha_f = rho/(1 + rho),
///   beta = 1/(1 + rho)^2,             gamma = (3 - rho)/(2 (1 + rho)).
/// Inertia terms are evaluated at t_{n+1-alpha_m}, stiffness, damping,
/// boundary and source terms at t_{n+1-alpha_f}.
struct SchemeParams {
    double rho_inf = 0.5;
    double alpha_m = 0.0;
    double alpha_f = 1.0 / 3.0;
    double beta = 4.0 / 9.0;
    double gamma = 5.0 / 6.0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    double tol = 1e-6;
    int kappa_max = 100;

    static SchemeParams from_rho_inf(double rho_inf, double dt = 0.0, std::size_t n_steps = 0);
};

struct State {
    std::vector<double> psi;
    std::vector<double> psi_dot;
    std::vector<double> psi_ddot;
    std::vector<double> psi_prev;  // psi one step earlier (angle gradients)
    double t = 0.0;
    std::size_t step = 0;
    AngleField angles;
};

/// psi_{n+1} = psi_n + dt psi'_n + dt^2 [(1/2 - beta) psi''_n + beta a]
/// psi'_{n+1} = psi'_n + dt [(1 - gamma) psi''_n + gamma a]
std::pair<std::vector<double>, std::vector<double>> newmark_update(const State& state, std::span<const double> a_new,
                                                                   const SchemeParams& scheme);

/// Excitation trace g and its time derivatives, uniform over Gamma_exc.
struct DirichletTrace {
    double g = 0.0;
    double dg = 0.0;
    double ddg = 0.0;
};

struct Forcing {
    std::function<DirichletTrace(double)> dirichlet;  // empty: homogeneous
    /// Nodal samples of the volumetric source at time t; empty: no source.
    std::function<void(double, std::vector<double>&)> source;
};

/// Absorbing-boundary family: sigma in {0, 1/2, 1} plus the angle policy.
struct AbcSettings {
    double sigma = 0.5;
    AngleConfig angles;
};

struct StepStats {
    int fixed_point_iterations = 0;
    std::size_t linear_iterations = 0;
};

/// Generalized-alpha integrator for
///   M a + c^2 L psi + b L v - T[a, v] + A(v, theta) = f,
/// with the Dirichlet trace imposed strongly on Gamma_exc.
///
/// Each step updates the angle field once, then iterates: with the lagged
/// velocity v^k at the alpha_f level, it assembles W(v^k) and the boundary
/// matrix B(v^k) (square-root weight lagged, psi_t implicit), solves the
/// effective symmetric system
///   (1-am)(M - W) + (1-af) beta dt^2 c^2 L + (1-af) gamma dt (b L + B)
/// for the new interior acceleration, and stops once the relative change of
/// the acceleration drops below tol.
class Integrator {
public:
    Integrator(const Mesh& mesh, PhysParams phys, SchemeParams scheme, AbcSettings abc, Forcing forcing,
               SolveOptions solve = {});

    /// Zero fields at t = 0 with a fresh angle field.
    State initial_state() const;

    /// Overwrites state.psi_ddot with the acceleration consistent with psi,
    /// psi_dot and the forcing at state.t.
    void initialize_acceleration(State& state) const;

    /// Advances `state` by one step. Throws NumericalError on fixed-point
    /// divergence, ABC degeneracy or solver breakdown.
    StepStats step(State& state);

    const Mesh& mesh() const { return *mesh_; }
    const PhysParams& phys() const { return phys_; }
    const SchemeParams& scheme() const { return scheme_; }
    const AbcSettings& abc() const { return abc_; }
    const SparseMatrix& mass() const { return mass_; }
    const SparseMatrix& laplacian() const { return laplacian_; }
    const DofPartition& partition() const { return partition_; }

private:
    void eliminate_dirichlet(SparseMatrix& s) const;
    DirichletTrace trace(double t) const;
    void source_at(double t, std::vector<double>& f) const;

    const Mesh* mesh_;
    PhysParams phys_;
    SchemeParams scheme_;
    AbcSettings abc_;
    Forcing forcing_;
    SolveOptions solve_;

    std::shared_ptr<const SparsityPattern> pattern_;
    SparseMatrix mass_;
    SparseMatrix laplacian_;
    SparseMatrix tensor_;
    SparseMatrix boundary_;
    SparseMatrix effective_;
    DofPartition partition_;
    std::vector<std::int32_t> dirichlet_offdiag_slots_;
    bool has_abc_ = false;
};

}  // namespace wabc
