#include "wabc/integrator.hpp"

#include <cmath>
#include <sstream>

namespace wabc {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

SchemeParams SchemeParams::from_rho_inf(double rho_inf, double dt, std::size_t n_steps) {
    if (!(rho_inf >= 0.0 && rho_inf <= 1.0)) throw std::invalid_argument("rho_inf must lie in [0, 1]");
    SchemeParams p;
    p.rho_inf = rho_inf;
    p.alpha_m = (2.0 * rho_inf - 1.0) / (1.0 + rho_inf);
    p.alpha_f = rho_inf / (1.0 + rho_inf);
    p.beta = 1.0 / ((1.0 + rho_inf) * (1.0 + rho_inf));
    p.gamma = 0.5 * (3.0 - rho_inf) / (1.0 + rho_inf);
    p.dt = dt;
    p.n_steps = n_steps;
    return p;
}

std::pair<std::vector<double>, std::vector<double>> newmark_update(const State& s, std::span<const double> a_new,
                                                                   const SchemeParams& p) {
    const std::size_t n = s.psi.size();
    std::vector<double> psi(n);
    std::vector<double> vel(n);
    const double dt = p.dt;
    for (std::size_t i = 0; i < n; ++i) {
        psi[i] = s.psi[i] + dt * s.psi_dot[i] + dt * dt * ((0.5 - p.beta) * s.psi_ddot[i] + p.beta * a_new[i]);
        vel[i] = s.psi_dot[i] + dt * ((1.0 - p.gamma) * s.psi_ddot[i] + p.gamma * a_new[i]);
    }
    return {std::move(psi), std::move(vel)};
}

Integrator::Integrator(const Mesh& mesh, PhysParams phys, SchemeParams scheme, AbcSettings abc, Forcing forcing,
                       SolveOptions solve)
    : mesh_(&mesh),
      phys_(phys),
      scheme_(scheme),
      abc_(abc),
      forcing_(std::move(forcing)),
      solve_(solve),
      pattern_(std::make_shared<SparsityPattern>(mesh)),
      mass_(assemble_mass(mesh, pattern_)),
      laplacian_(assemble_laplacian(mesh, pattern_)),
      tensor_(pattern_),
      boundary_(pattern_),
      effective_(pattern_),
      partition_(DofPartition::from_mesh(mesh)) {
    if (!(scheme_.dt > 0.0)) throw std::invalid_argument("time step must be positive");
    has_abc_ = !mesh.facets_with_tag(BoundaryTag::Absorbing).empty();

    const auto rp = pattern_->row_ptr();
    const auto ci = pattern_->col_idx();
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
        for (auto k = rp[i]; k < rp[i + 1]; ++k) {
            const auto j = static_cast<std::size_t>(ci[static_cast<std::size_t>(k)]);
            if (i != j && (partition_.is_dirichlet[i] || partition_.is_dirichlet[j])) dirichlet_offdiag_slots_.push_back(k);
        }
}

State Integrator::initial_state() const {
    State s;
    const std::size_t n = mesh_->num_nodes();
    s.psi.assign(n, 0.0);
    s.psi_dot.assign(n, 0.0);
    s.psi_ddot.assign(n, 0.0);
    s.psi_prev.assign(n, 0.0);
    s.angles = AngleField::for_mesh(*mesh_, abc_.angles.adaptive ? 0.0 : abc_.angles.fixed_theta_deg);
    const auto tr = trace(0.0);
    for (auto i : partition_.dirichlet) {
        s.psi[static_cast<std::size_t>(i)] = tr.g;
        s.psi_dot[static_cast<std::size_t>(i)] = tr.dg;
        s.psi_ddot[static_cast<std::size_t>(i)] = tr.ddg;
    }
    return s;
}

DirichletTrace Integrator::trace(double t) const { return forcing_.dirichlet ? forcing_.dirichlet(t) : DirichletTrace{}; }

void Integrator::source_at(double t, std::vector<double>& f) const {
    f.assign(mesh_->num_nodes(), 0.0);
    if (!forcing_.source) return;
    std::vector<double> nodal(mesh_->num_nodes(), 0.0);
    forcing_.source(t, nodal);
    mass_.multiply(nodal, f);
}

void Integrator::eliminate_dirichlet(SparseMatrix& s) const {
    auto& v = s.values();
    for (auto k : dirichlet_offdiag_slots_) v[static_cast<std::size_t>(k)] = 0.0;
    for (auto i : partition_.dirichlet) v[static_cast<std::size_t>(pattern_->diagonal_slot(i))] = 1.0;
}

void Integrator::initialize_acceleration(State& state) const {
    const std::size_t n = mesh_->num_nodes();
    const double c2 = phys_.c() * phys_.c();
    const double k = phys_.k();

    SparseMatrix w(pattern_);
    assemble_tensor_matrix(*mesh_, state.psi_dot, k, w);
    SparseMatrix b(pattern_);
    if (has_abc_) assemble_abc_matrix(*mesh_, state.psi_dot, state.angles, abc_.sigma, phys_, b);

    std::vector<double> f;
    source_at(state.t, f);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = c2 * state.psi[i] + phys_.b() * state.psi_dot[i];
    const auto l_mix = laplacian_ * mix;
    const auto b_vel = b * state.psi_dot;

    const auto tr = trace(state.t);
    std::vector<double> acc_d(n, 0.0);
    for (auto i : partition_.dirichlet) acc_d[static_cast<std::size_t>(i)] = tr.ddg;
    const auto m_acc = mass_ * acc_d;
    const auto w_acc = w * acc_d;

    SparseMatrix s(pattern_);
    for (std::size_t q = 0; q < s.values().size(); ++q) s.values()[q] = mass_.values()[q] - w.values()[q];
    eliminate_dirichlet(s);
    std::vector<double> rhs(n, 0.0);
    for (auto i : partition_.interior) {
        const auto u = static_cast<std::size_t>(i);
        rhs[u] = f[u] - l_mix[u] - b_vel[u] - (m_acc[u] - w_acc[u]);
    }
    std::vector<double> x(n, 0.0);
    solve_spd(s, rhs, x, solve_);
    for (auto i : partition_.dirichlet) x[static_cast<std::size_t>(i)] = tr.ddg;
    state.psi_ddot = std::move(x);
}

StepStats Integrator::step(State& st) {
    const std::size_t n = mesh_->num_nodes();
    const SchemeParams& p = scheme_;
    const double dt = p.dt;
    const double t1 = st.t + dt;
    const double am = p.alpha_m;
    const double af = p.alpha_f;
    const double c2 = phys_.c() * phys_.c();
    const double bdiff = phys_.b();
    const double k = phys_.k();

    st.angles = update_angles(*mesh_, st.psi, st.psi_prev, st.angles, abc_.angles);

    const DirichletTrace tr1 = trace(t1);
    std::vector<double> f;
    source_at(t1 - af * dt, f);

    // Predictors, with the Dirichlet rows set to the exact trace at t_{n+1}.
    std::vector<double> pred_psi(n), pred_vel(n);
    for (std::size_t i = 0; i < n; ++i) {
        pred_psi[i] = st.psi[i] + dt * st.psi_dot[i] + dt * dt * (0.5 - p.beta) * st.psi_ddot[i];
        pred_vel[i] = st.psi_dot[i] + dt * (1.0 - p.gamma) * st.psi_ddot[i];
    }
    std::vector<double> acc_z(n, 0.0);
    std::vector<double> psi1_z = pred_psi;
    std::vector<double> vel1_z = pred_vel;
    for (auto i : partition_.dirichlet) {
        const auto u = static_cast<std::size_t>(i);
        acc_z[u] = tr1.ddg;
        psi1_z[u] = tr1.g;
        vel1_z[u] = tr1.dg;
    }

    // Parts of the residual at a_I = 0 that do not depend on the iterate.
    std::vector<double> acc_am(n), vel_afz(n), mix(n);
    for (std::size_t i = 0; i < n; ++i) {
        acc_am[i] = (1.0 - am) * acc_z[i] + am * st.psi_ddot[i];
        vel_afz[i] = (1.0 - af) * vel1_z[i] + af * st.psi_dot[i];
        const double psi_af = (1.0 - af) * psi1_z[i] + af * st.psi[i];
        mix[i] = c2 * psi_af + bdiff * vel_afz[i];
    }
    const auto m_acc = mass_ * acc_am;
    const auto l_mix = laplacian_ * mix;

    const double ck = (1.0 - af) * p.beta * dt * dt * c2;
    const double cd = (1.0 - af) * p.gamma * dt;
    const double cm = 1.0 - am;

    std::vector<double> a = st.psi_ddot;
    for (auto i : partition_.dirichlet) a[static_cast<std::size_t>(i)] = tr1.ddg;
    std::vector<double> vel_af(n), rhs(n), x(n), w_acc(n), b_vel(n);

    StepStats stats;
    bool boundary_ready = false;
    for (int kappa = 1;; ++kappa) {
        for (std::size_t i = 0; i < n; ++i) {
            const double vel1 = partition_.is_dirichlet[i] ? tr1.dg : pred_vel[i] + p.gamma * dt * a[i];
            vel_af[i] = (1.0 - af) * vel1 + af * st.psi_dot[i];
        }
        assemble_tensor_matrix(*mesh_, vel_af, k, tensor_);
        if (has_abc_ && (!boundary_ready || abc_.sigma != 0.0)) {
            assemble_abc_matrix(*mesh_, vel_af, st.angles, abc_.sigma, phys_, boundary_);
            boundary_ready = true;
        }

        auto& sv = effective_.values();
        const auto& mv = mass_.values();
        const auto& wv = tensor_.values();
        const auto& lv = laplacian_.values();
        const auto& bv = boundary_.values();
        for (std::size_t q = 0; q < sv.size(); ++q)
            sv[q] = cm * (mv[q] - wv[q]) + ck * lv[q] + cd * (bdiff * lv[q] + bv[q]);
        eliminate_dirichlet(effective_);

        tensor_.multiply(acc_am, w_acc);
        boundary_.multiply(vel_afz, b_vel);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = partition_.is_dirichlet[i] ? 0.0 : -(m_acc[i] - w_acc[i] + l_mix[i] + b_vel[i] - f[i]);

        for (std::size_t i = 0; i < n; ++i) x[i] = partition_.is_dirichlet[i] ? 0.0 : a[i];
        stats.linear_iterations += solve_spd(effective_, rhs, x, solve_).iterations;
        for (auto i : partition_.dirichlet) x[static_cast<std::size_t>(i)] = tr1.ddg;

        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff += (x[i] - a[i]) * (x[i] - a[i]);
        const double change = std::sqrt(diff) / std::max(norm2(x), 1e-30);
        a.swap(x);
        stats.fixed_point_iterations = kappa;
        if (change < p.tol) break;
        if (kappa >= p.kappa_max) {
            std::ostringstream msg;
            msg << "fixed-point divergence at step " << st.step + 1 << " (t = " << t1 << "): relative change " << change
                << " after " << kappa << " iterations";
            throw NumericalError(NumericalError::Kind::FixedPointDivergence, msg.str());
        }
    }

    auto [psi1, vel1] = newmark_update(st, a, p);
    for (auto i : partition_.dirichlet) {
        const auto u = static_cast<std::size_t>(i);
        psi1[u] = tr1.g;
        vel1[u] = tr1.dg;
    }
    st.psi_prev = std::move(st.psi);
    st.psi = std::move(psi1);
    st.psi_dot = std::move(vel1);
    st.psi_ddot = std::move(a);
    st.t = t1;
    ++st.step;
    return stats;
}

}  // namespace wabc
