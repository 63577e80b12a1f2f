#include "doctest.h"

#include "properties.hpp"

#include "wabc/excitation.hpp"
#include "wabc/generators.hpp"
#include "wabc/integrator.hpp"
#include "wabc/metrics.hpp"

#include <cmath>
#include <numbers>

using namespace wabc;

namespace {

constexpr double kPi = std::numbers::pi;

Forcing sine_forcing(double amplitude, double frequency) {
    Forcing f;
    f.dirichlet = [amplitude, frequency](double t) { return excitation_signal(t, amplitude, frequency); };
    return f;
}

AbcSettings fixed_abc(double sigma, double theta = 0.0) {
    AbcSettings a;
    a.sigma = sigma;
    a.angles.adaptive = false;
    a.angles.fixed_theta_deg = theta;
    return a;
}

Mesh small_channel() {
    ChannelSpec s;
    s.width = 0.003;
    s.length = 0.006;
    s.tilt_deg = 30.0;
    s.h = 5e-4;
    return generate_channel(s);
}

// Scalar generalized-alpha for psi'' = -w^2 psi up to t = 5/4 periods, where
// cos(wt) = 0 so the phase error shows up at first order.
double oscillator_error(double rho_inf, int n) {
    const double w = 2 * kPi;
    const SchemeParams p = SchemeParams::from_rho_inf(rho_inf, 1.25 / n, static_cast<std::size_t>(n));
    State s;
    s.psi = {1.0};
    s.psi_dot = {0.0};
    s.psi_ddot = {-w * w};
    for (int k = 0; k < n; ++k) {
        const double dt = p.dt;
        const double pred = s.psi[0] + dt * s.psi_dot[0] + dt * dt * (0.5 - p.beta) * s.psi_ddot[0];
        // (1-am) a + am a_n + w^2 ((1-af)(pred + beta dt^2 a) + af psi_n) = 0
        const double a = -(p.alpha_m * s.psi_ddot[0] + w * w * ((1 - p.alpha_f) * pred + p.alpha_f * s.psi[0])) /
                         ((1 - p.alpha_m) + w * w * (1 - p.alpha_f) * p.beta * dt * dt);
        const std::vector<double> an{a};
        auto [psi, vel] = newmark_update(s, an, p);
        s.psi = psi;
        s.psi_dot = vel;
        s.psi_ddot = an;
    }
    return std::abs(s.psi[0]);
}

}  // namespace

TEST_CASE("scheme parameters") {
    const auto r = props::scheme_table();
    INFO(r.detail);
    CHECK(r.ok);
    const auto one = SchemeParams::from_rho_inf(1.0);
    CHECK(one.alpha_m == 0.5);
    CHECK(one.alpha_f == 0.5);
    CHECK(one.beta == 0.25);
    CHECK(one.gamma == 0.5);
    const auto zero = SchemeParams::from_rho_inf(0.0);
    CHECK(zero.alpha_m == -1.0);
    CHECK(zero.alpha_f == 0.0);
    CHECK(zero.beta == 1.0);
    CHECK(zero.gamma == 1.5);
    CHECK(zero.tol == 1e-6);
    CHECK(zero.kappa_max == 100);
    CHECK_THROWS(SchemeParams::from_rho_inf(1.5));
}

TEST_CASE("newmark update") {
    SchemeParams p = SchemeParams::from_rho_inf(1.0, 0.1);
    State s;
    s.psi = {2.0};
    s.psi_dot = {3.0};
    s.psi_ddot = {0.0};
    auto [psi, vel] = newmark_update(s, std::vector<double>{0.0}, p);
    CHECK(psi[0] == doctest::Approx(2.3));
    CHECK(vel[0] == 3.0);

    const double a = 1.7;
    s.psi = {0.0};
    s.psi_dot = {0.0};
    s.psi_ddot = {a};
    const int n = 37;
    for (int k = 0; k < n; ++k) {
        auto [ps, vs] = newmark_update(s, std::vector<double>{a}, p);
        s.psi = ps;
        s.psi_dot = vs;
    }
    CHECK(s.psi_dot[0] == doctest::Approx(a * n * p.dt).epsilon(1e-13));
    CHECK(s.psi[0] == doctest::Approx(0.5 * a * (n * p.dt) * (n * p.dt)).epsilon(1e-13));
}

TEST_CASE("harmonic oscillator is second order") {
    const double e1 = oscillator_error(1.0, 64);
    const double e2 = oscillator_error(1.0, 128);
    const double e3 = oscillator_error(1.0, 256);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("temporal order on a linear problem") { CHECK(props::temporal_order(0.5) >= 1.9); }

TEST_CASE("energy is non-increasing without forcing") {
    CHECK(props::max_energy_increase(0.5) <= 1e-10);
    CHECK(props::closed_box_energy_drift() < 5e-3);
}

TEST_CASE("zero data stays zero") {
    const Mesh m = small_channel();
    const PhysParams phys = PhysParams(1500.0, 0.0, 1000.0, 5.0).linearized();
    Integrator integ(m, phys, SchemeParams::from_rho_inf(0.5, 1e-7, 10), fixed_abc(0.5), Forcing{});
    State s = integ.initial_state();
    integ.initialize_acceleration(s);
    for (int k = 0; k < 10; ++k) integ.step(s);
    for (std::size_t i = 0; i < m.num_nodes(); ++i) {
        CHECK(s.psi[i] == 0.0);
        CHECK(s.psi_dot[i] == 0.0);
        CHECK(s.psi_ddot[i] == 0.0);
    }
    CHECK(s.step == 10);
}

TEST_CASE("linear steps need at most two passes and keep the trace exact") {
    const Mesh m = small_channel();
    const double f = 210e3;
    Integrator integ(m, PhysParams::water().linearized(), SchemeParams::from_rho_inf(0.5, 1.0 / (48 * f)), fixed_abc(0.0),
                     sine_forcing(0.01, f));
    State s = integ.initial_state();
    for (int k = 0; k < 150; ++k) {
        const auto st = integ.step(s);
        CHECK(st.fixed_point_iterations <= 2);
        const double g = excitation_signal(s.t, 0.01, f).g;
        for (auto i : integ.partition().dirichlet) CHECK(s.psi[static_cast<std::size_t>(i)] == g);
    }
}

TEST_CASE("nonlinear steps stay within ten passes and are deterministic") {
    const Mesh m = small_channel();
    const double f = 210e3;
    auto run = [&] {
        AbcSettings abc;
        abc.sigma = 0.5;
        abc.angles.reference_amplitude = 0.01;
        Integrator integ(m, PhysParams::water(), SchemeParams::from_rho_inf(0.5, 1.0 / (48 * f)), abc, sine_forcing(0.01, f));
        State s = integ.initial_state();
        int worst = 0;
        for (int k = 0; k < 200; ++k) {
            worst = std::max(worst, integ.step(s).fixed_point_iterations);
            const double g = excitation_signal(s.t, 0.01, f).g;
            for (auto i : integ.partition().dirichlet) REQUIRE(s.psi[static_cast<std::size_t>(i)] == g);
        }
        CHECK(worst <= 10);
        return s;
    };
    const State a = run();
    const State b = run();
    CHECK(a.psi == b.psi);
    CHECK(a.psi_dot == b.psi_dot);
    CHECK(a.angles.theta == b.angles.theta);
}

TEST_CASE("fixed-point divergence is reported with the step") {
    const Mesh m = small_channel();
    const double f = 210e3;
    SchemeParams p = SchemeParams::from_rho_inf(0.5, 1.0 / (48 * f));
    p.kappa_max = 1;
    p.tol = 1e-300;
    Integrator integ(m, PhysParams::water(), p, fixed_abc(0.5), sine_forcing(0.01, f));
    State s = integ.initial_state();
    try {
        for (int k = 0; k < 5; ++k) integ.step(s);
        FAIL("expected divergence");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == NumericalError::Kind::FixedPointDivergence);
        CHECK(std::string(e.what()).find("fixed-point divergence at step 1") != std::string::npos);
    }
}

TEST_CASE("thin strip: a pulse leaves through the absorbing end") {
    ChannelSpec s;
    s.width = 5e-4;
    s.length = 0.01;
    s.h = 2.5e-4;
    const Mesh m = generate_channel(s);
    const double f = 210e3;
    const double w = 2 * kPi * f;
    const double a = 0.01;
    Forcing pulse;
    pulse.dirichlet = [=](double t) {
        if (t >= 1.0 / f) return DirichletTrace{};
        return DirichletTrace{a * std::sin(0.5 * w * t) * std::sin(0.5 * w * t), 0.5 * a * w * std::sin(w * t),
                              0.5 * a * w * w * std::cos(w * t)};
    };
    Integrator integ(m, PhysParams::water().linearized(), SchemeParams::from_rho_inf(0.5, 1.0 / (96 * f)), fixed_abc(0.0),
                     pulse);
    State st = integ.initial_state();
    double peak = 0.0;
    const double t_end = 1.0 / f + 2.0 * s.length / 1500.0;
    while (st.t < t_end) {
        integ.step(st);
        peak = std::max(peak, mass_norm(integ.mass(), st.psi));
    }
    const double residual = mass_norm(integ.mass(), st.psi);
    INFO("residual " << residual << " peak " << peak);
    CHECK(residual < 0.03 * peak);
}
