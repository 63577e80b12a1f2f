#include "doctest.h"

#include "properties.hpp"

#include "wabc/assembly.hpp"
#include "wabc/excitation.hpp"
#include "wabc/generators.hpp"
#include "wabc/metrics.hpp"
#include "wabc/output.hpp"
#include "wabc/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace wabc;

namespace {

constexpr double kPi = std::numbers::pi;
const std::filesystem::path kFixtures = WABC_FIXTURES;

Mesh unit_square() {
    SquareSpec s;
    s.side = 1.0;
    s.cells = 1;
    return generate_square(s);
}

}  // namespace

TEST_CASE("excitation signal") {
    const double a = 0.01, f = 210e3, w = 2 * kPi * f;
    CHECK(excitation_signal(0.0, a, f).g == 0.0);
    CHECK(props::excitation_continuity_error() < 1e-14);
    const double t = 3.3 / f;
    CHECK(excitation_signal(t, a, f).g == doctest::Approx(a * std::sin(w * t)).epsilon(1e-15));
    // Derivatives against central differences inside the ramp.
    const double tr = 0.7 / f, d = 1e-12;
    const auto x = excitation_signal(tr, a, f);
    CHECK(x.dg == doctest::Approx((excitation_signal(tr + d, a, f).g - excitation_signal(tr - d, a, f).g) / (2 * d)).epsilon(1e-5));
    CHECK(x.ddg == doctest::Approx((excitation_signal(tr + d, a, f).dg - excitation_signal(tr - d, a, f).dg) / (2 * d)).epsilon(1e-5));
}

TEST_CASE("gaussian source") {
    GaussianSourceSpec g;
    g.amplitude = 2.0;
    g.frequency = 1.0;
    g.centers = {{0.0, 0.0}, {1.0, 0.0}};
    g.weights = {1.0, -2.0 / 3.0};
    CHECK(gaussian_source(0.3, 0.1, 0.5, g) == doctest::Approx(0.0).epsilon(1e-12));
    const double t = 0.2;
    const double s = g.amplitude * std::sin(2 * kPi * t);
    CHECK(gaussian_source(0.0, 0.0, t, g) == doctest::Approx(s).epsilon(1e-12));
    CHECK(gaussian_source(1.0, 0.0, t, g) == doctest::Approx(-2.0 / 3.0 * s).epsilon(1e-12));
}

TEST_CASE("pressure field") {
    CHECK(pressure_field(std::vector<double>{0.0, 0.0}, 1000.0) == std::vector<double>{0.0, 0.0});
    CHECK(pressure_field(std::vector<double>{0.01}, 1000.0)[0] == doctest::Approx(10.0));
    CHECK(pressure_field(std::vector<double>{0.03}, 2000.0)[0] == doctest::Approx(60.0));
}

TEST_CASE("restriction") {
    const Mesh m = generate_channel(0.003, 0.004, 20.0, 5e-4);
    std::vector<double> v(m.num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * static_cast<double>(i);
    CHECK(restrict_reference(v, m, m) == v);

    std::vector<Vec3> nodes = m.nodes();
    nodes[5][0] += 1e-9;
    std::vector<Mesh::Element> els;
    for (std::size_t e = 0; e < m.num_elements(); ++e) els.push_back({m.element(e)[0], m.element(e)[1], m.element(e)[2], -1});
    const Mesh moved(2, nodes, els, {});
    try {
        match_nodes(moved, m);
        FAIL("expected a mismatch");
    } catch (const MeshError& e) {
        CHECK(std::string(e.what()).find("node mismatch") != std::string::npos);
    }
}

TEST_CASE("relative L2 error") {
    const Mesh sq = unit_square();
    const SparseMatrix mass = assemble_mass(sq);
    std::vector<double> b(sq.num_nodes(), 1.0), two(sq.num_nodes(), 2.0), x(sq.num_nodes());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = sq.node(i)[0];
    CHECK(relative_l2_error(b, b, mass).value == 0.0);
    CHECK(relative_l2_error(two, b, mass).value == doctest::Approx(1.0));
    // int (x - 1)^2 over the unit square = 1/3
    CHECK(relative_l2_error(x, b, mass).value == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    const auto zero_ref = relative_l2_error(b, std::vector<double>(sq.num_nodes(), 0.0), mass);
    CHECK(zero_ref.absolute);
    CHECK(zero_ref.value == doctest::Approx(1.0));
    // sign flip of both fields
    std::vector<double> nx(x.size()), nb(b.size(), -1.0);
    for (std::size_t i = 0; i < x.size(); ++i) nx[i] = -x[i];
    CHECK(relative_l2_error(nx, nb, mass).value == relative_l2_error(x, b, mass).value);
}

TEST_CASE("space-time error") {
    ErrorSamples s{{0.0, 1.0, 3.0}, {0.0, 1.0, 4.0}, {1.0, 1.0, 1.0}};
    CHECK(space_time_error(s) == doctest::Approx(std::sqrt(5.5 / 3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(space_time_error(ErrorSamples{{0.0, 1.0}, {0.0}, {1.0, 1.0}}), std::invalid_argument);

    const Mesh sq = unit_square();
    const SparseMatrix mass = assemble_mass(sq);
    std::vector<double> t{0.0, 0.5, 1.0};
    std::vector<std::vector<double>> ref, scaled, vref, vscaled;
    const double eps = 0.03;
    for (std::size_t k = 0; k < t.size(); ++k) {
        std::vector<double> p(sq.num_nodes()), v(sq.num_nodes());
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = std::sin(static_cast<double>(i + k) + 0.3);
            v[i] = std::cos(static_cast<double>(2 * i + k));
        }
        ref.push_back(p);
        vref.push_back(v);
        for (auto& x : p) x *= 1 + eps;
        for (auto& x : v) x *= 1 + eps;
        scaled.push_back(p);
        vscaled.push_back(v);
    }
    const auto same = space_time_error(t, ref, ref, vref, vref, mass, 1000.0);
    CHECK(same.e_psi == 0.0);
    CHECK(same.e_u == 0.0);
    const auto e = space_time_error(t, scaled, ref, vscaled, vref, mass, 1000.0);
    CHECK(e.e_psi == doctest::Approx(eps).epsilon(1e-12));
    CHECK(e.e_u == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("energy diagnostic") {
    SquareSpec s;
    s.side = 1.0;
    s.cells = 3;
    const Mesh m = generate_square(s);
    const SparseMatrix mass = assemble_mass(m);
    const SparseMatrix lap = assemble_laplacian(m);
    const std::size_t n = m.num_nodes();
    const PhysParams water = PhysParams::water();
    CHECK(energy_diagnostic(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), mass, lap, water) == 0.0);
    CHECK(std::abs(energy_diagnostic(std::vector<double>(n, 4.0), std::vector<double>(n, 0.0), mass, lap, water)) < 1e-12);

    std::vector<double> psi(n), vel(n);
    for (std::size_t i = 0; i < n; ++i) {
        psi[i] = m.node(i)[0] * m.node(i)[1];
        vel[i] = 300.0 * m.node(i)[0];
    }
    const auto lin = water.linearized();
    const double c2 = lin.c() * lin.c();
    const auto mv = mass * vel;
    const auto lp = lap * psi;
    double want = 0.0;
    for (std::size_t i = 0; i < n; ++i) want += 0.5 * (vel[i] * mv[i] / c2 + psi[i] * lp[i]);
    CHECK(energy_diagnostic(psi, vel, mass, lap, lin) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("improvement") {
    CHECK(improvement(0.05, 0.02) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(improvement(0.05, 0.05) == 0.0);
    CHECK_THROWS_AS(improvement(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("variants") {
    const Variant a = Variant::parse("0.5:adaptive");
    CHECK(a.sigma == 0.5);
    CHECK(a.adaptive);
    CHECK(a.label() == "sigma0.5_adaptive");
    const Variant b = Variant::parse("0:fixed:50");
    CHECK(!b.adaptive);
    CHECK(b.fixed_theta_deg == 50.0);
    CHECK(b.label() == "sigma0_fixed50");
    CHECK(Variant::parse("1:fixed").fixed_theta_deg == 0.0);
    CHECK_THROWS_AS(Variant::parse("0.3:adaptive"), ConfigError);
    CHECK_THROWS_AS(Variant::parse("0.5:sideways"), ConfigError);
}

TEST_CASE("scenario parsing") {
    for (const char* name : {"channel20.json", "channel50.json", "plate.json", "multisource.json"}) {
        const Scenario sc = load_scenario(kFixtures / "scenarios" / name);
        CHECK(sc.reference.has_value());
        CHECK(sc.scheme.dt > 0.0);
        CHECK(sc.scheme.n_steps > 0);
    }
    const Scenario ch = load_scenario(kFixtures / "scenarios" / "channel50.json");
    CHECK(ch.scheme.alpha_f == doctest::Approx(1.0 / 3.0));
    CHECK(ch.scheme.n_steps == 953);
    CHECK(ch.abc.angles.reference_amplitude == 0.01);
    const Scenario ms = load_scenario(kFixtures / "scenarios" / "multisource.json");
    CHECK(ms.abc.angles.running_reference);

    CHECK_THROWS_AS(load_scenario(kFixtures / "scenarios" / "missing.json"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("{"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"mesh": {"type": "torus"}, "excitation": {"type": "none"}, "time": {"dt": 1, "n_steps": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"mesh": {"type": "channel"}, "excitation": {"type": "none"}, "time": {"rho_inf": 2, "dt": 1, "n_steps": 1}})"),
                    ConfigError);
}

TEST_CASE("tiny scenario end to end") {
    const Scenario sc = load_scenario(kFixtures / "scenarios" / "tiny.json");
    const Mesh mesh = build_mesh(sc.mesh);
    const ReferenceSolution ref = compute_reference(sc, mesh);
    CHECK(ref.psi.size() == sc.scheme.n_steps + 1);
    const RunResult adaptive = run_variant(sc, mesh, Variant::parse("0.5:adaptive"), &ref);
    const RunResult fixed = run_variant(sc, mesh, Variant::parse("0.5:fixed:30"), &ref);
    CHECK(adaptive.rows.size() == sc.scheme.n_steps + 1);
    CHECK(adaptive.e_psi > 0.0);
    CHECK(adaptive.e_psi < 0.5);
    CHECK(fixed.e_psi < 0.5);
    CHECK(adaptive.max_fixed_point_iterations <= 10);
    CHECK(aggregate_error(adaptive.rows, false) == doctest::Approx(adaptive.e_psi).epsilon(1e-6));

    Scenario none = sc;
    none.scheme.n_steps = 0;
    const RunResult empty = run_variant(none, mesh, Variant::parse("0.5:adaptive"), nullptr);
    CHECK(empty.rows.size() == 1);
    CHECK(empty.final_state.step == 0);
}

TEST_CASE("silent scenario gives zero errors") {
    const Scenario sc = load_scenario(kFixtures / "scenarios" / "silent.json");
    const Mesh mesh = build_mesh(sc.mesh);
    const ReferenceSolution ref = compute_reference(sc, mesh);
    const RunResult r = run_variant(sc, mesh, Variant::parse("0.5:adaptive"), &ref);
    for (const auto& row : r.rows) {
        CHECK(row.rel_err_psi == 0.0);
        CHECK(row.rel_err_u == 0.0);
        CHECK(row.energy == 0.0);
    }
}

TEST_CASE("error csv round trip") {
    std::vector<ErrorRow> rows{{0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {1, 1.0 / 3.0, 0.1, 0.2, 1e-20, 0.3, 0.4, 0.5, 0.6}};
    std::stringstream s;
    write_error_csv(s, rows);
    CHECK(s.str().rfind("step,t,rel_err_psi,rel_err_u,energy", 0) == 0);
    const auto back = read_error_csv(s);
    REQUIRE(back.size() == 2);
    CHECK(back[1].t == rows[1].t);
    CHECK(back[1].energy == rows[1].energy);
    std::stringstream empty;
    CHECK_THROWS(read_error_csv(empty));
    std::stringstream bad("a,b\n");
    CHECK_THROWS(read_error_csv(bad));
}

TEST_CASE("vtk snapshot") {
    const Mesh m = generate_channel(0.001, 0.001, 0.0, 5e-4);
    std::vector<double> z(m.num_nodes(), 0.0);
    std::ostringstream out;
    write_vtk(out, m, z, z);
    const std::string s = out.str();
    CHECK(s.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(s.find("SCALARS psi") != std::string::npos);
    CHECK(s.find("SCALARS u") != std::string::npos);
}
