#include "wabc/scenario.hpp"

#include "wabc/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wabc {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("invalid value for '") + key + "'");
    }
}

const json& require_object(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_object()) throw ConfigError(std::string("missing section '") + key + "'");
    return j.at(key);
}

BoundaryTag tag_from(const std::string& name) {
    try {
        return boundary_tag_from_string(name);
    } catch (const std::exception&) {
        throw ConfigError("unknown boundary tag '" + name + "'");
    }
}

MeshSource parse_mesh(const json& j, const std::filesystem::path& base_dir) {
    MeshSource m;
    const auto type = get_or<std::string>(j, "type", "");
    if (type == "channel") {
        m.kind = MeshSource::Kind::Channel;
        auto& c = m.channel;
        c.width = get_or(j, "width", c.width);
        c.length = get_or(j, "length", c.length);
        c.tilt_deg = get_or(j, "tilt_deg", c.tilt_deg);
        c.h = get_or(j, "h", c.h);
        c.extra_rows = get_or(j, "extra_rows", 0);
        if (j.contains("extension")) c.extra_rows = channel_rows_for_extension(c, get_or(j, "extension", 0.0));
        c.bottom = tag_from(get_or<std::string>(j, "bottom", "excitation"));
        c.top = tag_from(get_or<std::string>(j, "top", "absorbing"));
        c.sides = tag_from(get_or<std::string>(j, "sides", "neumann"));
    } else if (type == "square") {
        m.kind = MeshSource::Kind::Square;
        auto& s = m.square;
        s.x0 = get_or(j, "x0", s.x0);
        s.y0 = get_or(j, "y0", s.y0);
        s.side = get_or(j, "side", s.side);
        s.cells = get_or(j, "cells", s.cells);
        s.pad = get_or(j, "pad", s.pad);
        s.boundary = tag_from(get_or<std::string>(j, "boundary", "absorbing"));
    } else if (type == "plate") {
        m.kind = MeshSource::Kind::Plate;
        auto& p = m.plate;
        p.a = get_or(j, "a", p.a);
        p.r = get_or(j, "r", p.r);
        p.rays = get_or(j, "rays", p.rays);
        p.radial = get_or(j, "radial", p.radial);
        p.extra_steps = get_or(j, "extra_steps", p.extra_steps);
    } else if (type == "msh") {
        m.kind = MeshSource::Kind::Msh;
        const auto path = get_or<std::string>(j, "path", "");
        if (path.empty()) throw ConfigError("msh mesh needs a 'path'");
        m.msh_path = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base_dir / path;
        if (j.contains("tags")) {
            if (!j.at("tags").is_object()) throw ConfigError("'tags' must map physical ids to boundary tags");
            m.tags.clear();
            for (const auto& [id, name] : j.at("tags").items()) {
                int pid = 0;
                try {
                    pid = std::stoi(id);
                } catch (const std::exception&) {
                    throw ConfigError("physical id '" + id + "' is not an integer");
                }
                if (!name.is_string()) throw ConfigError("boundary tag for physical id " + id + " must be a string");
                m.tags[pid] = tag_from(name.get<std::string>());
            }
        }
    } else {
        throw ConfigError("unknown mesh type '" + type + "'");
    }
    return m;
}

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
    return get_or(j, key, 0.0);
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");

    Scenario sc;
    sc.name = get_or<std::string>(j, "name", sc.name);
    sc.mesh = parse_mesh(require_object(j, "mesh"), base_dir);
    if (j.contains("reference") && !j.at("reference").is_null()) {
        const auto& r = j.at("reference");
        if (!r.is_object()) throw ConfigError("'reference' must be an object");
        sc.reference = parse_mesh(r, base_dir);
        sc.reference_abc.sigma = get_or(r, "sigma", sc.reference_abc.sigma);
    }

    if (j.contains("physics")) {
        const auto& p = require_object(j, "physics");
        const PhysParams w = PhysParams::water();
        try {
            sc.phys = PhysParams(get_or(p, "c", w.c()), get_or(p, "b", w.b()), get_or(p, "rho", w.rho()),
                                 get_or(p, "b_over_a", w.b_over_a()));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (get_or(p, "linear", false)) sc.phys = sc.phys.linearized();
    }

    const auto& ex = require_object(j, "excitation");
    const auto type = get_or<std::string>(ex, "type", "");
    if (type == "dirichlet") {
        sc.excitation.kind = ExcitationSpec::Kind::Dirichlet;
    } else if (type == "gaussian") {
        sc.excitation.kind = ExcitationSpec::Kind::Gaussian;
    } else if (type == "none") {
        sc.excitation.kind = ExcitationSpec::Kind::None;
    } else {
        throw ConfigError("unknown excitation type '" + type + "'");
    }
    sc.excitation.amplitude = get_or(ex, "amplitude", sc.excitation.amplitude);
    sc.excitation.frequency = get_or(ex, "frequency", sc.excitation.frequency);
    if (!(sc.excitation.frequency > 0.0)) throw ConfigError("excitation frequency must be positive");
    if (sc.excitation.kind == ExcitationSpec::Kind::Gaussian) {
        auto& g = sc.excitation.gaussian;
        g.amplitude = sc.excitation.amplitude;
        g.frequency = sc.excitation.frequency;
        g.sigma_x = get_or(ex, "sigma_x", g.sigma_x);
        g.sigma_y = get_or(ex, "sigma_y", g.sigma_y);
        g.centers = get_or(ex, "centers", std::vector<std::array<double, 2>>{});
        g.weights = get_or(ex, "weights", std::vector<double>{});
        if (g.centers.empty() || g.centers.size() != g.weights.size())
            throw ConfigError("gaussian source needs matching 'centers' and 'weights'");
        if (!(g.sigma_x > 0.0) || !(g.sigma_y > 0.0)) throw ConfigError("gaussian widths must be positive");
    }

    const auto& tm = require_object(j, "time");
    const double rho_inf = get_or(tm, "rho_inf", 0.5);
    if (!(rho_inf >= 0.0 && rho_inf <= 1.0)) throw ConfigError("rho_inf must lie in [0, 1]");
    double dt = 0.0;
    std::size_t n_steps = 0;
    if (tm.contains("dt")) {
        dt = number(tm, "dt");
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        n_steps = tm.contains("n_steps") ? get_or<std::size_t>(tm, "n_steps", 0)
                                         : static_cast<std::size_t>(std::llround(number(tm, "t_end") / dt));
    } else {
        const double spp = number(tm, "steps_per_period");
        const double t_end = number(tm, "t_end");
        if (!(spp > 0.0) || !(t_end >= 0.0)) throw ConfigError("steps_per_period and t_end must be positive");
        n_steps = static_cast<std::size_t>(std::ceil(t_end * sc.excitation.frequency * spp - 1e-9));
        dt = n_steps ? t_end / static_cast<double>(n_steps) : 1.0 / (sc.excitation.frequency * spp);
    }
    sc.scheme = SchemeParams::from_rho_inf(rho_inf, dt, n_steps);
    sc.scheme.tol = get_or(tm, "tol", sc.scheme.tol);
    sc.scheme.kappa_max = get_or(tm, "kappa_max", sc.scheme.kappa_max);
    if (!(sc.scheme.tol > 0.0) || sc.scheme.kappa_max < 1) throw ConfigError("tol and kappa_max must be positive");

    if (j.contains("abc")) {
        const auto& a = require_object(j, "abc");
        sc.abc.sigma = get_or(a, "sigma", sc.abc.sigma);
        sc.abc.angles.adaptive = get_or(a, "adaptive", sc.abc.angles.adaptive);
        sc.abc.angles.fixed_theta_deg = get_or(a, "fixed_theta_deg", sc.abc.angles.fixed_theta_deg);
        sc.abc.angles.p1 = get_or(a, "p1", sc.abc.angles.p1);
        sc.abc.angles.p2 = get_or(a, "p2", sc.abc.angles.p2);
    }
    const auto& ang = sc.abc.angles;
    if (!(ang.p1 >= 0.0 && ang.p1 <= 1.0) || !(ang.p2 >= 0.0 && ang.p2 <= 1.0))
        throw ConfigError("p1 and p2 must lie in [0, 1]");
    if (!(ang.fixed_theta_deg >= 0.0 && ang.fixed_theta_deg <= 90.0)) throw ConfigError("fixed_theta_deg must lie in [0, 90]");
    sc.abc.angles.reference_amplitude = sc.excitation.amplitude;
    sc.abc.angles.running_reference = sc.excitation.kind == ExcitationSpec::Kind::Gaussian;

    if (j.contains("solver")) {
        const auto& s = require_object(j, "solver");
        sc.solver.rel_tol = get_or(s, "rel_tol", sc.solver.rel_tol);
        if (!(sc.solver.rel_tol > 0.0)) throw ConfigError("solver rel_tol must be positive");
    }
    if (j.contains("output")) {
        const auto& o = require_object(j, "output");
        sc.snapshot_stride = get_or<std::size_t>(o, "snapshot_stride", 0);
        sc.angle_stride = get_or<std::size_t>(o, "angle_stride", 0);
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.parent_path());
}

Variant Variant::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("variant '" + text + "': expected sigma:adaptive or sigma:fixed[:deg]");
    Variant v;
    try {
        std::size_t used = 0;
        v.sigma = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("trailing");
        if (parts.size() == 3) {
            v.fixed_theta_deg = std::stod(parts[2], &used);
            if (used != parts[2].size()) throw std::invalid_argument("trailing");
        }
    } catch (const std::exception&) {
        throw ConfigError("variant '" + text + "': bad number");
    }
    if (v.sigma != 0.0 && v.sigma != 0.5 && v.sigma != 1.0) throw ConfigError("variant '" + text + "': sigma must be 0, 0.5 or 1");
    if (parts[1] == "adaptive" && parts.size() == 2) {
        v.adaptive = true;
    } else if (parts[1] == "fixed") {
        v.adaptive = false;
        if (!(v.fixed_theta_deg >= 0.0 && v.fixed_theta_deg <= 90.0)) throw ConfigError("variant '" + text + "': angle outside [0, 90]");
    } else {
        throw ConfigError("variant '" + text + "': expected 'adaptive' or 'fixed'");
    }
    return v;
}

std::string Variant::label() const {
    std::ostringstream s;
    s << "sigma" << sigma << '_';
    if (adaptive)
        s << "adaptive";
    else
        s << "fixed" << fixed_theta_deg;
    return s.str();
}

Mesh build_mesh(const MeshSource& src) {
    switch (src.kind) {
        case MeshSource::Kind::Channel: return generate_channel(src.channel);
        case MeshSource::Kind::Square: return generate_square(src.square);
        case MeshSource::Kind::Plate: return generate_plate_octant(src.plate);
        case MeshSource::Kind::Msh: return read_msh_file(src.msh_path.string(), src.tags);
    }
    throw ConfigError("unknown mesh kind");
}

Forcing make_forcing(const Scenario& sc, const Mesh& mesh) {
    Forcing f;
    const auto& ex = sc.excitation;
    if (ex.kind == ExcitationSpec::Kind::Dirichlet) {
        const double a = ex.amplitude;
        const double fr = ex.frequency;
        f.dirichlet = [a, fr](double t) { return excitation_signal(t, a, fr); };
    } else if (ex.kind == ExcitationSpec::Kind::Gaussian) {
        const GaussianSourceSpec g = ex.gaussian;
        const Mesh* m = &mesh;
        f.source = [g, m](double t, std::vector<double>& out) {
            for (std::size_t i = 0; i < m->num_nodes(); ++i) out[i] = gaussian_source(m->node(i)[0], m->node(i)[1], t, g);
        };
    }
    return f;
}

AbcSettings variant_abc(const Scenario& sc, const Variant& v) {
    AbcSettings a = sc.abc;
    a.sigma = v.sigma;
    a.angles.adaptive = v.adaptive;
    a.angles.fixed_theta_deg = v.fixed_theta_deg;
    return a;
}

ReferenceSolution compute_reference(const Scenario& sc, const Mesh& mesh) {
    if (!sc.reference) throw ConfigError("scenario has no reference domain");
    const Mesh ref_mesh = build_mesh(*sc.reference);
    const auto node_map = match_nodes(mesh, ref_mesh);

    Integrator integ(ref_mesh, sc.phys, sc.scheme, sc.reference_abc, make_forcing(sc, ref_mesh), sc.solver);
    State st = integ.initial_state();
    integ.initialize_acceleration(st);

    ReferenceSolution out;
    auto record = [&]() {
        out.t.push_back(st.t);
        out.psi.push_back(restrict_reference(st.psi, node_map));
        out.psi_dot.push_back(restrict_reference(st.psi_dot, node_map));
    };
    record();
    for (std::size_t n = 0; n < sc.scheme.n_steps; ++n) {
        integ.step(st);
        record();
    }

    const SparseMatrix mass = assemble_mass(mesh);
    const auto abc_nodes = mesh.nodes_with_tag(BoundaryTag::Absorbing);
    double peak = 0.0;
    std::vector<double> boundary_max(out.t.size(), 0.0);
    for (std::size_t s = 0; s < out.t.size(); ++s) {
        for (double v : out.psi[s]) peak = std::max(peak, std::abs(v));
        for (auto i : abc_nodes) boundary_max[s] = std::max(boundary_max[s], std::abs(out.psi[s][static_cast<std::size_t>(i)]));
        out.peak_norm_psi = std::max(out.peak_norm_psi, mass_norm(mass, out.psi[s]));
        out.peak_norm_u = std::max(out.peak_norm_u, sc.phys.rho() * mass_norm(mass, out.psi_dot[s]));
    }
    out.arrival_step = out.t.size() - 1;
    for (std::size_t s = 0; s < out.t.size(); ++s)
        if (peak > 0.0 && boundary_max[s] > sc.abc.angles.p1 * peak) {
            out.arrival_step = s;
            break;
        }
    return out;
}

RunResult run_variant(const Scenario& sc, const Mesh& mesh, const Variant& v, const ReferenceSolution* ref,
                      const StepObserver& observer) {
    if (ref && ref->t.size() != sc.scheme.n_steps + 1) throw std::invalid_argument("reference has a different step count");
    const auto t0 = std::chrono::steady_clock::now();
    Integrator integ(mesh, sc.phys, sc.scheme, variant_abc(sc, v), make_forcing(sc, mesh), sc.solver);
    const double rho = sc.phys.rho();
    State st = integ.initial_state();
    integ.initialize_acceleration(st);

    RunResult res;
    std::vector<double> diff(mesh.num_nodes());
    auto record = [&]() {
        ErrorRow row;
        row.step = st.step;
        row.t = st.t;
        row.energy = energy_diagnostic(st.psi, st.psi_dot, integ.mass(), integ.laplacian(), sc.phys);
        if (ref) {
            const auto& rp = ref->psi[st.step];
            const auto& rv = ref->psi_dot[st.step];
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = st.psi[i] - rp[i];
            row.abs_err_psi = mass_norm(integ.mass(), diff);
            row.ref_norm_psi = mass_norm(integ.mass(), rp);
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rho * (st.psi_dot[i] - rv[i]);
            row.abs_err_u = mass_norm(integ.mass(), diff);
            row.ref_norm_u = rho * mass_norm(integ.mass(), rv);
            if (row.ref_norm_psi >= 1e-12 * ref->peak_norm_psi && row.ref_norm_psi > 0.0)
                row.rel_err_psi = row.abs_err_psi / row.ref_norm_psi;
            if (row.ref_norm_u >= 1e-12 * ref->peak_norm_u && row.ref_norm_u > 0.0)
                row.rel_err_u = row.abs_err_u / row.ref_norm_u;
            res.max_rel_err_psi = std::max(res.max_rel_err_psi, row.rel_err_psi);
        }
        res.rows.push_back(row);
        if (observer) observer(st);
    };
    record();
    for (std::size_t n = 0; n < sc.scheme.n_steps; ++n) {
        try {
            const StepStats stats = integ.step(st);
            res.max_fixed_point_iterations = std::max(res.max_fixed_point_iterations, stats.fixed_point_iterations);
        } catch (const NumericalError& e) {
            const std::string what = e.what();
            if (what.find("at step") != std::string::npos) throw;
            throw NumericalError(e.kind(), what + " (at step " + std::to_string(n + 1) + ")");
        }
        record();
    }
    if (ref) {
        res.e_psi = aggregate_error(res.rows, false);
        res.e_u = aggregate_error(res.rows, true);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.final_state = std::move(st);
    return res;
}

double aggregate_error(const std::vector<ErrorRow>& rows, bool pressure) {
    ErrorSamples s;
    for (const auto& r : rows) {
        s.t.push_back(r.t);
        const double e = pressure ? r.abs_err_u : r.abs_err_psi;
        const double n = pressure ? r.ref_norm_u : r.ref_norm_psi;
        s.err_sq.push_back(e * e);
        s.ref_sq.push_back(n * n);
    }
    return space_time_error(s);
}

}  // namespace wabc
