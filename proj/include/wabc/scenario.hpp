#pragma once

#include "wabc/excitation.hpp"
#include "wabc/generators.hpp"
#include "wabc/integrator.hpp"
#include "wabc/msh_io.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wabc {

/// Invalid or unreadable scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeshSource {
    enum class Kind { Channel, Square, Plate, Msh };
    Kind kind = Kind::Channel;
    ChannelSpec channel;
    SquareSpec square;
    PlateSpec plate;
    std::filesystem::path msh_path;
    PhysicalTagMap tags = default_physical_tags();
};

struct ExcitationSpec {
    enum class Kind { None, Dirichlet, Gaussian };
    Kind kind = Kind::Dirichlet;
    double amplitude = 0.01;
    double frequency = 210e3;
    GaussianSourceSpec gaussian;
};

/// One experiment: truncated domain, optional enlarged reference domain,
/// material, forcing, time grid and the absorbing-boundary settings.
struct Scenario {
    std::string name = "scenario";
    MeshSource mesh;
    std::optional<MeshSource> reference;
    /// Boundary treatment on the reference domain's outer absorbing edge.
    AbcSettings reference_abc{0.0, AngleConfig{0.1, 0.5, 0.0, false, false, 0.0}};
    PhysParams phys = PhysParams::water();
    ExcitationSpec excitation;
    SchemeParams scheme;
    AbcSettings abc;
    SolveOptions solver;
    std::size_t snapshot_stride = 0;  // 0: no VTK snapshots
    std::size_t angle_stride = 0;     // 0: final angle field only
};

/// Parses the JSON scenario format documented in README.md. Relative MSH
/// paths resolve against `base_dir`. Throws ConfigError.
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// An absorbing-boundary variant: sigma plus either adaptive angles or a
/// fixed angle. Text form "sigma:adaptive" or "sigma:fixed[:deg]".
struct Variant {
    double sigma = 0.5;
    bool adaptive = true;
    double fixed_theta_deg = 0.0;

    static Variant parse(const std::string& text);
    std::string label() const;
};

Mesh build_mesh(const MeshSource& src);

/// Dirichlet trace or volumetric source of the scenario.
Forcing make_forcing(const Scenario& sc, const Mesh& mesh);

/// Scenario abc settings with the variant's sigma and angle policy applied.
AbcSettings variant_abc(const Scenario& sc, const Variant& v);

/// Reference solution restricted to the truncated domain, one sample per step
/// (index 0 is t = 0).
struct ReferenceSolution {
    std::vector<double> t;
    std::vector<std::vector<double>> psi;
    std::vector<std::vector<double>> psi_dot;
    /// First step at which |psi_ref| on the absorbing boundary exceeds
    /// p1 times its overall peak; steps if never.
    std::size_t arrival_step = 0;
    double peak_norm_psi = 0.0;
    double peak_norm_u = 0.0;
};

ReferenceSolution compute_reference(const Scenario& sc, const Mesh& mesh);

struct ErrorRow {
    std::size_t step = 0;
    double t = 0.0;
    double rel_err_psi = 0.0;
    double rel_err_u = 0.0;
    double energy = 0.0;
    double abs_err_psi = 0.0;
    double ref_norm_psi = 0.0;
    double abs_err_u = 0.0;
    double ref_norm_u = 0.0;
};

struct RunResult {
    std::vector<ErrorRow> rows;
    double e_psi = 0.0;
    double e_u = 0.0;
    double max_rel_err_psi = 0.0;
    int max_fixed_point_iterations = 0;
    double seconds = 0.0;
    State final_state;
};

/// Per-step observer (called for step 0 and after every step).
using StepObserver = std::function<void(const State&)>;

/// Runs one variant from zero initial data. With a reference, rows carry the
/// per-step relative L2 errors (reported as 0 while the reference norm is
/// below 1e-12 of its peak); without one, only the energy column is filled.
RunResult run_variant(const Scenario& sc, const Mesh& mesh, const Variant& v, const ReferenceSolution* ref,
                      const StepObserver& observer = {});

/// e from the per-row absolute errors and reference norms (trapezoid in t).
double aggregate_error(const std::vector<ErrorRow>& rows, bool pressure);

}  // namespace wabc
