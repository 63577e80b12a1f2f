#include "wabc/angles.hpp"
#include "wabc/assembly.hpp"
#include "wabc/errors.hpp"
#include "wabc/metrics.hpp"
#include "wabc/output.hpp"
#include "wabc/scenario.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <optional>
#include <sstream>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace wabc;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Options {
    std::string scenario;
    std::string out = "out";
    std::vector<std::string> variants;
    int threads = 0;
    long snapshot_stride = -1;
    std::vector<std::string> csvs;
};

int thread_count(const Options& o) {
    if (o.threads > 0) return o.threads;
    if (const char* env = std::getenv("WABC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::vector<Variant> variants_of(const Options& o, const Scenario& sc) {
    std::vector<Variant> v;
    for (const auto& text : o.variants) v.push_back(Variant::parse(text));
    if (v.empty()) v.push_back(Variant{sc.abc.sigma, sc.abc.angles.adaptive, sc.abc.angles.fixed_theta_deg});
    return v;
}

void write_file(const fs::path& path, const std::string& content) {
    // Write beside the target and rename so readers never see partial files.
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

struct VariantSummary {
    Variant variant;
    double e_psi = 0.0;
    double e_u = 0.0;
    double max_rel = 0.0;
    int max_kappa = 0;
    double seconds = 0.0;
};

VariantSummary run_one(const Scenario& sc, const Mesh& mesh, const Variant& v, const ReferenceSolution* ref,
                       const fs::path& dir, std::size_t snapshot_stride) {
    fs::create_directories(dir);
    std::ostringstream angles;
    write_angle_csv_header(angles);
    const auto observer = [&](const State& st) {
        if (sc.angle_stride > 0 && st.step % sc.angle_stride == 0) write_angle_csv(angles, mesh, st.angles, static_cast<long>(st.step));
        if (snapshot_stride > 0 && st.step % snapshot_stride == 0) {
            std::ostringstream vtk;
            write_vtk(vtk, mesh, st.psi, pressure_field(st.psi_dot, sc.phys.rho()), sc.name);
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%06zu.vtk", st.step);
            write_file(dir / name, vtk.str());
        }
    };
    RunResult r = run_variant(sc, mesh, v, ref, observer);
    if (sc.angle_stride == 0) write_angle_csv(angles, mesh, r.final_state.angles, static_cast<long>(r.final_state.step));
    std::ostringstream csv;
    write_error_csv(csv, r.rows);
    write_file(dir / "errors.csv", csv.str());
    write_file(dir / "angles.csv", angles.str());
    return {v, r.e_psi, r.e_u, r.max_rel_err_psi, r.max_fixed_point_iterations, r.seconds};
}

int cmd_run(const Options& o, bool angles_only) {
    const Scenario sc = load_scenario(o.scenario);
    const Mesh mesh = build_mesh(sc.mesh);
    const auto variants = variants_of(o, sc);
    const std::size_t stride = o.snapshot_stride >= 0 ? static_cast<std::size_t>(o.snapshot_stride) : sc.snapshot_stride;

    std::optional<ReferenceSolution> ref;
    if (sc.reference && !angles_only) {
        std::cerr << "reference run on the enlarged domain\n";
        ref = compute_reference(sc, mesh);
    }
    const fs::path out(o.out);
    fs::create_directories(out);

    std::vector<VariantSummary> summaries(variants.size());
    std::vector<std::string> failures(variants.size());
    std::vector<int> codes(variants.size(), 0);
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t i = next++; i < variants.size(); i = next++) {
            try {
                summaries[i] = run_one(sc, mesh, variants[i], ref ? &*ref : nullptr, out / variants[i].label(),
                                       angles_only ? 0 : stride);
            } catch (const NumericalError& e) {
                failures[i] = e.what();
                codes[i] = kNumericalError;
            }
        }
    };
    const int nthreads = std::min<int>(thread_count(o), static_cast<int>(variants.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = 0;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        if (codes[i]) {
            std::cerr << "error: " << variants[i].label() << ": " << failures[i] << '\n';
            code = codes[i];
            continue;
        }
        const auto& s = summaries[i];
        std::cout << s.variant.label();
        if (ref) std::cout << " e_psi=" << format_double(s.e_psi) << " e_u=" << format_double(s.e_u)
                           << " max_rel_err_psi=" << format_double(s.max_rel);
        std::cout << " max_fixed_point_iterations=" << s.max_kappa << " seconds=" << s.seconds << '\n';
    }
    return code;
}

int cmd_compare(const Options& o) {
    if (o.csvs.size() != 2) throw std::invalid_argument("compare needs a baseline and a new error CSV");
    std::vector<std::vector<ErrorRow>> runs;
    for (const auto& p : o.csvs) {
        std::ifstream in(p);
        if (!in) throw std::invalid_argument("cannot read " + p);
        runs.push_back(read_error_csv(in));
    }
    const auto& a = runs[0];
    const auto& b = runs[1];
    if (a.size() != b.size()) throw std::invalid_argument("misaligned grids: different step counts");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].step != b[i].step || std::abs(a[i].t - b[i].t) > 1e-12 * std::max(1.0, std::abs(a[i].t)))
            throw std::invalid_argument("misaligned grids at row " + std::to_string(i + 1));
    const double ep[2] = {aggregate_error(a, false), aggregate_error(b, false)};
    const double eu[2] = {aggregate_error(a, true), aggregate_error(b, true)};
    for (int k = 0; k < 2; ++k)
        std::cout << o.csvs[static_cast<std::size_t>(k)] << ": e_psi=" << format_double(ep[k]) << " e_u=" << format_double(eu[k]) << '\n';
    auto pct = [](double base, double now) { return base > 0.0 ? 100.0 * improvement(base, now) : 0.0; };
    std::printf("improvement_psi=%.2f%%\nimprovement_u=%.2f%%\n", pct(ep[0], ep[1]), pct(eu[0], eu[1]));
    return 0;
}

int cmd_mesh_info(const Options& o) {
    const Scenario sc = load_scenario(o.scenario);
    auto report = [](const char* what, const Mesh& m) {
        double vol = 0.0;
        for (std::size_t e = 0; e < m.num_elements(); ++e) vol += element_measure(m, e);
        std::cout << what << ": dim=" << m.dim() << " nodes=" << m.num_nodes() << " elements=" << m.num_elements()
                  << " facets=" << m.num_facets() << " measure=" << format_double(vol) << '\n';
        for (auto tag : {BoundaryTag::Excitation, BoundaryTag::Absorbing, BoundaryTag::Neumann})
            std::cout << "  " << to_string(tag) << ": facets=" << m.facets_with_tag(tag).size()
                      << " nodes=" << m.nodes_with_tag(tag).size() << '\n';
    };
    const Mesh mesh = build_mesh(sc.mesh);
    report("mesh", mesh);
    if (sc.reference) {
        const Mesh ref = build_mesh(*sc.reference);
        report("reference", ref);
        match_nodes(mesh, ref);
        std::cout << "reference contains every mesh node\n";
    }
    std::cout << "dt=" << format_double(sc.scheme.dt) << " steps=" << sc.scheme.n_steps << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Westervelt FEM solver with self-adaptive absorbing boundaries"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* c) {
        c->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
        c->add_option("--out", o.out, "Output directory");
        c->add_option("--variant", o.variants, "sigma:adaptive or sigma:fixed[:deg] (repeatable)");
        c->add_option("--threads", o.threads, "Variants run concurrently (also WABC_THREADS)");
    };
    auto* run = app.add_subcommand("run", "Run a scenario: reference, variants, error CSVs");
    add_common(run);
    run->add_option("--snapshot-stride", o.snapshot_stride, "Write a VTK snapshot every N steps (0: none)");
    auto* angles = app.add_subcommand("angles", "Run variants and dump the angle field");
    add_common(angles);
    auto* compare = app.add_subcommand("compare", "Compare two error CSVs (baseline first)");
    compare->add_option("csv", o.csvs, "baseline.csv new.csv")->required()->expected(2);
    auto* info = app.add_subcommand("mesh-info", "Print mesh statistics");
    info->add_option("--scenario", o.scenario, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) return cmd_run(o, false);
        if (*angles) return cmd_run(o, true);
        if (*compare) return cmd_compare(o);
        if (*info) return cmd_mesh_info(o);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return 0;
}
