#include "beltflow/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <string>

#include <json.hpp>

#include "beltflow/csv_io.hpp"
#include "beltflow/errors.hpp"
#include "beltflow/run.hpp"
#include "beltflow/scenario.hpp"
#include "beltflow/sweep.hpp"

namespace beltflow {
namespace {

Scenario load_with_overrides(const RunManifest& m) {
    Scenario sc = load_scenario(m.scenario);
    if (m.seed) {
        if (!sc.scatter) throw ValidationError("--seed given but the scenario has no scatter placements");
        sc.scatter->seed = *m.seed;
    }
    if (m.dx) {
        sc.solver.dx = *m.dx;
        sc.solver.dy = *m.dx;
    }
    if (m.dt) sc.solver.dt = *m.dt;
    sc.validate();
    return sc;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

std::string snapshot_stem(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%g", t);
    return buf;
}

nlohmann::ordered_json echo_parameters(const Scenario& sc) {
    nlohmann::ordered_json j;
    const char* side = sc.scene.diverter_side == DiverterSide::upper   ? "upper"
                       : sc.scene.diverter_side == DiverterSide::lower ? "lower"
                                                                       : "none";
    j["scene"] = {{"belt_length", sc.scene.belt_length},
                  {"belt_width", sc.scene.belt_width},
                  {"downstream_length", sc.scene.downstream_length},
                  {"diverter", side},
                  {"diverter_angle_deg", sc.scene.diverter_angle_deg},
                  {"diverter_anchor_y", sc.scene.diverter_anchor.y},
                  {"diverter_length", sc.scene.diverter_length}};
    j["items"] = {{"length", sc.item.length},
                  {"width", sc.item.width},
                  {"height", sc.item.height},
                  {"mass", sc.item.mass},
                  {"count", sc.item_count()}};
    j["model"] = {{"belt_speed", sc.model.belt_speed},
                  {"eps_factor", sc.model.eps_factor},
                  {"eps_mps", sc.model.eps()},
                  {"sigma", sc.model.sigma},
                  {"h", sc.model.h}};
    j["solver"] = {{"dx", sc.solver.dx},
                   {"dy", sc.solver.dy},
                   {"dt", sc.solver.dt},
                   {"horizon", sc.solver.horizon},
                   {"cfl_max", sc.solver.cfl_max},
                   {"probe_interval", sc.solver.probe_interval},
                   {"kernel_radius", sc.solver.kernel_radius},
                   {"reassemble_between_sweeps", sc.solver.reassemble_between_sweeps}};
    return j;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
}

}  // namespace

unsigned threads_from_env() {
    const char* v = std::getenv("BELTFLOW_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    return (end && *end == '\0' && n > 0) ? static_cast<unsigned>(n) : 1;
}

int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_with_overrides(manifest);
        for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
        ensure_dir(manifest.out_dir);

        const auto start = std::chrono::steady_clock::now();
        const PreparedScenario prepared = prepare(sc);
        const RunResult result = run(prepared, manifest.snapshot_times);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        write_curve_csv(result.outflow, manifest.out_dir / "outflow.csv");
        for (const auto& snap : result.snapshots) {
            export_snapshot(snap.rho, prepared.grid(), manifest.out_dir / snapshot_stem(snap.time));
        }

        const RunDiagnostics& d = result.diagnostics;
        nlohmann::ordered_json summary;
        summary["parameters"] = echo_parameters(sc);
        summary["grid"] = {{"nx", prepared.grid().nx},
                           {"ny", prepared.grid().ny},
                           {"origin_x", prepared.grid().origin.x},
                           {"kernel_radius", prepared.ops.kernel.radius}};
        summary["rho_max_raw"] = prepared.rho_max_raw;
        summary["mass_scale_kg"] = prepared.mass_scale;
        summary["steps"] = d.steps;
        summary["cfl_max"] = d.max_cfl;
        summary["max_speed_mps"] = d.max_speed;
        summary["max_density"] = d.max_density;
        summary["mass_conservation_residual"] = d.max_conservation_residual;
        summary["initial_mass_kg"] = d.initial_mass_kg;
        summary["final_outflow_kg"] = result.outflow.final_mass();
        summary["final_domain_mass_kg"] = d.final_domain_mass_kg;
        summary["exited_kg"] = d.exited_kg;
        summary["warnings"] = sc.warnings;
        write_text_file(manifest.out_dir / "summary.json", summary.dump(2) + "\n");
        write_text_file(manifest.out_dir / "timing.json",
                        nlohmann::ordered_json{{"wall_clock_s", wall}}.dump(2) + "\n");

        out << "outflow " << format_number(result.outflow.final_mass()) << " kg of "
            << format_number(d.initial_mass_kg) << " kg after " << d.steps << " steps; cfl_max "
            << format_number(d.max_cfl) << "; residual " << format_number(d.max_conservation_residual)
            << "; wall " << wall << " s\n";
        return static_cast<int>(exit_ok);
    });
}

int cmd_sweep(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (manifest.eps_factors.empty()) throw ValidationError("--eps-factors needs at least one value");
        const Scenario sc = load_with_overrides(manifest);
        for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
        const MassFlowCurve ref = read_curve_csv(manifest.ref);
        ensure_dir(manifest.out_dir);

        const SweepResult sweep = epsilon_sweep(sc, manifest.eps_factors, ref, manifest.threads);
        write_sweep_csv(sweep.reports, manifest.out_dir / "sweep.csv");
        for (const auto& r : sweep.reports) {
            if (!r.ok) err << "run eps_factor=" << format_number(r.eps_factor) << " failed: " << r.failure << '\n';
        }
        if (!sweep.argmin) {
            err << "error: every run in the sweep failed\n";
            return static_cast<int>(exit_numerical);
        }
        const ErrorReport& best = sweep.reports[*sweep.argmin];
        out << "argmin eps_factor=" << format_number(best.eps_factor) << " eps_mps=" << format_number(best.eps)
            << " l2_kg=" << format_number(best.l2) << " linf_kg=" << format_number(best.linf) << '\n';
        return static_cast<int>(exit_ok);
    });
}

int cmd_compare(const std::filesystem::path& sim, const std::filesystem::path& ref, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        const MassFlowCurve s = read_curve_csv(sim);
        const MassFlowCurve r = read_curve_csv(ref);
        const double l2 = l2_error(s, r);
        const double linf = linf_error(s, r);
        out << "l2_kg " << format_number(l2) << '\n'
            << "linf_kg " << format_number(linf) << '\n'
            << "final_mass_diff_kg " << format_number(s.final_mass() - r.final_mass()) << '\n';
        return static_cast<int>(exit_ok);
    });
}

}  // namespace beltflow
