#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beltflow/commands.hpp"

int main(int argc, char** argv) {
    using namespace beltflow;

    CLI::App app{"Continuum simulation of bulk cargo on a conveyor belt with a diverter"};
    app.require_subcommand(1);

    RunManifest manifest;
    manifest.threads = threads_from_env();
    std::optional<std::uint64_t> seed;
    std::optional<double> dx;
    std::optional<double> dt;

    auto add_scenario_flags = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", manifest.scenario, "Scenario file")->required();
        cmd->add_option("--out", manifest.out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--seed", seed, "Seed for scattered placements");
        cmd->add_option("--dx", dx, "Cell size override for both axes [m]")->check(CLI::PositiveNumber);
        cmd->add_option("--dt", dt, "Time step override [s]")->check(CLI::PositiveNumber);
    };

    CLI::App* run = app.add_subcommand("run", "Simulate one scenario");
    add_scenario_flags(run);
    run->add_option("--snapshots", manifest.snapshot_times, "Snapshot times [s]")->delimiter(',');

    CLI::App* sweep = app.add_subcommand("sweep", "Calibrate eps against a reference curve");
    add_scenario_flags(sweep);
    sweep->add_option("--eps-factors", manifest.eps_factors, "eps / v_T values")->delimiter(',')->required();
    sweep->add_option("--ref", manifest.ref, "Reference CSV (t_s,mass_kg)")->required();

    std::string sim_csv;
    std::string ref_csv;
    CLI::App* compare = app.add_subcommand("compare", "Error norms between two outflow curves");
    compare->add_option("sim", sim_csv, "Simulated outflow CSV")->required();
    compare->add_option("--ref", ref_csv, "Reference CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    manifest.seed = seed;
    manifest.dx = dx;
    manifest.dt = dt;

    if (run->parsed()) return cmd_run(manifest, std::cout, std::cerr);
    if (sweep->parsed()) return cmd_sweep(manifest, std::cout, std::cerr);
    return cmd_compare(sim_csv, ref_csv, std::cout, std::cerr);
}
