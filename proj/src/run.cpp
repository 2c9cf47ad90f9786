#include "beltflow/run.hpp"

#include <algorithm>
#include <cmath>

#include "beltflow/errors.hpp"

namespace beltflow {

PreparedScenario prepare(const Scenario& scenario) {
    scenario.validate();
    const SolverConfig& cfg = scenario.solver;
    PreparedScenario p;
    p.scenario = scenario;
    const GridSpec grid = build_grid(scenario.scene, cfg.dx, cfg.dy,
                                     std::min(scenario.item.length, scenario.item.width));
    p.ops.mask = rasterize_mask(scenario.scene, grid);
    p.ops.static_field = build_static_field(p.ops.mask, scenario.model.belt_speed);
    const int radius = cfg.kernel_radius > 0 ? cfg.kernel_radius
                                             : default_kernel_radius(scenario.model.sigma, grid.dx, grid.dy);
    p.ops.kernel = build_discrete_kernel(scenario.model.sigma, grid.dx, grid.dy, radius);
    p.ops.heaviside = HeavisideParams{scenario.model.h, 1.0};
    p.ops.heaviside.validate();
    p.ops.eps = scenario.model.eps();

    const std::vector<Placement> placements = scenario.all_placements();
    p.rho0 = rasterize_initial_density(placements, scenario.item, p.ops.mask);
    p.mass_scale = compute_mass_scale(p.rho0, static_cast<int>(placements.size()), scenario.item, grid);
    p.rho_max_raw = compute_rho_max(scenario.item);
    return p;
}

RunResult run(const PreparedScenario& prepared, const std::vector<double>& snapshot_times,
              const SampleObserver& observer) {
    const SolverConfig& cfg = prepared.scenario.solver;
    cfg.validate();
    const auto steps = static_cast<std::int64_t>(std::llround(cfg.horizon / cfg.dt));
    if (steps <= 0) throw ValidationError("solver.horizon shorter than one time step");
    const auto sample_every = std::max<std::int64_t>(1, std::llround(cfg.probe_interval / cfg.dt));

    std::vector<std::pair<std::int64_t, double>> snap_steps;
    for (double t : snapshot_times) {
        if (t < 0.0 || t > cfg.horizon + 1e-9) {
            throw ValidationError("snapshot time " + std::to_string(t) + " s lies outside [0, horizon]");
        }
        snap_steps.emplace_back(std::llround(t / cfg.dt), t);
    }
    std::sort(snap_steps.begin(), snap_steps.end());

    FluxSolver solver(prepared.ops, cfg);
    const GridSpec& grid = solver.grid();
    SimState state;
    state.rho = prepared.rho0;
    const double initial = state.domain_mass(grid);

    RunResult result;
    RunDiagnostics& diag = result.diagnostics;
    diag.initial_mass_kg = prepared.mass_scale * initial;
    diag.max_density = *std::max_element(state.rho.data().begin(), state.rho.data().end());

    std::size_t next_snap = 0;
    auto take_snapshots = [&] {
        while (next_snap < snap_steps.size() && snap_steps[next_snap].first == state.step) {
            result.snapshots.push_back({snap_steps[next_snap].second, state.rho});
            ++next_snap;
        }
    };
    auto sample = [&] {
        const auto [t, m] = sample_outflow(state, prepared.mass_scale);
        result.outflow.push(t, m);
        if (initial > 0.0) {
            const double residual = std::abs(state.domain_mass(grid) + state.exited - initial) / initial;
            diag.max_conservation_residual = std::max(diag.max_conservation_residual, residual);
        }
        if (observer) observer(state);
    };

    take_snapshots();
    sample();
    while (state.step < steps) {
        const StepReport report = solver.step(state);
        diag.max_speed = std::max(diag.max_speed, report.max_speed);
        diag.max_cfl = std::max(diag.max_cfl, report.cfl);
        diag.max_density = std::max(diag.max_density, report.max_density);
        take_snapshots();
        if (state.step % sample_every == 0 || state.step == steps) sample();
    }
    diag.steps = state.step;
    diag.final_domain_mass_kg = prepared.mass_scale * state.domain_mass(grid);
    diag.exited_kg = prepared.mass_scale * state.exited;
    return result;
}

}  // namespace beltflow
