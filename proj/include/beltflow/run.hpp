#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "beltflow/flux_solver.hpp"
#include "beltflow/probes.hpp"
#include "beltflow/scenario.hpp"

namespace beltflow {

/// Scenario with grid, mask, operators and initial density built.
struct PreparedScenario {
    Scenario scenario;
    ModelOperators ops;
    DensityField rho0;
    double mass_scale{0.0};
    double rho_max_raw{0.0};

    [[nodiscard]] const GridSpec& grid() const { return ops.mask.grid; }
};

[[nodiscard]] PreparedScenario prepare(const Scenario& scenario);

struct Snapshot {
    double time{0.0};
    DensityField rho;
};

struct RunDiagnostics {
    std::int64_t steps{0};
    double max_speed{0.0};
    double max_cfl{0.0};
    double max_density{0.0};
    double max_conservation_residual{0.0};  // relative, over all samples
    double initial_mass_kg{0.0};
    double final_domain_mass_kg{0.0};
    double exited_kg{0.0};
};

struct RunResult {
    MassFlowCurve outflow;
    std::vector<Snapshot> snapshots;
    RunDiagnostics diagnostics;
};

/// Called at every probe sample (including t = 0 and the final time).
using SampleObserver = std::function<void(const SimState&)>;

/// Integrates from 0 to the horizon, sampling the outflow at the probe
/// interval and capturing snapshots at the requested times.
[[nodiscard]] RunResult run(const PreparedScenario& prepared, const std::vector<double>& snapshot_times = {},
                            const SampleObserver& observer = {});

[[nodiscard]] inline RunResult run(const Scenario& scenario, const std::vector<double>& snapshot_times = {},
                                   const SampleObserver& observer = {}) {
    return run(prepare(scenario), snapshot_times, observer);
}

}  // namespace beltflow
