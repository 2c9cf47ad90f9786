#pragma once

#include <optional>
#include <vector>

#include "beltflow/probes.hpp"
#include "beltflow/scenario.hpp"

namespace beltflow {

struct SweepResult {
    std::vector<ErrorReport> reports;  // ascending eps_factor
    std::optional<std::size_t> argmin;  // smallest L2 among successful runs, ties to smaller eps
};

/// One full run per factor (eps = factor * v_T), each scored against `ref`.
/// A failing run is marked and the sweep continues. Runs execute on up to
/// `threads` workers; results do not depend on the thread count.
[[nodiscard]] SweepResult epsilon_sweep(const Scenario& scenario, std::vector<double> eps_factors,
                                        const MassFlowCurve& ref, unsigned threads = 1);

}  // namespace beltflow
