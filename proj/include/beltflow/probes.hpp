#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "beltflow/field.hpp"
#include "beltflow/flux_solver.hpp"
#include "beltflow/grid_geometry.hpp"

namespace beltflow {

/// Accumulated mass past the reference line over time.
struct MassFlowCurve {
    std::vector<double> t;     // [s], strictly increasing
    std::vector<double> mass;  // [kg]

    void push(double time, double m) {
        t.push_back(time);
        mass.push_back(m);
    }
    [[nodiscard]] std::size_t size() const { return t.size(); }
    [[nodiscard]] bool empty() const { return t.empty(); }
    [[nodiscard]] double final_mass() const { return mass.empty() ? 0.0 : mass.back(); }

    /// Throws ValidationError if times are not strictly increasing, mass is
    /// negative, decreasing by more than `tolerance`, or above total + 1e-9.
    void validate(double total_mass, double tolerance = 0.0) const;

    friend bool operator==(const MassFlowCurve&, const MassFlowCurve&) = default;
};

struct ErrorReport {
    double eps_factor{0.0};
    double eps{0.0};
    double l2{0.0};
    double linf{0.0};
    bool ok{true};
    std::string failure;
};

/// (t, M) with M = mass_scale * net normalised mass across x = 0.
[[nodiscard]] inline std::pair<double, double> sample_outflow(const SimState& state, double mass_scale) {
    return {state.time, mass_scale * state.passed_reference};
}

/// Linear interpolation of `curve` at time `t`; exact at sample times,
/// clamped to the end values outside the sampled span.
[[nodiscard]] double interpolate(const MassFlowCurve& curve, double t);

/// Trapezoid quadrature weights of a time grid; they sum to t.back() - t.front().
[[nodiscard]] std::vector<double> trapezoid_weights(const std::vector<double>& t);

/// Reference samples inside sim's time span, paired with the interpolated
/// simulation values. Throws ValidationError when fewer than two remain.
struct AlignedCurves {
    std::vector<double> t;
    std::vector<double> sim;
    std::vector<double> ref;
};
[[nodiscard]] AlignedCurves align_to_reference(const MassFlowCurve& sim, const MassFlowCurve& ref);

/// sqrt(sum_k (M_sim(t_k) - M_ref(t_k))^2 w_k) over the reference grid.
[[nodiscard]] double l2_error(const MassFlowCurve& sim, const MassFlowCurve& ref);

/// max_k |M_sim(t_k) - M_ref(t_k)| over the reference grid.
[[nodiscard]] double linf_error(const MassFlowCurve& sim, const MassFlowCurve& ref);

/// Largest pointwise gap between two curves, evaluated on the union of their
/// sample times inside the common span.
[[nodiscard]] double max_curve_gap(const MassFlowCurve& a, const MassFlowCurve& b);

/// Linear density-to-ink map: 0 for empty, 255 for rho >= 1, round half up.
[[nodiscard]] std::uint8_t density_to_ink(double rho);

/// Writes `<stem>.csv` (dense matrix, header row of x centres, leading
/// column of y centres) and `<stem>.pgm` (binary P5, top row = largest y,
/// empty cells white, full cells black).
void export_snapshot(const DensityField& rho, const GridSpec& grid, const std::filesystem::path& stem);

/// Flat indices of FLUID cells on the incoming side of the diverter whose
/// centre lies within `width` metres of the plate.
[[nodiscard]] std::vector<std::size_t> upstream_band(const SceneGeometry& scene, const CellMask& mask, double width);

[[nodiscard]] double band_max_density(const DensityField& rho, const std::vector<std::size_t>& band);

}  // namespace beltflow
