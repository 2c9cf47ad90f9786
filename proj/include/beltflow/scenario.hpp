#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beltflow/field.hpp"
#include "beltflow/flux_solver.hpp"
#include "beltflow/grid_geometry.hpp"

namespace beltflow {

struct ItemSpec {
    double length{0.07};
    double width{0.07};
    double height{0.02};
    double mass{0.0491};

    void validate() const;
};

struct ModelParams {
    double belt_speed{0.13};
    double eps_factor{5.5};
    double sigma{10000.0};
    double h{50.0};

    /// Interaction strength eps = eps_factor * v_T [m/s].
    [[nodiscard]] double eps() const { return eps_factor * belt_speed; }
    void validate() const;
};

/// Item centre; the angle is read but items rasterise axis-aligned.
struct Placement {
    Vec2 center;
    double angle_deg{0.0};
};

/// Jittered-lattice scatter of `count` items over a rectangular region.
struct ScatterSpec {
    int count{0};
    double x_min{0.0};
    double x_max{0.0};
    double y_min{0.0};
    double y_max{0.0};
    double pitch{0.09};
    double jitter{0.008};
    std::uint64_t seed{1};
};

struct Scenario {
    SceneGeometry scene;
    ItemSpec item;
    ModelParams model;
    SolverConfig solver;
    std::vector<Placement> placements;  // listed explicitly
    std::optional<ScatterSpec> scatter;  // generated in addition to the explicit list
    std::vector<std::string> warnings;

    /// Explicit placements followed by the scattered ones.
    [[nodiscard]] std::vector<Placement> all_placements() const;
    [[nodiscard]] int item_count() const { return static_cast<int>(all_placements().size()); }
    [[nodiscard]] double total_mass() const { return item_count() * item.mass; }
    void validate() const;
};

/// Physical maximum density w / l^2; the solver works in units of it.
[[nodiscard]] double compute_rho_max(const ItemSpec& spec);

[[nodiscard]] std::vector<Placement> scatter_items(const ScatterSpec& spec, const ItemSpec& item);

/// Exact covered-area fraction of every item footprint per cell.
/// Throws ValidationError naming the item on overlap with a wall or a neighbour.
[[nodiscard]] DensityField rasterize_initial_density(const std::vector<Placement>& placements, const ItemSpec& spec,
                                                     const CellMask& mask);

/// kg per unit of normalised mass, N m_item / (sum(rho0) dx dy); 0 when N == 0.
[[nodiscard]] double compute_mass_scale(const DensityField& rho0, int item_count, const ItemSpec& spec,
                                        const GridSpec& grid);

/// Parses the sectioned key = value scenario format. `source` labels errors.
[[nodiscard]] Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");

[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// 45 or 60 degree belt with 100 scattered wooden items at the default parameters.
[[nodiscard]] Scenario reference_scenario(double diverter_angle_deg, std::uint64_t seed = 1);

}  // namespace beltflow
