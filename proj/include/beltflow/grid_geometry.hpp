#pragma once

#include <cstdint>
#include <vector>

#include "beltflow/field.hpp"

namespace beltflow {

/// Skirt board the diverter's upstream end leans toward; none gives a plain belt.
enum class DiverterSide { none, upper, lower };

/// Belt rectangle with one straight diverter plate.
///
/// World frame: transport along +x, the reference line x = 0 passes through
/// the diverter's downstream end, skirt boards are the lines y = 0 and
/// y = belt_width. The belt spans x in [downstream_length - belt_length,
/// downstream_length].
struct SceneGeometry {
    double belt_length{2.0};
    double belt_width{0.8};
    double downstream_length{0.2};
    DiverterSide diverter_side{DiverterSide::upper};
    double diverter_angle_deg{45.0};  // measured from the transport direction
    Vec2 diverter_anchor{0.0, 0.3};
    double diverter_length{0.70710678118654752};

    [[nodiscard]] bool has_diverter() const { return diverter_side != DiverterSide::none; }
    [[nodiscard]] double upstream_x() const { return downstream_length - belt_length; }
    [[nodiscard]] Vec2 diverter_upstream_end() const;

    /// Length from the anchor to the opposite skirt board along the plate.
    [[nodiscard]] double length_to_wall() const;

    /// Reflection across the belt centreline, y -> belt_width - y.
    [[nodiscard]] SceneGeometry mirrored() const;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

struct GridSpec {
    int nx{0};
    int ny{0};
    double dx{0.0};
    double dy{0.0};
    Vec2 origin;  // lower-left corner of cell (0, 0)

    [[nodiscard]] Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * dx, origin.y + (j + 0.5) * dy};
    }
    [[nodiscard]] double cell_area() const { return dx * dy; }

    /// Index of the x-face lying on x = 0 (face i is the left face of cell i).
    [[nodiscard]] int reference_face() const;
};

/// Grid covering the belt with x = 0 on a cell face. Rejects cells coarser
/// than the item side.
[[nodiscard]] GridSpec build_grid(const SceneGeometry& scene, double dx, double dy, double item_side);

enum class CellClass : std::uint8_t { fluid, solid, outflow };

struct CellMask {
    GridSpec grid;
    Field2D<CellClass> cells;

    [[nodiscard]] CellClass at(int i, int j) const { return cells(i, j); }
    [[nodiscard]] bool is_fluid(int i, int j) const { return cells(i, j) == CellClass::fluid; }
    [[nodiscard]] bool is_solid(int i, int j) const { return cells(i, j) == CellClass::solid; }
    [[nodiscard]] CellMask flipped_rows() const { return {grid, cells.flipped_rows()}; }

    friend bool operator==(const CellMask& a, const CellMask& b) { return a.cells == b.cells; }
};

[[nodiscard]] double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

/// Cells whose centre lies within half a cell diagonal of segment ab.
[[nodiscard]] std::vector<std::pair<int, int>> rasterize_segment(const GridSpec& grid, Vec2 a, Vec2 b);

/// True when the cells form one 8-connected chain (no through-flow gaps
/// for a face-flux scheme).
[[nodiscard]] bool is_connected_chain(const std::vector<std::pair<int, int>>& cells);

/// Classifies every cell. Skirt-board rows, the upstream column and the
/// diverter chain are SOLID, the downstream column is OUTFLOW. Fluid cells
/// with no open face-neighbour are closed off as SOLID.
[[nodiscard]] CellMask rasterize_mask(const SceneGeometry& scene, const GridSpec& grid);

using StaticVelocityField = VectorField;

/// (v_T, 0) on FLUID and OUTFLOW cells, zero on SOLID.
[[nodiscard]] StaticVelocityField build_static_field(const CellMask& mask, double belt_speed);

}  // namespace beltflow
