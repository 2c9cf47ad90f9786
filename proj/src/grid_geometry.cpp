#include "beltflow/grid_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <string>

#include "beltflow/errors.hpp"

namespace beltflow {
namespace {

constexpr double kGeomTol = 1e-9;

double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Number of whole cells covering `extent`, forgiving representation error.
int cells_for(double extent, double step) {
    return static_cast<int>(std::ceil(extent / step - kGeomTol));
}

}  // namespace

Vec2 SceneGeometry::diverter_upstream_end() const {
    const double a = to_radians(diverter_angle_deg);
    const double sign = diverter_side == DiverterSide::lower ? -1.0 : 1.0;
    return {diverter_anchor.x - diverter_length * std::cos(a),
            diverter_anchor.y + sign * diverter_length * std::sin(a)};
}

double SceneGeometry::length_to_wall() const {
    const double a = to_radians(diverter_angle_deg);
    const double rise = diverter_side == DiverterSide::lower ? diverter_anchor.y : belt_width - diverter_anchor.y;
    return rise / std::sin(a);
}

SceneGeometry SceneGeometry::mirrored() const {
    SceneGeometry m = *this;
    m.diverter_anchor.y = belt_width - diverter_anchor.y;
    if (diverter_side == DiverterSide::upper) {
        m.diverter_side = DiverterSide::lower;
    } else if (diverter_side == DiverterSide::lower) {
        m.diverter_side = DiverterSide::upper;
    }
    return m;
}

void SceneGeometry::validate() const {
    if (!(belt_length > 0.0)) throw ValidationError("scene.belt_length must be positive");
    if (!(belt_width > 0.0)) throw ValidationError("scene.belt_width must be positive");
    if (!(downstream_length >= 0.0) || downstream_length >= belt_length) {
        throw ValidationError("scene.downstream_length must lie in [0, belt_length)");
    }
    if (!has_diverter()) return;
    if (!(diverter_angle_deg > 0.0 && diverter_angle_deg <= 90.0)) {
        throw ValidationError("scene.diverter_angle_deg must lie in (0, 90]");
    }
    if (!(diverter_length > 0.0)) throw ValidationError("scene.diverter_length must be positive");
    if (std::abs(diverter_anchor.x) > kGeomTol) {
        throw ValidationError("scene.diverter_anchor must lie on the reference line x = 0");
    }
    const Vec2 up = diverter_upstream_end();
    const double tol = kGeomTol * std::max(1.0, belt_width);
    auto inside = [&](Vec2 p) {
        return p.x >= upstream_x() - tol && p.x <= downstream_length + tol && p.y >= -tol &&
               p.y <= belt_width + tol;
    };
    if (!inside(diverter_anchor) || !inside(up)) {
        throw ValidationError("scene: diverter segment leaves the belt rectangle");
    }
}

int GridSpec::reference_face() const { return static_cast<int>(std::lround(-origin.x / dx)); }

GridSpec build_grid(const SceneGeometry& scene, double dx, double dy, double item_side) {
    if (!(dx > 0.0) || !(dy > 0.0)) throw ValidationError("grid: dx and dy must be positive");
    scene.validate();
    if (dx > item_side + kGeomTol || dy > item_side + kGeomTol) {
        throw ValidationError("grid: cell size " + std::to_string(std::max(dx, dy)) +
                              " m exceeds the item side " + std::to_string(item_side) + " m");
    }
    const int upstream = cells_for(-scene.upstream_x(), dx);
    const int downstream = std::max(1, cells_for(scene.downstream_length, dx));
    GridSpec g;
    g.dx = dx;
    g.dy = dy;
    g.nx = upstream + downstream;
    g.ny = cells_for(scene.belt_width, dy);
    g.origin = {-upstream * dx, 0.0};
    if (g.nx < 3 || g.ny < 3) throw ValidationError("grid: need at least 3x3 cells");
    return g;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const double ux = b.x - a.x;
    const double uy = b.y - a.y;
    const double len2 = ux * ux + uy * uy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((p.x - a.x) * ux + (p.y - a.y) * uy) / len2, 0.0, 1.0);
    }
    return norm({p.x - (a.x + t * ux), p.y - (a.y + t * uy)});
}

std::vector<std::pair<int, int>> rasterize_segment(const GridSpec& grid, Vec2 a, Vec2 b) {
    const double reach = 0.5 * std::hypot(grid.dx, grid.dy);
    const double tol = kGeomTol * reach;
    const double lo_x = std::min(a.x, b.x) - reach;
    const double hi_x = std::max(a.x, b.x) + reach;
    const double lo_y = std::min(a.y, b.y) - reach;
    const double hi_y = std::max(a.y, b.y) + reach;
    const int i0 = std::max(0, static_cast<int>(std::floor((lo_x - grid.origin.x) / grid.dx)));
    const int i1 = std::min(grid.nx - 1, static_cast<int>(std::floor((hi_x - grid.origin.x) / grid.dx)));
    const int j0 = std::max(0, static_cast<int>(std::floor((lo_y - grid.origin.y) / grid.dy)));
    const int j1 = std::min(grid.ny - 1, static_cast<int>(std::floor((hi_y - grid.origin.y) / grid.dy)));
    std::vector<std::pair<int, int>> out;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            if (distance_to_segment(grid.cell_center(i, j), a, b) <= reach + tol) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

bool is_connected_chain(const std::vector<std::pair<int, int>>& cells) {
    if (cells.empty()) return false;
    const std::set<std::pair<int, int>> all(cells.begin(), cells.end());
    std::set<std::pair<int, int>> seen{cells.front()};
    std::queue<std::pair<int, int>> frontier;
    frontier.push(cells.front());
    while (!frontier.empty()) {
        const auto [i, j] = frontier.front();
        frontier.pop();
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const std::pair<int, int> n{i + di, j + dj};
                if (all.contains(n) && seen.insert(n).second) frontier.push(n);
            }
        }
    }
    return seen.size() == all.size();
}

CellMask rasterize_mask(const SceneGeometry& scene, const GridSpec& grid) {
    scene.validate();
    CellMask mask{grid, Field2D<CellClass>(grid.nx, grid.ny, CellClass::fluid)};
    auto& c = mask.cells;

    for (int j = 0; j < grid.ny; ++j) {
        c(grid.nx - 1, j) = CellClass::outflow;
        c(0, j) = CellClass::solid;
    }
    for (int i = 0; i < grid.nx; ++i) {
        c(i, 0) = CellClass::solid;
        c(i, grid.ny - 1) = CellClass::solid;
    }

    if (scene.has_diverter()) {
        const auto chain = rasterize_segment(grid, scene.diverter_upstream_end(), scene.diverter_anchor);
        if (!is_connected_chain(chain)) {
            throw ValidationError("scene: diverter rasterization leaves a gap; refine the grid");
        }
        for (const auto& [i, j] : chain) c(i, j) = CellClass::solid;
    }

    // Close sealed single-cell pockets until none remain.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int j = 1; j + 1 < grid.ny; ++j) {
            for (int i = 1; i + 1 < grid.nx; ++i) {
                if (c(i, j) != CellClass::fluid) continue;
                const bool open = c(i - 1, j) != CellClass::solid || c(i + 1, j) != CellClass::solid ||
                                  c(i, j - 1) != CellClass::solid || c(i, j + 1) != CellClass::solid;
                if (!open) {
                    c(i, j) = CellClass::solid;
                    changed = true;
                }
            }
        }
    }
    return mask;
}

StaticVelocityField build_static_field(const CellMask& mask, double belt_speed) {
    if (!(belt_speed >= 0.0)) throw ValidationError("model.belt_speed must be non-negative");
    StaticVelocityField field(mask.grid.nx, mask.grid.ny);
    for (int j = 0; j < mask.grid.ny; ++j) {
        for (int i = 0; i < mask.grid.nx; ++i) {
            if (!mask.is_solid(i, j)) field(i, j) = {belt_speed, 0.0};
        }
    }
    return field;
}

}  // namespace beltflow
