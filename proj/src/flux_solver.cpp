#include "beltflow/flux_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "beltflow/errors.hpp"

namespace beltflow {

void SolverConfig::validate() const {
    if (!(dx > 0.0) || !(dy > 0.0)) throw ValidationError("solver.dx and solver.dy must be positive");
    if (!(dt > 0.0)) throw ValidationError("solver.dt must be positive");
    if (!(horizon > 0.0)) throw ValidationError("solver.horizon must be positive");
    if (!(cfl_max > 0.0 && cfl_max <= 1.0)) throw ValidationError("solver.cfl_max must lie in (0, 1]");
    if (!(probe_interval > 0.0)) throw ValidationError("solver.probe_interval must be positive");
    if (kernel_radius < 0) throw ValidationError("solver.kernel_radius must be non-negative");
}

double symmetric_row_sum(const std::vector<double>& rows) {
    const std::size_t n = rows.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n / 2; ++j) sum += rows[j] + rows[n - 1 - j];
    if (n % 2 == 1) sum += rows[n / 2];
    return sum;
}

double SimState::domain_mass(const GridSpec& grid) const {
    std::vector<double> rows(static_cast<std::size_t>(rho.ny()), 0.0);
    for (int j = 0; j < rho.ny(); ++j) {
        double acc = 0.0;
        for (int i = 0; i < rho.nx(); ++i) acc += rho(i, j);
        rows[static_cast<std::size_t>(j)] = acc;
    }
    return symmetric_row_sum(rows) * grid.cell_area();
}

VectorField assemble_velocity(const DensityField& rho, const ModelOperators& ops) {
    const CellMask& mask = ops.mask;
    VectorField u = smoothed_gradient(rho, ops.kernel, mask.grid);
    for (int j = 0; j < u.ny(); ++j) {
        for (int i = 0; i < u.nx(); ++i) {
            Vec2& cell = u(i, j);
            switch (mask.at(i, j)) {
                case CellClass::solid:
                    cell = {0.0, 0.0};
                    break;
                case CellClass::outflow:
                    cell = ops.static_field(i, j);
                    break;
                case CellClass::fluid: {
                    const Vec2 dyn = collision_from_gradient(cell, ops.eps);
                    const double act = heaviside(rho(i, j), ops.heaviside);
                    const Vec2 stat = ops.static_field(i, j);
                    cell = {stat.x + act * dyn.x, stat.y + act * dyn.y};
                    break;
                }
            }
        }
    }
    return u;
}

double face_flux(CellClass left, CellClass right, double rho_left, double rho_right, double u_face) {
    if (left == CellClass::fluid && right == CellClass::fluid) return face_flux(rho_left, rho_right, u_face);
    if (left == CellClass::fluid && right == CellClass::outflow) return u_face > 0.0 ? u_face * rho_left : 0.0;
    return 0.0;
}

FaceVelocities assemble_face_velocities(const DensityField& rho, const ModelOperators& ops, bool x_faces,
                                        bool y_faces) {
    FaceWorkspace ws;
    FaceVelocities out;
    assemble_face_velocities(rho, ops, ws, out, x_faces, y_faces);
    return out;
}

void assemble_face_velocities(const DensityField& rho, const ModelOperators& ops, FaceWorkspace& ws,
                              FaceVelocities& out, bool x_faces, bool y_faces) {
    const CellMask& mask = ops.mask;
    const GridSpec& g = mask.grid;
    const auto& cells = mask.cells;
    smooth_into(rho, ops.kernel, ws.scratch, ws.smoothed);
    gradient_into(ws.smoothed, g, ws.central);
    const ScalarField& s = ws.smoothed;
    const VectorField& central = ws.central;
    if (ws.activation.nx() != g.nx || ws.activation.ny() != g.ny) ws.activation = ScalarField(g.nx, g.ny);
    ScalarField& act = ws.activation;
    for (std::size_t k = 0; k < act.size(); ++k) act.data()[k] = heaviside(rho.data()[k], ops.heaviside);

    if (out.x.nx() != g.nx + 1 || out.x.ny() != g.ny) out.x = Field2D<double>(g.nx + 1, g.ny, 0.0);
    if (out.y.nx() != g.nx || out.y.ny() != g.ny + 1) out.y = Field2D<double>(g.nx, g.ny + 1, 0.0);
    if (x_faces) std::fill(out.x.data().begin(), out.x.data().end(), 0.0);
    if (y_faces) std::fill(out.y.data().begin(), out.y.data().end(), 0.0);
    out.max_speed = 0.0;
    out.worst_i = 0;
    out.worst_j = 0;
    auto track = [&](Vec2 u, int i, int j) {
        const double speed = norm(u);
        if (speed > out.max_speed) {
            out.max_speed = speed;
            out.worst_i = i;
            out.worst_j = j;
        }
    };

    if (x_faces) {
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 1; i < g.nx; ++i) {
                const CellClass l = cells(i - 1, j);
                const CellClass r = cells(i, j);
                if (l != CellClass::fluid || r == CellClass::solid) continue;
                const Vec2 grad{(s(i, j) - s(i - 1, j)) / g.dx, 0.5 * (central(i - 1, j).y + central(i, j).y)};
                const Vec2 dyn = collision_from_gradient(grad, ops.eps);
                const double h = 0.5 * (act(i - 1, j) + act(i, j));
                const Vec2 sl = ops.static_field(i - 1, j);
                const Vec2 sr = ops.static_field(i, j);
                const Vec2 u{0.5 * (sl.x + sr.x) + h * dyn.x, 0.5 * (sl.y + sr.y) + h * dyn.y};
                out.x(i, j) = u.x;
                track(u, i, j);
            }
        }
    }
    if (y_faces) {
        for (int j = 1; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (cells(i, j - 1) != CellClass::fluid || cells(i, j) != CellClass::fluid) continue;
                const Vec2 grad{0.5 * (central(i, j - 1).x + central(i, j).x), (s(i, j) - s(i, j - 1)) / g.dy};
                const Vec2 dyn = collision_from_gradient(grad, ops.eps);
                const double h = 0.5 * (act(i, j - 1) + act(i, j));
                const Vec2 sb = ops.static_field(i, j - 1);
                const Vec2 st = ops.static_field(i, j);
                const Vec2 u{0.5 * (sb.x + st.x) + h * dyn.x, 0.5 * (sb.y + st.y) + h * dyn.y};
                out.y(i, j) = u.y;
                track(u, i, j);
            }
        }
    }
}

double check_cfl(double max_speed, const SolverConfig& cfg, const GridSpec& grid) {
    return std::max(max_speed * cfg.dt / grid.dx, max_speed * cfg.dt / grid.dy);
}

FluxSolver::FluxSolver(ModelOperators ops, SolverConfig cfg)
    : ops_(std::move(ops)),
      cfg_(cfg),
      reference_face_(ops_.mask.grid.reference_face()),
      face_(static_cast<std::size_t>(std::max(ops_.mask.grid.nx, ops_.mask.grid.ny) + 1), 0.0),
      row_exit_(static_cast<std::size_t>(ops_.mask.grid.ny), 0.0),
      row_reference_(static_cast<std::size_t>(ops_.mask.grid.ny), 0.0) {
    cfg_.validate();
}

void FluxSolver::check_stability(const FaceVelocities& u) const {
    const double cfl = check_cfl(u.max_speed, cfg_, grid());
    if (cfl > cfg_.cfl_max) {
        std::ostringstream msg;
        msg << "CFL " << cfl << " exceeds limit " << cfg_.cfl_max << ": max |u| = " << u.max_speed
            << " m/s at cell (" << u.worst_i << ", " << u.worst_j << ")";
        throw NumericalError(msg.str());
    }
}

void FluxSolver::sweep_x(SimState& state, const Field2D<double>& u) {
    const GridSpec& g = grid();
    const auto& cells = ops_.mask.cells;
    DensityField& rho = state.rho;
    const double lambda = cfg_.dt / g.dx;
    double* face = face_.data();
    for (int j = 0; j < g.ny; ++j) {
        face[0] = 0.0;
        face[g.nx] = 0.0;
        for (int i = 1; i < g.nx; ++i) {
            face[i] = face_flux(cells(i - 1, j), cells(i, j), rho(i - 1, j), rho(i, j), u(i, j));
        }
        double exit = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            if (cells(i, j) == CellClass::fluid) {
                rho(i, j) -= lambda * (face[i + 1] - face[i]);
            } else if (cells(i, j) == CellClass::outflow) {
                exit += face[i];
            }
        }
        row_exit_[static_cast<std::size_t>(j)] = exit;
        row_reference_[static_cast<std::size_t>(j)] = face[reference_face_];
    }
    const double to_mass = cfg_.dt * g.dy;
    state.exited += symmetric_row_sum(row_exit_) * to_mass;
    state.passed_reference += symmetric_row_sum(row_reference_) * to_mass;
}

void FluxSolver::sweep_y(SimState& state, const Field2D<double>& v) {
    const GridSpec& g = grid();
    const auto& cells = ops_.mask.cells;
    DensityField& rho = state.rho;
    const double lambda = cfg_.dt / g.dy;
    double* face = face_.data();
    for (int i = 0; i < g.nx; ++i) {
        face[0] = 0.0;
        face[g.ny] = 0.0;
        for (int j = 1; j < g.ny; ++j) {
            // OUTFLOW cells hold no mass; lateral exchange only between FLUID cells.
            face[j] = cells(i, j - 1) == CellClass::fluid && cells(i, j) == CellClass::fluid
                          ? face_flux(rho(i, j - 1), rho(i, j), v(i, j))
                          : 0.0;
        }
        for (int j = 0; j < g.ny; ++j) {
            if (cells(i, j) == CellClass::fluid) rho(i, j) -= lambda * (face[j + 1] - face[j]);
        }
    }
}

StepReport FluxSolver::step(SimState& state) {
    StepReport report;
    FaceVelocities& u = faces_;
    assemble_face_velocities(state.rho, ops_, ws_, u, true, !cfg_.reassemble_between_sweeps);
    check_stability(u);
    report.max_speed = u.max_speed;
    sweep_x(state, u.x);
    if (cfg_.reassemble_between_sweeps) {
        assemble_face_velocities(state.rho, ops_, ws_, u, false, true);
        check_stability(u);
        report.max_speed = std::max(report.max_speed, u.max_speed);
    }
    sweep_y(state, u.y);
    report.cfl = check_cfl(report.max_speed, cfg_, grid());

    const auto& rho = state.rho.data();
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const double v = rho[k];
        if (!(v >= 0.0)) {
            std::ostringstream msg;
            msg << "negative density " << v << " at cell (" << k % static_cast<std::size_t>(state.rho.nx()) << ", "
                << k / static_cast<std::size_t>(state.rho.nx()) << ") after step " << state.step + 1;
            throw NumericalError(msg.str());
        }
        if (v > report.max_density) report.max_density = v;
    }
    ++state.step;
    state.time = static_cast<double>(state.step) * cfg_.dt;
    return report;
}

StepReport step_dimensional_split(SimState& state, const SolverConfig& cfg, const ModelOperators& ops) {
    FluxSolver solver(ops, cfg);
    return solver.step(state);
}

}  // namespace beltflow
