#pragma once

#include <cstdint>
#include <vector>

#include "beltflow/field.hpp"
#include "beltflow/grid_geometry.hpp"
#include "beltflow/kernels.hpp"

namespace beltflow {

struct SolverConfig {
    double dx{0.01};
    double dy{0.01};
    double dt{0.002};
    double horizon{40.0};
    double cfl_max{0.9};
    double probe_interval{0.1};
    int kernel_radius{0};  // 0 selects default_kernel_radius()
    bool reassemble_between_sweeps{false};

    void validate() const;
};

/// Everything the time stepper needs besides the density itself.
struct ModelOperators {
    CellMask mask;
    StaticVelocityField static_field;
    MollifierKernel kernel;
    HeavisideParams heaviside;
    double eps{0.0};
};

struct SimState {
    double time{0.0};
    std::int64_t step{0};
    DensityField rho;
    double exited{0.0};           // normalised mass absorbed by the OUTFLOW column
    double passed_reference{0.0};  // net normalised mass across the x = 0 face

    /// Normalised mass still on the belt, sum(rho) * dx * dy.
    [[nodiscard]] double domain_mass(const GridSpec& grid) const;
};

struct StepReport {
    double max_speed{0.0};
    double cfl{0.0};
    double max_density{0.0};
};

/// u = u_stat + H(rho) * I(rho) on FLUID cells, u_stat on OUTFLOW, 0 on SOLID.
[[nodiscard]] VectorField assemble_velocity(const DensityField& rho, const ModelOperators& ops);

/// Upwind flux max(u, 0) rho_L + min(u, 0) rho_R.
[[nodiscard]] inline double face_flux(double rho_left, double rho_right, double u_face) {
    return (u_face > 0.0 ? u_face : 0.0) * rho_left + (u_face < 0.0 ? u_face : 0.0) * rho_right;
}

/// Face flux with boundary handling: zero through SOLID, free outflow into OUTFLOW.
[[nodiscard]] double face_flux(CellClass left, CellClass right, double rho_left, double rho_right, double u_face);

/// max(u dt / dx, u dt / dy).
[[nodiscard]] double check_cfl(double max_speed, const SolverConfig& cfg, const GridSpec& grid);

/// Face-normal velocities of one step. x-face (i, j) is the left face of
/// cell (i, j), i in [0, nx]; y-face (i, j) is the lower face, j in [0, ny].
struct FaceVelocities {
    Field2D<double> x;
    Field2D<double> y;
    double max_speed{0.0};  // largest |u| of the full face velocity vector
    int worst_i{0};
    int worst_j{0};
};

/// Velocity on every open face: mean static velocity plus the collision
/// term evaluated at the face. The normal gradient component is the face
/// difference of the smoothed density, the tangential one the mean of the
/// adjacent central differences, and activation is the mean of H.
/// Closed faces (touching SOLID, or lateral OUTFLOW faces) carry 0.
[[nodiscard]] FaceVelocities assemble_face_velocities(const DensityField& rho, const ModelOperators& ops,
                                                      bool x_faces = true, bool y_faces = true);

/// Scratch fields reused across steps.
struct FaceWorkspace {
    ScalarField scratch;
    ScalarField smoothed;
    ScalarField activation;
    VectorField central;
};

/// As above, writing into `out`. Face arrays not requested keep their contents.
void assemble_face_velocities(const DensityField& rho, const ModelOperators& ops, FaceWorkspace& ws,
                              FaceVelocities& out, bool x_faces, bool y_faces);

/// Owns scratch storage for repeated steps over one scene.
class FluxSolver {
public:
    FluxSolver(ModelOperators ops, SolverConfig cfg);

    /// One Godunov-split step (x sweep then y sweep). Throws NumericalError on
    /// CFL violation or a negative density.
    StepReport step(SimState& state);

    [[nodiscard]] const ModelOperators& operators() const { return ops_; }
    [[nodiscard]] const SolverConfig& config() const { return cfg_; }
    [[nodiscard]] const GridSpec& grid() const { return ops_.mask.grid; }

private:
    void sweep_x(SimState& state, const Field2D<double>& u);
    void sweep_y(SimState& state, const Field2D<double>& v);
    void check_stability(const FaceVelocities& u) const;

    ModelOperators ops_;
    SolverConfig cfg_;
    FaceWorkspace ws_;
    FaceVelocities faces_;
    int reference_face_;
    std::vector<double> face_;
    std::vector<double> row_exit_;
    std::vector<double> row_reference_;
};

/// Stateless convenience wrapper around FluxSolver::step.
StepReport step_dimensional_split(SimState& state, const SolverConfig& cfg, const ModelOperators& ops);

/// Sum of per-row values, combining row j with row ny-1-j first so the
/// result does not depend on the belt's orientation.
[[nodiscard]] double symmetric_row_sum(const std::vector<double>& rows);

}  // namespace beltflow
