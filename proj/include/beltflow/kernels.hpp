#pragma once

#include <vector>

#include "beltflow/field.hpp"
#include "beltflow/grid_geometry.hpp"

namespace beltflow {

/// Gaussian mollifier eta(x) = sigma / (2 pi) * exp(-sigma |x|^2 / 2).
[[nodiscard]] double eval_mollifier(Vec2 x, double sigma);

/// Truncated, renormalised discretisation of the mollifier.
///
/// The Gaussian is separable, so the stencil is stored as two 1D weight
/// vectors with weight(i, j) = wx[i + R] * wy[j + R]. Each 1D vector sums
/// to one, hence so does the full (2R+1)x(2R+1) stencil.
struct MollifierKernel {
    double sigma{0.0};
    int radius{0};
    std::vector<double> wx;
    std::vector<double> wy;

    [[nodiscard]] int width() const { return 2 * radius + 1; }
    [[nodiscard]] double weight(int i, int j) const { return wx[i + radius] * wy[j + radius]; }
};

/// Radius covering four standard deviations of the mollifier.
[[nodiscard]] int default_kernel_radius(double sigma, double dx, double dy);

/// Mass of the continuous mollifier outside a disk of radius R * min(dx, dy).
[[nodiscard]] double kernel_tail_mass(double sigma, double dx, double dy, int radius);

/// Throws ValidationError when radius < 1 or the truncated tail exceeds 1%.
[[nodiscard]] MollifierKernel build_discrete_kernel(double sigma, double dx, double dy, int radius);

/// Discrete convolution eta * rho with zero padding outside the grid.
/// Callers keep rho == 0 on SOLID cells.
[[nodiscard]] ScalarField smooth(const DensityField& rho, const MollifierKernel& kernel);

/// smooth() into caller-owned storage; `scratch` receives the x pass.
void smooth_into(const DensityField& rho, const MollifierKernel& kernel, ScalarField& scratch, ScalarField& out);

/// Central differences of a smoothed field; one-sided at the grid edges.
[[nodiscard]] VectorField gradient(const ScalarField& s, const GridSpec& grid);
void gradient_into(const ScalarField& s, const GridSpec& grid, VectorField& out);

[[nodiscard]] inline VectorField smoothed_gradient(const DensityField& rho, const MollifierKernel& kernel,
                                                   const GridSpec& grid) {
    return gradient(smooth(rho, kernel), grid);
}

/// -eps * g / sqrt(1 + |g|^2) for a smoothed gradient g.
[[nodiscard]] Vec2 collision_from_gradient(Vec2 g, double eps);

[[nodiscard]] VectorField collision_operator(const DensityField& rho, double eps, const MollifierKernel& kernel,
                                             const GridSpec& grid);

struct HeavisideParams {
    double steepness{50.0};
    double threshold{1.0};  // normalised rho_max

    void validate() const;
};

/// 1/pi * atan(h (rho / threshold - 1)) + 1/2; exactly 1/2 at rho == threshold.
[[nodiscard]] double heaviside(double rho, const HeavisideParams& params);

[[nodiscard]] ScalarField heaviside_activation(const DensityField& rho, const HeavisideParams& params);

}  // namespace beltflow
