#include "beltflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "beltflow/errors.hpp"

namespace beltflow {
namespace {

constexpr double kMaxTailMass = 0.01;

std::vector<double> gaussian_weights(double sigma, double step, int radius) {
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    for (int k = -radius; k <= radius; ++k) {
        const double x = k * step;
        w[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * sigma * x * x);
    }
    // Sum symmetric pairs from the tails inward so w[k] == w[-k] stays exact.
    double sum = w[static_cast<std::size_t>(radius)];
    for (int k = radius; k >= 1; --k) sum += 2.0 * w[static_cast<std::size_t>(radius + k)];
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

double eval_mollifier(Vec2 x, double sigma) {
    return sigma / (2.0 * std::numbers::pi) * std::exp(-0.5 * sigma * (x.x * x.x + x.y * x.y));
}

int default_kernel_radius(double sigma, double dx, double dy) {
    const double cells = 4.0 / (std::sqrt(sigma) * std::min(dx, dy));
    return std::max(1, static_cast<int>(std::ceil(cells - 1e-9)));
}

double kernel_tail_mass(double sigma, double dx, double dy, int radius) {
    const double r = radius * std::min(dx, dy);
    return std::exp(-0.5 * sigma * r * r);
}

MollifierKernel build_discrete_kernel(double sigma, double dx, double dy, int radius) {
    if (!(sigma > 0.0)) throw ValidationError("model.sigma must be positive");
    if (!(dx > 0.0) || !(dy > 0.0)) throw ValidationError("kernel: dx and dy must be positive");
    if (radius < 1) throw ValidationError("solver.kernel_radius must be at least 1");
    const double tail = kernel_tail_mass(sigma, dx, dy, radius);
    if (tail > kMaxTailMass) {
        throw ValidationError("solver.kernel_radius " + std::to_string(radius) + " truncates " +
                              std::to_string(100.0 * tail) + "% of the mollifier (limit 1%)");
    }
    return {sigma, radius, gaussian_weights(sigma, dx, radius), gaussian_weights(sigma, dy, radius)};
}

namespace {

template <class T>
void fit(Field2D<T>& f, int nx, int ny) {
    if (f.nx() != nx || f.ny() != ny) f = Field2D<T>(nx, ny);
}

}  // namespace

ScalarField smooth(const DensityField& rho, const MollifierKernel& kernel) {
    ScalarField scratch;
    ScalarField s;
    smooth_into(rho, kernel, scratch, s);
    return s;
}

void smooth_into(const DensityField& rho, const MollifierKernel& kernel, ScalarField& tmp, ScalarField& s) {
    const int nx = rho.nx();
    const int ny = rho.ny();
    const int r = kernel.radius;
    const double* wx = kernel.wx.data() + r;
    const double* wy = kernel.wy.data() + r;

    // Both passes pair offsets +k and -k before adding, which keeps the
    // result bitwise invariant under reflection of either axis.
    fit(tmp, nx, ny);
    fit(s, nx, ny);
    for (int j = 0; j < ny; ++j) {
        const double* row = &rho(0, j);
        double* out = &tmp(0, j);
        for (int i = 0; i < nx; ++i) {
            double acc = wx[0] * row[i];
            for (int k = 1; k <= r; ++k) {
                const double left = i - k >= 0 ? row[i - k] : 0.0;
                const double right = i + k < nx ? row[i + k] : 0.0;
                acc += wx[k] * (left + right);
            }
            out[i] = acc;
        }
    }

    for (int j = 0; j < ny; ++j) {
        double* out = &s(0, j);
        const double* centre = &tmp(0, j);
        for (int i = 0; i < nx; ++i) out[i] = wy[0] * centre[i];
        for (int k = 1; k <= r; ++k) {
            const double* below = j - k >= 0 ? &tmp(0, j - k) : nullptr;
            const double* above = j + k < ny ? &tmp(0, j + k) : nullptr;
            for (int i = 0; i < nx; ++i) {
                const double b = below ? below[i] : 0.0;
                const double a = above ? above[i] : 0.0;
                out[i] += wy[k] * (b + a);
            }
        }
    }
}

VectorField gradient(const ScalarField& s, const GridSpec& grid) {
    VectorField g;
    gradient_into(s, grid, g);
    return g;
}

void gradient_into(const ScalarField& s, const GridSpec& grid, VectorField& g) {
    const int nx = s.nx();
    const int ny = s.ny();
    fit(g, nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double gx;
            if (i == 0) {
                gx = (s(1, j) - s(0, j)) / grid.dx;
            } else if (i == nx - 1) {
                gx = (s(nx - 1, j) - s(nx - 2, j)) / grid.dx;
            } else {
                gx = (s(i + 1, j) - s(i - 1, j)) / (2.0 * grid.dx);
            }
            double gy;
            if (j == 0) {
                gy = (s(i, 1) - s(i, 0)) / grid.dy;
            } else if (j == ny - 1) {
                gy = (s(i, ny - 1) - s(i, ny - 2)) / grid.dy;
            } else {
                gy = (s(i, j + 1) - s(i, j - 1)) / (2.0 * grid.dy);
            }
            g(i, j) = {gx, gy};
        }
    }
}

Vec2 collision_from_gradient(Vec2 g, double eps) {
    const double scale = -eps / std::sqrt(1.0 + g.x * g.x + g.y * g.y);
    return {scale * g.x, scale * g.y};
}

VectorField collision_operator(const DensityField& rho, double eps, const MollifierKernel& kernel,
                               const GridSpec& grid) {
    VectorField out = smoothed_gradient(rho, kernel, grid);
    for (auto& v : out.data()) v = collision_from_gradient(v, eps);
    return out;
}

void HeavisideParams::validate() const {
    if (!(steepness > 0.0)) throw ValidationError("model.h must be positive");
    if (!(threshold > 0.0)) throw ValidationError("heaviside threshold must be positive");
}

double heaviside(double rho, const HeavisideParams& params) {
    return std::atan(params.steepness * (rho / params.threshold - 1.0)) / std::numbers::pi + 0.5;
}

ScalarField heaviside_activation(const DensityField& rho, const HeavisideParams& params) {
    ScalarField out(rho.nx(), rho.ny());
    for (std::size_t k = 0; k < rho.size(); ++k) out.data()[k] = heaviside(rho.data()[k], params);
    return out;
}

}  // namespace beltflow
