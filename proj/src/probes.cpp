#include "beltflow/probes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beltflow/csv_io.hpp"
#include "beltflow/errors.hpp"

namespace beltflow {

void MassFlowCurve::validate(double total_mass, double tolerance) const {
    if (t.size() != mass.size()) throw ValidationError("mass-flow curve: column lengths differ");
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0 && !(t[k] > t[k - 1])) throw ValidationError("mass-flow curve: times must increase strictly");
        if (mass[k] < -tolerance) throw ValidationError("mass-flow curve: negative mass at t = " + std::to_string(t[k]));
        if (k > 0 && mass[k] < mass[k - 1] - tolerance) {
            throw ValidationError("mass-flow curve: mass decreases at t = " + std::to_string(t[k]));
        }
        if (mass[k] > total_mass + 1e-9) {
            throw ValidationError("mass-flow curve: mass exceeds the total at t = " + std::to_string(t[k]));
        }
    }
}

double interpolate(const MassFlowCurve& curve, double t) {
    if (curve.empty()) throw ValidationError("cannot interpolate an empty curve");
    if (t <= curve.t.front()) return curve.mass.front();
    if (t >= curve.t.back()) return curve.mass.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(curve.t.begin(), curve.t.end(), t) - curve.t.begin());
    const std::size_t lo = hi - 1;
    if (t == curve.t[lo]) return curve.mass[lo];
    const double f = (t - curve.t[lo]) / (curve.t[hi] - curve.t[lo]);
    return curve.mass[lo] + f * (curve.mass[hi] - curve.mass[lo]);
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double half = 0.5 * (t[k + 1] - t[k]);
        w[k] += half;
        w[k + 1] += half;
    }
    return w;
}

AlignedCurves align_to_reference(const MassFlowCurve& sim, const MassFlowCurve& ref) {
    if (ref.size() < 2) throw ValidationError("reference curve needs at least 2 samples");
    if (sim.empty()) throw ValidationError("simulated curve is empty");
    const double span = std::max(1.0, std::abs(sim.t.back()));
    const double lo = sim.t.front() - 1e-9 * span;
    const double hi = sim.t.back() + 1e-9 * span;
    AlignedCurves out;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        if (ref.t[k] < lo || ref.t[k] > hi) continue;
        out.t.push_back(ref.t[k]);
        out.ref.push_back(ref.mass[k]);
        out.sim.push_back(interpolate(sim, ref.t[k]));
    }
    if (out.t.size() < 2) {
        throw ValidationError("reference and simulated curves share fewer than 2 sample times");
    }
    return out;
}

double l2_error(const MassFlowCurve& sim, const MassFlowCurve& ref) {
    const AlignedCurves a = align_to_reference(sim, ref);
    const std::vector<double> w = trapezoid_weights(a.t);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        const double d = a.sim[k] - a.ref[k];
        sum += d * d * w[k];
    }
    return std::sqrt(sum);
}

double linf_error(const MassFlowCurve& sim, const MassFlowCurve& ref) {
    const AlignedCurves a = align_to_reference(sim, ref);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.t.size(); ++k) worst = std::max(worst, std::abs(a.sim[k] - a.ref[k]));
    return worst;
}

double max_curve_gap(const MassFlowCurve& a, const MassFlowCurve& b) {
    if (a.empty() || b.empty()) throw ValidationError("cannot compare empty curves");
    const double lo = std::max(a.t.front(), b.t.front());
    const double hi = std::min(a.t.back(), b.t.back());
    double worst = 0.0;
    for (const auto* c : {&a, &b}) {
        for (double t : c->t) {
            if (t < lo || t > hi) continue;
            worst = std::max(worst, std::abs(interpolate(a, t) - interpolate(b, t)));
        }
    }
    return worst;
}

std::uint8_t density_to_ink(double rho) {
    const double clamped = std::clamp(rho, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(255.0 * clamped + 0.5));
}

void export_snapshot(const DensityField& rho, const GridSpec& grid, const std::filesystem::path& stem) {
    std::filesystem::path csv = stem;
    csv += ".csv";
    std::filesystem::path pgm = stem;
    pgm += ".pgm";

    std::string text = "y_m";
    for (int i = 0; i < rho.nx(); ++i) text += ',' + format_number(grid.cell_center(i, 0).x);
    text += '\n';
    for (int j = 0; j < rho.ny(); ++j) {
        text += format_number(grid.cell_center(0, j).y);
        for (int i = 0; i < rho.nx(); ++i) text += ',' + format_number(rho(i, j));
        text += '\n';
    }
    write_text_file(csv, text);

    std::string image = "P5\n" + std::to_string(rho.nx()) + " " + std::to_string(rho.ny()) + "\n255\n";
    image.reserve(image.size() + rho.size());
    for (int j = rho.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < rho.nx(); ++i) image.push_back(static_cast<char>(255 - density_to_ink(rho(i, j))));
    }
    write_text_file(pgm, image);
}

std::vector<std::size_t> upstream_band(const SceneGeometry& scene, const CellMask& mask, double width) {
    std::vector<std::size_t> band;
    if (!scene.has_diverter()) return band;
    const Vec2 a = scene.diverter_upstream_end();
    const Vec2 b = scene.diverter_anchor;
    auto side = [&](Vec2 p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };
    const Vec2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const double incoming = side({mid.x - 1.0, mid.y});
    const GridSpec& g = mask.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!mask.is_fluid(i, j)) continue;
            const Vec2 c = g.cell_center(i, j);
            if (side(c) * incoming > 0.0 && distance_to_segment(c, a, b) <= width) {
                band.push_back(mask.cells.index(i, j));
            }
        }
    }
    return band;
}

double band_max_density(const DensityField& rho, const std::vector<std::size_t>& band) {
    double m = 0.0;
    for (std::size_t k : band) m = std::max(m, rho.data()[k]);
    return m;
}

}  // namespace beltflow
