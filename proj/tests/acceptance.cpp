// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "beltflow/csv_io.hpp"
#include "beltflow/errors.hpp"
#include "beltflow/kernels.hpp"
#include "beltflow/probes.hpp"
#include "beltflow/run.hpp"
#include "beltflow/scenario.hpp"
#include "beltflow/sweep.hpp"

using namespace beltflow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%d] %-28s %s  %s\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Scenario load(const char* name) { return load_scenario(std::filesystem::path(BELTFLOW_SCENARIO_DIR) / name); }

/// Everything measured on the fine 45 degree run.
struct FineRun {
    RunResult result;
    double seconds{0.0};
    double worst_residual{0.0};   // |domain + exited - total| / total, every sample
    double band_peak{0.0};        // max density in the upstream band for t in [5, 15]
    double band_peak_time{0.0};
    double min_density{0.0};
};

FineRun fine_45(const Scenario& sc) {
    const PreparedScenario p = prepare(sc);
    const double total = sc.total_mass();
    const auto band = upstream_band(sc.scene, p.ops.mask, 0.2);
    FineRun f;
    const GridSpec grid = p.grid();
    auto observe = [&](const SimState& s) {
        const double held = p.mass_scale * (s.domain_mass(grid) + s.exited);
        f.worst_residual = std::max(f.worst_residual, std::abs(held - total) / total);
        if (s.time >= 5.0 - 1e-9 && s.time <= 15.0 + 1e-9) {
            const double peak = band_max_density(s.rho, band);
            if (peak > f.band_peak) {
                f.band_peak = peak;
                f.band_peak_time = s.time;
            }
        }
        f.min_density = std::min(f.min_density, *std::min_element(s.rho.data().begin(), s.rho.data().end()));
    };
    const auto t0 = Clock::now();
    f.result = run(p, {}, observe);
    f.seconds = seconds_since(t0);
    return f;
}

void criterion_advection() {
    const Scenario sc = load("advection_block.ini");
    const auto t0 = Clock::now();
    const RunResult r = run(sc);
    const double secs = seconds_since(t0);
    const double total = sc.total_mass();
    const double v = sc.model.belt_speed;
    const double length = sc.item.length;
    const double lead = -(sc.placements.at(0).center.x + 0.5 * length);  // leading edge to x = 0
    double worst = 0.0;
    for (std::size_t k = 0; k < r.outflow.size(); ++k) {
        const double exact = total * std::clamp((v * r.outflow.t[k] - lead) / length, 0.0, 1.0);
        worst = std::max(worst, std::abs(r.outflow.mass[k] - exact));
    }
    const double rel = worst / total;
    report(2, "pure advection oracle", rel <= 0.02 && secs < 30.0,
           fmt("Linf %.4f of total (limit 0.02), runtime %.1f s (limit 30 s)", rel, secs));
}

bool mirror_bitwise() {
    Scenario sc = load("belt_45.ini");
    sc.solver.horizon = 4.0;
    const PreparedScenario p = prepare(sc);
    Scenario msc = sc;
    msc.scene = sc.scene.mirrored();
    msc.scatter.reset();
    msc.placements.clear();
    const PreparedScenario mp = prepare(msc);
    if (!(mp.ops.mask == p.ops.mask.flipped_rows())) return false;
    FluxSolver a(p.ops, sc.solver);
    FluxSolver b(mp.ops, msc.solver);
    SimState sa{0.0, 0, p.rho0};
    SimState sb{0.0, 0, p.rho0.flipped_rows()};
    for (int n = 0; n < 2000; ++n) {
        a.step(sa);
        b.step(sb);
    }
    return sb.rho == sa.rho.flipped_rows() && sb.passed_reference == sa.passed_reference;
}

bool runs_identical() {
    Scenario sc = load("belt_45.ini");
    sc.solver.horizon = 4.0;
    const RunResult a = run(sc, {4.0});
    const RunResult b = run(sc, {4.0});
    return curve_csv_text(a.outflow) == curve_csv_text(b.outflow) && a.snapshots.size() == 1 &&
           b.snapshots.size() == 1 && a.snapshots[0].rho == b.snapshots[0].rho;
}

void criterion_properties(const FineRun& fine) {
    std::string failed;
    // Kernel normalisation on both resolutions.
    double worst_sum = 0.0;
    for (double d : {0.01, 0.02}) {
        const MollifierKernel k = build_discrete_kernel(1e4, d, d, default_kernel_radius(1e4, d, d));
        double sum = 0.0;
        for (int b = -k.radius; b <= k.radius; ++b) {
            for (int a = -k.radius; a <= k.radius; ++a) sum += k.weight(a, b);
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    if (worst_sum > 1e-14) failed += " kernel-normalisation";

    // |I| < eps on random fields.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(0.01, 5.0);
    const GridSpec g{24, 24, 0.01, 0.01, {0.0, 0.0}};
    const MollifierKernel k = build_discrete_kernel(1e4, 0.01, 0.01, 4);
    bool bounded = true;
    for (int field = 0; field < 1000 && bounded; ++field) {
        const double eps = amp(rng);
        std::uniform_real_distribution<double> u(0.0, amp(rng));
        DensityField rho(24, 24);
        for (double& v : rho.data()) v = u(rng);
        const VectorField col = collision_operator(rho, eps, k, g);
        for (const Vec2& c : col.data()) bounded = bounded && norm(c) < eps;
    }
    if (!bounded) failed += " collision-bound";
    if (fine.min_density < 0.0) failed += " positivity";
    if (!mirror_bitwise()) failed += " mirror";
    if (heaviside(1.0, HeavisideParams{50.0, 1.0}) != 0.5) failed += " heaviside";
    if (!runs_identical()) failed += " determinism";
    report(8, "property suites", failed.empty(),
           failed.empty() ? fmt("kernel sum error %.1e, 1000 fuzzed fields, mirror, H, determinism and positivity ok",
                                worst_sum)
                          : "failed:" + failed);
}

}  // namespace

int main() {
    try {
        const Scenario s45 = load("belt_45.ini");
        const double total = s45.total_mass();
        const double bound = s45.model.belt_speed + s45.model.eps();
        const FineRun fine = fine_45(s45);
        const RunDiagnostics& d = fine.result.diagnostics;

        report(1, "mass conservation", fine.worst_residual <= 1e-10 && fine.seconds <= 300.0,
               fmt("max residual %.2e (limit 1e-10), runtime %.1f s (limit 300 s)", fine.worst_residual,
                   fine.seconds));
        criterion_advection();
        report(3, "congestion formation", fine.band_peak >= 0.95,
               fmt("band peak %.3f rho_max at t = %.1f s (need >= 0.95 in [5, 15] s)", fine.band_peak,
                   fine.band_peak_time));
        const double final_mass = fine.result.outflow.final_mass();
        report(4, "near-complete discharge", final_mass >= 0.95 * total,
               fmt("outflow %.4f kg at 40 s (need >= %.4f kg)", final_mass, 0.95 * total));

        const std::vector<double> factors{3.5, 4.5, 5.5, 6.5, 7.5};
        const SweepResult sweep = epsilon_sweep(s45, factors, fine.result.outflow, 1);
        bool self = sweep.argmin && sweep.reports[*sweep.argmin].eps_factor == 5.5;
        std::string l2s;
        for (const auto& r : sweep.reports) {
            if (!r.ok) self = false;
            if (r.eps_factor == 5.5 && r.l2 != 0.0) self = false;
            if (r.eps_factor != 5.5 && !(r.l2 > 0.0)) self = false;
            l2s += fmt(" %.4g", r.l2);
        }
        report(5, "eps sweep self-consistency", self,
               "argmin " + (sweep.argmin ? fmt("%.1f", sweep.reports[*sweep.argmin].eps_factor) : std::string("none")) +
                   ", L2 [kg s^1/2]" + l2s);
        bool unimodal = sweep.argmin.has_value();
        if (unimodal) {
            for (std::size_t k = 0; k + 1 < sweep.reports.size(); ++k) {
                const double a = sweep.reports[k].l2;
                const double b = sweep.reports[k + 1].l2;
                unimodal = unimodal && (k < *sweep.argmin ? a > b : a < b);
            }
        }
        report(6, "monotone eps response", unimodal, "L2 strictly decreasing then increasing:" + l2s);

        Scenario coarse = s45;
        coarse.solver.dx = coarse.solver.dy = 0.02;
        coarse.solver.dt = 0.004;
        const auto t0 = Clock::now();
        const RunResult cr = run(coarse);
        const double coarse_secs = seconds_since(t0);
        const double gap = max_curve_gap(cr.outflow, fine.result.outflow) / total;
        const double ratio = coarse_secs / fine.seconds;
        report(7, "resolution consistency", gap <= 0.05 && ratio <= 0.25,
               fmt("Linf gap %.4f of total (limit 0.05), runtime ratio %.3f (limit 0.25)", gap, ratio));

        criterion_properties(fine);

        report(9, "velocity bound", d.max_speed <= bound && d.max_cfl <= 0.2,
               fmt("max |u| %.4f m/s (limit %.3f), max CFL %.4f (limit 0.2)", d.max_speed, bound, d.max_cfl));
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
