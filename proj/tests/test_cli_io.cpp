#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>

#include "beltflow/commands.hpp"
#include "beltflow/csv_io.hpp"
#include "beltflow/errors.hpp"
#include "test_support.hpp"

using namespace beltflow;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* quick_ini =
    "[scene]\nbelt_length = 1.0\nbelt_width = 0.4\ndownstream_length = 0.1\n"
    "diverter = upper\ndiverter_angle_deg = 45\ndiverter_anchor_y = 0.15\n"
    "[solver]\ndx = 0.02\ndt = 0.004\nhorizon = 2\n"
    "[placements]\nscatter_count = 12\nscatter_region = -0.85, -0.31, 0.02, 0.38\nseed = 3\n";

std::filesystem::path write_scenario(const std::filesystem::path& dir, const std::string& text) {
    const auto p = dir / "scenario.ini";
    write_text_file(p, text);
    return p;
}

MassFlowCurve curve(std::vector<double> t, std::vector<double> m) {
    MassFlowCurve c;
    c.t = std::move(t);
    c.mass = std::move(m);
    return c;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 1000; ++k) {
        const double v = u(rng) * std::pow(10.0, static_cast<double>(k % 20) - 10.0);
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(4.91) == "4.9100000000000001");
    CHECK(format_number(12.0) == "12");
}

TEST_CASE("curve CSV round trip and errors") {
    const MassFlowCurve c = curve({0.0, 0.1, 0.2}, {0.0, 1.0 / 3.0, 0.5});
    const std::string text = curve_csv_text(c);
    CHECK(text.rfind("t_s,mass_kg\n", 0) == 0);
    CHECK(parse_curve_csv(text) == c);

    const auto dir = test::scratch_dir("csv");
    write_curve_csv(c, dir / "c.csv");
    CHECK(read_curve_csv(dir / "c.csv") == c);
    CHECK_THROWS_AS((void)read_curve_csv(dir / "nope.csv"), IoError);
    CHECK_THROWS_AS(write_curve_csv(c, dir / "no" / "c.csv"), IoError);

    CHECK(parse_curve_csv("t_s,mass_kg\r\n0,0\r\n1,0.5\r\n").size() == 2);
    CHECK_THROWS_AS((void)parse_curve_csv("0,0\n1,1\n", "r.csv"), ValidationError);
    CHECK_THROWS_WITH_AS((void)parse_curve_csv("t_s,mass_kg\n0,0\n1,x\n", "r.csv"),
                         doctest::Contains("r.csv:3"), ValidationError);
    CHECK_THROWS_WITH_AS((void)parse_curve_csv("t_s,mass_kg\n0,0\n1\n", "r.csv"), doctest::Contains("r.csv:3"),
                         ValidationError);
    CHECK_THROWS_WITH_AS((void)parse_curve_csv("t_s,mass_kg\n1,0\n1,1\n", "r.csv"), doctest::Contains("r.csv:3"),
                         ValidationError);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    write_sweep_csv({{5.5, 0.715, 0.25, 0.125, true, ""}, {400.0, 52.0, nan, nan, false, "CFL"}}, dir / "s.csv");
    CHECK(slurp(dir / "s.csv") == "eps_factor,eps_mps,l2_kg,linf_kg\n5.5,0.71499999999999997,0.25,0.125\n400,52,nan,nan\n");
}

TEST_CASE("run command writes deterministic outputs") {
    const auto dir = test::scratch_dir("cli_run");
    RunManifest m;
    m.scenario = write_scenario(dir, quick_ini);
    m.snapshot_times = {0.0, 1.0};
    m.out_dir = dir / "a";
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cmd_run(m, out, err) == exit_ok);
    CHECK(out.str().find("outflow ") == 0);
    for (const char* f : {"outflow.csv", "summary.json", "timing.json", "snapshot_t0.csv", "snapshot_t0.pgm",
                          "snapshot_t1.csv", "snapshot_t1.pgm"}) {
        CHECK_MESSAGE(std::filesystem::exists(m.out_dir / f), f);
    }
    const MassFlowCurve flow = read_curve_csv(m.out_dir / "outflow.csv");
    CHECK(flow.size() == 21);
    CHECK(slurp(m.out_dir / "summary.json").find("\"mass_conservation_residual\"") != std::string::npos);

    RunManifest again = m;
    again.out_dir = dir / "b";
    REQUIRE(cmd_run(again, out, err) == exit_ok);
    for (const char* f : {"outflow.csv", "summary.json", "snapshot_t1.csv", "snapshot_t1.pgm"}) {
        CHECK_MESSAGE(slurp(m.out_dir / f) == slurp(again.out_dir / f), f);
    }

    RunManifest reseeded = m;
    reseeded.out_dir = dir / "c";
    reseeded.seed = 11;
    REQUIRE(cmd_run(reseeded, out, err) == exit_ok);
    CHECK(slurp(m.out_dir / "snapshot_t0.csv") != slurp(reseeded.out_dir / "snapshot_t0.csv"));
}

TEST_CASE("run command exit codes") {
    const auto dir = test::scratch_dir("cli_codes");
    std::ostringstream out;
    std::ostringstream err;
    RunManifest m;
    m.out_dir = dir / "out";

    m.scenario = dir / "missing.ini";
    CHECK(cmd_run(m, out, err) == exit_io);
    CHECK(err.str().find("missing.ini") != std::string::npos);

    m.scenario = write_scenario(dir, "[model]\neps_factor = -1\n");
    CHECK(cmd_run(m, out, err) == exit_validation);

    m.scenario = write_scenario(dir, std::string(quick_ini) + "[solver]\ndt = 0.2\n");
    CHECK(cmd_run(m, out, err) == exit_numerical);
    CHECK(err.str().find("CFL") != std::string::npos);

    m.scenario = write_scenario(dir, quick_ini);
    m.snapshot_times = {5.0};
    CHECK(cmd_run(m, out, err) == exit_validation);
}

TEST_CASE("sweep command") {
    const auto dir = test::scratch_dir("cli_sweep");
    std::ostringstream out;
    std::ostringstream err;
    RunManifest m;
    m.scenario = write_scenario(dir, quick_ini);
    m.out_dir = dir / "ref";
    REQUIRE(cmd_run(m, out, err) == exit_ok);

    RunManifest s = m;
    s.out_dir = dir / "sweep";
    s.ref = dir / "ref" / "outflow.csv";
    s.eps_factors = {4.5, 5.5};
    std::ostringstream sout;
    REQUIRE(cmd_sweep(s, sout, err) == exit_ok);
    CHECK(sout.str() == "argmin eps_factor=5.5 eps_mps=" + format_number(5.5 * 0.13) + " l2_kg=0 linf_kg=0\n");
    const std::string csv = slurp(s.out_dir / "sweep.csv");
    CHECK(csv.rfind("eps_factor,eps_mps,l2_kg,linf_kg\n4.5,", 0) == 0);

    s.eps_factors.clear();
    CHECK(cmd_sweep(s, sout, err) == exit_validation);
    s.eps_factors = {400.0};
    CHECK(cmd_sweep(s, sout, err) == exit_numerical);
    s.eps_factors = {5.5};
    s.ref = dir / "absent.csv";
    CHECK(cmd_sweep(s, sout, err) == exit_io);
}

TEST_CASE("compare command") {
    const auto dir = test::scratch_dir("cli_compare");
    std::ostringstream err;
    write_curve_csv(curve({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 1.0, 1.0, 2.0, 2.0}), dir / "a.csv");
    write_curve_csv(curve({0.0, 1.0, 2.0, 3.0, 4.0}, {0.5, 1.5, 1.5, 2.5, 2.5}), dir / "b.csv");
    write_curve_csv(curve({0.0, 2.0, 4.0}, {0.0, 1.0, 2.0}), dir / "c.csv");

    std::ostringstream same;
    REQUIRE(cmd_compare(dir / "a.csv", dir / "a.csv", same, err) == exit_ok);
    CHECK(same.str() == "l2_kg 0\nlinf_kg 0\nfinal_mass_diff_kg 0\n");

    std::ostringstream shift;
    REQUIRE(cmd_compare(dir / "b.csv", dir / "a.csv", shift, err) == exit_ok);
    CHECK(shift.str() == "l2_kg 1\nlinf_kg 0.5\nfinal_mass_diff_kg 0.5\n");

    // Staircase against a ramp sampled on every other point: only t = 2 and t = 4 count.
    std::ostringstream stairs;
    REQUIRE(cmd_compare(dir / "a.csv", dir / "c.csv", stairs, err) == exit_ok);
    CHECK(stairs.str() == "l2_kg 0\nlinf_kg 0\nfinal_mass_diff_kg 0\n");
    std::ostringstream back;
    REQUIRE(cmd_compare(dir / "c.csv", dir / "a.csv", back, err) == exit_ok);
    // Ramp at t = 1, 3 is 0.5 and 1.5 against 1 and 2; trapezoid weights 1 there.
    CHECK(back.str() == "l2_kg 0.70710678118654757\nlinf_kg 0.5\nfinal_mass_diff_kg 0\n");

    std::ostringstream none;
    CHECK(cmd_compare(dir / "a.csv", dir / "zzz.csv", none, err) == exit_io);
    write_curve_csv(curve({10.0, 11.0}, {0.0, 1.0}), dir / "late.csv");
    CHECK(cmd_compare(dir / "a.csv", dir / "late.csv", none, err) == exit_validation);
}

TEST_CASE("thread count from the environment") {
    ::setenv("BELTFLOW_THREADS", "3", 1);
    CHECK(threads_from_env() == 3);
    ::setenv("BELTFLOW_THREADS", "zero", 1);
    CHECK(threads_from_env() == 1);
    ::unsetenv("BELTFLOW_THREADS");
    CHECK(threads_from_env() == 1);
}
