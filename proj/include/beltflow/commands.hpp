#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace beltflow {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2, exit_io = 3 };

struct RunManifest {
    std::filesystem::path scenario;
    std::filesystem::path out_dir{"out"};
    std::vector<double> snapshot_times;
    std::vector<double> eps_factors;
    std::optional<std::uint64_t> seed;  // overrides the scenario's scatter seed
    std::optional<double> dx;           // overrides dx and dy
    std::optional<double> dt;
    std::filesystem::path ref;
    unsigned threads{1};
};

/// Writes outflow.csv, snapshot_t<time>.{csv,pgm}, summary.json and timing.json.
int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Writes sweep.csv and prints the argmin line.
int cmd_sweep(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Prints L2, Linf and final-mass difference of sim against ref.
int cmd_compare(const std::filesystem::path& sim, const std::filesystem::path& ref, std::ostream& out,
                std::ostream& err);

/// Thread count from BELTFLOW_THREADS, defaulting to 1.
[[nodiscard]] unsigned threads_from_env();

}  // namespace beltflow
