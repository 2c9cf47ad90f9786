#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "beltflow/probes.hpp"

namespace beltflow {

/// Shortest-safe round-trip text for a double (17 significant digits).
[[nodiscard]] std::string format_number(double v);

/// Writes "t_s,mass_kg" followed by one row per sample.
void write_curve_csv(const MassFlowCurve& curve, const std::filesystem::path& path);
[[nodiscard]] std::string curve_csv_text(const MassFlowCurve& curve);

/// Reads a curve with the mandatory "t_s,mass_kg" header. Parse errors name
/// the file and row; times must increase strictly.
[[nodiscard]] MassFlowCurve read_curve_csv(const std::filesystem::path& path);
[[nodiscard]] MassFlowCurve parse_curve_csv(const std::string& text, const std::string& source = "<csv>");

/// eps_factor,eps_mps,l2_kg,linf_kg; failed runs carry nan errors.
void write_sweep_csv(const std::vector<ErrorReport>& reports, const std::filesystem::path& path);

/// Writes `text` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace beltflow
