#include "beltflow/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "beltflow/errors.hpp"

namespace beltflow {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string curve_csv_text(const MassFlowCurve& curve) {
    std::string text = "t_s,mass_kg\n";
    for (std::size_t k = 0; k < curve.size(); ++k) {
        text += format_number(curve.t[k]);
        text += ',';
        text += format_number(curve.mass[k]);
        text += '\n';
    }
    return text;
}

void write_curve_csv(const MassFlowCurve& curve, const std::filesystem::path& path) {
    write_text_file(path, curve_csv_text(curve));
}

MassFlowCurve parse_curve_csv(const std::string& text, const std::string& source) {
    MassFlowCurve curve;
    std::istringstream in(text);
    std::string line;
    int row = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view l = trim(line);
        if (l.empty()) continue;
        if (!header) {
            if (l != "t_s,mass_kg") {
                throw ValidationError(source + ":" + std::to_string(row) + ": expected header 't_s,mass_kg'");
            }
            header = true;
            continue;
        }
        const auto comma = l.find(',');
        if (comma == std::string_view::npos || l.find(',', comma + 1) != std::string_view::npos) {
            throw ValidationError(source + ":" + std::to_string(row) + ": expected two columns");
        }
        double vals[2];
        const std::string_view cols[2] = {trim(l.substr(0, comma)), trim(l.substr(comma + 1))};
        for (int c = 0; c < 2; ++c) {
            const auto* end = cols[c].data() + cols[c].size();
            const auto [ptr, ec] = std::from_chars(cols[c].data(), end, vals[c]);
            if (cols[c].empty() || ec != std::errc{} || ptr != end || !std::isfinite(vals[c])) {
                throw ValidationError(source + ":" + std::to_string(row) + ": malformed number '" +
                                      std::string(cols[c]) + "'");
            }
        }
        if (!curve.t.empty() && !(vals[0] > curve.t.back())) {
            throw ValidationError(source + ":" + std::to_string(row) + ": times must increase strictly");
        }
        curve.push(vals[0], vals[1]);
    }
    if (!header) throw ValidationError(source + ": missing header 't_s,mass_kg'");
    return curve;
}

MassFlowCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_curve_csv(buf.str(), path.string());
}

void write_sweep_csv(const std::vector<ErrorReport>& reports, const std::filesystem::path& path) {
    std::string text = "eps_factor,eps_mps,l2_kg,linf_kg\n";
    for (const auto& r : reports) {
        text += format_number(r.eps_factor) + ',' + format_number(r.eps) + ',';
        if (r.ok) {
            text += format_number(r.l2) + ',' + format_number(r.linf) + '\n';
        } else {
            text += "nan,nan\n";
        }
    }
    write_text_file(path, text);
}

}  // namespace beltflow
