#include "beltflow/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "beltflow/errors.hpp"

namespace beltflow {
namespace {

constexpr double kFractionSnap = 1e-12;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(',', start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

class LineError {
public:
    LineError(const std::string& source, int line) : prefix_(source + ":" + std::to_string(line) + ": ") {}

    [[noreturn]] void fail(const std::string& message) const { throw ValidationError(prefix_ + message); }

    double number(std::string_view text, std::string_view key) const {
        double value = 0.0;
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
            fail("expected a number for '" + std::string(key) + "', got '" + std::string(text) + "'");
        }
        return value;
    }

    std::int64_t integer(std::string_view text, std::string_view key) const {
        std::int64_t value = 0;
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (text.empty() || ec != std::errc{} || ptr != end) {
            fail("expected an integer for '" + std::string(key) + "', got '" + std::string(text) + "'");
        }
        return value;
    }

    bool boolean(std::string_view text, std::string_view key) const {
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        fail("expected true/false for '" + std::string(key) + "', got '" + std::string(text) + "'");
    }

private:
    std::string prefix_;
};

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

double snap_fraction(double f) {
    if (f < kFractionSnap) return 0.0;
    if (f > 1.0 - kFractionSnap) return 1.0;
    return f;
}

}  // namespace

void ItemSpec::validate() const {
    if (!(length > 0.0)) throw ValidationError("items.length must be positive");
    if (!(width > 0.0)) throw ValidationError("items.width must be positive");
    if (!(height > 0.0)) throw ValidationError("items.height must be positive");
    if (!(mass > 0.0)) throw ValidationError("items.mass must be positive");
}

void ModelParams::validate() const {
    if (!(belt_speed >= 0.0)) throw ValidationError("model.belt_speed must be non-negative");
    if (!(eps_factor >= 0.0)) throw ValidationError("model.eps_factor must be non-negative");
    if (!(sigma > 0.0)) throw ValidationError("model.sigma must be positive");
    if (!(h > 0.0)) throw ValidationError("model.h must be positive");
}

std::vector<Placement> Scenario::all_placements() const {
    std::vector<Placement> out = placements;
    if (scatter) {
        const auto extra = scatter_items(*scatter, item);
        out.insert(out.end(), extra.begin(), extra.end());
    }
    return out;
}

void Scenario::validate() const {
    scene.validate();
    item.validate();
    model.validate();
    solver.validate();
}

double compute_rho_max(const ItemSpec& spec) { return spec.width / (spec.length * spec.length); }

std::vector<Placement> scatter_items(const ScatterSpec& spec, const ItemSpec& item) {
    if (spec.count < 0) throw ValidationError("placements.scatter_count must be non-negative");
    if (spec.count == 0) return {};
    const double footprint = std::max(item.length, item.width);
    if (!(spec.pitch >= footprint)) throw ValidationError("placements.scatter_pitch must be at least the item side");
    if (!(spec.jitter >= 0.0) || 2.0 * spec.jitter > spec.pitch - footprint + 1e-12) {
        throw ValidationError("placements.scatter_jitter must lie in [0, (pitch - item side) / 2]");
    }
    const int cols = static_cast<int>(std::floor((spec.x_max - spec.x_min) / spec.pitch + 1e-9));
    const int rows = static_cast<int>(std::floor((spec.y_max - spec.y_min) / spec.pitch + 1e-9));
    if (cols <= 0 || rows <= 0 || static_cast<long>(cols) * rows < spec.count) {
        throw ValidationError("placements: scatter region holds " + std::to_string(std::max(0, cols) * std::max(0, rows)) +
                              " slots, fewer than scatter_count = " + std::to_string(spec.count));
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<int> slots(static_cast<std::size_t>(cols * rows));
    for (std::size_t k = 0; k < slots.size(); ++k) slots[k] = static_cast<int>(k);
    for (std::size_t k = slots.size() - 1; k > 0; --k) {
        std::swap(slots[k], slots[static_cast<std::size_t>(rng() % (k + 1))]);
    }
    slots.resize(static_cast<std::size_t>(spec.count));
    std::sort(slots.begin(), slots.end());

    std::vector<Placement> out;
    out.reserve(slots.size());
    for (int slot : slots) {
        const int c = slot % cols;
        const int r = slot / cols;
        const double jx = (2.0 * uniform01(rng) - 1.0) * spec.jitter;
        const double jy = (2.0 * uniform01(rng) - 1.0) * spec.jitter;
        out.push_back({{spec.x_min + (c + 0.5) * spec.pitch + jx, spec.y_min + (r + 0.5) * spec.pitch + jy}, 0.0});
    }
    return out;
}

DensityField rasterize_initial_density(const std::vector<Placement>& placements, const ItemSpec& spec,
                                       const CellMask& mask) {
    spec.validate();
    const GridSpec& g = mask.grid;
    const double tol = 1e-9 * std::min(spec.length, spec.width);
    for (std::size_t a = 0; a < placements.size(); ++a) {
        for (std::size_t b = a + 1; b < placements.size(); ++b) {
            const Vec2 pa = placements[a].center;
            const Vec2 pb = placements[b].center;
            if (std::abs(pa.x - pb.x) < spec.length - tol && std::abs(pa.y - pb.y) < spec.width - tol) {
                throw ValidationError("placements: item " + std::to_string(a) + " overlaps item " + std::to_string(b));
            }
        }
    }

    DensityField rho(g.nx, g.ny, 0.0);
    for (std::size_t k = 0; k < placements.size(); ++k) {
        const Vec2 c = placements[k].center;
        const double x0 = c.x - 0.5 * spec.length;
        const double x1 = c.x + 0.5 * spec.length;
        const double y0 = c.y - 0.5 * spec.width;
        const double y1 = c.y + 0.5 * spec.width;
        const int i0 = static_cast<int>(std::floor((x0 - g.origin.x) / g.dx));
        const int i1 = static_cast<int>(std::floor((x1 - g.origin.x) / g.dx));
        const int j0 = static_cast<int>(std::floor((y0 - g.origin.y) / g.dy));
        const int j1 = static_cast<int>(std::floor((y1 - g.origin.y) / g.dy));
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                const double cx0 = g.origin.x + i * g.dx;
                const double cy0 = g.origin.y + j * g.dy;
                const double fx = snap_fraction(overlap(x0, x1, cx0, cx0 + g.dx) / g.dx);
                const double fy = snap_fraction(overlap(y0, y1, cy0, cy0 + g.dy) / g.dy);
                const double f = fx * fy;
                if (f == 0.0) continue;
                if (i < 0 || j < 0 || i >= g.nx || j >= g.ny || !mask.is_fluid(i, j)) {
                    throw ValidationError("placements: item " + std::to_string(k) +
                                          " overlaps a wall, the diverter or the outflow edge");
                }
                rho(i, j) += f;
            }
        }
    }
    return rho;
}

double compute_mass_scale(const DensityField& rho0, int item_count, const ItemSpec& spec, const GridSpec& grid) {
    if (item_count == 0) return 0.0;
    double integral = 0.0;
    for (double v : rho0.data()) integral += v;
    integral *= grid.cell_area();
    if (!(integral > 0.0)) throw ValidationError("initial density is empty but " + std::to_string(item_count) + " items were requested");
    return item_count * spec.mass / integral;
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
    Scenario sc;
    ScatterSpec scatter;
    bool scatter_given = false;
    bool diverter_length_given = false;
    bool dy_given = false;
    bool angle_warned = false;
    std::string section;

    using Setter = std::function<void(std::string_view, const LineError&, std::string_view)>;
    auto num = [](double& dst) -> Setter {
        return [&dst](std::string_view v, const LineError& e, std::string_view k) { dst = e.number(v, k); };
    };
    const std::map<std::string, std::map<std::string, Setter>> keys = {
        {"scene",
         {{"belt_length", num(sc.scene.belt_length)},
          {"belt_width", num(sc.scene.belt_width)},
          {"downstream_length", num(sc.scene.downstream_length)},
          {"diverter",
           [&](std::string_view v, const LineError& e, std::string_view) {
               if (v == "upper") sc.scene.diverter_side = DiverterSide::upper;
               else if (v == "lower") sc.scene.diverter_side = DiverterSide::lower;
               else if (v == "none") sc.scene.diverter_side = DiverterSide::none;
               else e.fail("diverter must be one of upper, lower, none");
           }},
          {"diverter_angle_deg", num(sc.scene.diverter_angle_deg)},
          {"diverter_anchor_y", num(sc.scene.diverter_anchor.y)},
          {"diverter_length",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               sc.scene.diverter_length = e.number(v, k);
               diverter_length_given = true;
           }}}},
        {"items",
         {{"length", num(sc.item.length)},
          {"width", num(sc.item.width)},
          {"height", num(sc.item.height)},
          {"mass", num(sc.item.mass)}}},
        {"model",
         {{"belt_speed", num(sc.model.belt_speed)},
          {"eps_factor", num(sc.model.eps_factor)},
          {"sigma", num(sc.model.sigma)},
          {"h", num(sc.model.h)}}},
        {"solver",
         {{"dx", num(sc.solver.dx)},
          {"dy",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               sc.solver.dy = e.number(v, k);
               dy_given = true;
           }},
          {"dt", num(sc.solver.dt)},
          {"horizon", num(sc.solver.horizon)},
          {"cfl_max", num(sc.solver.cfl_max)},
          {"probe_interval", num(sc.solver.probe_interval)},
          {"kernel_radius",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               sc.solver.kernel_radius = static_cast<int>(e.integer(v, k));
           }},
          {"reassemble_between_sweeps",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               sc.solver.reassemble_between_sweeps = e.boolean(v, k);
           }}}},
        {"placements",
         {{"scatter_count",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               scatter.count = static_cast<int>(e.integer(v, k));
               scatter_given = true;
           }},
          {"scatter_region",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               const auto parts = split_commas(v);
               if (parts.size() != 4) e.fail("scatter_region expects x_min, x_max, y_min, y_max");
               scatter.x_min = e.number(parts[0], k);
               scatter.x_max = e.number(parts[1], k);
               scatter.y_min = e.number(parts[2], k);
               scatter.y_max = e.number(parts[3], k);
           }},
          {"scatter_pitch", num(scatter.pitch)},
          {"scatter_jitter", num(scatter.jitter)},
          {"seed",
           [&](std::string_view v, const LineError& e, std::string_view k) {
               const auto s = e.integer(v, k);
               if (s < 0) e.fail("seed must be non-negative");
               scatter.seed = static_cast<std::uint64_t>(s);
           }}}},
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const LineError err(source, line_no);

        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') err.fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!keys.contains(section)) err.fail("unknown section [" + section + "]");
            continue;
        }
        if (section.empty()) err.fail("key outside of any section");

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            if (section != "placements") err.fail("expected 'key = value'");
            const auto parts = split_commas(line);
            if (parts.size() != 2 && parts.size() != 3) err.fail("placement expects 'x, y' or 'x, y, angle_deg'");
            Placement p{{err.number(parts[0], "x"), err.number(parts[1], "y")}, 0.0};
            if (parts.size() == 3) p.angle_deg = err.number(parts[2], "angle_deg");
            if (p.angle_deg != 0.0 && !angle_warned) {
                sc.warnings.push_back(source + ":" + std::to_string(line_no) +
                                      ": item rotation is ignored, items are modelled axis-aligned");
                angle_warned = true;
            }
            sc.placements.push_back(p);
            continue;
        }

        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto& table = keys.at(section);
        const auto it = table.find(key);
        if (it == table.end()) err.fail("unknown key '" + key + "' in [" + section + "]");
        it->second(value, err, key);
    }

    if (!dy_given) sc.solver.dy = sc.solver.dx;
    if (sc.scene.has_diverter() && !diverter_length_given) sc.scene.diverter_length = sc.scene.length_to_wall();
    if (scatter_given) sc.scatter = scatter;

    try {
        sc.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

Scenario reference_scenario(double diverter_angle_deg, std::uint64_t seed) {
    Scenario sc;
    sc.scene.diverter_angle_deg = diverter_angle_deg;
    sc.scene.diverter_length = sc.scene.length_to_wall();
    if (diverter_angle_deg > 52.5) sc.model.eps_factor = 7.5;
    sc.scatter = ScatterSpec{100, -1.77, -0.58, 0.02, 0.78, 0.09, 0.008, seed};
    sc.validate();
    return sc;
}

}  // namespace beltflow
