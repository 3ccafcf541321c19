// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_GEOMETRY_HPP
#define CGB_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgb/common.hpp"

namespace cgb {

enum class Topology { cylinder, planar };

/// Geometric parameters of a peg board. Lengths are in centimetres.
///
/// For a cylinder, `slots` angular positions of width delta_theta = d / R
/// tile the circle exactly. For a planar board `slots` is the bin count
/// (n + 1) and the angular fields are unused.
struct LatticeSpec {
    Topology topology = Topology::cylinder;
    double radius = 1.0;        // R
    std::int64_t slots = 1;     // M
    double delta_theta = two_pi;
    double arc_spacing = two_pi; // d
    double row_spacing = 1.0;    // h
    std::int64_t rows = 1;       // n
    double height = 1.0;         // H
    double peg_radius = 0.0;
    double ball_radius = 0.0;

    /// Cylinder with delta_theta = 2pi/M and d = R delta_theta.
    static LatticeSpec cylinder(double radius, std::int64_t slots, double row_spacing, std::int64_t rows,
                                double height, double peg_radius, double ball_radius) {
        LatticeSpec s;
        s.topology = Topology::cylinder;
        s.radius = radius;
        s.slots = slots;
        s.delta_theta = slots > 0 ? two_pi / static_cast<double>(slots) : 0.0;
        s.arc_spacing = radius * s.delta_theta;
        s.row_spacing = row_spacing;
        s.rows = rows;
        s.height = height;
        s.peg_radius = peg_radius;
        s.ball_radius = ball_radius;
        return s;
    }

    bool operator==(const LatticeSpec&) const = default;
};

struct ValidationReport {
    std::vector<std::string> warnings;
};

/// Checks the invariants of `spec`, throwing ValidationError naming the
/// first one violated. Ball clearance short by at most 5% is only a warning.
inline ValidationReport validate(const LatticeSpec& spec) {
    ValidationReport report;
    auto fail = [](const std::string& what) { throw ValidationError("LatticeSpec: " + what); };

    if (spec.rows < 0) {
        fail("n >= 0 required");
    }
    if (spec.topology == Topology::cylinder && spec.rows < 1) {
        fail("n >= 1 required");
    }
    if (spec.slots < 1) {
        fail("M >= 1 required");
    }
    for (auto [name, v] : {std::pair{"R", spec.radius}, {"d", spec.arc_spacing}, {"h", spec.row_spacing},
                           {"H", spec.height}, {"r_peg", spec.peg_radius}, {"r_ball", spec.ball_radius}}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(std::string("length ") + name + " must be > 0");
        }
    }
    if (spec.topology == Topology::cylinder) {
        double ratio = spec.arc_spacing / spec.radius;
        if (std::abs(spec.delta_theta - ratio) > 1e-12 * ratio) {
            fail("delta_theta = d / R violated");
        }
        double turn = static_cast<double>(spec.slots) * spec.delta_theta;
        if (std::abs(turn - two_pi) > 1e-12 * two_pi) {
            fail("M * delta_theta = 2pi violated");
        }
    } else if (spec.slots != spec.rows + 1) {
        fail("planar board needs M = n + 1 bins");
    }

    double gap = spec.arc_spacing - 2.0 * spec.peg_radius;
    double ball = 2.0 * spec.ball_radius;
    if (!(ball < gap)) {
        if (ball <= 1.05 * gap) {
            report.warnings.push_back("clearance 2 r_ball < d - 2 r_peg violated by <= 5%");
        } else {
            fail("clearance 2 r_ball < d - 2 r_peg violated");
        }
    }
    return report;
}

struct Peg {
    std::int64_t row = 0;
    std::int64_t col = 0;
    double theta = 0.0;
    double z = 0.0;
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Peg&) const = default;
};

/// Pegs in row i of a board. Cylinders hold min(M, i+1).
inline std::int64_t pegs_in_row(const LatticeSpec& spec, std::int64_t row) {
    if (spec.topology == Topology::planar) {
        return row + 1;
    }
    return std::min(spec.slots, row + 1);
}

/// Row-major (i, then j) peg list for rows 0..n-1.
///
/// Cylinder: theta = (j - i/2) delta_theta mod 2pi, (x, y) = R (cos, sin).
/// Planar: x = (j - i/2) d, y = 0 and theta = 0.
inline std::vector<Peg> build_lattice(const LatticeSpec& spec) {
    validate(spec);
    std::vector<Peg> pegs;
    for (std::int64_t i = 0; i < spec.rows; ++i) {
        double z = spec.height - static_cast<double>(i) * spec.row_spacing;
        std::int64_t count = pegs_in_row(spec, i);
        for (std::int64_t j = 0; j < count; ++j) {
            double offset = static_cast<double>(j) - 0.5 * static_cast<double>(i);
            Peg peg{.row = i, .col = j, .z = z};
            if (spec.topology == Topology::cylinder) {
                peg.theta = wrap_two_pi(offset * spec.delta_theta);
                peg.x = spec.radius * std::cos(peg.theta);
                peg.y = spec.radius * std::sin(peg.theta);
            } else {
                peg.x = offset * spec.arc_spacing;
            }
            pegs.push_back(peg);
        }
    }
    return pegs;
}

/// Expected angular law of a board: WB(n, M) on a cylinder, Bin(n) over
/// n + 1 bins on a planar board.
struct DistributionDescriptor {
    std::int64_t trials = 0;
    std::int64_t slots = 1;
    double p = 0.5;
    bool wrapped = true;
};

struct BoardPreset {
    std::string name;
    std::int64_t modules = 0;
    std::int64_t rows_per_module = 8;
    LatticeSpec spec;
    DistributionDescriptor expected_distribution;
    std::string description;
};

namespace detail {

// Physical board: 11.4 cm peg insertion board diameter, 24 slots, 1.02 cm
// rows, 8.3 cm modules plus 19.5 cm of non-peg height (61 cm at 5 modules).
inline BoardPreset module_preset(std::string name, std::int64_t modules, std::string description) {
    constexpr double module_height = 8.3;
    constexpr double frame_height = 19.5;
    BoardPreset preset;
    preset.name = std::move(name);
    preset.modules = modules;
    preset.rows_per_module = 8;
    preset.spec = LatticeSpec::cylinder(11.4 / 2.0, 24, 1.02, 8 * modules,
                                        module_height * static_cast<double>(modules) + frame_height, 0.1, 0.4);
    preset.expected_distribution = {.trials = 8 * modules, .slots = 24, .p = 0.5, .wrapped = true};
    preset.description = std::move(description);
    return preset;
}

} // namespace detail

/// Synthetic A4 board: 10 rows, 11 bins, d = 1 cm, h = 0.8 cm. The source
/// describes both 10 and 11 rows; 10 rows with 11 bins is used here.
inline BoardPreset planar_board(std::int64_t rows = 10) {
    if (rows < 0) {
        throw ValidationError("LatticeSpec: n >= 0 required");
    }
    BoardPreset preset;
    preset.name = "planar-a4";
    preset.modules = 0;
    preset.rows_per_module = 0;
    LatticeSpec& s = preset.spec;
    s.topology = Topology::planar;
    s.radius = 21.0 / two_pi; // short side of A4 wrapped into a cylinder
    s.slots = rows + 1;
    s.delta_theta = 0.0;
    s.arc_spacing = 1.0;
    s.row_spacing = 0.8;
    s.rows = rows;
    s.height = 29.7;
    s.peg_radius = 0.1;
    s.ball_radius = 0.25;
    preset.expected_distribution = {.trials = rows, .slots = rows + 1, .p = 0.5, .wrapped = false};
    preset.description = "planar A4 board, binomial over n+1 bins, no wrapping";
    return preset;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"modules-1",   "modules-1-2", "modules-1-3",
                                                   "modules-1-4", "modules-1-5", "modules-1-6",
                                                   "modules-1-9", "modules-1-12", "planar-a4"};
    return names;
}

inline BoardPreset preset(std::string_view name) {
    using detail::module_preset;
    if (name == "modules-1") return module_preset("modules-1", 1, "binomial n=8 on [-60deg, +60deg]");
    if (name == "modules-1-2") return module_preset("modules-1-2", 2, "binomial n=16 on [-120deg, +120deg]");
    if (name == "modules-1-3") return module_preset("modules-1-3", 3, "WB(24,24), full support");
    if (name == "modules-1-4") return module_preset("modules-1-4", 4, "WB(32,24), wrapping to +-120deg");
    if (name == "modules-1-5") return module_preset("modules-1-5", 5, "WB(40,24), wrapping to +-60deg");
    if (name == "modules-1-6") return module_preset("modules-1-6", 6, "WB(48,24), wrapping once around the circle");
    if (name == "modules-1-9") return module_preset("modules-1-9", 9, "WB(72,24), wrapping twice around the circle");
    if (name == "modules-1-12")
        return module_preset("modules-1-12", 12, "WB(96,24), wrapping three times around the circle");
    if (name == "planar-a4") return planar_board();
    throw LookupError("unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Export

enum class PegFormat { csv, json };

inline PegFormat parse_peg_format(std::string_view name) {
    if (name == "csv") return PegFormat::csv;
    if (name == "json") return PegFormat::json;
    throw LookupError("unsupported format '" + std::string(name) + "'");
}

inline void export_pegs(std::ostream& os, const std::vector<Peg>& pegs, PegFormat format) {
    if (format == PegFormat::csv) {
        os << "row,col,theta,z,x,y\n";
        for (const auto& p : pegs) {
            os << p.row << ',' << p.col << ',' << format_double(p.theta) << ',' << format_double(p.z) << ','
               << format_double(p.x) << ',' << format_double(p.y) << '\n';
        }
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : pegs) {
        arr.push_back({{"row", p.row}, {"col", p.col}, {"theta", p.theta}, {"z", p.z}, {"x", p.x}, {"y", p.y}});
    }
    nlohmann::ordered_json doc = {{"unit", "cm"}, {"count", pegs.size()}, {"pegs", arr}};
    os << doc.dump(2) << '\n';
}

inline std::vector<Peg> pegs_from_json(const nlohmann::json& doc) {
    std::vector<Peg> pegs;
    for (const auto& p : doc.at("pegs")) {
        pegs.push_back({p.at("row").get<std::int64_t>(), p.at("col").get<std::int64_t>(), p.at("theta").get<double>(),
                        p.at("z").get<double>(), p.at("x").get<double>(), p.at("y").get<double>()});
    }
    return pegs;
}

inline nlohmann::ordered_json to_json(const LatticeSpec& s) {
    return {{"topology", s.topology == Topology::cylinder ? "cylinder" : "planar"},
            {"unit", "cm"},
            {"R", s.radius},
            {"M", s.slots},
            {"delta_theta", s.delta_theta},
            {"d", s.arc_spacing},
            {"h", s.row_spacing},
            {"n", s.rows},
            {"H", s.height},
            {"r_peg", s.peg_radius},
            {"r_ball", s.ball_radius}};
}

} // namespace cgb

#endif // CGB_GEOMETRY_HPP
