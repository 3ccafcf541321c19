// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_CLI_HPP
#define CGB_CLI_HPP

// Command implementations behind the `cgb` executable. Each command writes
// its data to --out (or the supplied stream) and, when writing to a file,
// a RunManifest next to it as <out>.manifest.json.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgb/angular_pmf.hpp"
#include "cgb/diagnostics.hpp"
#include "cgb/geometry.hpp"
#include "cgb/svg.hpp"
#include "cgb/walk_sim.hpp"
#include "cgb/wrapped_binomial.hpp"
#include "cgb/wrapped_normal.hpp"

namespace cgb::cli {

inline constexpr const char* tool_version = "0.1.0";

enum class Format { csv, json };

inline Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw LookupError("unsupported format '" + name + "'");
}

struct RunManifest {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::string version = tool_version;

    nlohmann::ordered_json to_json() const {
        return {{"command", command}, {"config", config}, {"seed", seed}, {"outputs", outputs},
                {"tool_version", version}};
    }
};

struct CommonOptions {
    std::optional<std::filesystem::path> out;
    std::string format = "csv";
    std::uint64_t seed = 0;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    f << content;
    if (!f) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

/// Routes command output to a file or to `stream`, recording files in the manifest.
class Sink {
public:
    Sink(const CommonOptions& common, std::ostream& stream, RunManifest& manifest)
        : common_(common), stream_(stream), manifest_(manifest) {}

    void emit(const std::optional<std::filesystem::path>& path, const std::string& content) {
        if (path) {
            write_file(*path, content);
            manifest_.outputs.push_back(path->string());
        } else {
            stream_ << content;
        }
    }

    void primary(const std::string& content) { emit(common_.out, content); }

    void finish() {
        manifest_.seed = common_.seed;
        if (common_.out) {
            std::filesystem::path mpath = common_.out->string() + ".manifest.json";
            manifest_.outputs.push_back(mpath.string());
            write_file(mpath, manifest_.to_json().dump(2) + "\n");
        }
    }

private:
    const CommonOptions& common_;
    std::ostream& stream_;
    RunManifest& manifest_;
};

inline std::string moments_comment(const TrigMoments& m) {
    return "# alpha1=" + format_double(m.alpha1) + "\n# beta1=" + format_double(m.beta1) + "\n# rho=" +
           format_double(m.rho) + "\n# mu=" + format_double(m.mu) + "\n";
}

inline nlohmann::ordered_json to_json(const TrigMoments& m) {
    return {{"alpha1", m.alpha1}, {"beta1", m.beta1}, {"rho", m.rho}, {"mu", m.mu}};
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace detail

// ---------------------------------------------------------------------------
// lattice

struct LatticeOptions {
    CommonOptions common;
    std::optional<std::string> preset;
    std::int64_t slots = 24;
    std::int64_t rows = 1;
    std::optional<double> radius;
    std::optional<double> arc_spacing;
    double row_spacing = 1.02;
    std::optional<double> height;
    double peg_radius = 0.1;
    double ball_radius = 0.4;
};

/// Explicit cylinder parameters; R or d may be omitted and is then derived
/// from the other through d = 2pi R / M.
inline LatticeSpec lattice_spec_from(const LatticeOptions& o) {
    if (o.slots < 1) {
        throw ValidationError("LatticeSpec: M >= 1 required");
    }
    LatticeSpec s;
    s.topology = Topology::cylinder;
    s.slots = o.slots;
    s.delta_theta = two_pi / static_cast<double>(o.slots);
    if (o.radius && o.arc_spacing) {
        s.radius = *o.radius;
        s.arc_spacing = *o.arc_spacing;
        s.delta_theta = s.arc_spacing / s.radius;
    } else if (o.arc_spacing) {
        s.arc_spacing = *o.arc_spacing;
        s.radius = s.arc_spacing / s.delta_theta;
    } else {
        s.radius = o.radius.value_or(5.7);
        s.arc_spacing = s.radius * s.delta_theta;
    }
    s.row_spacing = o.row_spacing;
    s.rows = o.rows;
    s.height = o.height.value_or(static_cast<double>(o.rows) * o.row_spacing);
    s.peg_radius = o.peg_radius;
    s.ball_radius = o.ball_radius;
    return s;
}

inline RunManifest cmd_lattice(const LatticeOptions& o, std::ostream& stream = std::cout) {
    RunManifest manifest;
    manifest.command = "lattice";
    LatticeSpec spec = o.preset ? preset(*o.preset).spec : lattice_spec_from(o);
    auto report = validate(spec);
    for (const auto& w : report.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    auto pegs = build_lattice(spec);
    std::ostringstream data;
    export_pegs(data, pegs, parse_peg_format(o.common.format));

    manifest.config = {{"preset", o.preset ? nlohmann::ordered_json(*o.preset) : nlohmann::ordered_json(nullptr)},
                       {"format", o.common.format},
                       {"spec", to_json(spec)},
                       {"pegs", pegs.size()}};
    detail::Sink sink(o.common, stream, manifest);
    sink.primary(data.str());
    sink.finish();
    return manifest;
}

// ---------------------------------------------------------------------------
// pmf

struct PmfOptions {
    CommonOptions common;
    std::int64_t trials = 8;
    std::int64_t slots = 24;
    double p = 0.5;
    bool moments = false;
    bool centered = false;
};

inline RunManifest cmd_pmf(const PmfOptions& o, std::ostream& stream = std::cout) {
    RunManifest manifest;
    manifest.command = "pmf";
    WrappedBinomial wb(o.trials, o.slots, o.p);
    auto dist = full_pmf(wb);
    SlotLabelling labels;
    if (o.centered) {
        labels.rotation = centred_rotation(o.trials, o.slots);
    }
    std::ostringstream data;
    if (parse_format(o.common.format) == Format::csv) {
        write_csv(data, dist, labels);
        if (o.moments) {
            data << detail::moments_comment(trig_moments(wb));
        }
    } else {
        auto j = to_json(dist, labels);
        j["n"] = o.trials;
        j["p"] = o.p;
        if (o.moments) {
            j["moments"] = detail::to_json(trig_moments(wb));
        }
        data << j.dump(2) << '\n';
    }
    manifest.config = {{"n", o.trials}, {"M", o.slots},         {"p", o.p},
                       {"moments", o.moments}, {"centered", o.centered}, {"format", o.common.format}};
    detail::Sink sink(o.common, stream, manifest);
    sink.primary(data.str());
    sink.finish();
    return manifest;
}

// ---------------------------------------------------------------------------
// wn

struct WnOptions {
    CommonOptions common;
    double mu = 0.0;
    double sigma = 0.7;
    std::int64_t slots = 24;
    std::size_t samples = 720;
    std::optional<std::filesystem::path> bins_out;
    bool centered = false;
};

inline RunManifest cmd_wn(const WnOptions& o, std::ostream& stream = std::cout) {
    RunManifest manifest;
    manifest.command = "wn";
    auto wn = WrappedNormal::from_sigma(o.mu, o.sigma);
    if (o.samples < 1) {
        throw ValidationError("wn: --samples >= 1 required");
    }
    auto samples = sample_density(wn, o.samples);
    auto bins = bin_probs(wn, o.slots);
    SlotLabelling labels;
    if (o.centered) {
        labels.rotation = 0.0;
    }
    manifest.config = {{"mu", o.mu},           {"sigma", o.sigma},         {"M", o.slots},
                       {"samples", o.samples}, {"centered", o.centered}, {"format", o.common.format}};
    detail::Sink sink(o.common, stream, manifest);

    if (parse_format(o.common.format) == Format::json) {
        nlohmann::ordered_json density = nlohmann::ordered_json::array();
        for (const auto& s : samples) {
            density.push_back({{"theta", s.theta}, {"f", s.f}});
        }
        nlohmann::ordered_json j = {{"mu", wn.mu()}, {"sigma2", wn.sigma2()}, {"density", density},
                                    {"bins", to_json(bins, labels)}};
        sink.primary(j.dump(2) + "\n");
    } else {
        std::ostringstream dens;
        write_density_csv(dens, samples);
        std::ostringstream bin_text;
        write_csv(bin_text, bins, labels);
        auto bins_path = o.bins_out;
        if (!bins_path && o.common.out) {
            bins_path = o.common.out->string() + ".bins.csv";
        }
        if (bins_path) {
            sink.primary(dens.str());
            sink.emit(bins_path, bin_text.str());
        } else {
            sink.primary(dens.str() + "\n" + bin_text.str());
        }
    }
    sink.finish();
    return manifest;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    CommonOptions common;
    std::int64_t rows = 40;
    std::int64_t slots = 24;
    double p = 0.5;
    std::int64_t balls = 2000;
    bool planar = false;
    unsigned threads = 1;
    std::optional<std::string> compare; // "exact" or "wn"
    bool stats = false;
};

inline RunManifest cmd_simulate(const SimulateOptions& o, std::ostream& stream = std::cout) {
    RunManifest manifest;
    manifest.command = "simulate";
    WalkConfig config;
    config.rows = o.rows;
    if (!o.planar) {
        config.slots = o.slots;
    }
    config.p = o.p;
    config.balls = o.balls;
    config.seed = o.common.seed;
    config.threads = o.threads;
    config.record_traces = o.stats;
    auto run = simulate(config);
    const std::int64_t bins = config.bin_count();

    std::optional<ComparisonReport> report;
    if (o.compare) {
        AngularPMF theory;
        if (*o.compare == "exact") {
            theory = full_pmf(WrappedBinomial(o.rows, bins, o.p));
        } else if (*o.compare == "wn") {
            if (o.planar) {
                throw ValidationError("simulate: --compare wn needs a cylindrical board");
            }
            theory = bin_probs(slot_frame_limit(o.rows, bins, o.p), bins);
        } else {
            throw LookupError("unknown comparison '" + *o.compare + "' (expected exact or wn)");
        }
        report = compare(run.histogram, theory);
    }
    std::optional<UnwrappedStats> stats;
    if (o.stats) {
        stats = unwrapped_stats(run.traces, config.slots);
    }

    manifest.config = to_json(config);
    manifest.config["compare"] = o.compare ? nlohmann::ordered_json(*o.compare) : nlohmann::ordered_json(nullptr);
    manifest.config["format"] = o.common.format;

    std::ostringstream data;
    if (parse_format(o.common.format) == Format::csv) {
        write_csv(data, run.histogram);
        if (report) {
            data << "# tv=" << format_double(report->tv) << "\n# kl=" << format_double(report->kl)
                 << "\n# chi2=" << format_double(report->chi2) << "\n# dof=" << report->dof
                 << "\n# p_value=" << format_double(report->p_value) << '\n';
        }
        if (stats) {
            data << "# unwrapped_mean=" << format_double(stats->mean)
                 << "\n# unwrapped_variance=" << format_double(stats->variance) << '\n';
        }
    } else {
        nlohmann::ordered_json j = {{"config", to_json(config)}, {"seed", config.seed}, {"total", run.histogram.total},
                                    {"histogram", to_json(run.histogram)}};
        if (report) {
            j["comparison"] = to_json(*report);
        }
        if (stats) {
            j["unwrapped_stats"] = {{"mean", stats->mean}, {"variance", stats->variance}, {"count", stats->count}};
        }
        data << j.dump(2) << '\n';
    }
    detail::Sink sink(o.common, stream, manifest);
    sink.primary(data.str());
    sink.finish();
    return manifest;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    CommonOptions common;
    std::int64_t slots = 24;
    double p = 0.5;
    std::vector<std::int64_t> n_list = {8, 16, 24, 40, 100, 400};
};

inline RunManifest cmd_sweep(const SweepOptions& o, std::ostream& stream = std::cout) {
    RunManifest manifest;
    manifest.command = "sweep";
    auto result = sweep_uniformity(o.slots, o.p, o.n_list);
    std::ostringstream data;
    if (parse_format(o.common.format) == Format::csv) {
        write_csv(data, result);
    } else {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : result.rows) {
            rows.push_back({{"n", r.n}, {"tv_uniform", r.tv_uniform},
                            {"tv_wn", std::isnan(r.tv_wn) ? nlohmann::ordered_json(nullptr)
                                                          : nlohmann::ordered_json(r.tv_wn)}});
        }
        data << nlohmann::ordered_json({{"M", o.slots}, {"p", o.p}, {"rows", rows}}).dump(2) << '\n';
    }
    manifest.config = {{"M", o.slots}, {"p", o.p}, {"n", o.n_list}, {"format", o.common.format}};
    detail::Sink sink(o.common, stream, manifest);
    sink.primary(data.str());
    sink.finish();
    return manifest;
}

// ---------------------------------------------------------------------------
// plot

struct PlotOptions {
    CommonOptions common;
    std::vector<std::filesystem::path> inputs;
    std::string style = "ring";
};

/// Either slot records or density samples, detected from the content.
struct PlotInput {
    std::vector<SlotRecord> slots;
    std::vector<DensitySample> density;
    bool is_density = false;
};

inline PlotInput parse_plot_input(const std::string& text) {
    PlotInput in;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            // byte offset -> line number
            auto upto = std::min<std::size_t>(e.byte, text.size());
            auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
            throw ParseError(line, "invalid JSON");
        }
        if (j.contains("slots")) {
            in.slots = slot_records_from_json(j);
        } else if (j.contains("density")) {
            for (const auto& s : j.at("density")) {
                in.density.push_back({s.at("theta").get<double>(), s.at("f").get<double>()});
            }
            in.is_density = true;
        } else {
            throw ParseError(1, "JSON input has neither 'slots' nor 'density'");
        }
        return in;
    }
    // first non-comment line decides the schema
    std::istringstream probe(text);
    std::string line;
    while (std::getline(probe, line) && (line.empty() || line.front() == '#')) {
    }
    cgb::detail::strip_cr(line);
    std::istringstream is(text);
    if (line == "theta,f") {
        in.density = read_density_csv(is);
        in.is_density = true;
    } else {
        in.slots = read_slot_records(is);
    }
    return in;
}

inline RunManifest cmd_plot(const PlotOptions& o, std::ostream& stream = std::cout) {
    RunManifest manifest;
    manifest.command = "plot";
    if (o.inputs.empty()) {
        throw ValidationError("plot: at least one --input required");
    }
    std::vector<PlotInput> inputs;
    for (const auto& path : o.inputs) {
        try {
            inputs.push_back(parse_plot_input(detail::read_text(path)));
        } catch (const ParseError& e) {
            throw ParseError(e.line(), path.string() + ": " + e.what());
        }
    }
    std::string svg_text;
    if (o.style == "ring") {
        std::vector<std::vector<SlotRecord>> rings;
        for (const auto& in : inputs) {
            if (in.is_density) {
                throw ValidationError("plot: ring style needs slot probabilities, got density samples");
            }
            rings.push_back(in.slots);
        }
        svg_text = svg::ring_plot(rings);
    } else if (o.style == "cylinder") {
        if (inputs.size() != 1 || !inputs.front().is_density) {
            throw ValidationError("plot: cylinder style needs exactly one density-sample input");
        }
        svg_text = svg::cylinder_plot(inputs.front().density);
    } else {
        throw LookupError("unknown plot style '" + o.style + "' (expected ring or cylinder)");
    }
    nlohmann::ordered_json input_list = nlohmann::ordered_json::array();
    for (const auto& p : o.inputs) {
        input_list.push_back(p.string());
    }
    manifest.config = {{"style", o.style}, {"inputs", input_list}};
    detail::Sink sink(o.common, stream, manifest);
    sink.primary(svg_text);
    sink.finish();
    return manifest;
}

} // namespace cgb::cli

#endif // CGB_CLI_HPP
