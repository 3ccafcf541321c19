// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_WALK_SIM_HPP
#define CGB_WALK_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgb/common.hpp"
#include "cgb/rng.hpp"

namespace cgb {

/// Monte Carlo experiment. An empty `slots` selects a planar board with
/// n + 1 bins and no wrapping.
struct WalkConfig {
    std::int64_t rows = 0;              // n
    std::optional<std::int64_t> slots;  // M
    double p = 0.5;
    std::int64_t balls = 1;             // N
    std::uint64_t seed = 0;
    bool record_traces = false;
    double row_spacing = 1.02;          // h, only affects final_z
    unsigned threads = 1;               // 0 picks hardware concurrency

    bool planar() const noexcept { return !slots.has_value(); }

    std::int64_t bin_count() const { return planar() ? rows + 1 : *slots; }

    double delta_theta() const { return planar() ? 0.0 : two_pi / static_cast<double>(*slots); }

    void validate() const {
        if (balls < 1) throw ValidationError("WalkConfig: balls >= 1 required");
        if (rows < 0) throw ValidationError("WalkConfig: n >= 0 required");
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("WalkConfig: p must lie in [0, 1]");
        if (slots && *slots < 1) throw ValidationError("WalkConfig: M >= 1 required");
        if (!(row_spacing > 0.0)) throw ValidationError("WalkConfig: h > 0 required");
    }
};

struct BallTrace {
    std::vector<std::int8_t> steps; // xi_k in {-1, +1}
    std::int64_t final_s = 0;       // S_n
    double final_theta = 0.0;       // (S_n dtheta/2) mod 2pi; 0 on planar boards
    double final_z = 0.0;           // -n h
    std::int64_t bin = 0;           // X mod M, or X on planar boards
};

struct BinHistogram {
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;

    std::size_t slots() const noexcept { return counts.size(); }

    double frequency(std::size_t k) const {
        return static_cast<double>(counts.at(k)) / static_cast<double>(total);
    }

    bool operator==(const BinHistogram&) const = default;
};

struct SimulationResult {
    BinHistogram histogram;
    std::vector<BallTrace> traces; // empty unless record_traces
};

namespace detail {

/// Number of +1 steps for ball `index`, optionally recording the steps.
inline std::int64_t draw_walk(const WalkConfig& config, std::uint64_t index, std::vector<std::int8_t>* steps) {
    StreamRng rng(config.seed, index);
    std::int64_t rights = 0;
    for (std::int64_t k = 0; k < config.rows; ++k) {
        bool right = rng.next_unit() < config.p;
        rights += right ? 1 : 0;
        if (steps) {
            steps->push_back(right ? 1 : -1);
        }
    }
    return rights;
}

inline std::int64_t bin_of(const WalkConfig& config, std::int64_t rights) {
    return config.planar() ? rights : rights % *config.slots;
}

} // namespace detail

/// Trace of a single ball. The ball's randomness depends only on
/// (seed, ball_index).
inline BallTrace simulate_ball(const WalkConfig& config, std::int64_t ball_index) {
    config.validate();
    if (ball_index < 0 || ball_index >= config.balls) {
        throw DomainError("simulate_ball: ball_index out of range");
    }
    BallTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(config.rows));
    std::int64_t rights = detail::draw_walk(config, static_cast<std::uint64_t>(ball_index), &trace.steps);
    trace.final_s = 2 * rights - config.rows;
    trace.final_theta = config.planar() ? 0.0
                                        : wrap_two_pi(static_cast<double>(trace.final_s) * config.delta_theta() / 2.0);
    trace.final_z = -static_cast<double>(config.rows) * config.row_spacing;
    trace.bin = detail::bin_of(config, rights);
    return trace;
}

/// Drops every ball and bins the results. Balls are split into contiguous
/// blocks across worker threads; counts depend only on (seed, config).
inline SimulationResult simulate(const WalkConfig& config) {
    config.validate();
    const auto bins = static_cast<std::size_t>(config.bin_count());
    unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, config.balls));

    SimulationResult result;
    if (config.record_traces) {
        result.traces.resize(static_cast<std::size_t>(config.balls));
    }
    std::vector<std::vector<std::int64_t>> partial(workers, std::vector<std::int64_t>(bins, 0));

    auto run_block = [&](unsigned w) {
        const std::int64_t begin = config.balls * w / workers;
        const std::int64_t end = config.balls * (w + 1) / workers;
        auto& counts = partial[w];
        for (std::int64_t b = begin; b < end; ++b) {
            if (config.record_traces) {
                auto& trace = result.traces[static_cast<std::size_t>(b)];
                trace = simulate_ball(config, b);
                ++counts[static_cast<std::size_t>(trace.bin)];
            } else {
                std::int64_t rights = detail::draw_walk(config, static_cast<std::uint64_t>(b), nullptr);
                ++counts[static_cast<std::size_t>(detail::bin_of(config, rights))];
            }
        }
    };

    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run_block, w);
        }
    }

    result.histogram.counts.assign(bins, 0);
    for (const auto& counts : partial) {
        for (std::size_t k = 0; k < bins; ++k) {
            result.histogram.counts[k] += counts[k];
        }
    }
    result.histogram.total = config.balls;
    return result;
}

/// Histogram over X in {0..n} with no wrapping.
inline BinHistogram planar_histogram(WalkConfig config) {
    if (!config.planar()) {
        throw ValidationError("planar_histogram: config must be planar (no M)");
    }
    config.record_traces = false;
    return simulate(config).histogram;
}

struct UnwrappedStats {
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance
    std::int64_t count = 0;
};

/// Sample moments of S_n dtheta/2 with dtheta = 2pi/M. `slots` empty
/// reports raw S_n / 2 units (dtheta = 1) for planar runs.
inline UnwrappedStats unwrapped_stats(std::span<const BallTrace> traces, std::optional<std::int64_t> slots) {
    if (traces.empty()) {
        throw DomainError("unwrapped_stats: no traces");
    }
    const double dtheta = slots ? two_pi / static_cast<double>(*slots) : 1.0;
    // Welford
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t count = 0;
    for (const auto& t : traces) {
        double v = static_cast<double>(t.final_s) * dtheta / 2.0;
        ++count;
        double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    return {mean, count > 1 ? m2 / static_cast<double>(count - 1) : 0.0, count};
}

inline void write_csv(std::ostream& os, const BinHistogram& h) {
    os << "slot,count,frequency\n";
    for (std::size_t k = 0; k < h.slots(); ++k) {
        os << k << ',' << h.counts[k] << ',' << format_double(h.frequency(k)) << '\n';
    }
}

inline nlohmann::ordered_json to_json(const BinHistogram& h) {
    nlohmann::ordered_json bins = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < h.slots(); ++k) {
        bins.push_back({{"slot", k}, {"count", h.counts[k]}, {"frequency", h.frequency(k)}});
    }
    return {{"M", h.slots()}, {"total", h.total}, {"bins", bins}};
}

inline nlohmann::ordered_json to_json(const WalkConfig& c) {
    nlohmann::ordered_json j = {{"n", c.rows}};
    j["M"] = c.slots ? nlohmann::ordered_json(*c.slots) : nlohmann::ordered_json(nullptr);
    j["planar"] = c.planar();
    j["p"] = c.p;
    j["balls"] = c.balls;
    j["seed"] = c.seed;
    return j;
}

} // namespace cgb

#endif // CGB_WALK_SIM_HPP
