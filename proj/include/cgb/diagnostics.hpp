// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_DIAGNOSTICS_HPP
#define CGB_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "cgb/angular_pmf.hpp"
#include "cgb/walk_sim.hpp"
#include "cgb/wrapped_binomial.hpp"
#include "cgb/wrapped_normal.hpp"

namespace cgb {

struct ComparisonReport {
    double tv = 0.0;
    double kl = 0.0; // nats; +inf if the empirical has mass where theory has none
    double chi2 = 0.0;
    std::int64_t dof = 1;
    double p_value = 1.0;
    std::int64_t cells = 0; // after pooling
};

/// Upper tail of the chi-square distribution, Q(dof/2, x/2).
inline double chi_square_sf(double x, double dof) {
    if (x <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

struct PooledCells {
    std::vector<double> expected;
    std::vector<double> observed;
};

/// Merges cells, in cyclic order, until each has expected count >= 5 (or a
/// single cell remains). The smallest offending cell always joins its
/// smaller cyclic neighbour, ties going to the next index.
inline PooledCells pool_cells(std::vector<double> expected, std::vector<double> observed) {
    while (expected.size() > 1) {
        std::size_t worst = expected.size();
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (expected[k] < 5.0 && (worst == expected.size() || expected[k] < expected[worst])) {
                worst = k;
            }
        }
        if (worst == expected.size()) {
            break;
        }
        const std::size_t m = expected.size();
        std::size_t next = (worst + 1) % m;
        std::size_t prev = (worst + m - 1) % m;
        std::size_t into = expected[prev] < expected[next] ? prev : next;
        expected[into] += expected[worst];
        observed[into] += observed[worst];
        expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(worst));
        observed.erase(observed.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    return {std::move(expected), std::move(observed)};
}

inline ComparisonReport compare(const BinHistogram& empirical, const AngularPMF& theoretical) {
    if (empirical.slots() != theoretical.slots()) {
        throw DomainError("compare: histogram has " + std::to_string(empirical.slots()) +
                          " slots, distribution has " + std::to_string(theoretical.slots()));
    }
    if (empirical.total < 1) {
        throw DomainError("compare: empty histogram");
    }
    theoretical.validate(1e-9);
    const std::size_t m = empirical.slots();
    const auto total = static_cast<double>(empirical.total);

    ComparisonReport report;
    std::vector<double> freq(m);
    for (std::size_t k = 0; k < m; ++k) {
        freq[k] = static_cast<double>(empirical.counts[k]) / total;
    }
    report.tv = total_variation(freq, theoretical.probs());

    // KL(empirical || theoretical), smoothing empty empirical cells by 1/(10N)
    const double eps = 1.0 / (10.0 * total);
    std::vector<double> smoothed = freq;
    for (std::size_t k = 0; k < m; ++k) {
        if (empirical.counts[k] == 0 && theoretical[k] > 0.0) {
            smoothed[k] = eps;
        }
    }
    double norm = 0.0;
    for (double v : smoothed) norm += v;
    report.kl = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double e = smoothed[k] / norm;
        if (e == 0.0) continue;
        if (theoretical[k] == 0.0) {
            report.kl = std::numeric_limits<double>::infinity();
            break;
        }
        report.kl += e * std::log(e / theoretical[k]);
    }

    std::vector<double> expected(m);
    std::vector<double> observed(m);
    for (std::size_t k = 0; k < m; ++k) {
        expected[k] = total * theoretical[k];
        observed[k] = static_cast<double>(empirical.counts[k]);
    }
    auto pooled = pool_cells(std::move(expected), std::move(observed));
    report.cells = static_cast<std::int64_t>(pooled.expected.size());
    report.chi2 = 0.0;
    for (std::size_t k = 0; k < pooled.expected.size(); ++k) {
        double diff = pooled.observed[k] - pooled.expected[k];
        report.chi2 += diff * diff / pooled.expected[k];
    }
    report.dof = std::max<std::int64_t>(1, report.cells - 1);
    report.p_value = report.cells > 1 ? chi_square_sf(report.chi2, static_cast<double>(report.dof)) : 1.0;
    return report;
}

/// WN limit of WB(n, M, p) expressed in the X-slot frame of full_pmf: the
/// centred mean rotated by (n + 1) dtheta/2 so each lattice point sits at
/// its slot's centre.
inline WrappedNormal slot_frame_limit(std::int64_t trials, std::int64_t slots, double p) {
    auto lp = limit_params(trials, slots, p);
    return WrappedNormal(lp.mu + centred_rotation(trials, slots), lp.sigma2);
}

/// TV between WB(n, M, p) and the binned wrapped normal limit.
inline double tv_to_wrapped_normal(const WrappedBinomial& wb) {
    auto wn = slot_frame_limit(wb.trials(), wb.slots(), wb.p());
    return total_variation(full_pmf(wb), bin_probs(wn, wb.slots()));
}

struct SweepRow {
    std::int64_t n = 0;
    double tv_uniform = 0.0;
    double tv_wn = 0.0;
};

struct SweepResult {
    std::int64_t slots = 0;
    double p = 0.5;
    std::vector<SweepRow> rows; // ascending n
};

inline SweepResult sweep_uniformity(std::int64_t slots, double p, std::vector<std::int64_t> n_list) {
    if (n_list.empty()) {
        throw DomainError("sweep_uniformity: n_list must be nonempty");
    }
    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
    SweepResult result{slots, p, {}};
    for (std::int64_t n : n_list) {
        WrappedBinomial wb(n, slots, p);
        SweepRow row{n, tv_to_uniform(wb), std::numeric_limits<double>::quiet_NaN()};
        if (n >= 1 && p > 0.0 && p < 1.0) {
            row.tv_wn = tv_to_wrapped_normal(wb);
        }
        result.rows.push_back(row);
    }
    return result;
}

inline void write_csv(std::ostream& os, const SweepResult& s) {
    os << "n,tv_uniform,tv_wn\n";
    for (const auto& r : s.rows) {
        os << r.n << ',' << format_double(r.tv_uniform) << ',' << (std::isnan(r.tv_wn) ? "nan" : format_double(r.tv_wn))
           << '\n';
    }
}

struct DriftReport {
    double expected_mean = 0.0;
    double expected_variance = 0.0;
    double sample_mean = 0.0;
    double sample_variance = 0.0;
    double mean_z = 0.0;
    double variance_z = 0.0;
    double variance_rel_error = 0.0;
    std::int64_t count = 0;
};

/// Compares the unwrapped displacement S_n dtheta/2 with its exact mean
/// n(2p - 1) dtheta/2 and variance n p (1 - p) dtheta^2.
inline DriftReport drift_check(const WalkConfig& config, std::span<const BallTrace> traces) {
    if (config.planar()) {
        throw DomainError("drift_check: needs a cylindrical config");
    }
    auto stats = unwrapped_stats(traces, config.slots);
    const double dtheta = config.delta_theta();
    const auto n = static_cast<double>(config.rows);
    const double p = config.p;
    const double q = 1.0 - p;
    const auto count = static_cast<double>(stats.count);

    DriftReport r;
    r.count = stats.count;
    r.expected_mean = n * (2.0 * p - 1.0) * dtheta / 2.0;
    r.expected_variance = n * p * q * dtheta * dtheta;
    r.sample_mean = stats.mean;
    r.sample_variance = stats.variance;
    if (r.expected_variance > 0.0) {
        r.mean_z = (stats.mean - r.expected_mean) / std::sqrt(r.expected_variance / count);
        // displacement is (X - n/2) dtheta, so its fourth central moment is
        // the binomial one scaled by dtheta^4
        const double mu4 = n * p * q * (1.0 + 3.0 * (n - 2.0) * p * q) * std::pow(dtheta, 4);
        const double sigma4 = r.expected_variance * r.expected_variance;
        const double var_of_s2 = (mu4 - sigma4 * (count - 3.0) / (count - 1.0)) / count;
        r.variance_z = var_of_s2 > 0.0 ? (stats.variance - r.expected_variance) / std::sqrt(var_of_s2) : 0.0;
        r.variance_rel_error = (stats.variance - r.expected_variance) / r.expected_variance;
    }
    return r;
}

inline nlohmann::ordered_json to_json(const ComparisonReport& r) {
    nlohmann::ordered_json j = {{"tv", r.tv}};
    j["kl"] = std::isinf(r.kl) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(r.kl);
    j["chi2"] = r.chi2;
    j["dof"] = r.dof;
    j["p_value"] = r.p_value;
    j["cells"] = r.cells;
    return j;
}

inline nlohmann::ordered_json to_json(const DriftReport& r) {
    return {{"count", r.count},
            {"expected_mean", r.expected_mean},
            {"expected_variance", r.expected_variance},
            {"sample_mean", r.sample_mean},
            {"sample_variance", r.sample_variance},
            {"mean_z", r.mean_z},
            {"variance_z", r.variance_z},
            {"variance_rel_error", r.variance_rel_error}};
}

} // namespace cgb

#endif // CGB_DIAGNOSTICS_HPP
