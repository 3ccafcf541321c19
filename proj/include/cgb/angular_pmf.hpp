// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_ANGULAR_PMF_HPP
#define CGB_ANGULAR_PMF_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <iosfwd>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgb/common.hpp"

namespace cgb {

/// Probability vector over M equal angular slots. Slot k (0-based) covers
/// [2pi k/M, 2pi (k+1)/M).
class AngularPMF {
public:
    AngularPMF() = default;

    explicit AngularPMF(std::vector<double> probs) : probs_(std::move(probs)) {}

    static AngularPMF point_mass(std::size_t slots, std::size_t at) {
        if (slots == 0 || at >= slots) {
            throw DomainError("point_mass: slot index out of range");
        }
        std::vector<double> probs(slots, 0.0);
        probs[at] = 1.0;
        return AngularPMF(std::move(probs));
    }

    static AngularPMF uniform(std::size_t slots) {
        if (slots == 0) {
            throw DomainError("uniform: need at least one slot");
        }
        return AngularPMF(std::vector<double>(slots, 1.0 / static_cast<double>(slots)));
    }

    std::size_t slots() const noexcept { return probs_.size(); }
    const std::vector<double>& probs() const noexcept { return probs_; }
    double operator[](std::size_t k) const { return probs_.at(k); }

    double slot_width() const { return two_pi / static_cast<double>(slots()); }
    double theta_lo(std::size_t k) const { return slot_width() * static_cast<double>(k); }
    double theta_hi(std::size_t k) const { return slot_width() * static_cast<double>(k + 1); }

    double total() const {
        // Neumaier summation keeps the 1e-12 normalisation check honest for M = 360
        double sum = 0.0;
        double comp = 0.0;
        for (double v : probs_) {
            double t = sum + v;
            comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
            sum = t;
        }
        return sum + comp;
    }

    /// Throws ValidationError unless every entry is >= 0 and the sum is 1 within `tol`.
    void validate(double tol = 1e-12) const {
        if (probs_.empty()) {
            throw ValidationError("AngularPMF: M >= 1 required");
        }
        for (double v : probs_) {
            if (!(v >= 0.0)) {
                throw ValidationError("AngularPMF: probabilities must be nonnegative");
            }
        }
        if (std::abs(total() - 1.0) > tol) {
            throw ValidationError("AngularPMF: probabilities must sum to 1");
        }
    }

    bool operator==(const AngularPMF&) const = default;

private:
    std::vector<double> probs_;
};

/// Half the L1 distance between two probability vectors of equal length.
inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw DomainError("total_variation: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += std::abs(a[k] - b[k]);
    }
    return 0.5 * sum;
}

inline double total_variation(const AngularPMF& a, const AngularPMF& b) {
    return total_variation(a.probs(), b.probs());
}

/// Labelling of slot angles on output. `rotation` empty means the plain
/// [0, 2pi) slot edges; otherwise each slot is reported centred on
/// wrap_pi(theta_lo + width/2 - rotation), in (-pi, pi].
struct SlotLabelling {
    std::optional<double> rotation;

    std::pair<double, double> bounds(const AngularPMF& pmf, std::size_t k) const {
        if (!rotation) {
            return {pmf.theta_lo(k), pmf.theta_hi(k)};
        }
        double half = 0.5 * pmf.slot_width();
        double centre = wrap_pi(pmf.theta_lo(k) + half - *rotation);
        return {centre - half, centre + half};
    }
};

inline void write_csv(std::ostream& os, const AngularPMF& pmf, SlotLabelling labels = {}) {
    os << "slot,theta_lo,theta_hi,prob\n";
    for (std::size_t k = 0; k < pmf.slots(); ++k) {
        auto [lo, hi] = labels.bounds(pmf, k);
        os << k << ',' << format_double(lo) << ',' << format_double(hi) << ','
           << format_double(pmf[k]) << '\n';
    }
}

inline nlohmann::ordered_json to_json(const AngularPMF& pmf, SlotLabelling labels = {}) {
    nlohmann::ordered_json slots = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < pmf.slots(); ++k) {
        auto [lo, hi] = labels.bounds(pmf, k);
        slots.push_back({{"slot", k}, {"theta_lo", lo}, {"theta_hi", hi}, {"prob", pmf[k]}});
    }
    return {{"M", pmf.slots()}, {"centered", labels.rotation.has_value()}, {"slots", slots}};
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

} // namespace detail

/// One parsed row of the `slot,theta_lo,theta_hi,prob` schema.
struct SlotRecord {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double prob = 0.0;
};

/// Parses the `slot,theta_lo,theta_hi,prob` schema. Lines starting with '#'
/// are comments. Slots must appear in order 0..M-1.
inline std::vector<SlotRecord> read_slot_records(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<SlotRecord> records;
    while (std::getline(is, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header) {
            if (line != "slot,theta_lo,theta_hi,prob") {
                throw ParseError(lineno, "expected header 'slot,theta_lo,theta_hi,prob'");
            }
            header = true;
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 4) {
            throw ParseError(lineno, "expected 4 fields");
        }
        double slot = parse_double(fields[0], lineno);
        if (slot != static_cast<double>(records.size())) {
            throw ParseError(lineno, "slots must be consecutive from 0");
        }
        SlotRecord r{parse_double(fields[1], lineno), parse_double(fields[2], lineno),
                     parse_double(fields[3], lineno)};
        if (!(r.prob >= 0.0)) {
            throw ParseError(lineno, "probability must be nonnegative");
        }
        if (!(r.theta_hi > r.theta_lo)) {
            throw ParseError(lineno, "theta_hi must exceed theta_lo");
        }
        records.push_back(r);
    }
    if (!header) {
        throw ParseError(lineno, "missing header");
    }
    if (records.empty()) {
        throw ParseError(lineno, "no slots");
    }
    return records;
}

inline AngularPMF read_pmf_csv(std::istream& is) {
    std::vector<double> probs;
    for (const auto& r : read_slot_records(is)) {
        probs.push_back(r.prob);
    }
    return AngularPMF(std::move(probs));
}

inline std::vector<SlotRecord> slot_records_from_json(const nlohmann::json& j) {
    std::vector<SlotRecord> records;
    for (const auto& s : j.at("slots")) {
        records.push_back({s.at("theta_lo").get<double>(), s.at("theta_hi").get<double>(), s.at("prob").get<double>()});
    }
    if (records.size() != j.at("M").get<std::size_t>()) {
        throw ParseError(0, "slot count does not match M");
    }
    return records;
}

inline AngularPMF pmf_from_json(const nlohmann::json& j) {
    std::vector<double> probs;
    for (const auto& s : j.at("slots")) {
        probs.push_back(s.at("prob").get<double>());
    }
    if (probs.size() != j.at("M").get<std::size_t>()) {
        throw ParseError(0, "slot count does not match M");
    }
    return AngularPMF(std::move(probs));
}

} // namespace cgb

#endif // CGB_ANGULAR_PMF_HPP
