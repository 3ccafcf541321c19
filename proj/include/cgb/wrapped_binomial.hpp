// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_WRAPPED_BINOMIAL_HPP
#define CGB_WRAPPED_BINOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "cgb/angular_pmf.hpp"
#include "cgb/common.hpp"

namespace cgb {

/// Law of X mod M on Z_M, X ~ Bin(n, p). Slot k is the residue of the
/// number of +1 deflections.
class WrappedBinomial {
public:
    WrappedBinomial(std::int64_t trials, std::int64_t slots, double p) : n_(trials), m_(slots), p_(p) {
        if (trials < 0) {
            throw DomainError("WrappedBinomial: n >= 0 required");
        }
        if (slots < 1) {
            throw DomainError("WrappedBinomial: M >= 1 required");
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("WrappedBinomial: p must lie in [0, 1]");
        }
    }

    std::int64_t trials() const noexcept { return n_; }
    std::int64_t slots() const noexcept { return m_; }
    double p() const noexcept { return p_; }
    double slot_width() const noexcept { return two_pi / static_cast<double>(m_); }

private:
    std::int64_t n_;
    std::int64_t m_;
    double p_;
};

namespace detail {

// Largest n for which every C(n, k) is formed exactly in 128-bit integers.
inline constexpr std::int64_t exact_binomial_limit = 64;

/// Compensated (Neumaier) accumulator.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::vector<unsigned __int128> pascal_row(std::int64_t n) {
    std::vector<unsigned __int128> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (std::int64_t i = 1; i <= n; ++i) {
        for (std::int64_t k = i; k > 0; --k) {
            row[k] += row[k - 1];
        }
    }
    return row;
}

/// Pr(X = x) for x = 0..n. Exact coefficients for n <= 64, log-space above.
inline std::vector<double> binomial_terms(std::int64_t n, double p) {
    std::vector<double> terms(static_cast<std::size_t>(n) + 1, 0.0);
    if (p == 0.0) {
        terms.front() = 1.0;
        return terms;
    }
    if (p == 1.0) {
        terms.back() = 1.0;
        return terms;
    }
    double q = 1.0 - p;
    if (n <= exact_binomial_limit) {
        auto coeffs = pascal_row(n);
        for (std::int64_t x = 0; x <= n; ++x) {
            terms[x] = static_cast<double>(coeffs[x]) * std::pow(p, static_cast<double>(x)) *
                       std::pow(q, static_cast<double>(n - x));
        }
        return terms;
    }
    // Log weights relative to the mode, built from cumulative log ratios
    // log(t_{x+1}/t_x) = log((n-x)/(x+1)) + log(p/q); normalised at the end.
    const double log_odds = std::log(p) - std::log1p(-p);
    const auto mode = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor((n + 1) * p)));
    std::vector<long double> log_w(terms.size(), 0.0L);
    for (std::int64_t x = mode; x < n; ++x) {
        log_w[x + 1] = log_w[x] + std::log(static_cast<long double>(n - x) / static_cast<long double>(x + 1)) +
                       static_cast<long double>(log_odds);
    }
    for (std::int64_t x = mode; x > 0; --x) {
        log_w[x - 1] = log_w[x] - std::log(static_cast<long double>(n - x + 1) / static_cast<long double>(x)) -
                       static_cast<long double>(log_odds);
    }
    CompensatedSum total;
    for (std::int64_t x = 0; x <= n; ++x) {
        terms[x] = static_cast<double>(std::exp(log_w[x]));
        total.add(terms[x]);
    }
    const double norm = total.value();
    for (double& t : terms) {
        t /= norm;
    }
    return terms;
}

inline std::vector<double> fold_terms(const std::vector<double>& terms, std::int64_t slots) {
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(slots));
    for (std::size_t x = 0; x < terms.size(); ++x) {
        acc[x % static_cast<std::size_t>(slots)].add(terms[x]);
    }
    std::vector<double> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        out[k] = acc[k].value();
    }
    return out;
}

} // namespace detail

/// Pr(Y = k): sum of Bin(n, p) mass over x = k + lM <= n.
inline double pmf(const WrappedBinomial& wb, std::int64_t k) {
    if (k < 0 || k >= wb.slots()) {
        throw DomainError("pmf: slot index out of range");
    }
    auto terms = detail::binomial_terms(wb.trials(), wb.p());
    detail::CompensatedSum acc;
    for (std::int64_t x = k; x <= wb.trials(); x += wb.slots()) {
        acc.add(terms[x]);
    }
    return acc.value();
}

inline AngularPMF full_pmf(const WrappedBinomial& wb) {
    return AngularPMF(detail::fold_terms(detail::binomial_terms(wb.trials(), wb.p()), wb.slots()));
}

/// phi(t) = (1 - p + p e^{i t 2pi/M})^n, evaluated in polar form.
inline std::complex<double> characteristic_function(const WrappedBinomial& wb, std::int64_t t) {
    // reduce t mod M first so the step angle stays in [0, 2pi)
    std::int64_t tr = t % wb.slots();
    if (tr < 0) {
        tr += wb.slots();
    }
    double omega = two_pi * static_cast<double>(tr) / static_cast<double>(wb.slots());
    std::complex<double> base(1.0 - wb.p() + wb.p() * std::cos(omega), wb.p() * std::sin(omega));
    if (wb.trials() == 0) {
        return {1.0, 0.0};
    }
    double modulus = std::pow(std::abs(base), static_cast<double>(wb.trials()));
    double angle = std::fmod(static_cast<double>(wb.trials()) * std::arg(base), two_pi);
    return std::polar(modulus, angle);
}

struct TrigMoments {
    double alpha1 = 1.0;
    double beta1 = 0.0;
    double rho = 1.0; // resultant length, |phi(1)|
    double mu = 0.0;  // mean direction in [0, 2pi)
};

inline TrigMoments trig_moments(const WrappedBinomial& wb) {
    auto phi = characteristic_function(wb, 1);
    TrigMoments m;
    m.alpha1 = phi.real();
    m.beta1 = phi.imag();
    m.rho = std::abs(phi);
    m.mu = wrap_two_pi(std::atan2(phi.imag(), phi.real()));
    return m;
}

/// One step of the +-1 walk on Z_M: out(x) = p in(x-1) + (1-p) in(x+1).
inline AngularPMF kernel_step(const AngularPMF& in, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("kernel_step: p must lie in [0, 1]");
    }
    const std::size_t m = in.slots();
    std::vector<double> out(m, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        out[(x + 1) % m] += p * in.probs()[x];
        out[(x + m - 1) % m] += (1.0 - p) * in.probs()[x];
    }
    return AngularPMF(std::move(out));
}

/// Law of the centred sum S_n = 2X - n on the half-step lattice Z_{2M},
/// where position s sits at angle s dtheta/2. Obtained by iterating
/// kernel_step from a point mass.
inline AngularPMF half_step_walk(std::int64_t trials, std::int64_t slots, double p) {
    auto state = AngularPMF::point_mass(static_cast<std::size_t>(2 * slots), 0);
    for (std::int64_t i = 0; i < trials; ++i) {
        state = kernel_step(state, p);
    }
    return state;
}

/// Maps a half-step walk law back to X-slots: half-step position
/// s = (2k - n) mod 2M corresponds to slot k. Bijective on the support.
inline AngularPMF half_step_to_slots(const AngularPMF& walk, std::int64_t trials) {
    const auto two_m = static_cast<std::int64_t>(walk.slots());
    if (two_m % 2 != 0) {
        throw DomainError("half_step_to_slots: lattice must have 2M positions");
    }
    const std::int64_t m = two_m / 2;
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t k = 0; k < m; ++k) {
        std::int64_t s = ((2 * k - trials) % two_m + two_m) % two_m;
        out[k] = walk.probs()[s];
    }
    return AngularPMF(std::move(out));
}

/// Pushforward of Y = X mod M under k -> (2k - n) mod M: the law of
/// S_n mod M, which is what kernel_step iterated on Z_M produces.
inline AngularPMF centred_sum_mod(const AngularPMF& slots_pmf, std::int64_t trials) {
    const auto m = static_cast<std::int64_t>(slots_pmf.slots());
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t k = 0; k < m; ++k) {
        out[((2 * k - trials) % m + m) % m] += slots_pmf.probs()[k];
    }
    return AngularPMF(std::move(out));
}

/// Offset between the X-slot frame and the centred angle frame. Slot k's
/// lattice point sits at centred angle k dtheta - n dtheta/2, which is the
/// slot's mid-angle minus this rotation.
inline double centred_rotation(std::int64_t trials, std::int64_t slots) {
    return static_cast<double>(trials + 1) * pi / static_cast<double>(slots);
}

/// Centred angle of slot k, in (-pi, pi].
inline double centred_angle(const WrappedBinomial& wb, std::int64_t k) {
    return wrap_pi(static_cast<double>(k) * wb.slot_width() -
                   0.5 * static_cast<double>(wb.trials()) * wb.slot_width());
}

inline double tv_to_uniform(const WrappedBinomial& wb) {
    return total_variation(full_pmf(wb), AngularPMF::uniform(static_cast<std::size_t>(wb.slots())));
}

/// Slots reachable with positive probability. For 0 < p < 1 the support is
/// {0..n} mod M, so this is min(M, n + 1); p in {0, 1} gives a point mass.
inline std::int64_t support_size(const WrappedBinomial& wb) {
    if (wb.p() == 0.0 || wb.p() == 1.0) {
        return 1;
    }
    return std::min(wb.slots(), wb.trials() + 1);
}

} // namespace cgb

#endif // CGB_WRAPPED_BINOMIAL_HPP
