// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_WRAPPED_NORMAL_HPP
#define CGB_WRAPPED_NORMAL_HPP

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cgb/angular_pmf.hpp"
#include "cgb/common.hpp"

namespace cgb {

/// Normal N(mu, sigma2) wrapped onto [0, 2pi).
class WrappedNormal {
public:
    WrappedNormal(double mu, double sigma2) : mu_(wrap_two_pi(mu)), sigma2_(sigma2) {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
            throw DomainError("WrappedNormal: sigma2 > 0 required");
        }
        if (!std::isfinite(mu)) {
            throw DomainError("WrappedNormal: mu must be finite");
        }
    }

    static WrappedNormal from_sigma(double mu, double sigma) {
        if (!(sigma > 0.0)) {
            throw DomainError("WrappedNormal: sigma > 0 required");
        }
        return WrappedNormal(mu, sigma * sigma);
    }

    double mu() const noexcept { return mu_; }
    double sigma2() const noexcept { return sigma2_; }
    double sigma() const noexcept { return std::sqrt(sigma2_); }

private:
    double mu_;
    double sigma2_;
};

namespace detail {

// Above this variance the Fourier series is the default evaluation path.
inline constexpr double fourier_switch_sigma2 = 4.0;

// Number of wraps each side of the principal image. With the residual
// reduced to [-pi, pi), the first omitted image lies at least
// (2K + 1)pi away, i.e. > 6 sigma + 3pi, far below 1e-14 relative.
inline std::int64_t wrap_terms(double sigma) {
    return static_cast<std::int64_t>(std::ceil(1.0 + 6.0 * sigma / two_pi));
}

} // namespace detail

/// Density by the wrapping sum, or the Fourier form when sigma2 > 4.
inline double density_wrapped_sum(const WrappedNormal& wn, double theta) {
    const double sigma2 = wn.sigma2();
    const double r = wrap_pi(theta - wn.mu());
    const std::int64_t terms = detail::wrap_terms(std::sqrt(sigma2));
    double sum = 0.0;
    // smallest images first
    for (std::int64_t k = terms; k >= 1; --k) {
        double a = r + two_pi * static_cast<double>(k);
        double b = r - two_pi * static_cast<double>(k);
        sum += std::exp(-a * a / (2.0 * sigma2)) + std::exp(-b * b / (2.0 * sigma2));
    }
    sum += std::exp(-r * r / (2.0 * sigma2));
    return sum / std::sqrt(two_pi * sigma2);
}

/// (1/2pi)(1 + 2 sum_n e^{-n^2 sigma^2/2} cos(n(theta - mu))), truncated
/// once the coefficient drops below 1e-16.
inline double density_fourier(const WrappedNormal& wn, double theta) {
    const double r = wrap_pi(theta - wn.mu());
    double sum = 0.0;
    for (std::int64_t n = 1;; ++n) {
        double nd = static_cast<double>(n);
        double coeff = std::exp(-nd * nd * wn.sigma2() / 2.0);
        if (coeff < 1e-16) {
            break;
        }
        sum += coeff * std::cos(nd * r);
    }
    return (1.0 + 2.0 * sum) / two_pi;
}

inline double density(const WrappedNormal& wn, double theta) {
    if (!std::isfinite(theta)) {
        throw DomainError("density: theta must be finite");
    }
    if (wn.sigma2() > detail::fourier_switch_sigma2) {
        return density_fourier(wn, theta);
    }
    return density_wrapped_sum(wn, theta);
}

/// Unique maximiser of the density: every Fourier coefficient is positive,
/// so each cosine term peaks at mu.
inline double mode(const WrappedNormal& wn) { return wn.mu(); }

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Phi(b) - Phi(a) for a <= b, evaluated in whichever tail keeps precision.
inline double normal_interval(double a, double b) {
    if (a >= 0.0) {
        return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
    }
    if (b <= 0.0) {
        return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
    }
    return 1.0 - 0.5 * (std::erfc(-a / std::numbers::sqrt2) + std::erfc(b / std::numbers::sqrt2));
}

/// Mass of each slot I_k = [2pi k/M, 2pi (k+1)/M) as a wrapped sum of
/// normal CDF differences.
inline AngularPMF bin_probs(const WrappedNormal& wn, std::int64_t slots) {
    if (slots < 1) {
        throw DomainError("bin_probs: M >= 1 required");
    }
    const double sigma = wn.sigma();
    const double width = two_pi / static_cast<double>(slots);
    // images beyond 8.5 sigma contribute < 1e-17
    const auto wraps = static_cast<std::int64_t>(std::ceil(8.5 * sigma / two_pi)) + 1;
    std::vector<double> probs(static_cast<std::size_t>(slots), 0.0);
    for (std::int64_t k = 0; k < slots; ++k) {
        const double lo = width * static_cast<double>(k) - wn.mu();
        const double hi = width * static_cast<double>(k + 1) - wn.mu();
        double sum = 0.0;
        for (std::int64_t l = -wraps; l <= wraps; ++l) {
            double shift = two_pi * static_cast<double>(l);
            sum += normal_interval((lo + shift) / sigma, (hi + shift) / sigma);
        }
        probs[k] = sum;
    }
    return AngularPMF(std::move(probs));
}

/// Wrapped normal limit of WB(n, M, p) in the centred angle frame:
/// mu = n(2p - 1) dtheta/2, sigma2 = n p (1 - p) dtheta^2.
struct LimitParams {
    double mu = 0.0;
    double sigma2 = 0.0;
};

inline LimitParams limit_params(std::int64_t trials, std::int64_t slots, double p) {
    if (trials < 1 || slots < 1) {
        throw DomainError("limit_params: n >= 1 and M >= 1 required");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("limit_params: degenerate distribution for p outside (0, 1)");
    }
    const double dtheta = two_pi / static_cast<double>(slots);
    const auto n = static_cast<double>(trials);
    return {n * (2.0 * p - 1.0) * dtheta / 2.0, n * p * (1.0 - p) * dtheta * dtheta};
}

// ---------------------------------------------------------------------------
// Density samples (`theta,f`)

struct DensitySample {
    double theta = 0.0;
    double f = 0.0;
};

/// `count` equally spaced samples on [0, 2pi).
inline std::vector<DensitySample> sample_density(const WrappedNormal& wn, std::size_t count) {
    std::vector<DensitySample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double theta = two_pi * static_cast<double>(i) / static_cast<double>(count);
        out.push_back({theta, density(wn, theta)});
    }
    return out;
}

inline void write_density_csv(std::ostream& os, const std::vector<DensitySample>& samples) {
    os << "theta,f\n";
    for (const auto& s : samples) {
        os << format_double(s.theta) << ',' << format_double(s.f) << '\n';
    }
}

inline std::vector<DensitySample> read_density_csv(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<DensitySample> out;
    while (std::getline(is, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header) {
            if (line != "theta,f") {
                throw ParseError(lineno, "expected header 'theta,f'");
            }
            header = true;
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 2) {
            throw ParseError(lineno, "expected 2 fields");
        }
        out.push_back({parse_double(fields[0], lineno), parse_double(fields[1], lineno)});
    }
    if (!header) {
        throw ParseError(lineno, "missing header");
    }
    if (out.empty()) {
        throw ParseError(lineno, "no samples");
    }
    return out;
}

} // namespace cgb

#endif // CGB_WRAPPED_NORMAL_HPP
