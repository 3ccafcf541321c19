// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used only by the tests. Nothing here
// calls into the routines under test.

#ifndef CGB_TESTS_ORACLES_HPP
#define CGB_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

inline constexpr long double two_pi_l = 2.0L * std::numbers::pi_v<long double>;

/// Every one of the 2^n deflection paths, folded into X mod M.
inline std::vector<double> enumerate_paths(int n, int m, double p) {
    std::vector<long double> acc(m, 0.0L);
    const long double pl = p;
    const long double ql = 1.0L - pl;
    for (std::uint64_t path = 0; path < (std::uint64_t{1} << n); ++path) {
        long double prob = 1.0L;
        int rights = 0;
        for (int k = 0; k < n; ++k) {
            if ((path >> k) & 1u) {
                prob *= pl;
                ++rights;
            } else {
                prob *= ql;
            }
        }
        acc[rights % m] += prob;
    }
    return {acc.begin(), acc.end()};
}

/// Bin(n, p) via the Pascal recursion b_{i+1}(x) = q b_i(x) + p b_i(x-1)
/// in long double, folded mod M.
inline std::vector<double> pascal_fold(int n, int m, double p) {
    std::vector<long double> row{1.0L};
    const long double pl = p;
    for (int i = 0; i < n; ++i) {
        std::vector<long double> next(row.size() + 1, 0.0L);
        for (std::size_t x = 0; x < row.size(); ++x) {
            next[x] += (1.0L - pl) * row[x];
            next[x + 1] += pl * row[x];
        }
        row.swap(next);
    }
    std::vector<long double> acc(m, 0.0L);
    for (std::size_t x = 0; x < row.size(); ++x) {
        acc[x % m] += row[x];
    }
    return {acc.begin(), acc.end()};
}

inline boost::multiprecision::cpp_rational rational_pow(const boost::multiprecision::cpp_rational& base, int e) {
    boost::multiprecision::cpp_rational out(1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

/// Exact rational fold with p = num/den.
inline std::vector<double> rational_fold(int n, int m, int num, int den) {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    std::vector<cpp_rational> acc(m, cpp_rational(0));
    cpp_rational p(num, den);
    cpp_rational q = 1 - p;
    cpp_int coeff = 1;
    for (int x = 0; x <= n; ++x) {
        if (x > 0) {
            coeff = coeff * (n - x + 1) / x;
        }
        cpp_rational term = cpp_rational(coeff) * rational_pow(p, x) * rational_pow(q, n - x);
        acc[x % m] += term;
    }
    std::vector<double> out;
    for (const auto& v : acc) {
        out.push_back(static_cast<double>(v));
    }
    return out;
}

/// Cumulative-log binomial: log C(n, x) as sums of log i, in long double.
inline std::vector<double> cumulative_log_fold(int n, int m, double p) {
    std::vector<long double> log_fact(n + 1, 0.0L);
    for (int i = 1; i <= n; ++i) {
        log_fact[i] = log_fact[i - 1] + std::log(static_cast<long double>(i));
    }
    std::vector<long double> acc(m, 0.0L);
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(-static_cast<long double>(p));
    for (int x = 0; x <= n; ++x) {
        acc[x % m] += std::exp(log_fact[n] - log_fact[x] - log_fact[n - x] + x * lp + (n - x) * lq);
    }
    return {acc.begin(), acc.end()};
}

/// sum_k probs[k] e^{i t 2pi k / M}
inline std::complex<double> dft(const std::vector<double>& probs, std::int64_t t) {
    const auto m = static_cast<long double>(probs.size());
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        long double a = two_pi_l * static_cast<long double>(t) * static_cast<long double>(k) / m;
        re += probs[k] * std::cos(a);
        im += probs[k] * std::sin(a);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

/// Composite Simpson on [a, b] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) {
        sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

namespace detail {
inline double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
} // namespace detail

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Direct wrapping sum with a fixed, generous number of images.
inline double wrapped_normal_reference(double theta, double mu, double sigma2) {
    long double sum = 0.0L;
    for (int k = -60; k <= 60; ++k) {
        long double d = theta - mu + two_pi_l * k;
        sum += std::exp(-d * d / (2.0L * sigma2));
    }
    return static_cast<double>(sum / std::sqrt(two_pi_l * sigma2));
}

} // namespace oracle

#endif // CGB_TESTS_ORACLES_HPP
