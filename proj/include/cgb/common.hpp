// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_COMMON_HPP
#define CGB_COMMON_HPP

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <system_error>

namespace cgb {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Thrown when a parameter set breaks a documented invariant. The message
/// names the invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Unknown preset or format name.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reduce an angle to [0, 2pi).
inline double wrap_two_pi(double theta) {
    double r = std::fmod(theta, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    // fmod of a tiny negative value can round up to exactly 2pi
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

/// Reduce an angle to (-pi, pi].
inline double wrap_pi(double theta) {
    double r = wrap_two_pi(theta);
    if (r > pi) {
        r -= two_pi;
    }
    return r;
}

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, end);
}

inline double parse_double(const std::string& text, std::size_t line = 0) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(line, "expected a number, got '" + text + "'");
    }
    return value;
}

} // namespace cgb

#endif // CGB_COMMON_HPP
