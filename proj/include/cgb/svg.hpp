// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_SVG_HPP
#define CGB_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cgb/angular_pmf.hpp"
#include "cgb/common.hpp"
#include "cgb/wrapped_normal.hpp"

namespace cgb::svg {

namespace detail {

// Fixed three-decimal coordinates keep the output byte-stable.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") {
        s = "0.000";
    }
    return s;
}

inline std::string header(double width, double height) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
}

} // namespace detail

struct RingStyle {
    double inner_radius = 60.0;
    double ring_gap = 40.0;
    double margin = 20.0;
};

/// Concentric curved bar plot: ring i is a circle of radius
/// inner + i * gap, and each slot's bar is an annular sector rising from it.
/// Angle 0 points up and angles increase clockwise. Bar lengths share one
/// scale, the largest probability filling 90% of the gap.
inline std::string ring_plot(const std::vector<std::vector<SlotRecord>>& rings, const RingStyle& style = {}) {
    using detail::num;
    if (rings.empty()) {
        throw DomainError("ring_plot: no input");
    }
    double max_prob = 0.0;
    for (const auto& ring : rings) {
        for (const auto& s : ring) {
            max_prob = std::max(max_prob, s.prob);
        }
    }
    const double outer = style.inner_radius + style.ring_gap * static_cast<double>(rings.size());
    const double size = 2.0 * (outer + style.margin);
    const double c = size / 2.0;
    const double scale = max_prob > 0.0 ? 0.9 * style.ring_gap / max_prob : 0.0;
    auto px = [c](double r, double t) { return num(c + r * std::sin(t)); };
    auto py = [c](double r, double t) { return num(c - r * std::cos(t)); };

    std::ostringstream os;
    os << detail::header(size, size);
    for (std::size_t i = 0; i < rings.size(); ++i) {
        const double base = style.inner_radius + style.ring_gap * static_cast<double>(i);
        os << "<g class=\"ring\" data-index=\"" << i << "\">\n";
        os << "<circle cx=\"" << num(c) << "\" cy=\"" << num(c) << "\" r=\"" << num(base)
           << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.5\"/>\n";
        for (const auto& s : rings[i]) {
            if (s.prob <= 0.0) {
                continue;
            }
            const double top = base + scale * s.prob;
            const int large = (s.theta_hi - s.theta_lo) > pi ? 1 : 0;
            os << "<path class=\"bar\" d=\"M" << px(base, s.theta_lo) << ',' << py(base, s.theta_lo) << " L"
               << px(top, s.theta_lo) << ',' << py(top, s.theta_lo) << " A" << num(top) << ',' << num(top) << " 0 "
               << large << " 1 " << px(top, s.theta_hi) << ',' << py(top, s.theta_hi) << " L" << px(base, s.theta_hi)
               << ',' << py(base, s.theta_hi) << " A" << num(base) << ',' << num(base) << " 0 " << large << " 0 "
               << px(base, s.theta_lo) << ',' << py(base, s.theta_lo)
               << " Z\" fill=\"#4477aa\" stroke=\"#223355\" stroke-width=\"0.3\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct CylinderStyle {
    double semi_major = 200.0;
    double semi_minor = 50.0;
    double max_height = 200.0;
    double margin = 20.0;
};

/// Density drawn on a cylinder in oblique view: the base circle becomes an
/// ellipse and each sample is a vertical segment of height proportional to
/// f(theta). Far-side segments are drawn first and fainter.
inline std::string cylinder_plot(const std::vector<DensitySample>& samples, const CylinderStyle& style = {}) {
    using detail::num;
    if (samples.empty()) {
        throw DomainError("cylinder_plot: no samples");
    }
    double max_f = 0.0;
    for (const auto& s : samples) {
        max_f = std::max(max_f, s.f);
    }
    const double width = 2.0 * (style.semi_major + style.margin);
    const double height = style.max_height + 2.0 * style.semi_minor + 2.0 * style.margin;
    const double cx = width / 2.0;
    const double cy = style.margin + style.max_height + style.semi_minor;
    const double scale = max_f > 0.0 ? style.max_height / max_f : 0.0;
    auto base_x = [&](double t) { return cx + style.semi_major * std::cos(t); };
    auto base_y = [&](double t) { return cy + style.semi_minor * std::sin(t); };

    std::ostringstream os;
    os << detail::header(width, height);
    os << "<ellipse cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" rx=\"" << num(style.semi_major) << "\" ry=\""
       << num(style.semi_minor) << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.8\"/>\n";
    for (int pass = 0; pass < 2; ++pass) {
        const bool back = pass == 0;
        os << "<g class=\"" << (back ? "back" : "front") << "\" stroke=\"" << (back ? "#aabbdd" : "#224488")
           << "\" stroke-width=\"0.6\">\n";
        for (const auto& s : samples) {
            if ((std::sin(s.theta) < 0.0) != back) {
                continue;
            }
            const double x = base_x(s.theta);
            const double y = base_y(s.theta);
            os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x) << "\" y2=\""
               << num(y - scale * s.f) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "<polyline class=\"crown\" fill=\"none\" stroke=\"#aa3322\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i <= samples.size(); ++i) {
        const auto& s = samples[i % samples.size()];
        os << (i ? " " : "") << num(base_x(s.theta)) << ',' << num(base_y(s.theta) - scale * s.f);
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

} // namespace cgb::svg

#endif // CGB_SVG_HPP
