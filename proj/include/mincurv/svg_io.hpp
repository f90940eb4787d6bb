#pragma once

// Deterministic SVG overlay: level curves, polygon arcs colored by class,
// vertices annotated with their classified interior angles.

#include <fstream>
#include <string>
#include <vector>

#include "csv_io.hpp"
#include "end_model.hpp"
#include "errors.hpp"
#include "lift_engine.hpp"

namespace mincurv {

inline void emit_svg(const TruncatingPolygon& poly, const std::vector<LevelCurve>& level_curves,
                     const std::string& path) {
    if (poly.samples.empty()) fail("EMPTY_LAYER", "polygon layer is empty");

    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    auto stretch = [&](complexd z) {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
    };
    for (const auto& s : poly.samples) stretch(s.z);
    for (const auto& c : level_curves)
        for (const auto& z : c.samples) stretch(z);
    const double pad = 0.05 * std::max(hi_x - lo_x, hi_y - lo_y);
    lo_x -= pad;
    hi_x += pad;
    lo_y -= pad;
    hi_y += pad;

    const double W = 800.0;
    const double scale = W / (hi_x - lo_x);
    const double H = (hi_y - lo_y) * scale;
    auto px = [&](complexd z) { return (z.real() - lo_x) * scale; };
    auto py = [&](complexd z) { return H - (z.imag() - lo_y) * scale; }; // flip y

    std::ofstream out(path);
    if (!out) fail("IO", "cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << format_sig(W, 6) << ' '
        << format_sig(H, 6) << "\">\n";

    out << "<g id=\"level-curves\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\">\n";
    for (const auto& c : level_curves) {
        out << "<polyline points=\"";
        for (const auto& z : c.samples) out << format_sig(px(z), 8) << ',' << format_sig(py(z), 8) << ' ';
        out << "\"/>\n";
    }
    out << "</g>\n";

    auto color_of = [](ArcClass a) {
        switch (a) {
            case ArcClass::A: return "#1f77b4";
            case ArcClass::B: return "#2ca02c";
            case ArcClass::Closing: return "#ff7f0e";
        }
        return "#000000";
    };
    out << "<g id=\"polygon\" fill=\"none\" stroke-width=\"2\">\n";
    for (std::size_t i = 0; i + 1 < poly.samples.size(); ++i) {
        const auto& a = poly.samples[i];
        const auto& b = poly.samples[i + 1];
        out << "<line x1=\"" << format_sig(px(a.z), 8) << "\" y1=\"" << format_sig(py(a.z), 8) << "\" x2=\""
            << format_sig(px(b.z), 8) << "\" y2=\"" << format_sig(py(b.z), 8) << "\" stroke=\""
            << color_of(a.arc == ArcClass::Closing || b.arc == ArcClass::Closing ? ArcClass::Closing : a.arc)
            << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g id=\"vertices\" font-size=\"12\" font-family=\"monospace\">\n";
    for (const auto& v : poly.vertices) {
        const bool reflex = v.interior_angle > M_PI;
        out << "<circle cx=\"" << format_sig(px(v.z), 8) << "\" cy=\"" << format_sig(py(v.z), 8)
            << "\" r=\"4\" fill=\"" << (reflex ? "#d62728" : "#333333") << "\""
            << (reflex ? " class=\"reflex\"" : "") << "/>\n";
        out << "<text x=\"" << format_sig(px(v.z) + 6.0, 8) << "\" y=\"" << format_sig(py(v.z) - 6.0, 8)
            << "\">" << (reflex ? "3pi/2" : "pi/2") << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

} // namespace mincurv
