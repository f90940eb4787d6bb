#pragma once

// Generalized lift of the square curve gamma^C through the branches of the
// natural coordinate F, and the closed truncating polygon obtained by joining
// the lift endpoints along the level curve l_0.
//
// The existence proof is nonconstructive (Inverse Function Theorem); here the
// lift is realized by an explicit predictor-corrector continuation solving
// F(beta(t)) = gamma^C(t) with dbeta/dt = gamma'(t)/sqrt(phi)(beta).

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "end_model.hpp"
#include "errors.hpp"

namespace mincurv {

// Boundary of the square |Re w| <= C, |Im w| <= C traversed counterclockwise
// m+1 times, starting and ending at C + 0i. Unit parameter speed, total
// length 8(m+1)C.
struct RectanglePath {
    double C = 1.0;
    int m = 0;

    RectanglePath(double C_, int m_) : C(C_), m(m_) {
        if (!(C > 0.0)) fail("INVALID_PATH", "C must be positive");
        if (m < 0) fail("INVALID_PATH", "m must be >= 0");
    }

    double total_length() const { return 8.0 * (m + 1) * C; }

    complexd point_at(double t) const {
        double u = std::fmod(t, 8.0 * C);
        if (u < 0.0) u += 8.0 * C;
        if (u <= C) return {C, u};
        if (u <= 3.0 * C) return {2.0 * C - u, C};
        if (u <= 5.0 * C) return {-C, 4.0 * C - u};
        if (u <= 7.0 * C) return {u - 6.0 * C, -C};
        return {C, u - 8.0 * C};
    }

    // One-sided tangent from the right (the piece beginning at t).
    complexd tangent_at(double t) const {
        double u = std::fmod(t, 8.0 * C);
        if (u < 0.0) u += 8.0 * C;
        if (u < C) return {0.0, 1.0};
        if (u < 3.0 * C) return {-1.0, 0.0};
        if (u < 5.0 * C) return {0.0, -1.0};
        if (u < 7.0 * C) return {1.0, 0.0};
        return {0.0, 1.0};
    }

    // Corner parameters (square corners), ascending over the whole traversal.
    std::vector<double> corner_params() const {
        std::vector<double> out;
        for (int j = 0; j <= m; ++j)
            for (double base : {1.0, 3.0, 5.0, 7.0}) out.push_back((8.0 * j + base) * C);
        return out;
    }
};

inline RectanglePath build_gamma(double C, int m) { return RectanglePath(C, m); }

struct LiftSample {
    double t = 0.0;
    complexd z;
    double theta = 0.0; // unwrapped argument of z along the lift
};

struct LiftSegment {
    int sector = 0; // branch index k: the segment lies in Delta_k
    std::vector<LiftSample> samples;
};

struct GeneralizedLift {
    EndData end;
    double C = 0.0;
    std::vector<LiftSegment> segments;
    complexd start_point;
    complexd end_point;
    double theta_start = 0.0;
    double theta_end = 0.0;
};

namespace detail {

// Newton iteration for F(z; theta) = w_target, theta tracked continuously.
// Returns false when it fails to converge.
inline bool lift_newton(const EndData& e, complexd w_target, complexd& z, double& theta, double tol) {
    complexd zc = z;
    double th = theta;
    for (int it = 0; it < 30; ++it) {
        const complexd r = natural_coord_at(e, zc, th) - w_target;
        if (std::abs(r) < tol) {
            z = zc;
            theta = th;
            return true;
        }
        const complexd d = sqrt_hopf_phi(e, zc);
        const complexd znew = zc - r / d;
        if (!(std::abs(znew) > 0.0) || std::abs(znew - zc) > 0.5 * std::abs(zc)) return false;
        th += std::arg(znew / zc);
        zc = znew;
    }
    return false;
}

} // namespace detail

// The unique point p on l_0 with F_0(p) = C, together with its argument.
inline std::pair<complexd, double> lift_start_point(const EndData& e, double C) {
    if (e.c == 0.0) {
        return {complexd(std::pow(C, 1.0 / (e.m + 1)), 0.0), 0.0};
    }
    auto theta0 = [&](double r) {
        const double s = -e.c * std::log(r) / std::pow(r, e.m + 1);
        return std::asin(s) / (e.m + 1);
    };
    auto reF = [&](double r) {
        const double t = theta0(r);
        return std::pow(r, e.m + 1) * std::cos((e.m + 1) * t) - e.c * t;
    };
    double lo = e.R;
    double hi = std::pow((C + 2.0 * M_PI * std::abs(e.c)) / std::cos(M_PI / 10.0) + 1.0, 1.0 / (e.m + 1));
    if (reF(lo) >= C) fail("C_TOO_SMALL", "start point bracketing failed at |z| = R");
    if (reF(hi) <= C) fail("C_TOO_SMALL", "start point bracketing failed at outer radius");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (reF(mid) < C ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    const double t = theta0(r);
    return {r * complexd(std::cos(t), std::sin(t)), t};
}

// Generalized lift of gamma^C. `step` is the parameter step of the
// continuation; each accepted sample is Newton-corrected onto
// F_k(beta(t)) = gamma^C(t).
inline GeneralizedLift lift(const EndData& e, double C, double step) {
    const double M0 = std::pow(e.R, e.m + 1) + 4.0 * M_PI * std::abs(e.c);
    const double M1 = std::pow(e.R, e.m + 1) + std::abs(e.c) * std::abs(std::log(e.R));
    if (!(C > std::max(M0, M1))) fail("C_TOO_SMALL", "need C > max{M0, M1}");
    if (!(step > 0.0)) fail("INVALID_STEP", "step must be positive");
    step = std::min(step, C / 8.0); // at least a few samples per edge

    const RectanglePath gamma(C, e.m);
    const double tol = 1e-13 * (1.0 + C);
    const double band = 0.1; // sector slack of pi/(10(m+1)), in units of pi/(m+1)

    GeneralizedLift out{e, C, {}, {}, {}, 0.0, 0.0};
    auto [z, theta] = lift_start_point(e, C);
    out.start_point = z;
    out.theta_start = theta;

    // breakpoints: corners and sector switches, ascending
    std::vector<double> breaks = gamma.corner_params();
    for (int i = 1; i <= 2 * e.m + 1; ++i) breaks.push_back(4.0 * C * i);
    breaks.push_back(gamma.total_length());
    std::sort(breaks.begin(), breaks.end());

    double t = 0.0;
    const int n_sectors = 2 * (e.m + 1);
    out.segments.resize(n_sectors);
    for (int k = 0; k < n_sectors; ++k) out.segments[k].sector = k;
    out.segments[0].samples.push_back({0.0, z, theta});

    std::size_t bi = 0;
    while (bi < breaks.size()) {
        const double t_stop = breaks[bi];
        while (t < t_stop - 1e-12 * C) {
            double dt = std::min(step, t_stop - t);
            bool accepted = false;
            for (int halve = 0; halve <= 10; ++halve) {
                const complexd w_target = gamma.point_at(t + dt);
                // midpoint predictor
                complexd z_pred = z;
                double th_pred = theta;
                const complexd k1 = gamma.tangent_at(t) / sqrt_hopf_phi(e, z);
                complexd z_half = z + 0.5 * dt * k1;
                const complexd k2 = gamma.tangent_at(t) / sqrt_hopf_phi(e, z_half);
                z_pred = z + dt * k2;
                th_pred = theta + std::arg(z_pred / z);
                if (detail::lift_newton(e, w_target, z_pred, th_pred, tol)) {
                    z = z_pred;
                    theta = th_pred;
                    t += dt;
                    accepted = true;
                    break;
                }
                dt *= 0.5;
            }
            if (!accepted) fail("CONTINUATION_DIVERGED", "Newton correction failed after step halving");

            const int sector = std::min(int(t / (4.0 * C) - 1e-12), n_sectors - 1);
            const double u = theta * (e.m + 1) / M_PI; // sector coordinate
            if (u < sector - band - 1e-9 || u > sector + 1.0 + band + 1e-9)
                fail("SECTOR_MISMATCH", "lift left its sector domain");
            out.segments[sector].samples.push_back({t, z, theta});
            // sector handoff point belongs to both segments
            if (sector + 1 < n_sectors && std::abs(t - 4.0 * C * (sector + 1)) < 1e-9 * (1.0 + C))
                out.segments[sector + 1].samples.push_back({t, z, theta});
        }
        t = t_stop;
        ++bi;
    }

    out.end_point = z;
    out.theta_end = theta;
    return out;
}

enum class ArcClass { A, B, Closing };

struct PolygonSample {
    double t = 0.0;
    complexd z;
    double theta = 0.0;
    int sector = 0;
    ArcClass arc = ArcClass::B;
};

struct PolygonVertex {
    complexd z;
    double t = 0.0;
    double interior_angle = 0.0; // classified to pi/2 or 3pi/2
    double measured_angle = 0.0; // from one-sided tangents
};

struct TruncatingPolygon {
    EndData end;
    double C = 0.0;
    // counterclockwise; with a nondegenerate closing arc the last sample
    // coincides with the first
    std::vector<PolygonSample> samples;
    std::vector<PolygonVertex> vertices;
    bool closing_degenerate = true;
    std::size_t closing_begin = 0; // index of first closing-arc sample (== samples.size() if degenerate)

    double min_abs() const {
        double v = 1e300;
        for (const auto& s : samples) v = std::min(v, std::abs(s.z));
        return v;
    }
};

namespace detail {

// One-sided derivative from three (t, z) samples, evaluated at the last one.
inline complexd one_sided_tangent(const std::array<std::pair<double, complexd>, 3>& p) {
    const double t1 = p[0].first, t2 = p[1].first, t3 = p[2].first;
    const complexd f1 = p[0].second, f2 = p[1].second, f3 = p[2].second;
    return f1 * ((t3 - t2) / ((t1 - t2) * (t1 - t3))) + f2 * ((t3 - t1) / ((t2 - t1) * (t2 - t3))) +
           f3 * ((2.0 * t3 - t1 - t2) / ((t3 - t1) * (t3 - t2)));
}

inline ArcClass classify_arc(double t, double C) {
    double u = std::fmod(t, 4.0 * C);
    if (u < 0.0) u += 4.0 * C;
    return (u > C && u < 3.0 * C) ? ArcClass::A : ArcClass::B;
}

} // namespace detail

// Closes the lift along l_0 and classifies arcs and vertices. Vertex angles
// are measured from discrete one-sided tangents and classified to the nearer
// of pi/2 and 3pi/2.
inline TruncatingPolygon close_polygon(const GeneralizedLift& lifted, const EndData& e) {
    const double C = lifted.C;
    const double on_l0_tol = 1e-6 * (1.0 + C);
    if (std::abs(im_natural(e, lifted.start_point)) > on_l0_tol ||
        std::abs(im_natural(e, lifted.end_point)) > on_l0_tol)
        fail("NOT_ON_L0", "lift endpoints are off the level curve l_0");

    TruncatingPolygon poly{e, C, {}, {}, true, 0};

    for (const auto& seg : lifted.segments)
        for (const auto& s : seg.samples) {
            if (!poly.samples.empty() && std::abs(s.z - poly.samples.back().z) < 1e-15 &&
                s.t <= poly.samples.back().t + 1e-15)
                continue; // sector handoff duplicates
            poly.samples.push_back({s.t, s.z, s.theta, seg.sector, detail::classify_arc(s.t, C)});
        }

    poly.closing_begin = poly.samples.size();
    const double gap = std::abs(lifted.end_point - lifted.start_point);
    poly.closing_degenerate = gap < 1e-9;

    if (!poly.closing_degenerate) {
        // trace l_0 from the end point back to the start point in the F_0 chart
        double theta = lifted.theta_end - 2.0 * M_PI;
        complexd z = lifted.end_point;
        const double x_end = std::real(natural_coord_at(e, z, theta));
        const double x_start = C;
        const int n = std::max(16, int(std::ceil(std::abs(x_end - x_start) / (0.05 * (1.0 + std::abs(e.c))))));
        const double tol = 1e-13 * (1.0 + C);
        const double t_base = 8.0 * (e.m + 1) * C;
        for (int i = 1; i <= n; ++i) {
            const double x = x_end + (x_start - x_end) * double(i) / n;
            complexd zn = z;
            double thn = theta;
            if (!detail::lift_newton(e, complexd(x, 0.0), zn, thn, tol))
                fail("CONTINUATION_DIVERGED", "closing arc tracing failed");
            z = zn;
            theta = thn;
            poly.samples.push_back({t_base + std::abs(x - x_end), z, theta, 0, ArcClass::Closing});
        }
        if (std::abs(z - lifted.start_point) > 1e-6 * (1.0 + C))
            fail("NOT_ON_L0", "closing arc did not reach the start point");
        poly.samples.back().z = lifted.start_point; // snap the closure exactly
    }

    // vertices at the square-corner parameters
    const RectanglePath gamma(C, e.m);
    auto tangent_around = [&](double t_v, bool before) {
        const double eps = 1e-9 * (1.0 + C);
        std::size_t i = 0;
        if (before) { // last index with t <= t_v
            for (std::size_t j = 0; j < poly.closing_begin; ++j)
                if (poly.samples[j].t <= t_v + eps) i = j;
            if (i < 2) fail("INTERNAL", "not enough samples before a vertex");
            return detail::one_sided_tangent({{{poly.samples[i - 2].t, poly.samples[i - 2].z},
                                               {poly.samples[i - 1].t, poly.samples[i - 1].z},
                                               {poly.samples[i].t, poly.samples[i].z}}});
        }
        i = poly.closing_begin - 1; // first index with t >= t_v
        for (std::size_t j = poly.closing_begin; j-- > 0;)
            if (poly.samples[j].t >= t_v - eps) i = j;
        if (i + 2 >= poly.closing_begin) fail("INTERNAL", "not enough samples after a vertex");
        return detail::one_sided_tangent({{{poly.samples[i + 2].t, poly.samples[i + 2].z},
                                           {poly.samples[i + 1].t, poly.samples[i + 1].z},
                                           {poly.samples[i].t, poly.samples[i].z}}});
    };

    auto push_vertex = [&](complexd zv, double tv, complexd tan_in, complexd tan_out) {
        const double turn = std::arg(tan_out / tan_in);
        const double measured = M_PI - turn;
        const double classified = (std::abs(measured - M_PI / 2.0) <= std::abs(measured - 3.0 * M_PI / 2.0))
                                      ? M_PI / 2.0
                                      : 3.0 * M_PI / 2.0;
        poly.vertices.push_back({zv, tv, classified, measured});
    };

    for (double tv : gamma.corner_params()) {
        // sample exactly at tv exists: steps stop at breakpoints
        complexd zv;
        bool found = false;
        for (std::size_t j = 0; j < poly.closing_begin; ++j)
            if (std::abs(poly.samples[j].t - tv) < 1e-9 * (1.0 + C)) {
                zv = poly.samples[j].z;
                found = true;
            }
        if (!found) fail("INTERNAL", "corner sample missing from lift");
        push_vertex(zv, tv, tangent_around(tv, true), tangent_around(tv, false));
    }

    if (!poly.closing_degenerate) {
        // junctions of the closing arc with the lift endpoints
        auto side_tangent = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
            std::array<std::pair<double, complexd>, 3> pts = {
                {{poly.samples[i0].t, poly.samples[i0].z},
                 {poly.samples[i1].t, poly.samples[i1].z},
                 {poly.samples[i2].t, poly.samples[i2].z}}};
            return detail::one_sided_tangent(pts);
        };
        const std::size_t nb = poly.closing_begin, ns = poly.samples.size();
        // vertex at the lift end point: incoming lift, outgoing closing arc
        const complexd in_end = side_tangent(nb - 3, nb - 2, nb - 1);
        const complexd out_end = side_tangent(nb + 2, nb + 1, nb);
        push_vertex(poly.samples[nb].z, poly.samples[nb].t, in_end, out_end);
        // vertex at the start point: incoming closing arc, outgoing lift
        const complexd in_start = side_tangent(ns - 3, ns - 2, ns - 1);
        const complexd out_start = side_tangent(2, 1, 0);
        push_vertex(poly.samples[0].z, 0.0, in_start, out_start);
    }

    return poly;
}

namespace detail {

inline bool proper_intersection(complexd a, complexd b, complexd c, complexd d) {
    auto cross = [](complexd u, complexd v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

} // namespace detail

// Segment sweep on a decimated copy of the boundary; true when no two
// non-adjacent chords cross.
inline bool polygon_is_simple(const TruncatingPolygon& poly, std::size_t max_pts = 2500) {
    std::vector<complexd> pts;
    const std::size_t stride = std::max<std::size_t>(1, poly.samples.size() / max_pts);
    for (std::size_t i = 0; i < poly.samples.size(); i += stride) pts.push_back(poly.samples[i].z);
    if (std::abs(pts.back() - poly.samples.back().z) > 0.0) pts.push_back(poly.samples.back().z);
    while (pts.size() > 2 && std::abs(pts.back() - pts.front()) < 1e-14) pts.pop_back();
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            if (i == 0 && j + 2 == n) continue; // adjacency through the closure
            if (detail::proper_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1])) return false;
        }
    for (std::size_t j = 1; j + 2 < n; ++j)
        if (detail::proper_intersection(pts[n - 1], pts[0], pts[j], pts[j + 1])) return false;
    return true;
}

struct EscapeCheckResult {
    std::optional<double> first_escaping_C;
    std::vector<double> Cs;
    std::vector<double> min_abs; // min |z| over P(C), same order
};

// Least listed C whose polygon avoids the closed disc of radius K_box.
inline EscapeCheckResult polygon_escape_check(const EndData& e, double K_box, const std::vector<double>& Cs,
                                              double step = -1.0) {
    for (std::size_t i = 1; i < Cs.size(); ++i)
        if (!(Cs[i] > Cs[i - 1])) fail("INVALID_SCHEDULE", "C values must be increasing");
    EscapeCheckResult res;
    res.Cs = Cs;
    for (double C : Cs) {
        const double dt = step > 0.0 ? step : 0.01 * C;
        const auto poly = close_polygon(lift(e, C, dt), e);
        const double r = poly.min_abs();
        res.min_abs.push_back(r);
        if (!res.first_escaping_C && r > K_box) res.first_escaping_C = C;
    }
    return res;
}

} // namespace mincurv
