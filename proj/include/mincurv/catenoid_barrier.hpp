#pragma once

// Rotational minimal catenoids in H^2(-k^2) x R, the mean-curvature operator
// for rotational graphs over warped polar metrics, the comparison signs under
// curvature pinching, the logarithmic-derivative inequality
//   G^(k1)_s/G^(k1) > G_s/G > G^(k2)_s/G^(k2),
// and the Fermi-coordinate barrier f(s) = (1/k) log tanh(ks/2).

#include <cmath>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "metric_models.hpp"

namespace mincurv {

struct CatenoidProfile {
    double A = 1.0; // flux parameter
    double k = 1.0; // curvature scale
    double R_neck = 0.0;

    CatenoidProfile(double A_, double k_) : A(A_), k(k_) {
        if (!(A > 0.0 && k > 0.0)) fail("INVALID_PROFILE", "need A > 0 and k > 0");
        R_neck = std::asinh(A) / k;
    }
};

namespace detail {

// sinh^2(ks) - A^2 factored as (sinh(ks) + A) * 2 cosh(k(s+R)/2) sinh(k(s-R)/2),
// exact near the neck where the direct form cancels.
inline double sinh2_minus_A2(const CatenoidProfile& p, double s) {
    return (std::sinh(p.k * s) + p.A) * 2.0 * std::cosh(0.5 * p.k * (s + p.R_neck)) *
           std::sinh(0.5 * p.k * (s - p.R_neck));
}

// adaptive Simpson on [a, b]
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// h'(s) = A / sqrt(sinh^2(ks) - A^2), the closed-form slope of the profile.
inline double catenoid_slope(const CatenoidProfile& p, double s) {
    if (!(s > p.R_neck)) fail("DOMAIN", "slope defined for s > R_neck");
    return p.A / std::sqrt(detail::sinh2_minus_A2(p, s));
}

// h''(s), exact derivative of the closed-form slope.
inline double catenoid_slope_derivative(const CatenoidProfile& p, double s) {
    if (!(s > p.R_neck)) fail("DOMAIN", "slope defined for s > R_neck");
    const double D = detail::sinh2_minus_A2(p, s);
    return -p.A * p.k * std::sinh(p.k * s) * std::cosh(p.k * s) / (D * std::sqrt(D));
}

// Height h_{A,k}(s) = int_{R_neck}^{s} A / sqrt(sinh^2(kr) - A^2) dr, by
// adaptive quadrature after the substitution r = R_neck + t^2 which removes
// the inverse-square-root endpoint singularity. Absolute error < 1e-10.
inline double height_profile(const CatenoidProfile& p, double s) {
    if (!(s >= p.R_neck)) fail("DOMAIN", "height defined for s >= R_neck");
    if (s == p.R_neck) return 0.0;
    const double T = std::sqrt(s - p.R_neck);
    auto f = [&](double t) {
        if (t == 0.0) return std::sqrt(2.0 * p.A / (p.k * std::sqrt(1.0 + p.A * p.A)));
        // the singular factor is built from t^2 directly; r - R_neck would
        // cancel to zero in double once t^2 < eps * R_neck
        const double r = p.R_neck + t * t;
        const double D = (std::sinh(p.k * r) + p.A) * 2.0 * std::cosh(0.5 * p.k * (r + p.R_neck)) *
                         std::sinh(0.5 * p.k * t * t);
        return 2.0 * p.A * t / std::sqrt(D);
    };
    const double fa = f(0.0), fb = f(T), fm = f(0.5 * T);
    const double whole = T / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson(f, 0.0, T, fa, fm, fb, whole, 1e-12, 40);
}

// Residual of the minimal-graph equation in H^2(-k^2):
//   sinh(ks) h'' + k cosh(ks) (1 + h'^2) h'.
inline double catenoid_ode_residual(const CatenoidProfile& p, double s) {
    const double h1 = catenoid_slope(p, s);
    const double h2 = catenoid_slope_derivative(p, s);
    return std::sinh(p.k * s) * h2 + p.k * std::cosh(p.k * s) * (1.0 + h1 * h1) * h1;
}

// Rotational graph profile with first and second derivatives.
struct GraphProfile {
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    double s_min = 0.0; // derivatives defined for s > s_min

    static GraphProfile catenoid(const CatenoidProfile& p) {
        GraphProfile g;
        g.d1 = [p](double s) { return catenoid_slope(p, s); };
        g.d2 = [p](double s) { return catenoid_slope_derivative(p, s); };
        g.s_min = p.R_neck;
        return g;
    }

    static GraphProfile constant() {
        GraphProfile g;
        g.d1 = [](double) { return 0.0; };
        g.d2 = [](double) { return 0.0; };
        return g;
    }
};

struct MeanCurvatureSample {
    double s = 0.0;
    double H2 = 0.0; // value of 2H
    int sign = 0;    // of H2, with dead band +-1e-10
};

// 2H = (2 G h'' + (1 + h'^2) h' G_s) / (2 G (1 + h'^2)^{3/2}) for the graph
// (s, theta, h(s)) with upward-tilted unit normal.
inline MeanCurvatureSample mean_curvature(const WarpedPolarMetric& metric, const GraphProfile& h, double s,
                                          double theta = 0.0) {
    const double G = metric.G(s, theta);
    const double Gs = metric.G_s(s, theta);
    const double h1 = h.d1(s), h2 = h.d2(s);
    MeanCurvatureSample out;
    out.s = s;
    const double numerator = 2.0 * G * h2 + (1.0 + h1 * h1) * h1 * Gs;
    out.H2 = numerator / (2.0 * G * std::pow(1.0 + h1 * h1, 1.5));
    out.sign = (out.H2 > 1e-10) ? 1 : (out.H2 < -1e-10 ? -1 : 0);
    return out;
}

// Numerator of 2H only; its sign decides inward/outward.
inline double mean_curvature_numerator(const WarpedPolarMetric& metric, const GraphProfile& h, double s,
                                       double theta = 0.0) {
    const double h1 = h.d1(s), h2 = h.d2(s);
    return 2.0 * metric.G(s, theta) * h2 + (1.0 + h1 * h1) * h1 * metric.G_s(s, theta);
}

struct PinchingPrecheck {
    bool ok = false;       // strict pinching holds at all samples (up to tolerance)
    double worst_upper = 0.0; // max over samples of K + k2^2  (want < 0)
    double worst_lower = 0.0; // max over samples of -k1^2 - K (want < 0)
};

// Verifies -k1^2 < K < -k2^2 at the samples via the polar curvature formula
// K = -(sqrt G)_ss / sqrt G. Violations beyond `tol` are hard failures.
inline PinchingPrecheck pinching_precheck(const WarpedPolarMetric& metric, double k1, double k2,
                                          const std::vector<double>& samples, double tol = 1e-8) {
    PinchingPrecheck pre;
    pre.worst_upper = -1e300;
    pre.worst_lower = -1e300;
    for (double s : samples) {
        const double K = warped_polar_curvature(metric, s, 0.0);
        pre.worst_upper = std::max(pre.worst_upper, K + k2 * k2);
        pre.worst_lower = std::max(pre.worst_lower, -k1 * k1 - K);
    }
    if (pre.worst_upper > tol || pre.worst_lower > tol)
        fail("PRECONDITION_FAIL", "curvature pinching -k1^2 < K < -k2^2 fails at a sample");
    pre.ok = pre.worst_upper < 0.0 && pre.worst_lower < 0.0;
    return pre;
}

struct ComparisonSignReport {
    bool pinching_strict = false;
    bool outer_holds = false; // numerator with h_{A,k1} < 0 at all samples
    bool inner_holds = false; // numerator with h_{A,k2} > 0 at all samples
    double worst_outer = 0.0; // max numerator over samples (want < 0)
    double worst_inner = 0.0; // min numerator over samples (want > 0)
    bool pass = false;
};

// Proposition-style sign scan: under -k1^2 < K < -k2^2 the catenoid profile
// for k1 has 2H numerator < 0 (mean curvature points outwards) and the one
// for k2 has it > 0 (points inwards).
inline ComparisonSignReport comparison_signs(const WarpedPolarMetric& metric, double k1, double k2, double A,
                                             const std::vector<double>& samples) {
    if (!(k1 > k2 && k2 > 0.0)) fail("DOMAIN", "need k1 > k2 > 0");
    const CatenoidProfile p1(A, k1), p2(A, k2);
    for (double s : samples)
        if (!(s > std::max(p1.R_neck, p2.R_neck)))
            fail("DOMAIN", "samples must exceed both neck radii");

    ComparisonSignReport rep;
    rep.pinching_strict = pinching_precheck(metric, k1, k2, samples).ok;

    const GraphProfile g1 = GraphProfile::catenoid(p1);
    const GraphProfile g2 = GraphProfile::catenoid(p2);
    rep.worst_outer = -1e300;
    rep.worst_inner = 1e300;
    for (double s : samples) {
        rep.worst_outer = std::max(rep.worst_outer, mean_curvature_numerator(metric, g1, s));
        rep.worst_inner = std::min(rep.worst_inner, mean_curvature_numerator(metric, g2, s));
    }
    rep.outer_holds = rep.worst_outer < -1e-10;
    rep.inner_holds = rep.worst_inner > 1e-10;
    rep.pass = rep.pinching_strict && rep.outer_holds && rep.inner_holds;
    return rep;
}

struct RatioInequalityReport {
    bool pinching_strict = false;
    double min_margin_upper = 0.0; // min over samples of G1_s/G1 - G_s/G
    double min_margin_lower = 0.0; // min over samples of G_s/G - G2_s/G2
    bool pass = false;
};

// Strict inequalities G^(k1)_s/G^(k1) > G_s/G > G^(k2)_s/G^(k2); the model
// ratios are 2 k coth(k s).
inline RatioInequalityReport ratio_inequality(const WarpedPolarMetric& metric, double k1, double k2,
                                              const std::vector<double>& samples) {
    if (!(k1 > k2 && k2 > 0.0)) fail("DOMAIN", "need k1 > k2 > 0");
    for (double s : samples)
        if (!(s >= 0.05)) fail("DOMAIN", "samples must stay away from the axis (s >= 0.05)");

    RatioInequalityReport rep;
    rep.pinching_strict = pinching_precheck(metric, k1, k2, samples).ok;
    rep.min_margin_upper = 1e300;
    rep.min_margin_lower = 1e300;
    for (double s : samples) {
        const double ratio = metric.G_s(s, 0.0) / metric.G(s, 0.0);
        const double r1 = 2.0 * k1 / std::tanh(k1 * s);
        const double r2 = 2.0 * k2 / std::tanh(k2 * s);
        rep.min_margin_upper = std::min(rep.min_margin_upper, r1 - ratio);
        rep.min_margin_lower = std::min(rep.min_margin_lower, ratio - r2);
    }
    rep.pass = rep.pinching_strict && rep.min_margin_upper > 0.0 && rep.min_margin_lower > 0.0;
    return rep;
}

// Fermi-coordinate barrier f(s) = (1/k) log tanh(ks/2): negative, strictly
// increasing, concave, f -> 0 at infinity and -infinity at the axis.
inline double fermi_barrier(double k, double s) {
    if (!(k > 0.0)) fail("DOMAIN", "fermi_barrier requires k > 0");
    if (!(s > 0.0)) fail("DOMAIN", "fermi_barrier requires s > 0");
    return std::log(std::tanh(0.5 * k * s)) / k;
}

// f'(s) = 1/sinh(ks).
inline double fermi_barrier_derivative(double k, double s) {
    if (!(k > 0.0 && s > 0.0)) fail("DOMAIN", "fermi_barrier requires k > 0, s > 0");
    return 1.0 / std::sinh(k * s);
}

} // namespace mincurv
