#pragma once

// Conformal metrics on the Poincare disc model of a pinched Hadamard surface,
// and warped polar metrics ds^2 + G dtheta^2. Curvature is evaluated by
// finite differences on log of the conformal factor.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"

namespace mincurv {

using complexd = std::complex<double>;

// Conformal factor component alpha(z), bounded between two positive constants.
// Closed forms (constant, polynomial in |z|^2) are preferred for
// reproducibility; a callable field is accepted as well.
struct AlphaField {
    enum class Kind { Constant, PolyR2, Callable };

    Kind kind = Kind::Constant;
    double constant = 1.0;
    std::vector<double> coeffs; // a0 + a1 r^2 + a2 r^4 + ...
    std::function<double(complexd)> fn;

    double operator()(complexd z) const {
        switch (kind) {
            case Kind::Constant: return constant;
            case Kind::PolyR2: {
                const double r2 = std::norm(z);
                double acc = 0.0;
                for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * r2 + coeffs[i];
                return acc;
            }
            case Kind::Callable: return fn(z);
        }
        return constant;
    }

    static AlphaField make_constant(double v) {
        AlphaField a;
        a.kind = Kind::Constant;
        a.constant = v;
        return a;
    }
    static AlphaField make_poly_r2(std::vector<double> c) {
        AlphaField a;
        a.kind = Kind::PolyR2;
        a.coeffs = std::move(c);
        return a;
    }
    static AlphaField make_callable(std::function<double(complexd)> f) {
        AlphaField a;
        a.kind = Kind::Callable;
        a.fn = std::move(f);
        return a;
    }
};

struct ConformalDiscMetric {
    AlphaField alpha;
    double alpha_min = 0.0;
    double alpha_max = 0.0;

    ConformalDiscMetric(AlphaField a, double lo, double hi) : alpha(std::move(a)), alpha_min(lo), alpha_max(hi) {
        if (!(alpha_min > 0.0) || !(alpha_min <= alpha_max))
            fail("INVALID_METRIC", "need 0 < alpha_min <= alpha_max");
    }

    // Bounds scanned over |z| <= 0.95 (paper computations live on compact pieces).
    static ConformalDiscMetric from_alpha(AlphaField a) {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i <= 400; ++i) {
            const double r = 0.95 * i / 400.0;
            const double v = a(complexd(r, 0.0)); // radial closed forms; callable scanned on axis too
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return ConformalDiscMetric(std::move(a), lo, hi);
    }
};

// Two-sided pinching constants: -a^2 <= K <= -b^2.
struct CurvatureBounds {
    double a = 1.0;
    double b = 1.0;

    CurvatureBounds(double a_, double b_) : a(a_), b(b_) {
        if (!(0.0 < b && b <= a)) fail("INVALID_BOUNDS", "need 0 < b <= a");
    }
};

// sigma(z) = 2 alpha(z) / (1 - |z|^2), so the metric is sigma^2 |dz|^2.
inline double sigma_at(const ConformalDiscMetric& m, complexd z) {
    const double r2 = std::norm(z);
    if (!(r2 < 1.0)) fail("DOMAIN", "sigma_at requires |z| < 1");
    return 2.0 * m.alpha(z) / (1.0 - r2);
}

// Gauss curvature K = -(Laplacian of log sigma)/sigma^2, 5-point stencil with
// step h. Second-order accurate.
inline double gauss_curvature(const ConformalDiscMetric& m, complexd z, double h) {
    if (!(h > 0.0)) fail("DOMAIN", "gauss_curvature requires h > 0");
    if (!(std::abs(z) + 2.0 * h < 1.0)) fail("STENCIL_OUT_OF_DOMAIN", "stencil leaves the unit disc");
    auto ls = [&](complexd w) { return std::log(sigma_at(m, w)); };
    const double lap = (ls(z + h) + ls(z - h) + ls(z + complexd(0, h)) + ls(z - complexd(0, h)) - 4.0 * ls(z)) / (h * h);
    const double s = sigma_at(m, z);
    return -lap / (s * s);
}

struct PinchingViolation {
    complexd z;
    double K;
};

struct PinchingReport {
    std::vector<complexd> samples;
    std::vector<double> curvatures;    // K at each sample, same order
    std::vector<PinchingViolation> violations;
    double tol = 0.0;

    bool pass() const { return violations.empty(); }
};

// Default sample grid: polar samples in |z| <= 0.95 (stencils blow up near
// the ideal boundary).
inline std::vector<complexd> disc_sample_grid(int n_r = 12, int n_theta = 24, double r_max = 0.95) {
    std::vector<complexd> out;
    out.reserve(static_cast<std::size_t>(n_r) * n_theta + 1);
    out.emplace_back(0.0, 0.0);
    for (int i = 1; i <= n_r; ++i) {
        const double r = r_max * i / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double t = 2.0 * M_PI * j / n_theta;
            out.emplace_back(r * std::cos(t), r * std::sin(t));
        }
    }
    return out;
}

// Lists every sample violating -a^2 - tol <= K <= -b^2 + tol. Violations are
// data, not errors. tol defaults to 10 h^2. The stencil step is scaled by
// 1 - |z|^2 so the truncation error stays uniform up to the sample cutoff.
inline PinchingReport verify_pinching(const ConformalDiscMetric& m, const CurvatureBounds& bounds,
                                      const std::vector<complexd>& samples, double h = 1e-3, double tol = -1.0) {
    if (tol < 0.0) tol = 10.0 * h * h;
    PinchingReport rep;
    rep.tol = tol;
    rep.samples = samples;
    rep.curvatures.resize(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        rep.curvatures[i] = gauss_curvature(m, samples[i], h * (1.0 - std::norm(samples[i])));
    });
    const double lo = -bounds.a * bounds.a - tol;
    const double hi = -bounds.b * bounds.b + tol;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double K = rep.curvatures[i];
        if (K < lo || K > hi) rep.violations.push_back({samples[i], K});
    }
    return rep;
}

// Warped polar metric ds^2 + G(s,theta) dtheta^2 around a point of the
// surface; G = sinh^2(ks) in constant curvature -k^2.
struct WarpedPolarMetric {
    std::function<double(double, double)> G;   // (s, theta)
    std::function<double(double, double)> G_s; // d/ds
    double closed_form_k = 0.0;                // > 0 tags G = sinh^2(ks)

    static WarpedPolarMetric hyperbolic(double k) {
        WarpedPolarMetric m;
        m.G = [k](double s, double) { const double v = std::sinh(k * s); return v * v; };
        m.G_s = [k](double s, double) { return 2.0 * k * std::sinh(k * s) * std::cosh(k * s); };
        m.closed_form_k = k;
        return m;
    }
};

// Radial sectional curvature K = -(sqrt(G))_ss / sqrt(G), by Richardson-
// extrapolated central differences on sqrt(G).
inline double warped_polar_curvature(const WarpedPolarMetric& m, double s, double theta, double h = 1e-4) {
    if (m.closed_form_k > 0.0) return -m.closed_form_k * m.closed_form_k;
    auto g = [&](double x) { return std::sqrt(m.G(x, theta)); };
    auto second = [&](double step) { return (g(s + step) - 2.0 * g(s) + g(s - step)) / (step * step); };
    const double d2h = second(h), d2h2 = second(h / 2.0);
    const double dss = (4.0 * d2h2 - d2h) / 3.0;
    return -dss / g(s);
}

} // namespace mincurv
