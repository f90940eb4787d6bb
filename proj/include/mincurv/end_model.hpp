#pragma once

// Normal form of the Hopf differential at a puncture,
//   phi(z) = ((m+1) z^m + c i / z)^2,
// its branch integrals F(z) = z^{m+1} + c i Log z on overlapping sectors, the
// zero set of Im F, and asymptotic-profile counts.

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace mincurv {

using complexd = std::complex<double>;

struct EndData {
    int m = 0;       // polynomial degree of the normal form
    double c = 0.0;  // residue coefficient
    double R = 2.0;  // inner radius of the end annulus

    EndData(int m_, double c_, double R_) : m(m_), c(c_), R(R_) {
        if (m < 0) fail("INVALID_END", "m must be >= 0");
        if (!(R > 0.0)) fail("INVALID_END", "R must be > 0");
        if (!radius_ok()) fail("INVALID_END", "R^{m+1} must exceed 1 + 4*pi*|c|/cos(pi/10)");
    }

    bool radius_ok() const {
        return std::pow(R, m + 1) > 1.0 + 4.0 * M_PI * std::abs(c) / std::cos(M_PI / 10.0);
    }
};

// phi(z) = ((m+1) z^m + c i / z)^2.
inline complexd hopf_phi(const EndData& e, complexd z) {
    if (z == complexd(0.0, 0.0)) fail("SINGULARITY", "hopf differential has a pole at z = 0");
    const complexd root = double(e.m + 1) * std::pow(z, e.m) + complexd(0.0, e.c) / z;
    return root * root;
}

// The square root branch with positive leading coefficient, so that
// sqrt(phi)(z) -> (m+1) z^m at infinity. Single-valued on the punctured plane.
inline complexd sqrt_hopf_phi(const EndData& e, complexd z) {
    if (z == complexd(0.0, 0.0)) fail("SINGULARITY", "hopf differential has a pole at z = 0");
    return double(e.m + 1) * std::pow(z, e.m) + complexd(0.0, e.c) / z;
}

// Natural coordinate with an explicit argument: F = z^{m+1} + c i (log|z| + i theta).
// theta must be a continuous argument of z (theta = arg z mod 2pi).
inline complexd natural_coord_at(const EndData& e, complexd z, double theta) {
    return std::pow(z, e.m + 1) + complexd(0.0, e.c) * complexd(std::log(std::abs(z)), theta);
}

// Globally well defined part: Im F = c log|z| + |z|^{m+1} sin((m+1) theta).
inline double im_natural(const EndData& e, complexd z) {
    return e.c * std::log(std::abs(z)) + std::imag(std::pow(z, e.m + 1));
}

// Overlapping sector on which one branch of the argument (hence of F) lives.
struct BranchDomain {
    int k = 0;          // sector index in {0, ..., 2m+1}
    int m = 0;
    double arg_lo = 0.0;
    double arg_hi = 0.0;

    BranchDomain(int k_, int m_) : k(k_), m(m_) {
        if (m < 0 || k < 0 || k > 2 * m + 1) fail("INVALID_SECTOR", "sector index out of range");
        const double q = M_PI / (m + 1);
        arg_lo = k * q - q / 10.0;
        arg_hi = (k + 1) * q + q / 10.0;
    }

    // A representative of arg(z) inside [arg_lo, arg_hi], or throws.
    double representative_arg(complexd z) const {
        double t = std::arg(z); // (-pi, pi]
        while (t < arg_lo) t += 2.0 * M_PI;
        while (t > arg_hi) t -= 2.0 * M_PI;
        if (t < arg_lo) fail("BRANCH", "arg(z) has no representative in the sector interval");
        return t;
    }

    bool contains_arg(double theta) const { return theta >= arg_lo && theta <= arg_hi; }
};

// Branch value of the natural coordinate on a sector domain. The formula is
// valid on the whole punctured sector, not only outside |z| = R.
inline complexd natural_coord(const EndData& e, const BranchDomain& dom, complexd z) {
    if (z == complexd(0.0, 0.0)) fail("SINGULARITY", "natural coordinate undefined at z = 0");
    return natural_coord_at(e, z, dom.representative_arg(z));
}

// One connected component of {Im F = 0}, traced outward from |z| = R.
struct LevelCurve {
    int k = 0; // component index; the curve hugs arg = k pi/(m+1)
    std::vector<complexd> samples;
};

// Number of Im F = 0 roots on a circle |z| = r, with the angular positions.
// Solves sin((m+1) theta) = -c log(r) / r^{m+1} in closed form per band.
inline std::vector<double> level_roots_on_circle(const EndData& e, double r) {
    const double s = -e.c * std::log(r) / std::pow(r, e.m + 1);
    if (std::abs(s) > 1.0) fail("ROOT_COUNT_MISMATCH", "no level roots on circle; radius too small");
    std::vector<double> roots;
    const int n = 2 * (e.m + 1);
    roots.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        roots.push_back((k * M_PI + sign * std::asin(s)) / (e.m + 1));
    }
    return roots;
}

namespace detail {

// One predictor-corrector continuation step along {Im F = 0}. The tangent is
// grad(Im F) rotated by 90 degrees; since F is holomorphic,
// grad(Im F) = (Im sqrt(phi), Re sqrt(phi)).
inline complexd level_step(const EndData& e, complexd z, double step_len) {
    const complexd d = sqrt_hopf_phi(e, z);
    complexd grad(d.imag(), d.real());
    complexd tan(-grad.imag(), grad.real());
    tan /= std::abs(tan);
    // orient outward
    if (std::real(tan * std::conj(z)) < 0.0) tan = -tan;
    complexd w = z + step_len * tan;
    // Newton transverse to the curve: move along the gradient direction.
    for (int it = 0; it < 40; ++it) {
        const double f = im_natural(e, w);
        if (std::abs(f) < 1e-12 * (1.0 + std::abs(std::pow(w, e.m + 1)))) break;
        const complexd dw = sqrt_hopf_phi(e, w);
        complexd g(dw.imag(), dw.real());
        const double g2 = std::norm(g);
        w -= f / g2 * g;
    }
    if (std::abs(im_natural(e, w)) > 1e-8 * (1.0 + std::abs(std::pow(w, e.m + 1))))
        fail("ROOT_COUNT_MISMATCH", "level-curve corrector failed to converge");
    return w;
}

} // namespace detail

// Traces the 2(m+1) components of {Im F = 0} from |z| = R out to r_max
// (default 8R). For c = 0 the curves are exact rays and are emitted
// analytically.
inline std::vector<LevelCurve> trace_level_curves(const EndData& e, double r_max = -1.0, double step_factor = 0.01) {
    if (r_max <= 0.0) r_max = 8.0 * e.R;
    const int n = 2 * (e.m + 1);
    std::vector<LevelCurve> curves(n);

    if (e.c == 0.0) {
        for (int k = 0; k < n; ++k) {
            curves[k].k = k;
            const double t = k * M_PI / (e.m + 1);
            const complexd dir(std::cos(t), std::sin(t));
            const int steps = 400;
            for (int i = 0; i <= steps; ++i) {
                const double r = e.R * std::pow(r_max / e.R, double(i) / steps);
                curves[k].samples.push_back(r * dir);
            }
        }
        return curves;
    }

    const std::vector<double> roots = level_roots_on_circle(e, e.R);
    if (static_cast<int>(roots.size()) != n) fail("ROOT_COUNT_MISMATCH", "unexpected root count on inner circle");
    const double band = M_PI / (10.0 * (e.m + 1));
    for (int k = 0; k < n; ++k) {
        curves[k].k = k;
        complexd z = e.R * complexd(std::cos(roots[k]), std::sin(roots[k]));
        curves[k].samples.push_back(z);
        const double center = k * M_PI / (e.m + 1);
        while (std::abs(z) < r_max) {
            z = detail::level_step(e, z, step_factor * std::abs(z));
            double t = std::arg(z);
            while (t < center - M_PI) t += 2.0 * M_PI;
            while (t > center + M_PI) t -= 2.0 * M_PI;
            if (std::abs(t - center) > band)
                fail("ROOT_COUNT_MISMATCH", "level curve left its angular band");
            curves[k].samples.push_back(z);
        }
    }
    return curves;
}

struct ProfileCounts {
    int top_geodesics = 0;
    int bottom_geodesics = 0;
    int vertical_lines = 0;
};

// Asymptotic profile of an end of degree m: m+1 geodesics at +infinity, m+1
// at -infinity, 2(m+1) vertical lines joining their endpoints.
inline ProfileCounts profile_counts(const EndData& e) {
    return {e.m + 1, e.m + 1, 2 * (e.m + 1)};
}

} // namespace mincurv
