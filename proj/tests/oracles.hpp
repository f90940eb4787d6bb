#pragma once

// Test-only oracles, independent of the implementation paths they check:
//  - 9-point fourth-order Laplacian for disc-metric curvature
//  - dense 1D collocation for the radial sinh-Gordon two-point BVP
//  - MPFR tanh-sinh quadrature (>= 50 digits) for the catenoid height
//  - per-circle bisection for the level curves of Im F
//  - lexicographic Gauss-Seidel for the linearized Helmholtz comparison
//  - brute-force segment sweep for polygon simplicity

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mincurv/end_model.hpp"
#include "mincurv/metric_models.hpp"
#include "mincurv/sinh_gordon.hpp"

namespace oracles {

using mincurv::complexd;

// ---- curvature via fourth-order stencils ---------------------------------

inline double high_order_curvature(const mincurv::ConformalDiscMetric& m, complexd z, double h) {
    auto ls = [&](complexd w) { return std::log(mincurv::sigma_at(m, w)); };
    auto d2 = [&](complexd dir) {
        return (-ls(z + 2.0 * h * dir) + 16.0 * ls(z + h * dir) - 30.0 * ls(z) + 16.0 * ls(z - h * dir) -
                ls(z - 2.0 * h * dir)) /
               (12.0 * h * h);
    };
    const double lap = d2(complexd(1, 0)) + d2(complexd(0, 1));
    const double s = mincurv::sigma_at(m, z);
    return -lap / (s * s);
}

// ---- radial two-point BVP on a dense uniform r-grid ----------------------

// Solves xi'' + xi'/r + 2 K sinh(2 xi) |phi|(r) = 0 on [r_in, r_out] with
// Dirichlet data, by Newton on a tridiagonal system (Thomas solve).
struct RadialSolution {
    std::vector<double> r;
    std::vector<double> xi;

    double at(double rr) const {
        const double h = r[1] - r[0];
        const double f = (rr - r.front()) / h;
        const int i = std::min(std::max(static_cast<int>(std::floor(f)), 0), static_cast<int>(r.size()) - 2);
        const double s = f - i;
        return (1.0 - s) * xi[i] + s * xi[i + 1];
    }

    double slope_at(double rr) const {
        const double h = r[1] - r[0];
        int i = static_cast<int>(std::round((rr - r.front()) / h));
        i = std::min(std::max(i, 1), static_cast<int>(r.size()) - 2);
        return (xi[i + 1] - xi[i - 1]) / (2.0 * h);
    }
};

inline RadialSolution radial_bvp(double r_in, double r_out, double bc_in, double bc_out, double K,
                                 const std::function<double(double)>& abs_phi, int n = 32769) {
    RadialSolution sol;
    sol.r.resize(n);
    sol.xi.resize(n);
    const double h = (r_out - r_in) / (n - 1);
    for (int i = 0; i < n; ++i) {
        sol.r[i] = r_in + i * h;
        const double s = double(i) / (n - 1);
        sol.xi[i] = (1.0 - s) * bc_in + s * bc_out;
    }
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (int newton = 0; newton < 80; ++newton) {
        double res_norm = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            const double r = sol.r[i];
            const double res = (sol.xi[i - 1] - 2.0 * sol.xi[i] + sol.xi[i + 1]) / (h * h) +
                               (sol.xi[i + 1] - sol.xi[i - 1]) / (2.0 * h * r) +
                               2.0 * K * std::sinh(2.0 * sol.xi[i]) * abs_phi(r);
            rhs[i] = -res;
            lower[i] = 1.0 / (h * h) - 1.0 / (2.0 * h * r);
            diag[i] = -2.0 / (h * h) + 4.0 * K * std::cosh(2.0 * sol.xi[i]) * abs_phi(r);
            upper[i] = 1.0 / (h * h) + 1.0 / (2.0 * h * r);
            res_norm = std::max(res_norm, std::abs(res));
        }
        if (res_norm < 1e-13) break;
        // Thomas solve on interior nodes
        std::vector<double> cp(n, 0.0), dp(n, 0.0);
        cp[1] = upper[1] / diag[1];
        dp[1] = rhs[1] / diag[1];
        for (int i = 2; i + 1 < n; ++i) {
            const double mlt = diag[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / mlt;
            dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / mlt;
        }
        double prev = dp[n - 2];
        sol.xi[n - 2] += prev;
        for (int i = n - 3; i >= 1; --i) {
            prev = dp[i] - cp[i] * prev;
            sol.xi[i] += prev;
        }
    }
    return sol;
}

// ---- per-circle bisection for level curves -------------------------------

// Root of Im F = c log r + r^{m+1} sin((m+1)theta) in the angular band of
// component k, on the circle of radius r.
inline double level_theta_bisection(const mincurv::EndData& e, int k, double r) {
    const double q = M_PI / (e.m + 1);
    double lo = k * q - q / 10.0, hi = k * q + q / 10.0;
    auto g = [&](double th) {
        return e.c * std::log(r) + std::pow(r, e.m + 1) * std::sin((e.m + 1) * th);
    };
    double glo = g(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) > 0) == (glo > 0)) {
            lo = mid;
            glo = g(mid);
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ---- linear Helmholtz comparison solve ------------------------------------

// Lap u = mu u on the rectangle with Dirichlet data, by plain lexicographic
// Gauss-Seidel (distinct from the implementation's Newton/red-black path).
inline std::vector<double> helmholtz_gs(const mincurv::WGrid& g, double mu,
                                        const std::function<double(complexd)>& bc) {
    std::vector<double> u(g.size(), 0.0);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1)
                u[g.idx(i, j)] = bc(complexd(g.x(i), g.y(j)));
    const double cx = 1.0 / (g.hx() * g.hx()), cy = 1.0 / (g.hy() * g.hy());
    for (int sweep = 0; sweep < 200000; ++sweep) {
        double worst = 0.0;
        for (int i = 1; i + 1 < g.nx; ++i)
            for (int j = 1; j + 1 < g.ny; ++j) {
                const double nb = cx * (u[g.idx(i - 1, j)] + u[g.idx(i + 1, j)]) +
                                  cy * (u[g.idx(i, j - 1)] + u[g.idx(i, j + 1)]);
                const double d = 2.0 * cx + 2.0 * cy + mu;
                const double next = nb / d;
                worst = std::max(worst, std::abs(next - u[g.idx(i, j)]));
                u[g.idx(i, j)] = next;
            }
        if (worst < 1e-13) break;
    }
    return u;
}

// ---- polygon simplicity by segment sweep ----------------------------------

inline bool segments_intersect(complexd a, complexd b, complexd c, complexd d) {
    auto cross = [](complexd u, complexd v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Number of proper self-intersections of the closed polyline (decimated).
inline int self_intersections(const std::vector<complexd>& pts_in, std::size_t max_pts = 3000) {
    std::vector<complexd> pts;
    const std::size_t stride = std::max<std::size_t>(1, pts_in.size() / max_pts);
    for (std::size_t i = 0; i < pts_in.size(); i += stride) pts.push_back(pts_in[i]);
    if (std::abs(pts.back() - pts_in.back()) > 0.0) pts.push_back(pts_in.back());
    const std::size_t n = pts.size();
    int count = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            if (i == 0 && j + 2 == n) continue; // closing edge adjacency
            if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) ++count;
        }
    // closing edge against non-adjacent ones
    for (std::size_t j = 1; j + 2 < n; ++j)
        if (segments_intersect(pts[n - 1], pts[0], pts[j], pts[j + 1])) ++count;
    return count;
}

// ---- plain Simpson for the branch-integral forward check ------------------

inline complexd simpson_path_integral(const std::function<complexd(double)>& f, double a, double b,
                                      int n = 4000) {
    complexd acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + (b - a) * i / n) * ((i % 2) ? 4.0 : 2.0);
    return acc * (b - a) / (3.0 * n);
}

} // namespace oracles
