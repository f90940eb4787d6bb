#pragma once

// The induced metric lambda^2 |dz|^2 = 4 cosh^2(xi) |phi| |dz|^2, its
// intrinsic curvature, geodesic curvature along the truncating polygon and
// the inner circle, and the Gauss-Bonnet accounting against -2pi(m+1),
// together with the exact total-curvature formula 2pi(2 - 2g - 2n - sum m_k).

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "end_model.hpp"
#include "lift_engine.hpp"
#include "sinh_gordon.hpp"

namespace mincurv {

struct MetricField {
    XiField xi;
    EndData end;
    std::vector<double> lambda; // conformal factor per node

    double at(int i, int j) const { return lambda[xi.grid.idx(i, j)]; }
};

// lambda = 2 cosh(xi) sqrt(|phi|) nodewise.
inline MetricField metric_from_xi(const XiField& xi, const EndData& end) {
    if (xi.grid.r_in + 1e-12 < end.R) fail("DOMAIN", "xi grid must lie in the end domain");
    MetricField m{xi, end, std::vector<double>(xi.grid.size(), 0.0)};
    for (int i = 0; i < xi.grid.n_r; ++i)
        for (int j = 0; j < xi.grid.n_theta; ++j) {
            const complexd z = xi.grid.z(i, j);
            m.lambda[xi.grid.idx(i, j)] =
                2.0 * std::cosh(xi.at(i, j)) * std::sqrt(std::abs(hopf_phi(end, z)));
        }
    return m;
}

struct CurvatureField {
    AnnulusGrid grid;
    std::vector<double> values; // K at interior nodes; boundary rows extrapolated

    double at(int i, int j) const { return values[grid.idx(i, j)]; }

    double max_interior() const {
        double worst = -1e300;
        for (int i = 1; i < grid.n_r - 1; ++i)
            for (int j = 0; j < grid.n_theta; ++j) worst = std::max(worst, at(i, j));
        return worst;
    }
};

// K = -(Lap0 log lambda)/lambda^2 by the 5-point stencil on the log-polar grid.
// Boundary rows carry linear extrapolations (used only for cell averaging).
inline CurvatureField intrinsic_curvature(const MetricField& m) {
    const AnnulusGrid& g = m.xi.grid;
    CurvatureField K{g, std::vector<double>(g.size(), 0.0)};
    std::vector<double> loglam(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) loglam[p] = std::log(m.lambda[p]);
    const double c1 = 1.0 / (g.h_rho() * g.h_rho());
    const double c2 = 1.0 / (g.h_theta() * g.h_theta());
    for (int i = 1; i < g.n_r - 1; ++i)
        for (int j = 0; j < g.n_theta; ++j) {
            const double lap = c1 * (loglam[g.idx(i - 1, j)] + loglam[g.idx(i + 1, j)] - 2.0 * loglam[g.idx(i, j)]) +
                               c2 * (loglam[g.idx(i, j - 1)] + loglam[g.idx(i, j + 1)] - 2.0 * loglam[g.idx(i, j)]);
            const double r = g.r(i);
            const double lam = m.lambda[g.idx(i, j)];
            K.values[g.idx(i, j)] = -lap / (r * r) / (lam * lam);
        }
    for (int j = 0; j < g.n_theta; ++j) {
        K.values[g.idx(0, j)] = 2.0 * K.at(1, j) - K.at(2, j);
        K.values[g.idx(g.n_r - 1, j)] = 2.0 * K.at(g.n_r - 2, j) - K.at(g.n_r - 3, j);
    }
    return K;
}

struct SubharmonicityReport {
    double min_lap_u = 0.0;      // min over interior nodes of discrete Lap0 u
    double identity_max_err = 0.0; // |Lap0 u - (2|grad xi|^2/cosh^2 - 8 K sinh^2 |phi|)|
    double h = 0.0;
    bool pass = false;           // min_lap_u >= -10 h^2
};

// u = log cosh^2(xi) is subharmonic; checks the discrete Laplacian sign and
// the pointwise identity for Lap0 u.
inline SubharmonicityReport subharmonicity_check(const XiField& xi, const EndData& end, const CurvatureInput& K_M) {
    const AnnulusGrid& g = xi.grid;
    std::vector<double> u(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double sh = std::sinh(xi.values[p]);
        u[p] = std::log1p(sh * sh); // log cosh^2, accurate near xi = 0
    }
    const double c1 = 1.0 / (g.h_rho() * g.h_rho());
    const double c2 = 1.0 / (g.h_theta() * g.h_theta());
    SubharmonicityReport rep;
    rep.h = std::max(g.h_rho(), g.h_theta());
    rep.min_lap_u = 1e300;
    for (int i = 1; i < g.n_r - 1; ++i)
        for (int j = 0; j < g.n_theta; ++j) {
            const double lap = (c1 * (u[g.idx(i - 1, j)] + u[g.idx(i + 1, j)] - 2.0 * u[g.idx(i, j)]) +
                                c2 * (u[g.idx(i, j - 1)] + u[g.idx(i, j + 1)] - 2.0 * u[g.idx(i, j)])) /
                               (g.r(i) * g.r(i));
            rep.min_lap_u = std::min(rep.min_lap_u, lap);
            const complexd z = g.z(i, j);
            const complexd grad = xi.grad_z(i, j);
            const double ch = std::cosh(xi.at(i, j)), sh = std::sinh(xi.at(i, j));
            const double rhs = 2.0 * std::norm(grad) / (ch * ch) -
                               8.0 * K_M(z) * sh * sh * std::abs(hopf_phi(end, z));
            rep.identity_max_err = std::max(rep.identity_max_err, std::abs(lap - rhs));
        }
    rep.pass = rep.min_lap_u >= -10.0 * rep.h * rep.h;
    return rep;
}

// Geodesic curvature samples along the horizontal line tau_C(x) = x + iC in
// natural coordinates: kappa = -xi_y / (2 cosh xi), as a curve of the ambient.
struct HorizontalSectionCurve {
    double C = 0.0;
    std::vector<double> x;
    std::vector<double> kappa;
    double integral_abs_kappa_ds = 0.0; // with ds = 2 cosh(xi) |dw|
    double integral_abs_xiy_dx = 0.0;   // the equivalent form
};

inline HorizontalSectionCurve kappa_horizontal(const XiFieldW& xi, double C) {
    const WGrid& g = xi.grid;
    if (!(C >= g.y0 && C <= g.y1)) fail("DOMAIN", "line Im w = C outside the solved strip");
    HorizontalSectionCurve out;
    out.C = C;
    std::vector<double> integrand_ds, integrand_dx;
    for (int i = 0; i < g.nx; ++i) {
        const complexd w(g.x(i), C);
        const double xi_y = xi.interp_grad(w).imag();
        const double ch = std::cosh(xi.interp(w));
        out.x.push_back(g.x(i));
        out.kappa.push_back(-xi_y / (2.0 * ch));
        integrand_ds.push_back(std::abs(-xi_y / (2.0 * ch)) * 2.0 * ch);
        integrand_dx.push_back(std::abs(xi_y));
    }
    for (int i = 0; i + 1 < g.nx; ++i) {
        const double dx = g.x(i + 1) - g.x(i);
        out.integral_abs_kappa_ds += 0.5 * (integrand_ds[i] + integrand_ds[i + 1]) * dx;
        out.integral_abs_xiy_dx += 0.5 * (integrand_dx[i] + integrand_dx[i + 1]) * dx;
    }
    return out;
}

// Curvature-vector bound along the vertical section Re w = C:
// (xi_x^2 sinh^2 xi + xi_y^2)^{1/2} / (2 cosh^2 xi), and its integral.
struct VerticalSectionCurve {
    double C = 0.0;
    std::vector<double> y;
    std::vector<double> bound;
    double integral_bound_ds = 0.0;
};

inline VerticalSectionCurve kappa_vertical(const XiFieldW& xi, double C) {
    const WGrid& g = xi.grid;
    if (!(C >= g.x0 && C <= g.x1)) fail("DOMAIN", "line Re w = C outside the solved strip");
    VerticalSectionCurve out;
    out.C = C;
    std::vector<double> integrand;
    for (int j = 0; j < g.ny; ++j) {
        const complexd w(C, g.y(j));
        const complexd grad = xi.interp_grad(w);
        const double v = xi.interp(w);
        const double ch = std::cosh(v), sh = std::sinh(v);
        const double b = std::sqrt(grad.real() * grad.real() * sh * sh + grad.imag() * grad.imag()) /
                         (2.0 * ch * ch);
        out.y.push_back(g.y(j));
        out.bound.push_back(b);
        integrand.push_back(b * 2.0 * ch);
    }
    for (int j = 0; j + 1 < g.ny; ++j)
        out.integral_bound_ds += 0.5 * (integrand[j] + integrand[j + 1]) * (g.y(j + 1) - g.y(j));
    return out;
}

struct BoundaryTerm {
    std::string id;
    double integral = 0.0;     // signed geodesic-curvature integral
    double integral_abs = 0.0; // integral of |kappa_g| ds
};

struct GaussBonnetReport {
    double interior_integral = 0.0;          // int K_Sigma dA over Omega(C, R, p)
    std::vector<BoundaryTerm> boundary_terms; // polygon arcs by class, inner circle
    double polygon_term = 0.0;                // smooth-arc integral over P(C)
    double polygon_term_abs = 0.0;            // sum of int |kappa_g| over the arcs
    double turning_sum = 0.0;                 // classified exterior angles
    double inner_circle_term = 0.0;           // circle |z| = R, counterclockwise
    int genus = 0;
    int n_ends = 1;
    std::vector<int> ms;
    double target = 0.0; // -2pi(m+1)
    double defect = 0.0; // (interior + polygon + turning - circle) - 0
    std::vector<PolygonVertex> vertices;
    std::size_t cells_inside = 0;
};

namespace detail {

// Even-odd point-in-polygon with edges bucketed by imaginary part.
class PolygonRaycaster {
public:
    explicit PolygonRaycaster(const std::vector<PolygonSample>& samples) {
        const std::size_t n = samples.size();
        edges_.reserve(n);
        y_lo_ = 1e300;
        y_hi_ = -1e300;
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            edges_.push_back({samples[j].z, samples[i].z});
            y_lo_ = std::min({y_lo_, samples[i].z.imag()});
            y_hi_ = std::max({y_hi_, samples[i].z.imag()});
        }
        n_bins_ = 256;
        bins_.resize(n_bins_);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const int b0 = bin_of(std::min(edges_[e].first.imag(), edges_[e].second.imag()));
            const int b1 = bin_of(std::max(edges_[e].first.imag(), edges_[e].second.imag()));
            for (int b = b0; b <= b1; ++b) bins_[b].push_back(e);
        }
    }

    bool inside(complexd p) const {
        if (p.imag() < y_lo_ || p.imag() > y_hi_) return false;
        bool in = false;
        for (std::size_t e : bins_[bin_of(p.imag())]) {
            const complexd a = edges_[e].first, b = edges_[e].second;
            if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
                const double x_cross =
                    (b.real() - a.real()) * (p.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
                if (p.real() < x_cross) in = !in;
            }
        }
        return in;
    }

private:
    int bin_of(double y) const {
        int b = static_cast<int>((y - y_lo_) / (y_hi_ - y_lo_) * n_bins_);
        return std::min(std::max(b, 0), n_bins_ - 1);
    }

    std::vector<std::pair<complexd, complexd>> edges_;
    std::vector<std::vector<std::size_t>> bins_;
    double y_lo_ = 0.0, y_hi_ = 0.0;
    int n_bins_ = 256;
};

// d/dr log |phi| evaluated analytically from the normal form.
inline double dr_log_abs_phi(const EndData& e, complexd z) {
    const complexd psi = double(e.m + 1) * std::pow(z, e.m) + complexd(0.0, e.c) / z;
    const complexd dpsi = double(e.m) * double(e.m + 1) * std::pow(z, e.m - 1) - complexd(0.0, e.c) / (z * z);
    const complexd rdir = z / std::abs(z);
    return 2.0 * std::real(dpsi / psi * rdir);
}

} // namespace detail

// Gauss-Bonnet ledger for one end: area integral of K over the region between
// the inner circle and the polygon, smooth-arc geodesic curvature along the
// polygon, exact classified turning angles, and the inner-circle term. The
// defect is the full discrete Gauss-Bonnet residual, which coincides with the
// defect against -2pi(m+1) in the arrangement with the turning sum moved to
// the right-hand side.
//
// Sign conventions: the polygon is traversed counterclockwise in the z-plane
// with the outward normal N = -iT; the inner circle term is reported for the
// counterclockwise circle. Flipping both the orientation and the normal
// negates each boundary term twice and leaves the defect invariant.
inline GaussBonnetReport gauss_bonnet_end(const EndData& end, const XiField& xi, double C,
                                          const TruncatingPolygon* polygon = nullptr, double step = -1.0) {
    const MetricField metric = metric_from_xi(xi, end);
    const CurvatureField K = intrinsic_curvature(metric);
    const AnnulusGrid& g = xi.grid;

    TruncatingPolygon poly_storage{end, 0.0, {}, {}, true, 0};
    if (!polygon) {
        const double dt = step > 0.0 ? step : 0.01 * C;
        poly_storage = close_polygon(lift(end, C, dt), end);
        polygon = &poly_storage;
    }

    double poly_max_abs = 0.0;
    for (const auto& s : polygon->samples) poly_max_abs = std::max(poly_max_abs, std::abs(s.z));
    if (poly_max_abs > g.r_out * (1.0 + 1e-12))
        fail("DOMAIN", "annulus grid does not cover the polygon");
    if (!polygon_is_simple(*polygon)) fail("MESHING_FAILURE", "truncating polygon is not simple");

    GaussBonnetReport rep;
    rep.ms = {end.m};
    rep.target = -2.0 * M_PI * (end.m + 1);
    rep.vertices = polygon->vertices;

    // interior: midpoint rule on polar cells clipped against the polygon
    const detail::PolygonRaycaster raycaster(polygon->samples);
    double area_term = 0.0;
    for (int i = 0; i + 1 < g.n_r; ++i) {
        const double r0 = g.r(i), r1 = g.r(i + 1);
        const double cell_area = 0.5 * (r1 * r1 - r0 * r0) * g.h_theta();
        const double rho_mid = 0.5 * (g.rho(i) + g.rho(i + 1));
        const double r_mid = std::exp(rho_mid);
        for (int j = 0; j < g.n_theta; ++j) {
            const double t_mid = (j + 0.5) * g.h_theta();
            const complexd z_mid = r_mid * complexd(std::cos(t_mid), std::sin(t_mid));
            if (!raycaster.inside(z_mid)) continue;
            const double K_mid = 0.25 * (K.at(i, j) + K.at(i + 1, j) + K.at(i, j + 1) + K.at(i + 1, j + 1));
            const double lam_mid =
                0.25 * (metric.at(i, j) + metric.at(i + 1, j) + metric.at(i, j + 1) + metric.at(i + 1, j + 1));
            area_term += K_mid * lam_mid * lam_mid * cell_area;
            ++rep.cells_inside;
        }
    }
    rep.interior_integral = area_term;

    // polygon arcs: in the w-chart each arc is a Euclidean straight line and
    //   kappa_g = tanh(xi) dxi/dN / (2 cosh xi),   ds = 2 cosh(xi) |dw|,
    // with N = -i T_w the outward normal. The parameter t is unit-speed in w.
    const RectanglePath gamma(C, end.m);
    auto pair_label = [&](const PolygonSample& a, const PolygonSample& b) -> std::string {
        if (a.arc == ArcClass::Closing || b.arc == ArcClass::Closing) return "B*";
        const double t_mid = 0.5 * (a.t + b.t);
        const int sector = std::min(int(t_mid / (4.0 * C)), 2 * end.m + 1);
        const int k = sector / 2, l = sector % 2;
        const bool is_A = detail::classify_arc(t_mid, C) == ArcClass::A;
        return (is_A ? std::string("A") : std::string("B")) + std::to_string(l) + "_" + std::to_string(k);
    };
    auto w_tangent = [&](const PolygonSample& s, const PolygonSample& other) -> complexd {
        if (s.arc == ArcClass::Closing || other.arc == ArcClass::Closing)
            // the closing arc runs along Im w = 0 from F0(end point) back to C
            return (end.c > 0.0) ? complexd(-1.0, 0.0) : complexd(1.0, 0.0);
        return gamma.tangent_at(std::min(0.5 * (s.t + other.t), gamma.total_length() - 1e-9));
    };
    auto kappa_integrand = [&](const PolygonSample& s, complexd w_tan) -> double {
        // kappa_g ds = tanh(xi) (dxi/dN)_w |dw|, N = -i T_w outward
        const complexd gz = xi.interp_grad(s.z);
        const complexd Dw = complexd(gz.real(), -gz.imag()) / sqrt_hopf_phi(end, s.z);
        const complexd N = complexd(0.0, -1.0) * w_tan;
        return std::tanh(xi.interp(s.z)) * std::real(Dw * N);
    };

    std::vector<BoundaryTerm> terms;
    auto term_of = [&](const std::string& id) -> BoundaryTerm& {
        for (auto& t : terms)
            if (t.id == id) return t;
        terms.push_back({id, 0.0, 0.0});
        return terms.back();
    };
    const auto& S = polygon->samples;
    for (std::size_t i = 0; i + 1 < S.size(); ++i) {
        const auto& a = S[i];
        const auto& b = S[i + 1];
        const double dlen = std::abs(b.z - a.z) > 0.0 ? std::abs(b.t - a.t) : 0.0;
        if (dlen == 0.0) continue;
        const complexd tan_w = w_tangent(a, b);
        const double fa = kappa_integrand(a, tan_w), fb = kappa_integrand(b, tan_w);
        auto& term = term_of(pair_label(a, b));
        term.integral += 0.5 * (fa + fb) * dlen;
        term.integral_abs += 0.5 * (std::abs(fa) + std::abs(fb)) * dlen;
    }
    for (const auto& t : terms) {
        rep.polygon_term += t.integral;
        rep.polygon_term_abs += t.integral_abs;
    }
    rep.boundary_terms = terms;

    // inner circle, counterclockwise: kappa_g ds = (1/R + d/dr log lambda) R dtheta
    double circle = 0.0;
    const double R = g.r_in;
    for (int j = 0; j < g.n_theta; ++j) {
        const complexd z = g.z(0, j);
        const double xi_r = (-3.0 * xi.at(0, j) + 4.0 * xi.at(1, j) - xi.at(2, j)) / (2.0 * g.h_rho()) / R;
        const double dr_log_lambda = std::tanh(xi.at(0, j)) * xi_r + 0.5 * detail::dr_log_abs_phi(end, z);
        circle += (1.0 / R + dr_log_lambda) * R * g.h_theta();
    }
    rep.inner_circle_term = circle;
    rep.boundary_terms.push_back({"inner_circle", circle, std::abs(circle)});

    for (const auto& v : polygon->vertices) rep.turning_sum += M_PI - v.interior_angle;

    rep.defect = rep.interior_integral + rep.polygon_term + rep.turning_sum - rep.inner_circle_term;
    return rep;
}

struct TotalCurvature {
    long multiple = 0;   // exact integer: 2 - 2g - 2n - sum m_k
    double value = 0.0;  // multiple * 2 pi
};

// Total curvature 2 pi (2 - 2g - 2n - sum m_k), exact in the integer multiple.
inline TotalCurvature total_curvature_formula(int genus, int n_ends, const std::vector<int>& ms) {
    if (n_ends < 1) fail("DOMAIN", "need at least one end");
    if (static_cast<int>(ms.size()) != n_ends) fail("DOMAIN", "one degree m_k per end");
    long sum = 0;
    for (int m : ms) {
        if (m < 0) fail("DOMAIN", "end degrees must be >= 0");
        sum += m;
    }
    TotalCurvature out;
    out.multiple = 2L - 2L * genus - 2L * n_ends - sum;
    out.value = 2.0 * M_PI * static_cast<double>(out.multiple);
    return out;
}

} // namespace mincurv
