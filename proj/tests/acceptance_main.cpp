// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//  1. exact total-curvature formula on the catalogued surfaces
//  2. flat Gauss-Bonnet ledger, ends (m=0,c=0) and (m=1,c=0), 256x256
//  3. solved-end ledger within 2% of 2pi, improving under refinement
//  4. polygon curvature decay over the C schedule {C0, 2C0, 4C0}
//  5. xi and gradient decay fits
//  6. lift correctness against the analytic preimage and forward checks
//  7. catenoid ODE residual and 50-digit height oracle
//  8. comparison signs and the logarithmic-derivative inequality
//  9. invariant suite: subharmonicity, nonpositivity, oddness, metric identity

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "mincurv/catenoid_barrier.hpp"
#include "mincurv/curvature_ledger.hpp"
#include "mincurv/lift_engine.hpp"
#include "mincurv/sinh_gordon.hpp"
#include "oracle_mpfr.hpp"

using namespace mincurv;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d [%s]: %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolverConfig radial_config(double bc, double tol = 1e-10) {
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.bc_inner = [bc](double) { return bc; };
    return cfg;
}

void criterion_1_formula() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    ok &= total_curvature_formula(0, 1, {0}).multiple == 0;          // vertical planes
    ok &= total_curvature_formula(0, 2, {0, 0}).multiple == -2;      // horizontal catenoids
    for (int n = 2; n <= 6; ++n)                                     // Scherk graphs
        ok &= total_curvature_formula(0, 1, {n - 1}).multiple == 1 - n;
    const double dt = seconds_since(t0);
    ok &= dt < 1.0;
    detail = "vertical planes 0, catenoids -4pi, Scherk 2pi(1-n) for n=2..6; " +
             std::to_string(dt) + " s";
    report(1, "formula oracle", ok, detail);
}

void criterion_2_flat_ledger() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    {
        const EndData e(0, 0.0, 1.5);
        const AnnulusGrid grid(1.5, 8.0, 256, 256);
        const XiField xi(grid);
        worst = std::max(worst, std::abs(gauss_bonnet_end(e, xi, 3.0).defect));
    }
    {
        const EndData e(1, 0.0, 1.5);
        const AnnulusGrid grid(1.5, 4.5, 256, 256);
        const XiField xi(grid);
        worst = std::max(worst, std::abs(gauss_bonnet_end(e, xi, 9.0).defect));
    }
    const double dt = seconds_since(t0);
    const bool ok = worst < 1e-3 && dt < 120.0;
    report(2, "flat Gauss-Bonnet ledger", ok,
           "max |defect| = " + std::to_string(worst) + " (< 1e-3); " + std::to_string(dt) + " s");
}

void criterion_3_solved_ledger() {
    const auto t0 = std::chrono::steady_clock::now();
    const EndData e(0, 0.0, 1.5);
    const AnnulusGrid coarse(1.5, 8.0, 256, 256);
    const XiField xi_c = solve_xi(e, CurvatureInput(-1.0), coarse, radial_config(0.5));
    const double defect_c = std::abs(gauss_bonnet_end(e, xi_c, 3.0).defect);
    const AnnulusGrid fine(1.5, 8.0, 512, 512);
    const XiField xi_f = solve_xi(e, CurvatureInput(-1.0), fine, radial_config(0.5));
    const double defect_f = std::abs(gauss_bonnet_end(e, xi_f, 3.0).defect);
    const double dt = seconds_since(t0);
    const bool ok = defect_c < 0.02 * 2.0 * M_PI && defect_f < defect_c && dt < 300.0;
    report(3, "solved-end ledger", ok,
           "defect 256 = " + std::to_string(defect_c) + ", defect 512 = " + std::to_string(defect_f) +
               " (< 2% of 2pi, improving); " + std::to_string(dt) + " s");
}

// shared between criteria 4 and 5
struct DecayRun {
    std::vector<double> kappa_sums;
    DecayFit vfit;
    GradientDecayFit gfit;
    double seconds = 0.0;
};

DecayRun run_decay() {
    const auto t0 = std::chrono::steady_clock::now();
    DecayRun out;
    const EndData e(0, 0.0, 1.5);
    const AnnulusGrid grid(1.5, 20.0, 384, 256);
    const XiField xi = solve_xi(e, CurvatureInput(-1.0), grid, radial_config(0.5));
    for (double C : {3.0, 6.0, 12.0})
        out.kappa_sums.push_back(gauss_bonnet_end(e, xi, C).polygon_term_abs);
    out.vfit = decay_fit(xi);
    out.gfit = gradient_decay_check(xi, e.m);
    out.seconds = seconds_since(t0);
    return out;
}

void criterion_4_boundary_decay(const DecayRun& run) {
    const bool decreasing = run.kappa_sums[1] < run.kappa_sums[0] && run.kappa_sums[2] < run.kappa_sums[1];
    const bool ok = decreasing && run.kappa_sums[2] < 0.05 && run.seconds < 300.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "sum int |kappa_g| = %.3e, %.3e, %.3e over C = {3, 6, 12}; %.1f s",
                  run.kappa_sums[0], run.kappa_sums[1], run.kappa_sums[2], run.seconds);
    report(4, "boundary decay", ok, buf);
}

void criterion_5_xi_decay(const DecayRun& run) {
    const bool ok = !run.vfit.degenerate && run.vfit.c1_hat > 0.0 && run.vfit.r2 > 0.98 &&
                    !run.gfit.degenerate && run.gfit.slope < 0.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "value fit slope = -%.3f (r2 = %.4f), gradient fit slope = %.3f",
                  run.vfit.c1_hat, run.vfit.r2, run.gfit.slope);
    report(5, "xi decay", ok, buf);
}

void criterion_6_lift() {
    bool ok = true;
    std::string detail;
    // c = 0: match the analytic z^{m+1}-preimage of the square
    for (int m : {0, 1}) {
        const EndData e(m, 0.0, 1.5);
        const double C = 8.0;
        const auto lifted = lift(e, C, 0.02);
        const RectanglePath gamma(C, m);
        double phase = 0.0;
        complexd prev = gamma.point_at(0.0);
        double worst = 0.0;
        for (const auto& seg : lifted.segments)
            for (const auto& s : seg.samples) {
                const complexd w = gamma.point_at(s.t);
                phase += std::arg(w / prev);
                prev = w;
                const complexd exact = std::pow(std::abs(w), 1.0 / (m + 1)) * std::polar(1.0, phase / (m + 1));
                worst = std::max(worst, std::abs(s.z - exact));
            }
        ok &= worst < 1e-8;
        const auto poly = close_polygon(lifted, e);
        ok &= poly.vertices.size() == std::size_t(4 * (m + 1));
        for (const auto& v : poly.vertices) ok &= std::abs(v.interior_angle - M_PI / 2.0) < 1e-12;
        detail += "m=" + std::to_string(m) + " preimage sup = " + std::to_string(worst) + "; ";
    }
    // c != 0: forward consistency and the vertex count with one reflex corner
    {
        const EndData e(0, 0.5, 8.0);
        const double C = 16.0;
        const auto lifted = lift(e, C, 0.02);
        const RectanglePath gamma(C, 0);
        double worst = 0.0;
        for (const auto& seg : lifted.segments)
            for (const auto& s : seg.samples)
                worst = std::max(worst, std::abs(natural_coord_at(e, s.z, s.theta) - gamma.point_at(s.t)));
        ok &= worst < 1e-7;
        const auto poly = close_polygon(lifted, e);
        ok &= poly.vertices.size() == 6;
        int reflex = 0;
        for (const auto& v : poly.vertices)
            if (v.interior_angle > M_PI) ++reflex;
        ok &= reflex == 1;
        detail += "c=0.5 forward sup = " + std::to_string(worst) + ", 6 vertices, 1 reflex";
    }
    report(6, "lift correctness", ok, detail);
}

void criterion_7_catenoid() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_res = 0.0, worst_height = 0.0;
    for (auto [A, k] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
        const CatenoidProfile p(A, k);
        for (double s = p.R_neck + 0.05; s <= 5.0; s += 0.01)
            worst_res = std::max(worst_res, std::abs(catenoid_ode_residual(p, s)));
        for (double s : {p.R_neck + 0.2, p.R_neck + 1.0, p.R_neck + 2.5, 4.8}) {
            const double diff = std::abs(height_profile(p, s) - oracles::mpfr_height_oracle(A, k, s));
            worst_height = std::max(worst_height, diff);
        }
    }
    const double dt = seconds_since(t0);
    ok = worst_res < 1e-8 && worst_height < 1e-10 && dt < 10.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "ODE residual max = %.2e (< 1e-8), height vs oracle max = %.2e (< 1e-10); %.2f s",
                  worst_res, worst_height, dt);
    report(7, "catenoid ODE and height", ok, buf);
}

void criterion_8_comparison() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    const double k1 = 1.2, k2 = 0.8, A = 1.0;
    const CatenoidProfile p1(A, k1), p2(A, k2);
    std::vector<double> samples;
    const double s0 = std::max(p1.R_neck, p2.R_neck) + 0.05;
    for (int i = 0; i < 1000; ++i) samples.push_back(s0 + (6.0 - s0) * i / 999.0);

    const auto G0 = WarpedPolarMetric::hyperbolic(1.0);
    const auto Gp = [] { // 1% perturbed variant
        WarpedPolarMetric m;
        m.G = [](double s, double) {
            const double sh = std::sinh(s);
            return sh * sh * (1.0 + 0.01 * std::sin(s));
        };
        m.G_s = [](double s, double) {
            const double sh = std::sinh(s), ch = std::cosh(s);
            return 2.0 * sh * ch * (1.0 + 0.01 * std::sin(s)) + sh * sh * 0.01 * std::cos(s);
        };
        return m;
    }();
    for (const auto* G : {&G0, &Gp}) {
        const auto signs = comparison_signs(*G, k1, k2, A, samples);
        const auto ratio = ratio_inequality(*G, k1, k2, samples);
        ok &= signs.pass && ratio.pass;
    }
    const double dt = seconds_since(t0);
    ok &= dt < 10.0;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "1000 samples, model and 1%% perturbed metric; %.2f s", dt);
    report(8, "comparison signs and ratio inequality", ok, buf);
}

void criterion_9_invariants() {
    const EndData e(0, 0.0, 1.5);
    const AnnulusGrid grid(1.5, 8.0, 257, 64);
    const XiField xi = solve_xi(e, CurvatureInput(-1.0), grid, radial_config(0.5));

    const auto sub = subharmonicity_check(xi, e, CurvatureInput(-1.0));
    const bool sub_ok = sub.min_lap_u >= -10.0 * sub.h * sub.h;

    const auto K = intrinsic_curvature(metric_from_xi(xi, e));
    const bool K_ok = K.max_interior() <= 1e-6;

    const XiField minus = solve_xi(e, CurvatureInput(-1.0), grid, radial_config(-0.5));
    double odd = 0.0;
    for (std::size_t p = 0; p < xi.values.size(); ++p)
        odd = std::max(odd, std::abs(xi.values[p] + minus.values[p]));
    const bool odd_ok = odd <= 1e-12;

    const auto metric = metric_from_xi(xi, e);
    double ident = 0.0;
    for (int i = 0; i < grid.n_r; ++i)
        for (int j = 0; j < grid.n_theta; ++j) {
            const double ch = std::cosh(xi.at(i, j));
            const double rhs = 4.0 * ch * ch * std::abs(hopf_phi(e, grid.z(i, j)));
            ident = std::max(ident, std::abs(metric.at(i, j) * metric.at(i, j) / rhs - 1.0));
        }
    const bool ident_ok = ident <= 1e-14;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "min lap u = %.2e (floor %.2e), max K = %.2e, oddness = %.2e, metric identity = %.2e",
                  sub.min_lap_u, -10.0 * sub.h * sub.h, K.max_interior(), odd, ident);
    report(9, "invariant suite", sub_ok && K_ok && odd_ok && ident_ok, buf);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1_formula();
    criterion_2_flat_ledger();
    criterion_3_solved_ledger();
    const DecayRun run = run_decay();
    criterion_4_boundary_decay(run);
    criterion_5_xi_decay(run);
    criterion_6_lift();
    criterion_7_catenoid();
    criterion_8_comparison();
    criterion_9_invariants();
    std::printf("acceptance: %d failure(s), %.1f s total\n", failures, seconds_since(t0));
    return failures;
}
