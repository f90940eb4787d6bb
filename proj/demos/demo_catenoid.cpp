// Prints a rotational catenoid profile in H^2(-k^2) x R together with the
// minimal-graph ODE residual, then scans the comparison signs for a pinched
// warped metric.

#include <cstdio>

#include "mincurv/catenoid_barrier.hpp"

using namespace mincurv;

int main() {
    const CatenoidProfile p(1.0, 1.0);
    std::printf("catenoid A=1, k=1: neck radius %.12f\n", p.R_neck);
    std::printf("%8s %14s %14s %14s\n", "s", "h(s)", "h'(s)", "ode residual");
    for (double s = p.R_neck + 0.25; s <= 3.0; s += 0.25)
        std::printf("%8.3f %14.9f %14.9f %14.3e\n", s, height_profile(p, s), catenoid_slope(p, s),
                    catenoid_ode_residual(p, s));

    const auto G = WarpedPolarMetric::hyperbolic(1.0);
    std::vector<double> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(1.2 + 4.0 * i / 199.0);
    const auto signs = comparison_signs(G, 1.2, 0.8, 1.0, samples);
    std::printf("\ncomparison against H^2(-1): outer numerator max %.3e, inner numerator min %.3e -> %s\n",
                signs.worst_outer, signs.worst_inner, signs.pass ? "PASS" : "FAIL");

    std::printf("fermi barrier f(s) = log(tanh(s/2)):");
    for (double s : {0.5, 1.0, 2.0, 5.0, 20.0}) std::printf("  f(%.1f) = %.6f", s, fermi_barrier(1.0, s));
    std::printf("\n");
    return 0;
}
