#include <catch2/catch_amalgamated.hpp>

#include "mincurv/end_model.hpp"
#include "oracles.hpp"

using namespace mincurv;
using Catch::Approx;

TEST_CASE("hopf_phi at simple points") {
    CHECK(hopf_phi(EndData(0, 0.0, 2.0), {2.0, 0.0}) == complexd(1.0, 0.0));
    const complexd v = hopf_phi(EndData(1, 0.0, 2.0), {0.0, 3.0});
    CHECK(v.real() == Approx(-36.0));
    CHECK(v.imag() == Approx(0.0).margin(1e-12));
    const complexd w = hopf_phi(EndData(1, 1.0, 4.0), {0.0, 1.0});
    CHECK(w.real() == Approx(-3.0));
    CHECK(w.imag() == Approx(4.0));
    CHECK_THROWS_AS(hopf_phi(EndData(0, 0.0, 2.0), complexd(0.0, 0.0)), Error);
}

TEST_CASE("end data radius invariant") {
    CHECK_THROWS_AS(EndData(0, 1.0, 2.0), Error);  // needs R > 14.2
    CHECK_NOTHROW(EndData(0, 1.0, 14.5));
    CHECK_THROWS_AS(EndData(-1, 0.0, 2.0), Error);
    CHECK_THROWS_AS(EndData(0, 0.0, 0.9), Error);  // R^{m+1} must exceed 1
}

TEST_CASE("branch values of the natural coordinate") {
    {
        const EndData e(0, 0.0, 2.0);
        const BranchDomain dom(0, 0);
        CHECK(natural_coord(e, dom, {5.0, 0.0}) == complexd(5.0, 0.0));
    }
    {
        const EndData e(1, 0.0, 2.0);
        const BranchDomain dom(0, 1);
        const complexd z = 2.0 * std::polar(1.0, M_PI / 6.0);
        const complexd expect = 4.0 * std::polar(1.0, M_PI / 3.0);
        CHECK(std::abs(natural_coord(e, dom, z) - expect) < 1e-12);
    }
    {
        // m=0, c=0.3: F(4) = 4 + 0.3 i ln 4 on the theta = 0 branch
        const EndData e(0, 0.3, 5.0);
        const BranchDomain dom(0, 0);
        const complexd got = natural_coord(e, dom, {4.0, 0.0});
        CHECK(got.real() == Approx(4.0));
        CHECK(got.imag() == Approx(0.415888308335967)); // 0.3 ln 4, frozen
        // quadrature oracle: F(4) - F(5) = int_5^4 sqrt(phi) dz along the axis
        const complexd diff = oracles::simpson_path_integral(
            [&](double x) { return sqrt_hopf_phi(e, {x, 0.0}); }, 5.0, 4.0);
        const complexd F5 = natural_coord(e, dom, {5.0, 0.0});
        CHECK(std::abs(got - (F5 + diff)) < 1e-10);
    }
}

TEST_CASE("branch error outside the sector interval") {
    const EndData e(1, 0.0, 2.0);
    const BranchDomain dom(0, 1); // args in (-pi/20, pi/2 + pi/20)
    CHECK_THROWS_AS(natural_coord(e, dom, {-3.0, 0.1}), Error);
}

TEST_CASE("branch domains overlap and agree") {
    const EndData e(0, 0.7, 12.0);
    const BranchDomain d0(0, 0), d1(1, 0);
    // overlap of Delta_0 and Delta_1 around arg = pi
    for (double t : {M_PI - 0.2, M_PI, M_PI + 0.2}) {
        const complexd z = 15.0 * std::polar(1.0, t);
        CHECK(std::abs(natural_coord(e, d0, z) - natural_coord(e, d1, z)) < 1e-10);
    }
}

TEST_CASE("derivative of the branch matches sqrt(phi)") {
    const EndData e(1, 0.4, 3.0);
    const BranchDomain dom(0, 1);
    const complexd z = 5.0 * std::polar(1.0, 0.8);
    const double h = 1e-5;
    const complexd num =
        (natural_coord(e, dom, z + h) - natural_coord(e, dom, z - h)) / complexd(2.0 * h, 0.0);
    CHECK(std::abs(num - sqrt_hopf_phi(e, z)) < 1e-8);
}

TEST_CASE("level curves for c = 0 are exact rays") {
    const EndData e(1, 0.0, 2.0);
    const auto curves = trace_level_curves(e);
    REQUIRE(curves.size() == 4);
    for (int k = 0; k < 4; ++k) {
        const double want = k * M_PI / 2.0;
        for (const auto& z : curves[k].samples) {
            CHECK(std::abs(z) >= e.R - 1e-12);
            double d = std::arg(z) - want;
            while (d > M_PI) d -= 2.0 * M_PI;
            while (d < -M_PI) d += 2.0 * M_PI;
            CHECK(std::abs(d) < 1e-12);
        }
    }
}

TEST_CASE("level curves for c = 1 match the per-circle bisection oracle") {
    const EndData e(0, 1.0, 14.5);
    const auto curves = trace_level_curves(e);
    REQUIRE(curves.size() == 2);
    const double band = M_PI / 10.0;
    for (const auto& curve : curves) {
        REQUIRE(curve.samples.size() > 50);
        for (const auto& z : curve.samples) {
            // stays in its angular band, on the level set
            double t = std::arg(z);
            if (curve.k == 1 && t < 0.0) t += 2.0 * M_PI;
            CHECK(std::abs(t - curve.k * M_PI) <= band + 1e-12);
            CHECK(std::abs(im_natural(e, z)) < 1e-8 * (1.0 + std::abs(std::pow(z, e.m + 1))));
            // bisection oracle at the same radius
            const double t_oracle = oracles::level_theta_bisection(e, curve.k, std::abs(z));
            CHECK(std::abs(t - t_oracle) < 1e-8);
        }
        // sign of Re F: positive on l_0, negative on l_1
        for (const auto& z : curve.samples) {
            const BranchDomain dom(curve.k, 0);
            const double re = natural_coord(e, dom, z).real();
            if (curve.k % 2 == 0)
                CHECK(re > 0.0);
            else
                CHECK(re < 0.0);
        }
    }
}

TEST_CASE("level root count error when the radius is too small") {
    // a valid end with large residue; |Im F| > 0 on the whole circle r = e
    const EndData e(0, 5.0, 68.0);
    CHECK_THROWS_AS(level_roots_on_circle(e, M_E), Error);
}

TEST_CASE("growth envelope of the branch integrals") {
    const EndData e(1, 0.8, 3.5);
    // fit C* on the outer half of [R, 8R]
    double C_star = 1.0;
    std::vector<complexd> pts;
    for (int i = 0; i <= 40; ++i) {
        const double r = 4.0 * e.R + (8.0 * e.R - 4.0 * e.R) * i / 40.0;
        const double t = 0.3; // inside Delta_0
        pts.push_back(r * std::polar(1.0, t));
    }
    const BranchDomain dom(0, 1);
    for (const auto& z : pts) {
        const double ratio = std::abs(natural_coord(e, dom, z)) / std::pow(std::abs(z), e.m + 1);
        C_star = std::max({C_star, ratio, 1.0 / ratio});
    }
    C_star *= 1.001;
    for (const auto& z : pts) {
        const double F = std::abs(natural_coord(e, dom, z));
        const double pw = std::pow(std::abs(z), e.m + 1);
        CHECK(F < C_star * pw);
        CHECK(F > pw / C_star);
    }
}

TEST_CASE("profile counts") {
    auto p0 = profile_counts(EndData(0, 0.0, 2.0));
    CHECK(p0.top_geodesics == 1);
    CHECK(p0.bottom_geodesics == 1);
    CHECK(p0.vertical_lines == 2);
    auto p1 = profile_counts(EndData(1, 0.0, 2.0));
    CHECK(p1.top_geodesics == 2);
    CHECK(p1.vertical_lines == 4);
    auto p3 = profile_counts(EndData(3, 0.0, 2.0));
    CHECK(p3.top_geodesics == 4);
    CHECK(p3.bottom_geodesics == 4);
    CHECK(p3.vertical_lines == 8);
}

TEST_CASE("branch domain geometry") {
    for (int m : {0, 1, 3})
        for (int k = 0; k <= 2 * m + 1; ++k) {
            const BranchDomain d(k, m);
            CHECK(d.arg_hi - d.arg_lo == Approx(M_PI / (m + 1) + M_PI / (5.0 * (m + 1))));
            if (k > 0) CHECK(BranchDomain(k - 1, m).arg_hi > d.arg_lo); // consecutive overlap
        }
    CHECK_THROWS_AS(BranchDomain(5, 1), Error);
}
