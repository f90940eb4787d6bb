#pragma once

// CSV emit/parse helpers. Numeric fields are printed with 12 significant
// digits so reruns produce bit-identical artifacts.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catenoid_barrier.hpp"
#include "curvature_ledger.hpp"
#include "end_model.hpp"
#include "errors.hpp"
#include "lift_engine.hpp"
#include "metric_models.hpp"
#include "sinh_gordon.hpp"

namespace mincurv {

inline std::string format_sig(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("IO", "cannot open for writing: " + path);
    return out;
}

inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns,
                                                         bool skip_header = true) {
    std::ifstream in(path);
    if (!in) fail("IO", "cannot open for reading: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != columns) fail("IO", "unexpected column count in " + path);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline void write_pinching_csv(const PinchingReport& rep, const std::string& path) {
    auto out = detail::open_out(path);
    out << "z_re,z_im,K,pass\n";
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        bool ok = true;
        for (const auto& v : rep.violations)
            if (v.z == rep.samples[i]) ok = false;
        out << format_sig(rep.samples[i].real()) << ',' << format_sig(rep.samples[i].imag()) << ','
            << format_sig(rep.curvatures[i]) << ',' << (ok ? 1 : 0) << '\n';
    }
}

// Nodal residuals of the sinh-Gordon discretization (zero on boundary rows).
inline std::vector<double> residual_field(const XiField& xi, const EndData& end, const CurvatureInput& K_M) {
    const AnnulusGrid& g = xi.grid;
    std::vector<double> res(g.size(), 0.0);
    const double c1 = 1.0 / (g.h_rho() * g.h_rho());
    const double c2 = 1.0 / (g.h_theta() * g.h_theta());
    for (int i = 1; i < g.n_r - 1; ++i)
        for (int j = 0; j < g.n_theta; ++j) {
            const double lap = c1 * (xi.at(i - 1, j) + xi.at(i + 1, j) - 2.0 * xi.at(i, j)) +
                               c2 * (xi.at(i, j - 1) + xi.at(i, j + 1) - 2.0 * xi.at(i, j));
            const complexd z = g.z(i, j);
            res[g.idx(i, j)] =
                lap / std::norm(z) + 2.0 * K_M(z) * std::sinh(2.0 * xi.at(i, j)) * std::abs(hopf_phi(end, z));
        }
    return res;
}

inline void write_xi_csv(const XiField& xi, const std::vector<double>& residuals, const std::string& path) {
    auto out = detail::open_out(path);
    out << "r,theta,xi,residual\n";
    for (int i = 0; i < xi.grid.n_r; ++i)
        for (int j = 0; j < xi.grid.n_theta; ++j)
            out << format_sig(xi.grid.r(i)) << ',' << format_sig(xi.grid.theta(j)) << ','
                << format_sig(xi.at(i, j)) << ',' << format_sig(residuals[xi.grid.idx(i, j)]) << '\n';
}

inline XiField read_xi_csv(const std::string& path) {
    const auto rows = detail::read_numeric_csv(path, 4);
    if (rows.empty()) fail("IO", "empty xi csv");
    // rows are i-major: count the first radius block to get n_theta
    std::size_t n_theta = 0;
    const double r0 = rows[0][0];
    while (n_theta < rows.size() && rows[n_theta][0] == r0) ++n_theta;
    if (n_theta < 8 || rows.size() % n_theta != 0) fail("IO", "xi csv is not grid shaped");
    const int n_r = static_cast<int>(rows.size() / n_theta);
    const AnnulusGrid grid(rows[0][0], rows[rows.size() - 1][0], n_r, static_cast<int>(n_theta));
    // the grid is reconstructed assuming log-radial spacing; verify one row
    const int mid = n_r / 2;
    const double r_mid = rows[static_cast<std::size_t>(mid) * n_theta][0];
    if (std::abs(r_mid - grid.r(mid)) > 1e-8 * r_mid) fail("IO", "xi csv radii are not log spaced");
    XiField xi(grid);
    double worst = 0.0;
    for (int i = 0; i < n_r; ++i)
        for (std::size_t j = 0; j < n_theta; ++j) {
            const auto& row = rows[static_cast<std::size_t>(i) * n_theta + j];
            xi.at(i, static_cast<int>(j)) = row[2];
            worst = std::max(worst, std::abs(row[3]));
        }
    xi.residual_norm = worst;
    return xi;
}

inline void write_polygon_csv(const TruncatingPolygon& poly, const std::string& path) {
    auto out = detail::open_out(path);
    out << "t,z_re,z_im,sector_k,arc_class\n";
    for (const auto& s : poly.samples) {
        const char* cls = s.arc == ArcClass::A ? "A" : (s.arc == ArcClass::B ? "B" : "B*");
        out << format_sig(s.t) << ',' << format_sig(s.z.real()) << ',' << format_sig(s.z.imag()) << ','
            << s.sector << ',' << cls << '\n';
    }
}

inline void write_level_curves_csv(const std::vector<LevelCurve>& curves, const std::string& path) {
    auto out = detail::open_out(path);
    out << "k,z_re,z_im\n";
    for (const auto& c : curves)
        for (const auto& z : c.samples)
            out << c.k << ',' << format_sig(z.real()) << ',' << format_sig(z.imag()) << '\n';
}

inline void write_catenoid_csv(const CatenoidProfile& p, double s_max, int n, const std::string& path) {
    auto out = detail::open_out(path);
    out << "s,h,h_prime,ode_residual\n";
    for (int i = 0; i <= n; ++i) {
        const double s = p.R_neck + (s_max - p.R_neck) * i / n;
        const double h = height_profile(p, s);
        if (i == 0) {
            out << format_sig(s) << ',' << format_sig(h) << ",inf,0\n"; // slope blows up at the neck
            continue;
        }
        out << format_sig(s) << ',' << format_sig(h) << ',' << format_sig(catenoid_slope(p, s)) << ','
            << format_sig(catenoid_ode_residual(p, s)) << '\n';
    }
}

// bc_inner profile as rows (theta, value)
inline std::function<double(double)> read_bc_csv(const std::string& path) {
    const auto rows = detail::read_numeric_csv(path, 2);
    if (rows.size() < 2) fail("IO", "bc csv needs at least two rows");
    std::vector<double> thetas, values;
    for (const auto& r : rows) {
        thetas.push_back(r[0]);
        values.push_back(r[1]);
    }
    return [thetas, values](double theta) {
        while (theta < thetas.front()) theta += 2.0 * M_PI;
        while (theta > thetas.front() + 2.0 * M_PI) theta -= 2.0 * M_PI;
        // periodic piecewise-linear interpolation
        for (std::size_t i = 0; i + 1 < thetas.size(); ++i)
            if (theta >= thetas[i] && theta <= thetas[i + 1]) {
                const double s = (theta - thetas[i]) / (thetas[i + 1] - thetas[i]);
                return (1.0 - s) * values[i] + s * values[i + 1];
            }
        const double span = thetas.front() + 2.0 * M_PI - thetas.back();
        const double s = (theta - thetas.back()) / span;
        return (1.0 - s) * values.back() + s * values.front();
    };
}

} // namespace mincurv
