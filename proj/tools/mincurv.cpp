// mincurv: command-line driver for the finite-total-curvature end toolkit.
//
// Subcommands: metric-check, end-solve, lift, gauss-bonnet, formula,
// catenoid, compare, run. File formats are documented in the README.

#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mincurv/csv_io.hpp"
#include "mincurv/experiment.hpp"
#include "mincurv/svg_io.hpp"
#include "mincurv/version.hpp"

namespace {

using namespace mincurv;
using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IO", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& pe) {
        fail("CONFIG_INVALID", pe.what());
    }
}

EndData load_end(const std::string& path) {
    const json j = load_json(path);
    detail::reject_unknown(j, {"m", "c", "R"}, "end");
    return EndData(j.at("m").get<int>(), j.at("c").get<double>(), j.at("R").get<double>());
}

WarpedPolarMetric load_warped_metric(const std::string& path) {
    const json j = load_json(path);
    detail::reject_unknown(j, {"kind", "k", "eps"}, "G spec");
    const std::string kind = j.at("kind").get<std::string>();
    const double k = j.at("k").get<double>();
    if (kind == "sinh2") return WarpedPolarMetric::hyperbolic(k);
    if (kind == "sinh2_perturbed") {
        const double eps = j.at("eps").get<double>();
        WarpedPolarMetric m;
        m.G = [k, eps](double s, double) {
            const double sh = std::sinh(k * s);
            return sh * sh * (1.0 + eps * std::sin(s));
        };
        m.G_s = [k, eps](double s, double) {
            const double sh = std::sinh(k * s), ch = std::cosh(k * s);
            return 2.0 * k * sh * ch * (1.0 + eps * std::sin(s)) + sh * sh * eps * std::cos(s);
        };
        return m;
    }
    fail("CONFIG_INVALID", "G spec kind must be 'sinh2' or 'sinh2_perturbed'");
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-total-curvature minimal end toolkit"};
    app.set_version_flag("--version", mincurv::version);
    app.require_subcommand(1);

    // metric-check
    auto* sc_metric = app.add_subcommand("metric-check", "verify curvature pinching of a disc metric");
    std::string metric_config, metric_out = "metric_report.csv";
    sc_metric->add_option("--config", metric_config, "experiment config with a metric section")->required();
    sc_metric->add_option("--out", metric_out, "report CSV path");

    // end-solve
    auto* sc_solve = app.add_subcommand("end-solve", "solve the sinh-Gordon equation on an end annulus");
    std::string solve_end, solve_grid = "128,128", solve_bc_file, solve_out = "xi.csv";
    double solve_Rout = 8.0, solve_K = -1.0, solve_bc = 0.0, solve_bc_outer = 0.0, solve_tol = 1e-10;
    sc_solve->add_option("--end", solve_end, "end JSON {m, c, R}")->required();
    sc_solve->add_option("--grid", solve_grid, "nr,ntheta");
    sc_solve->add_option("--Rout", solve_Rout, "outer radius")->required();
    sc_solve->add_option("--K", solve_K, "ambient curvature constant");
    sc_solve->add_option("--bc-inner", solve_bc, "constant Dirichlet value at r = R");
    sc_solve->add_option("--bc-inner-file", solve_bc_file, "CSV (theta, value) profile at r = R");
    sc_solve->add_option("--bc-outer", solve_bc_outer, "Dirichlet value at r = Rout");
    sc_solve->add_option("--tol", solve_tol, "residual tolerance");
    sc_solve->add_option("--out", solve_out, "xi CSV path");

    // lift
    auto* sc_lift = app.add_subcommand("lift", "lift the square curve and close the truncating polygon");
    std::string lift_end, lift_out = "polygon.csv", lift_svg;
    double lift_C = 0.0, lift_step = 0.0;
    sc_lift->add_option("--end", lift_end)->required();
    sc_lift->add_option("--C", lift_C, "square half-side")->required();
    sc_lift->add_option("--step", lift_step, "continuation parameter step");
    sc_lift->add_option("--out", lift_out, "polygon CSV path");
    sc_lift->add_option("--svg", lift_svg, "optional SVG overlay path");

    // gauss-bonnet
    auto* sc_gb = app.add_subcommand("gauss-bonnet", "run the curvature ledger for one end");
    std::string gb_end, gb_xi, gb_out = "report.json";
    double gb_C = 0.0, gb_step = 0.0;
    sc_gb->add_option("--end", gb_end)->required();
    sc_gb->add_option("--xi", gb_xi, "xi CSV from end-solve")->required();
    sc_gb->add_option("--C", gb_C)->required();
    sc_gb->add_option("--step", gb_step);
    sc_gb->add_option("--out", gb_out);

    // formula
    auto* sc_formula = app.add_subcommand("formula", "exact total-curvature formula");
    int formula_genus = 0;
    std::string formula_ends;
    sc_formula->add_option("--genus", formula_genus)->required();
    sc_formula->add_option("--ends", formula_ends, "comma list of end degrees m_k")->required();

    // catenoid
    auto* sc_cat = app.add_subcommand("catenoid", "rotational catenoid profile in H^2(-k^2) x R");
    double cat_A = 1.0, cat_k = 1.0, cat_smax = 5.0;
    int cat_n = 200;
    std::string cat_out = "profile.csv";
    sc_cat->add_option("--A", cat_A)->required();
    sc_cat->add_option("--k", cat_k)->required();
    sc_cat->add_option("--smax", cat_smax)->required();
    sc_cat->add_option("--n", cat_n, "number of output rows");
    sc_cat->add_option("--out", cat_out);

    // compare
    auto* sc_cmp = app.add_subcommand("compare", "pinching comparison signs and the ratio inequality");
    std::string cmp_G;
    double cmp_k1 = 0.0, cmp_k2 = 0.0, cmp_A = 1.0, cmp_smin = 0.0, cmp_smax = 5.0;
    int cmp_samples = 1000;
    sc_cmp->add_option("--G", cmp_G, "warped metric JSON spec")->required();
    sc_cmp->add_option("--k1", cmp_k1)->required();
    sc_cmp->add_option("--k2", cmp_k2)->required();
    sc_cmp->add_option("--A", cmp_A)->required();
    sc_cmp->add_option("--smin", cmp_smin, "default: past both neck radii");
    sc_cmp->add_option("--smax", cmp_smax);
    sc_cmp->add_option("--samples", cmp_samples);

    // run
    auto* sc_run = app.add_subcommand("run", "full pipeline from an experiment config");
    std::string run_config;
    sc_run->add_option("--config", run_config)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sc_metric) {
            const auto cfg = load_config(metric_config);
            if (!cfg.has_metric) fail("CONFIG_INVALID", "config has no metric section");
            const auto metric = ConformalDiscMetric::from_alpha(cfg.alpha);
            const auto rep = verify_pinching(metric, CurvatureBounds(cfg.bound_a, cfg.bound_b), disc_sample_grid());
            write_pinching_csv(rep, metric_out);
            std::cout << (rep.pass() ? "PASS" : "FAIL") << " (" << rep.violations.size() << " violations, tol "
                      << format_sig(rep.tol, 6) << ")\n";
            return rep.pass() ? 0 : 1;
        }

        if (*sc_solve) {
            const EndData end = load_end(solve_end);
            int nr = 128, ntheta = 128;
            if (std::sscanf(solve_grid.c_str(), "%d,%d", &nr, &ntheta) != 2)
                fail("CONFIG_INVALID", "--grid expects nr,ntheta");
            AnnulusGrid grid(end.R, solve_Rout, nr, ntheta);
            SolverConfig sc;
            sc.tol = solve_tol;
            sc.bc_outer = solve_bc_outer;
            if (!solve_bc_file.empty()) {
                sc.bc_inner = read_bc_csv(solve_bc_file);
            } else {
                const double bc = solve_bc;
                sc.bc_inner = [bc](double) { return bc; };
            }
            const CurvatureInput K(solve_K);
            const XiField xi = solve_xi(end, K, grid, sc);
            write_xi_csv(xi, residual_field(xi, end, K), solve_out);
            std::cout << "residual " << format_sig(xi.residual_norm, 6) << " -> " << solve_out << "\n";
            return 0;
        }

        if (*sc_lift) {
            const EndData end = load_end(lift_end);
            const double step = lift_step > 0.0 ? lift_step : 0.01 * lift_C;
            const auto poly = close_polygon(lift(end, lift_C, step), end);
            write_polygon_csv(poly, lift_out);
            if (!lift_svg.empty()) emit_svg(poly, trace_level_curves(end), lift_svg);
            std::cout << poly.vertices.size() << " vertices, min |z| = " << format_sig(poly.min_abs(), 6)
                      << " -> " << lift_out << "\n";
            return 0;
        }

        if (*sc_gb) {
            const EndData end = load_end(gb_end);
            const XiField xi = read_xi_csv(gb_xi);
            const auto rep = gauss_bonnet_end(end, xi, gb_C, nullptr, gb_step > 0.0 ? gb_step : -1.0);
            json rj;
            rj["C"] = gb_C;
            rj["interior_integral"] = rep.interior_integral;
            rj["polygon_term"] = rep.polygon_term;
            rj["polygon_term_abs"] = rep.polygon_term_abs;
            rj["turning_sum"] = rep.turning_sum;
            rj["inner_circle_term"] = rep.inner_circle_term;
            rj["target"] = rep.target;
            rj["defect"] = rep.defect;
            rj["vertices"] = json::array();
            for (const auto& v : rep.vertices)
                rj["vertices"].push_back({{"z_re", v.z.real()},
                                          {"z_im", v.z.imag()},
                                          {"interior_angle", v.interior_angle},
                                          {"measured_angle", v.measured_angle}});
            std::ofstream(gb_out) << rj.dump(2) << '\n';
            std::cout << "defect " << format_sig(rep.defect, 6) << " against " << format_sig(rep.target, 6)
                      << " -> " << gb_out << "\n";
            return 0;
        }

        if (*sc_formula) {
            const auto ms = parse_int_list(formula_ends);
            const auto tc = total_curvature_formula(formula_genus, static_cast<int>(ms.size()), ms);
            std::cout << "total curvature = 2pi * " << tc.multiple << " = " << format_sig(tc.value) << "\n";
            return 0;
        }

        if (*sc_cat) {
            const CatenoidProfile p(cat_A, cat_k);
            if (!(cat_smax > p.R_neck)) fail("DOMAIN", "smax must exceed the neck radius");
            write_catenoid_csv(p, cat_smax, cat_n, cat_out);
            std::cout << "R_neck = " << format_sig(p.R_neck) << " -> " << cat_out << "\n";
            return 0;
        }

        if (*sc_cmp) {
            const auto metric = load_warped_metric(cmp_G);
            const CatenoidProfile p1(cmp_A, cmp_k1), p2(cmp_A, cmp_k2);
            double smin = cmp_smin;
            if (!(smin > 0.0)) smin = std::max(p1.R_neck, p2.R_neck) + 0.05;
            std::vector<double> samples;
            for (int i = 0; i < cmp_samples; ++i)
                samples.push_back(smin + (cmp_smax - smin) * i / std::max(1, cmp_samples - 1));
            const auto signs = comparison_signs(metric, cmp_k1, cmp_k2, cmp_A, samples);
            const auto ratio = ratio_inequality(metric, cmp_k1, cmp_k2, samples);
            std::cout << "comparison signs: " << (signs.pass ? "PASS" : "FAIL") << " (outer numerator max "
                      << format_sig(signs.worst_outer, 6) << ", inner numerator min "
                      << format_sig(signs.worst_inner, 6) << ")\n";
            std::cout << "ratio inequality: " << (ratio.pass ? "PASS" : "FAIL") << " (margins "
                      << format_sig(ratio.min_margin_upper, 6) << ", " << format_sig(ratio.min_margin_lower, 6)
                      << ")\n";
            return (signs.pass && ratio.pass) ? 0 : 1;
        }

        if (*sc_run) {
            const auto cfg = load_config(run_config);
            const auto man = run_pipeline(cfg);
            for (const auto& s : man.stages)
                std::cout << s.name << ": " << s.status << (s.detail.empty() ? "" : " (" + s.detail + ")")
                          << "\n";
            for (const auto& c : man.acceptance)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " " << c.detail << "\n";
            return man.all_pass() ? 0 : 1;
        }
    } catch (const mincurv::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
