#pragma once

// Experiment configuration, run manifest, and the end-to-end pipeline:
// metric check -> sinh-Gordon solve -> lift per C -> Gauss-Bonnet ledger ->
// decay fits -> acceptance table. Configs are versioned JSON with unknown
// keys rejected; artifacts are hashed into the manifest.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csv_io.hpp"
#include "curvature_ledger.hpp"
#include "end_model.hpp"
#include "errors.hpp"
#include "lift_engine.hpp"
#include "metric_models.hpp"
#include "parallel.hpp"
#include "sinh_gordon.hpp"
#include "svg_io.hpp"
#include "version.hpp"

namespace mincurv {

using json = nlohmann::json;

struct FormulaCheck {
    int genus = 0;
    std::vector<int> ms;
    long expect_multiple = 0;
};

struct ExperimentConfig {
    int schema = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "out";

    bool has_metric = false;
    AlphaField alpha;
    double bound_a = 1.0, bound_b = 1.0;

    bool has_end = false;
    int end_m = 0;
    double end_c = 0.0;
    double end_R = 1.5;
    int grid_nr = 128, grid_ntheta = 128;
    double grid_Rout = 8.0;
    double K_M = -1.0;
    std::string xi_mode = "zero"; // "zero" | "solve"
    SolverConfig solver;
    double bc_inner_const = 0.0;

    std::vector<double> C_schedule;
    double lift_step = 0.0; // 0: default 0.01 C

    std::vector<FormulaCheck> formula_checks;
    std::optional<double> gb_max_defect;
    std::optional<double> boundary_decay_final_max;
    std::optional<double> xi_decay_min_r2;
    bool check_pinching = false;

    std::string canonical_dump; // serialized config, hashed into the manifest
};

namespace detail {

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) ok = true;
        if (!ok) fail("CONFIG_INVALID", "unknown key '" + it.key() + "' in " + where);
    }
}

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IO", "cannot hash missing artifact: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hex64(fnv1a(bytes));
}

} // namespace detail

inline AlphaField parse_alpha(const json& a) {
    detail::reject_unknown(a, {"kind", "value", "coeffs"}, "alpha");
    const std::string kind = a.at("kind").get<std::string>();
    if (kind == "const") return AlphaField::make_constant(a.at("value").get<double>());
    if (kind == "poly_r2") return AlphaField::make_poly_r2(a.at("coeffs").get<std::vector<double>>());
    fail("CONFIG_INVALID", "alpha.kind must be 'const' or 'poly_r2'");
}

inline ExperimentConfig parse_config_impl(const json& j) {
    ExperimentConfig cfg;
    detail::reject_unknown(j,
                           {"schema", "seed", "out_dir", "metric", "end", "grid", "K_M", "xi", "solver",
                            "C_schedule", "lift_step", "checks"},
                           "config");
    cfg.schema = j.at("schema").get<int>();
    if (cfg.schema != 1) fail("CONFIG_INVALID", "unsupported schema version");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

    if (j.contains("metric")) {
        const json& m = j.at("metric");
        detail::reject_unknown(m, {"alpha", "bounds"}, "metric");
        cfg.has_metric = true;
        cfg.alpha = parse_alpha(m.at("alpha"));
        const json& b = m.at("bounds");
        detail::reject_unknown(b, {"a", "b"}, "metric.bounds");
        cfg.bound_a = b.at("a").get<double>();
        cfg.bound_b = b.at("b").get<double>();
    }

    if (j.contains("end")) {
        const json& e = j.at("end");
        detail::reject_unknown(e, {"m", "c", "R"}, "end");
        cfg.has_end = true;
        cfg.end_m = e.at("m").get<int>();
        cfg.end_c = e.at("c").get<double>();
        cfg.end_R = e.at("R").get<double>();
        const json& g = j.at("grid");
        detail::reject_unknown(g, {"nr", "ntheta", "Rout"}, "grid");
        cfg.grid_nr = g.at("nr").get<int>();
        cfg.grid_ntheta = g.at("ntheta").get<int>();
        cfg.grid_Rout = g.at("Rout").get<double>();
        if (j.contains("K_M")) cfg.K_M = j.at("K_M").get<double>();
        if (j.contains("xi")) {
            const json& x = j.at("xi");
            detail::reject_unknown(x, {"mode"}, "xi");
            cfg.xi_mode = x.at("mode").get<std::string>();
            if (cfg.xi_mode != "zero" && cfg.xi_mode != "solve")
                fail("CONFIG_INVALID", "xi.mode must be 'zero' or 'solve'");
        }
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            detail::reject_unknown(s, {"tol", "max_iter", "damping", "bc_inner", "bc_outer"}, "solver");
            if (s.contains("tol")) cfg.solver.tol = s.at("tol").get<double>();
            if (s.contains("max_iter")) cfg.solver.max_iter = s.at("max_iter").get<int>();
            if (s.contains("damping")) cfg.solver.damping = s.at("damping").get<double>();
            if (s.contains("bc_outer")) cfg.solver.bc_outer = s.at("bc_outer").get<double>();
            if (s.contains("bc_inner")) cfg.bc_inner_const = s.at("bc_inner").get<double>();
        }
    }

    if (j.contains("C_schedule")) {
        cfg.C_schedule = j.at("C_schedule").get<std::vector<double>>();
        for (std::size_t i = 1; i < cfg.C_schedule.size(); ++i)
            if (!(cfg.C_schedule[i] > cfg.C_schedule[i - 1]))
                fail("CONFIG_INVALID", "C_schedule must be strictly increasing");
    }
    if (j.contains("lift_step")) cfg.lift_step = j.at("lift_step").get<double>();

    if (j.contains("checks")) {
        const json& c = j.at("checks");
        detail::reject_unknown(
            c, {"formula", "gauss_bonnet_max_defect", "boundary_decay_final_max", "xi_decay_min_r2", "pinching"},
            "checks");
        if (c.contains("formula"))
            for (const json& f : c.at("formula")) {
                detail::reject_unknown(f, {"genus", "ends", "expect_multiple"}, "checks.formula[]");
                FormulaCheck fc;
                fc.genus = f.at("genus").get<int>();
                fc.ms = f.at("ends").get<std::vector<int>>();
                fc.expect_multiple = f.at("expect_multiple").get<long>();
                cfg.formula_checks.push_back(fc);
            }
        if (c.contains("gauss_bonnet_max_defect"))
            cfg.gb_max_defect = c.at("gauss_bonnet_max_defect").get<double>();
        if (c.contains("boundary_decay_final_max"))
            cfg.boundary_decay_final_max = c.at("boundary_decay_final_max").get<double>();
        if (c.contains("xi_decay_min_r2")) cfg.xi_decay_min_r2 = c.at("xi_decay_min_r2").get<double>();
        if (c.contains("pinching")) cfg.check_pinching = c.at("pinching").get<bool>();
    }

    cfg.canonical_dump = j.dump();
    return cfg;
}

inline ExperimentConfig parse_config(const json& j) {
    try {
        return parse_config_impl(j);
    } catch (const json::exception& je) {
        fail("CONFIG_INVALID", je.what()); // missing or mistyped keys
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("CONFIG_INVALID", "cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& pe) {
        fail("CONFIG_INVALID", pe.what()); // message carries line/column
    }
    return parse_config(j);
}

struct StageRecord {
    std::string name;
    std::string status; // OK | FAILED | SKIPPED
    std::string detail;
    double wall_ms = 0.0;
};

struct ArtifactRecord {
    std::string path;
    std::string hash;
};

struct CheckRecord {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunManifest {
    std::string tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<StageRecord> stages;
    std::vector<ArtifactRecord> artifacts;
    std::vector<CheckRecord> acceptance;

    bool all_pass() const {
        for (const auto& s : stages)
            if (s.status == "FAILED") return false;
        for (const auto& c : acceptance)
            if (!c.pass) return false;
        return true;
    }

    json to_json() const {
        json j;
        j["tool_version"] = tool_version;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        j["stages"] = json::array();
        for (const auto& s : stages)
            j["stages"].push_back({{"name", s.name}, {"status", s.status}, {"detail", s.detail}, {"wall_ms", s.wall_ms}});
        j["artifacts"] = json::array();
        for (const auto& a : artifacts) j["artifacts"].push_back({{"path", a.path}, {"hash", a.hash}});
        j["acceptance"] = json::array();
        for (const auto& c : acceptance)
            j["acceptance"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return j;
    }
};

// Full pipeline. Partial failures halt downstream stages; every emitted file
// is listed (and hashed) in the manifest.
inline RunManifest run_pipeline(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    RunManifest man;
    man.tool_version = version;
    man.config_hash = detail::hex64(detail::fnv1a(cfg.canonical_dump));
    man.seed = cfg.seed;
    fs::create_directories(cfg.out_dir);

    bool halted = false;
    auto run_stage = [&](const std::string& name, const std::function<void()>& body) {
        if (halted) {
            man.stages.push_back({name, "SKIPPED", "upstream failure", 0.0});
            return;
        }
        const auto t0 = std::chrono::steady_clock::now();
        StageRecord rec{name, "OK", "", 0.0};
        try {
            body();
        } catch (const Error& err) {
            rec.status = "FAILED";
            rec.detail = err.what();
            halted = true;
        }
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        man.stages.push_back(rec);
    };
    auto emit_artifact = [&](const std::string& path) {
        man.artifacts.push_back({path, detail::hash_file(path)});
    };

    // formula checks are pure arithmetic, run them first
    run_stage("formula", [&] {
        for (const auto& fc : cfg.formula_checks) {
            const auto tc = total_curvature_formula(fc.genus, static_cast<int>(fc.ms.size()), fc.ms);
            std::string name = "formula[g=" + std::to_string(fc.genus) + ",n=" + std::to_string(fc.ms.size()) + "]";
            man.acceptance.push_back({name, tc.multiple == fc.expect_multiple,
                                      "multiple=" + std::to_string(tc.multiple) +
                                          " expected=" + std::to_string(fc.expect_multiple)});
        }
    });

    if (cfg.has_metric) {
        run_stage("metric-check", [&] {
            const auto metric = ConformalDiscMetric::from_alpha(cfg.alpha);
            const CurvatureBounds bounds(cfg.bound_a, cfg.bound_b);
            const auto rep = verify_pinching(metric, bounds, disc_sample_grid());
            const std::string path = cfg.out_dir + "/metric_report.csv";
            write_pinching_csv(rep, path);
            emit_artifact(path);
            if (cfg.check_pinching)
                man.acceptance.push_back({"pinching", rep.pass(),
                                          std::to_string(rep.violations.size()) + " violations"});
        });
    }

    // every enabled check appears in the table; stage failures may not skip
    // rows silently
    auto finalize = [&]() -> RunManifest& {
        auto ensure_row = [&](const std::string& name) {
            for (const auto& row : man.acceptance)
                if (row.name == name) return;
            man.acceptance.push_back({name, false, "not evaluated (stage failure)"});
        };
        if (cfg.has_metric && cfg.check_pinching) ensure_row("pinching");
        if (cfg.has_end && cfg.gb_max_defect) ensure_row("gauss_bonnet_defect");
        if (cfg.has_end && cfg.boundary_decay_final_max) ensure_row("boundary_decay");
        if (cfg.has_end && cfg.xi_mode == "solve" && cfg.xi_decay_min_r2) ensure_row("xi_decay");
        std::ofstream(cfg.out_dir + "/manifest.json") << man.to_json().dump(2) << '\n';
        return man;
    };

    if (!cfg.has_end) return finalize();

    EndData end(cfg.end_m, cfg.end_c, cfg.end_R);
    AnnulusGrid grid(cfg.end_R, cfg.grid_Rout, cfg.grid_nr, cfg.grid_ntheta);
    CurvatureInput K(cfg.K_M);
    XiField xi(grid);

    run_stage("end-solve", [&] {
        if (cfg.xi_mode == "solve") {
            SolverConfig sc = cfg.solver;
            const double bc = cfg.bc_inner_const;
            sc.bc_inner = [bc](double) { return bc; };
            xi = solve_xi(end, K, grid, sc);
        }
        const std::string path = cfg.out_dir + "/xi.csv";
        write_xi_csv(xi, residual_field(xi, end, K), path);
        emit_artifact(path);
    });

    std::vector<GaussBonnetReport> reports(cfg.C_schedule.size());
    std::vector<TruncatingPolygon> polygons;
    run_stage("lift-ledger", [&] {
        polygons.assign(cfg.C_schedule.size(), TruncatingPolygon{end, 0.0, {}, {}, true, 0});
        parallel_for(cfg.C_schedule.size(), [&](std::size_t i) {
            const double C = cfg.C_schedule[i];
            const double step = cfg.lift_step > 0.0 ? cfg.lift_step : 0.01 * C;
            polygons[i] = close_polygon(lift(end, C, step), end);
            reports[i] = gauss_bonnet_end(end, xi, C, &polygons[i]);
        });
        const auto curves = trace_level_curves(end, std::max(8.0 * end.R, cfg.grid_Rout));
        const std::string lc_path = cfg.out_dir + "/level_curves.csv";
        write_level_curves_csv(curves, lc_path);
        emit_artifact(lc_path);
        for (std::size_t i = 0; i < cfg.C_schedule.size(); ++i) {
            const std::string tag = std::to_string(i);
            const std::string poly_path = cfg.out_dir + "/polygon_" + tag + ".csv";
            write_polygon_csv(polygons[i], poly_path);
            emit_artifact(poly_path);
            const std::string svg_path = cfg.out_dir + "/polygon_" + tag + ".svg";
            emit_svg(polygons[i], curves, svg_path);
            emit_artifact(svg_path);
            const std::string rep_path = cfg.out_dir + "/gauss_bonnet_" + tag + ".json";
            json rj;
            rj["C"] = cfg.C_schedule[i];
            rj["interior_integral"] = reports[i].interior_integral;
            rj["polygon_term"] = reports[i].polygon_term;
            rj["polygon_term_abs"] = reports[i].polygon_term_abs;
            rj["turning_sum"] = reports[i].turning_sum;
            rj["inner_circle_term"] = reports[i].inner_circle_term;
            rj["target"] = reports[i].target;
            rj["defect"] = reports[i].defect;
            std::ofstream(rep_path) << rj.dump(2) << '\n';
            emit_artifact(rep_path);
        }

        if (cfg.gb_max_defect) {
            double worst = 0.0;
            for (const auto& r : reports) worst = std::max(worst, std::abs(r.defect));
            man.acceptance.push_back({"gauss_bonnet_defect", worst < *cfg.gb_max_defect,
                                      "max |defect| = " + format_sig(worst, 6)});
        }
        if (cfg.boundary_decay_final_max) {
            bool decreasing = true;
            for (std::size_t i = 1; i < reports.size(); ++i)
                if (!(reports[i].polygon_term_abs < reports[i - 1].polygon_term_abs)) decreasing = false;
            const double final_v = reports.empty() ? 0.0 : reports.back().polygon_term_abs;
            man.acceptance.push_back({"boundary_decay",
                                      decreasing && final_v < *cfg.boundary_decay_final_max,
                                      "final sum int |kappa_g| = " + format_sig(final_v, 6)});
        }
    });

    run_stage("fits", [&] {
        if (cfg.xi_mode != "solve" || !cfg.xi_decay_min_r2) return;
        const auto fit = decay_fit(xi);
        const auto gfit = gradient_decay_check(xi, end.m);
        const bool ok = !fit.degenerate && fit.c1_hat > 0.0 && fit.r2 > *cfg.xi_decay_min_r2 &&
                        !gfit.degenerate && gfit.slope < 0.0;
        man.acceptance.push_back({"xi_decay", ok,
                                  "c1=" + format_sig(fit.c1_hat, 6) + " r2=" + format_sig(fit.r2, 6) +
                                      " grad_slope=" + format_sig(gfit.slope, 6)});
    });

    return finalize();
}

} // namespace mincurv
