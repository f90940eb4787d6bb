#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "mincurv/experiment.hpp"
#include "mincurv/svg_io.hpp"

using namespace mincurv;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int count_occurrences(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

json formula_only_config(const std::string& out_dir) {
    return json{{"schema", 1},
                {"seed", 7},
                {"out_dir", out_dir},
                {"checks",
                 {{"formula", json::array({json{{"genus", 0}, {"ends", {0}}, {"expect_multiple", 0}},
                                           json{{"genus", 0}, {"ends", {0, 0}}, {"expect_multiple", -2}},
                                           json{{"genus", 0}, {"ends", {2}}, {"expect_multiple", -2}}})}}}};
}

} // namespace

TEST_CASE("config parsing accepts the documented schema only") {
    CHECK_NOTHROW(parse_config(formula_only_config("/tmp/mincurv_cfg_a")));
    {
        json j = formula_only_config("/tmp/x");
        j["surprise"] = 1;
        CHECK_THROWS_AS(parse_config(j), Error);
    }
    {
        json j = formula_only_config("/tmp/x");
        j["schema"] = 2;
        CHECK_THROWS_AS(parse_config(j), Error);
    }
    {
        json j = formula_only_config("/tmp/x");
        j["C_schedule"] = {3.0, 2.0};
        CHECK_THROWS_AS(parse_config(j), Error);
    }
}

TEST_CASE("malformed JSON reports line and column") {
    const std::string path = "/tmp/mincurv_bad.json";
    std::ofstream(path) << "{ \"schema\": 1,\n  broken\n}";
    try {
        load_config(path);
        FAIL("expected CONFIG_INVALID");
    } catch (const Error& err) {
        CHECK(err.code() == "CONFIG_INVALID");
        CHECK(std::string(err.what()).find("line") != std::string::npos);
        CHECK(std::string(err.what()).find("column") != std::string::npos);
    }
}

TEST_CASE("formula-only pipeline emits three PASS rows") {
    const std::string out = "/tmp/mincurv_run_formula";
    fs::remove_all(out);
    const auto man = run_pipeline(parse_config(formula_only_config(out)));
    REQUIRE(man.acceptance.size() == 3);
    for (const auto& row : man.acceptance) CHECK(row.pass);
    CHECK(man.all_pass());
    CHECK(fs::exists(out + "/manifest.json"));
}

TEST_CASE("flat benchmark pipeline records a small ledger defect") {
    const std::string out = "/tmp/mincurv_run_flat";
    fs::remove_all(out);
    json j{{"schema", 1},
           {"out_dir", out},
           {"end", {{"m", 1}, {"c", 0.0}, {"R", 1.5}}},
           {"grid", {{"nr", 129}, {"ntheta", 128}, {"Rout", 4.5}}},
           {"xi", {{"mode", "zero"}}},
           {"C_schedule", {9.0}},
           {"checks", {{"gauss_bonnet_max_defect", 1e-3}}}};
    const auto man = run_pipeline(parse_config(j));
    CHECK(man.all_pass());
    bool saw_defect_row = false;
    for (const auto& row : man.acceptance)
        if (row.name == "gauss_bonnet_defect") {
            saw_defect_row = true;
            CHECK(row.pass);
        }
    CHECK(saw_defect_row);
    // every emitted artifact is listed and exists
    for (const auto& art : man.artifacts) CHECK(fs::exists(art.path));
    CHECK(fs::exists(out + "/polygon_0.csv"));
    CHECK(fs::exists(out + "/polygon_0.svg"));
    CHECK(fs::exists(out + "/gauss_bonnet_0.json"));
}

TEST_CASE("identical config and seed reproduce identical artifact hashes") {
    auto run_into = [&](const std::string& out) {
        fs::remove_all(out);
        json j{{"schema", 1},
               {"seed", 42},
               {"out_dir", out},
               {"end", {{"m", 0}, {"c", 0.0}, {"R", 1.5}}},
               {"grid", {{"nr", 65}, {"ntheta", 64}, {"Rout", 8.0}}},
               {"xi", {{"mode", "solve"}}},
               {"K_M", -1.0},
               {"solver", {{"bc_inner", 0.5}}},
               {"C_schedule", {3.0}},
               {"checks", {{"gauss_bonnet_max_defect", 0.2}}}};
        return run_pipeline(parse_config(j));
    };
    const auto a = run_into("/tmp/mincurv_det_a");
    const auto b = run_into("/tmp/mincurv_det_b");
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) CHECK(a.artifacts[i].hash == b.artifacts[i].hash);
    // the config hash covers the whole config, so it differs with out_dir
}

TEST_CASE("stage failure halts downstream stages") {
    const std::string out = "/tmp/mincurv_run_fail";
    fs::remove_all(out);
    json j{{"schema", 1},
           {"out_dir", out},
           {"end", {{"m", 0}, {"c", 0.0}, {"R", 1.5}}},
           {"grid", {{"nr", 65}, {"ntheta", 64}, {"Rout", 3.0}}}, // too small for P(3)
           {"xi", {{"mode", "solve"}}},
           {"solver", {{"bc_inner", 0.5}}},
           {"C_schedule", {3.0}},
           {"checks", {{"gauss_bonnet_max_defect", 0.2}, {"xi_decay_min_r2", 0.9}}}};
    const auto man = run_pipeline(parse_config(j));
    CHECK_FALSE(man.all_pass());
    bool failed = false, skipped = false;
    for (const auto& s : man.stages) {
        if (s.name == "lift-ledger" && s.status == "FAILED") failed = true;
        if (s.name == "fits" && s.status == "SKIPPED") skipped = true;
    }
    CHECK(failed);
    CHECK(skipped);
    // enabled checks still appear in the table, marked failed
    int unevaluated = 0;
    for (const auto& row : man.acceptance)
        if (!row.pass && row.detail.find("not evaluated") != std::string::npos) ++unevaluated;
    CHECK(unevaluated == 2); // gauss_bonnet_defect and xi_decay
}

TEST_CASE("svg overlay annotates vertices and classes") {
    {
        const EndData e(0, 0.0, 2.0);
        const auto poly = close_polygon(lift(e, 8.0, 0.1), e);
        const std::string path = "/tmp/mincurv_sq.svg";
        emit_svg(poly, trace_level_curves(e), path);
        const std::string svg = slurp(path);
        CHECK(count_occurrences(svg, "<circle") == 4);
        CHECK(count_occurrences(svg, "reflex") == 0);
    }
    {
        // m=1 with residue: ten vertices, one reflex
        const EndData e(1, 0.5, 2.9);
        const auto poly = close_polygon(lift(e, 16.0, 0.05), e);
        REQUIRE(poly.vertices.size() == 10);
        const std::string path = "/tmp/mincurv_m1c.svg";
        emit_svg(poly, trace_level_curves(e), path);
        const std::string svg = slurp(path);
        CHECK(count_occurrences(svg, "<circle") == 10);
        CHECK(count_occurrences(svg, "class=\"reflex\"") == 1);
    }
    {
        const EndData e(0, 0.0, 2.0);
        TruncatingPolygon empty{e, 8.0, {}, {}, true, 0};
        CHECK_THROWS_AS(emit_svg(empty, {}, "/tmp/mincurv_empty.svg"), Error);
    }
}

TEST_CASE("csv round trip preserves the xi field at printed precision") {
    const EndData e(0, 0.0, 1.5);
    const AnnulusGrid grid(1.5, 8.0, 33, 16);
    SolverConfig cfg;
    cfg.bc_inner = [](double th) { return 0.4 + 0.1 * std::cos(th); };
    const XiField xi = solve_xi(e, CurvatureInput(-1.0), grid, cfg);
    const std::string path = "/tmp/mincurv_xi_roundtrip.csv";
    write_xi_csv(xi, residual_field(xi, e, CurvatureInput(-1.0)), path);
    const XiField back = read_xi_csv(path);
    REQUIRE(back.grid.n_r == grid.n_r);
    REQUIRE(back.grid.n_theta == grid.n_theta);
    for (int i = 0; i < grid.n_r; ++i)
        for (int j = 0; j < grid.n_theta; ++j)
            CHECK(back.at(i, j) == Catch::Approx(xi.at(i, j)).margin(1e-10));
}

TEST_CASE("formula stage mismatch is reported as a failing row") {
    json j = formula_only_config("/tmp/mincurv_run_mismatch");
    j["checks"]["formula"][0]["expect_multiple"] = 5; // wrong on purpose
    const auto man = run_pipeline(parse_config(j));
    CHECK_FALSE(man.all_pass());
    CHECK_FALSE(man.acceptance[0].pass);
    CHECK(man.acceptance[1].pass);
}

TEST_CASE("metric stage feeds the pinching acceptance row") {
    const std::string out = "/tmp/mincurv_run_metric";
    fs::remove_all(out);
    json j{{"schema", 1},
           {"out_dir", out},
           {"metric", {{"alpha", {{"kind", "poly_r2"}, {"coeffs", {1.0, 0.1}}}}, {"bounds", {{"a", 1.1}, {"b", 0.9}}}}},
           {"checks", {{"pinching", true}}}};
    const auto man = run_pipeline(parse_config(j));
    CHECK(man.all_pass());
    CHECK(fs::exists(out + "/metric_report.csv"));
}
