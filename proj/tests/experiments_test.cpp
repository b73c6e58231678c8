#include "hilop/experiments.hpp"

#include <json.hpp>

#include <doctest.h>

#include <stdexcept>
#include <string>

using hilop::experiments::run_config_text;
using hilop::experiments::validate_config_text;
using ordered_json = nlohmann::ordered_json;

TEST_CASE("parse errors come with line and column") {
    const auto v = validate_config_text("{\"experiment\": \"est-check\",\n  bad}");
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.errors.size() == 1);
    CHECK(v.errors[0].rfind("2:", 0) == 0);
}

TEST_CASE("unknown experiments and keys are rejected with paths") {
    const auto v = validate_config_text(R"({"experiment": "norm-quux"})");
    REQUIRE_FALSE(v.ok);
    CHECK(v.errors[0].find("unknown experiment") != std::string::npos);

    const auto k = validate_config_text(
        R"({"experiment": "est-check", "c_values": [1], "w_values": [0.5], "extra": 1})");
    REQUIRE_FALSE(k.ok);
    CHECK(k.errors[0].find("extra") != std::string::npos);
    CHECK(k.errors[0].find("unknown key") != std::string::npos);
}

TEST_CASE("semantic problems are aggregated, not reported one at a time") {
    const auto v = validate_config_text(R"({
        "experiment": "norm-verify",
        "params": {"p": 0.5, "lambda": 1.0, "theta1": 1.5, "theta2": 1.0, "alpha": 0.0},
        "eps_ladder": [0.1, 0.2],
        "N": 10
    })");
    REQUIRE_FALSE(v.ok);
    CHECK(v.errors.size() >= 3); // missing beta, bad params, bad ladder order, bad N
}

TEST_CASE("hypothesis violations carry the standing wording") {
    const auto v = validate_config_text(R"({
        "experiment": "threshold-scan",
        "params": {"p": 0.5, "lambda": 0.4, "theta1": 1.0, "theta2": 1.0, "alpha": 0.0, "beta": 0.0},
        "eps": 0.1,
        "ladder": [100, 1000]
    })");
    REQUIRE_FALSE(v.ok);
    bool found = false;
    for (const auto &e : v.errors)
        if (e.find("p must exceed 1") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("running an invalid config throws the joined error list") {
    CHECK_THROWS_AS((void)run_config_text(R"({"experiment": "est-check"})", 1),
                    std::invalid_argument);
}

TEST_CASE("est-check runs, reports, and tables") {
    const std::string cfg =
        R"({"experiment": "est-check", "c_values": [1, 2], "w_values": [0.5, 0.9]})";
    const auto r = run_config_text(cfg, 1);
    CHECK(r.passed);

    const auto report = ordered_json::parse(r.report_json);
    CHECK(report["tool"] == "hilop");
    CHECK(report["version"] == "1.0.0");
    CHECK(report["experiment"] == "est-check");
    CHECK(report["passed"] == true);
    CHECK(report.contains("wall_clock_seconds"));
    REQUIRE(report["criteria"].is_array());
    REQUIRE(report["criteria"].size() >= 3);
    for (const auto &c : report["criteria"]) {
        CHECK(c.contains("id"));
        CHECK(c.contains("observed"));
        CHECK(c.contains("threshold"));
        CHECK(c["pass"] == true);
    }
    // report key order is fixed; wall clock is the last key
    CHECK(report.rbegin().key() == "wall_clock_seconds");

    REQUIRE_FALSE(r.csv.empty());
    CHECK(r.csv.rfind("# hilop-csv est-check v1\nc,w,ratio\n", 0) == 0);
    int lines = 0;
    for (char ch : r.csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 2 + 4); // schema + header + one row per (c, w) pair
}

TEST_CASE("reports are deterministic apart from the wall clock") {
    const std::string cfg =
        R"({"experiment": "stirling-check", "x_values": [0.5, 1, 2, 5, 10, 100]})";
    auto a = ordered_json::parse(run_config_text(cfg, 1).report_json);
    auto b = ordered_json::parse(run_config_text(cfg, 1).report_json);
    a.erase("wall_clock_seconds");
    b.erase("wall_clock_seconds");
    CHECK(a == b);
}

TEST_CASE("carleson-test on Lebesgue measure") {
    const std::string cfg = R"({
        "experiment": "carleson-test",
        "measure": {"pieces": [[0, 1, 1, 0]]},
        "lambda": 1.0, "s": 1.0,
        "z_points": [2, 3.5, 10, 100],
        "expect_constant_ratio": true
    })";
    const auto r = run_config_text(cfg, 1);
    CHECK(r.passed);
    const auto report = ordered_json::parse(r.report_json);
    CHECK(report["results"]["moment_ratios"].size() > 100);
}

TEST_CASE("vanishing-test flags a vanishing measure") {
    const std::string cfg = R"({
        "experiment": "vanishing-test",
        "measure": {"pieces": [[0, 1, 1, 1]]},
        "lambda": 1.0, "s": 1.0, "n_max": 10000
    })";
    const auto r = run_config_text(cfg, 1);
    CHECK(r.passed);
}

TEST_CASE("duality-scan in both regimes") {
    const std::string bounded = R"({
        "experiment": "duality-scan",
        "params": {"p": 2, "lambda": 1, "theta1": 1, "theta2": 1, "alpha": 0, "beta": 0},
        "measure": {"pieces": [[0, 1, 1, 0]]},
        "k_max": 10,
        "pairing_ws": [0.5, 0.9]
    })";
    CHECK(run_config_text(bounded, 1).passed);

    const std::string growing = R"({
        "experiment": "duality-scan",
        "params": {"p": 2, "lambda": 1, "theta1": 1, "theta2": 1, "alpha": 0, "beta": 0},
        "measure": {"pieces": [[0, 1, 0.5, -0.5]]},
        "k_max": 10,
        "expect_growth": true
    })";
    CHECK(run_config_text(growing, 1).passed);
}

TEST_CASE("boundary-gamma ladders and verdicts") {
    const std::string cfg = R"({
        "experiment": "boundary-gamma",
        "p": 2,
        "gammas": [-1.5, -1, 1],
        "eps_ladder": [0.4, 0.2, 0.1, 0.05]
    })";
    CHECK(run_config_text(cfg, 1).passed);

    const auto bad = validate_config_text(R"({
        "experiment": "boundary-gamma",
        "p": 2, "gammas": [0.3], "eps_ladder": [0.2, 0.1]
    })");
    CHECK_FALSE(bad.ok);
}

TEST_CASE("hilbert-classic stays below its limit") {
    const auto r = run_config_text(
        R"({"experiment": "hilbert-classic", "N_values": [2, 8, 32]})", 1);
    CHECK(r.passed);
}

TEST_CASE("config output block is surfaced to the caller") {
    const std::string cfg = R"({
        "experiment": "est-check", "c_values": [1], "w_values": [0.5],
        "output": {"path": "table.csv", "format": "csv"}
    })";
    const auto r = run_config_text(cfg, 1);
    CHECK(r.output_path == "table.csv");
    CHECK(r.output_format == "csv");

    const auto bad = validate_config_text(R"({
        "experiment": "est-check", "c_values": [1], "w_values": [0.5],
        "output": {"path": "", "format": "yaml"}
    })");
    REQUIRE_FALSE(bad.ok);
    CHECK(bad.errors.size() == 2);
}

TEST_CASE("quadrature override is validated") {
    const auto bad = validate_config_text(R"({
        "experiment": "stirling-check", "x_values": [1],
        "quadrature": {"rel_tol": 0.5}
    })");
    CHECK_FALSE(bad.ok);
}

TEST_CASE("catalog lists every experiment once") {
    const auto cat = hilop::experiments::experiment_catalog();
    CHECK(cat.size() == 10);
    for (std::size_t i = 0; i < cat.size(); ++i)
        for (std::size_t j = i + 1; j < cat.size(); ++j) CHECK(cat[i].first != cat[j].first);
}
