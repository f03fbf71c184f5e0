// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tailrisk/empirical.hpp"
#include "tailrisk/orlicz.hpp"
#include "tailrisk/risk_spec.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/tailrisk_test_") + name;
}

RunResult run_cli(const std::string& args) {
    const std::string out_file = tmp_path("stdout.txt");
    const std::string cmd =
        std::string(TAILRISK_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("risk-spec wire format: schema, round trip, rejection") {
    using tailrisk::RiskSpec;
    RiskSpec spec = RiskSpec::parse(
        "{\"family\": \"cvar\", \"alpha\": 0.25, \"epsilon\": 0.125}");
    CHECK(spec.family == "cvar");
    CHECK(spec.measure == "divergence");
    REQUIRE(spec.alpha.has_value());
    CHECK(*spec.alpha == 0.25);

    RiskSpec again = RiskSpec::parse(spec.serialize());
    CHECK(again.serialize() == spec.serialize());
    CHECK(again.epsilon == 0.125);

    CHECK_THROWS_AS(RiskSpec::parse("{\"family\": \"kl\", \"color\": 3}"),
                    std::invalid_argument);  // unknown keys rejected
    CHECK_THROWS_AS(RiskSpec::parse("{\"family\": \"nosuch\"}"), std::invalid_argument);
    CHECK_THROWS_AS(RiskSpec::parse("{\"family\": \"kl\", \"measure\": \"bogus\"}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(RiskSpec::parse("not json"), std::invalid_argument);
    CHECK_THROWS_AS(RiskSpec::parse("{\"family\": \"cvar\"}").resolve(),
                    std::invalid_argument);  // cvar requires alpha

    RiskSpec table = RiskSpec::parse(
        "{\"family\": \"custom\", \"f_table\": [[0,1],[1,0],[2,1],[3,3]]}");
    CHECK(table.resolve().g(0.5) >= 0.5);

    // 17 significant digits survive the round trip
    RiskSpec tiny;
    tiny.family = "kl";
    tiny.epsilon = 0.1234567890123456789;
    CHECK(RiskSpec::parse(tiny.serialize()).epsilon == tiny.epsilon);
}

TEST_CASE("eval: cvar, expectation and the entropic cross-check") {
    const std::string csv = tmp_path("samples.csv");
    write_file(csv, "x\n1\n2\n3\n4\n");

    RunResult r = run_cli("eval --risk cvar --alpha 0.5 " + csv);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(3.5).epsilon(1e-9));

    r = run_cli("eval --risk expectation " + csv);
    REQUIRE(r.exit_code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(2.5).epsilon(1e-9));

    r = run_cli("eval --risk kl --epsilon 0.1 " + csv);
    REQUIRE(r.exit_code == 0);
    j = nlohmann::json::parse(r.out);
    tailrisk::EmpiricalDistribution d({1.0, 2.0, 3.0, 4.0});
    CHECK(j["value"].get<double>() ==
          doctest::Approx(tailrisk::entropic_risk(d, 0.1)).epsilon(1e-6));
    CHECK(j["epsilon"].get<double>() == 0.1);
}

TEST_CASE("eval: weighted samples and weight renormalization flag") {
    const std::string csv = tmp_path("weighted.csv");
    write_file(csv, "x,w\n1,1\n10,3\n");
    RunResult r = run_cli("eval --risk expectation " + csv);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx((1.0 + 30.0) / 4.0));
    CHECK(j["diagnostics"]["renormalized_weights"].get<bool>() == true);
}

TEST_CASE("eval: measure flag dispatches to spectral and tm") {
    const std::string csv = tmp_path("measure.csv");
    write_file(csv, "x\n1\n2\n3\n4\n");
    RunResult r = run_cli("eval --risk cvar --alpha 0.5 --measure spectral " + csv);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(3.5).epsilon(1e-9));
    CHECK(j["measure"] == "spectral:cvar");

    r = run_cli("eval --risk expectation --measure tm " + csv);
    REQUIRE(r.exit_code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("exit codes: malformed input is 2, bad specs are 3") {
    const std::string bad = tmp_path("bad.csv");
    write_file(bad, "x\n1\nnot-a-number\n");
    CHECK(run_cli("eval --risk expectation " + bad).exit_code == 2);

    const std::string missing = tmp_path("missing_col.csv");
    write_file(missing, "y\n1\n");
    CHECK(run_cli("eval --risk expectation " + missing).exit_code == 2);

    const std::string good = tmp_path("good.csv");
    write_file(good, "x\n1\n2\n");
    CHECK(run_cli("eval --risk cvar --alpha 1.5 " + good).exit_code == 3);
    CHECK(run_cli("eval --risk nosuch " + good).exit_code == 3);
    CHECK(run_cli("eval --risk kl --epsilon -1 " + good).exit_code == 3);
}

TEST_CASE("construct: pareto gives the power family, exponential coincides") {
    RunResult r = run_cli("construct --reference pareto:2");
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["risk_spec"]["family"] == "power");
    CHECK(j["risk_spec"]["p"].get<double>() == 2.0);
    CHECK(j["coincidence"].get<bool>() == false);

    r = run_cli("construct --reference exponential");
    REQUIRE(r.exit_code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["risk_spec"]["family"] == "custom");
    CHECK(j["coincidence"].get<bool>() == true);
    CHECK(j["krein"].get<bool>() == false);  // LlogL-side product

    // constant reference: rejected, pointing at the bounded-reweighting path
    const std::string flat = tmp_path("flat_ref.json");
    write_file(flat, "[[0.1, 1.0], [0.5, 1.0], [1.0, 1.0]]");
    RunResult rc = run_cli("construct --reference " + flat);
    CHECK(rc.exit_code == 3);

    // tabulated pareto-like reference goes through the custom family
    // (log-dense: a sparse linear table would overshoot the 1/t bound)
    const std::string tab = tmp_path("tab_ref.json");
    std::string rows = "[";
    for (int i = 0; i <= 40; ++i) {
        const double t = std::pow(10.0, -4.0 * (1.0 - i / 40.0));
        if (i) rows += ", ";
        rows += "[" + std::to_string(t) + ", " + std::to_string(std::pow(t, -0.5)) + "]";
    }
    rows += "]";
    write_file(tab, rows);
    RunResult rt = run_cli("construct --reference " + tab);
    REQUIRE(rt.exit_code == 0);
    j = nlohmann::json::parse(rt.out);
    CHECK(j["risk_spec"]["family"] == "custom");
    const std::string csv2 = tmp_path("tabrt.csv");
    write_file(csv2, "x\n0.5\n1.5\n");
    const std::string spec_path = tmp_path("tab_spec.json");
    REQUIRE(run_cli("construct --reference " + tab + " --out " + spec_path).exit_code == 0);
    CHECK(run_cli("eval --spec " + spec_path + " " + csv2).exit_code == 0);
}

TEST_CASE("construct output round-trips into eval") {
    const std::string spec = tmp_path("constructed.json");
    REQUIRE(run_cli("construct --reference pareto:2 --out " + spec).exit_code == 0);
    const std::string csv = tmp_path("rt.csv");
    write_file(csv, "x\n0\n1\n2\n");
    RunResult r = run_cli("eval --spec " + spec + " " + csv);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["value"].get<double>() >= 1.0 - 1e-9);  // risk >= mean

    // the tabulated exponential spec parses identically
    const std::string spec2 = tmp_path("constructed_exp.json");
    REQUIRE(run_cli("construct --reference exponential --out " + spec2).exit_code == 0);
    CHECK(run_cli("eval --spec " + spec2 + " " + csv).exit_code == 0);
}

TEST_CASE("compare emits an ordered quadruple") {
    const std::string csv = tmp_path("cmp.csv");
    write_file(csv, "x\n0.2\n1.1\n2.7\n0.4\n");
    RunResult r = run_cli("compare --risk chi2 " + csv);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["sandwich_ok"].get<bool>());
    CHECK(j["marcinkiewicz"].get<double>() <= j["orlicz"].get<double>() + 1e-9);
    CHECK(j["orlicz"].get<double>() <= j["lorentz"].get<double>() + 1e-9);
    CHECK(j["tm"].get<double>() <= j["lorentz"].get<double>() + 1e-9);
}

TEST_CASE("deviation report rows all pass") {
    const std::string csv = tmp_path("dev.csv");
    std::string content = "x\n";
    for (int i = 1; i <= 60; ++i) content += std::to_string(0.07 * i) + "\n";
    write_file(csv, content);
    RunResult r = run_cli("deviation --reference exponential --grid-min 0.5 "
                          "--grid-max 8 --grid-points 12 " + csv);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == 12);
    for (const auto& row : j["rows"]) CHECK(row["pass"].get<bool>());
}

TEST_CASE("train writes params and history; identical runs are byte-identical") {
    const std::string csv = tmp_path("train.csv");
    std::string content = "x0,x1,y\n";
    unsigned state = 12345;
    auto next = [&state]() {
        state = state * 1103515245u + 12345u;
        return ((state >> 16) & 0x7fff) / 32768.0;
    };
    for (int i = 0; i < 40; ++i) {
        const double z = next();
        content += "1," + std::to_string(z) + "," + std::to_string(0.5 + 2.0 * z) + "\n";
    }
    write_file(csv, content);
    const std::string cfg = tmp_path("train_cfg.json");
    write_file(cfg, "{\"risk\": {\"family\": \"expectation\"}, \"loss\": \"squared\","
                    " \"step_size\": 0.25, \"max_epochs\": 800, \"tolerance\": 1e-13,"
                    " \"seed\": 7}");

    const std::string p1 = tmp_path("params1.json"), h1 = tmp_path("hist1.csv");
    const std::string p2 = tmp_path("params2.json"), h2 = tmp_path("hist2.csv");
    REQUIRE(run_cli("train --config " + cfg + " --out-params " + p1 +
                    " --out-history " + h1 + " " + csv).exit_code == 0);
    REQUIRE(run_cli("train --config " + cfg + " --out-params " + p2 +
                    " --out-history " + h2 + " " + csv).exit_code == 0);

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(h1) == slurp(h2));

    nlohmann::json pj = nlohmann::json::parse(slurp(p1));
    REQUIRE(pj["params"].size() == 2);
    CHECK(pj["params"][0].get<double>() == doctest::Approx(0.5).epsilon(0.05));
    CHECK(pj["params"][1].get<double>() == doctest::Approx(2.0).epsilon(0.05));
    CHECK(pj["seed"].get<int>() == 7);

    std::string hist = slurp(h1);
    CHECK(hist.rfind("epoch,objective\n", 0) == 0);

    // unknown config keys are rejected
    const std::string bad_cfg = tmp_path("bad_cfg.json");
    write_file(bad_cfg, "{\"risk\": {\"family\": \"expectation\"}, \"surprise\": 1}");
    CHECK(run_cli("train --config " + bad_cfg + " " + csv).exit_code == 3);
}

TEST_CASE("plotdata reproduces the closed-form curves") {
    const std::string out = tmp_path("plot.csv");
    REQUIRE(run_cli("plotdata --families kl,chi2,cvar:0.2 --epsilon 1 --points 100 --out " +
                    out).exit_code == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,kl,chi2,cvar:0.2");
    std::string line, last;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        last = line;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        const double t = std::strtod(cell.c_str(), nullptr);
        std::getline(ss, cell, ',');  // kl (checked at t = 1 below)
        std::getline(ss, cell, ',');
        const double chi2 = std::strtod(cell.c_str(), nullptr);
        CHECK(chi2 == doctest::Approx(std::min(1.0, t + std::sqrt(t))).epsilon(1e-12));
        std::getline(ss, cell, ',');
        const double cv = std::strtod(cell.c_str(), nullptr);
        CHECK(cv == doctest::Approx(std::min(1.0, t / 0.8)).epsilon(1e-12));
    }
    CHECK(rows == 100);
    // t = 1 row: all risk fundamentals equal 1
    std::stringstream ss(last);
    std::string cell;
    std::getline(ss, cell, ',');
    CHECK(std::strtod(cell.c_str(), nullptr) == 1.0);
    while (std::getline(ss, cell, ','))
        CHECK(std::strtod(cell.c_str(), nullptr) == doctest::Approx(1.0).epsilon(1e-9));

    // the appendix pair
    RunResult r = run_cli("plotdata --families llogl,lexp --points 4");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("t,llogl,lexp", 0) == 0);
}

TEST_SUITE_END();
