// SPDX-License-Identifier: Apache-2.0
//
// tailrisk: evaluate tail-sensitive risk measures on sample data, construct
// risk specifications from reference distributions, verify deviation
// inequalities, and train linear models under a risk measure.
//
// Exit codes: 0 ok, 2 input error, 3 spec error, 4 numeric failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailrisk/deviation.hpp"
#include "tailrisk/empirical.hpp"
#include "tailrisk/extremal.hpp"
#include "tailrisk/fundamental.hpp"
#include "tailrisk/learn.hpp"
#include "tailrisk/orlicz.hpp"
#include "tailrisk/risk_spec.hpp"

using namespace tailrisk;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// CSV ingestion: header row, '.' decimal separator, UTF-8
// ---------------------------------------------------------------------------

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::optional<std::size_t> column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t start = 0;
        while (start < cell.size() && cell[start] == ' ') ++start;
        cells.push_back(cell.substr(start));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

Csv read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    Csv csv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto cells = split_csv_line(line);
        if (line_no == 1) {
            csv.header = cells;
            continue;
        }
        if (cells.size() != csv.header.size())
            throw InputError(path + ":" + std::to_string(line_no) +
                             ": expected " + std::to_string(csv.header.size()) +
                             " columns, found " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size() || !std::isfinite(v))
                throw InputError(path + ":" + std::to_string(line_no) +
                                 ": malformed number '" + c + "'");
            row.push_back(v);
        }
        csv.rows.push_back(std::move(row));
    }
    if (csv.header.empty()) throw InputError(path + ":1: missing header row");
    return csv;
}

EmpiricalDistribution read_samples(const std::string& path) {
    Csv csv = read_csv(path);
    auto xcol = csv.column("x");
    if (!xcol) throw InputError(path + ":1: required column 'x' not found");
    auto wcol = csv.column("w");
    if (csv.rows.empty()) throw InputError(path + ": no data rows");
    std::vector<double> xs, ws;
    for (const auto& row : csv.rows) {
        xs.push_back(row[*xcol]);
        if (wcol) ws.push_back(row[*wcol]);
    }
    try {
        return wcol ? EmpiricalDistribution(xs, ws) : EmpiricalDistribution(xs);
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// JSON emission with 17-significant-digit numbers
// ---------------------------------------------------------------------------

std::string jnum(double v) { return format_double(v); }
std::string jbool(bool b) { return b ? "true" : "false"; }

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << text << "\n";
}

// ---------------------------------------------------------------------------
// Risk-spec assembly from flags or a file
// ---------------------------------------------------------------------------

struct RiskFlags {
    std::string spec_file;
    std::string family;
    std::string measure = "divergence";
    double epsilon = 1.0;
    double alpha = -1.0;
    double p = -1.0;
};

RiskSpec resolve_spec(const RiskFlags& flags) {
    if (!flags.spec_file.empty()) {
        std::ifstream in(flags.spec_file);
        if (!in) throw InputError("cannot open '" + flags.spec_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument(std::string("spec file: invalid JSON: ") + e.what());
        }
        // accept both a bare risk spec and a construct document
        if (j.is_object() && j.contains("risk_spec")) j = j["risk_spec"];
        return RiskSpec::parse(j.dump());
    }
    if (flags.family.empty())
        throw std::invalid_argument("either --risk or --spec is required");
    RiskSpec spec;
    spec.family = flags.family;
    spec.measure = flags.measure;
    spec.epsilon = flags.epsilon;
    if (flags.alpha >= 0.0) spec.alpha = flags.alpha;
    if (flags.p > 0.0) spec.p = flags.p;
    // round-trip through the parser so flag input obeys the same schema
    return RiskSpec::parse(spec.serialize());
}

void add_risk_flags(CLI::App* cmd, RiskFlags& flags) {
    cmd->add_option("--risk", flags.family,
                    "risk family: kl|chi2|cvar|power|expectation|custom");
    cmd->add_option("--measure", flags.measure, "divergence|spectral|tm");
    cmd->add_option("--epsilon", flags.epsilon, "risk-aversion level (> 0)");
    cmd->add_option("--alpha", flags.alpha, "cvar level in [0,1)");
    cmd->add_option("--p", flags.p, "power exponent (> 1)");
    cmd->add_option("--spec", flags.spec_file, "risk-spec JSON file");
}

// ---------------------------------------------------------------------------
// Reference parsing: exponential | pareto:P | JSON table file
// ---------------------------------------------------------------------------

ReferenceDistribution parse_reference(const std::string& token) {
    if (token == "exponential") return ReferenceDistribution::exponential_shifted();
    if (token.rfind("pareto:", 0) == 0) {
        const double p = std::strtod(token.c_str() + 7, nullptr);
        if (!(p > 1.0)) throw std::invalid_argument("pareto reference requires p > 1");
        return ReferenceDistribution::pareto(p);
    }
    std::ifstream in(token);
    if (!in) throw InputError("cannot open reference '" + token + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("reference file: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("reference file: expected [[t, value], ...]");
    std::vector<double> ts, vs;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("reference file: rows must be [t, value] pairs");
        ts.push_back(row[0].get<double>());
        vs.push_back(row[1].get<double>());
    }
    if (ts.empty()) throw std::invalid_argument("reference file: empty table");
    const bool constant_table = [&] {
        for (double v : vs)
            if (v != vs.front()) return false;
        return true;
    }();
    if (constant_table) return ReferenceDistribution::constant(vs.front());
    return ReferenceDistribution::from_table(ts, vs, token);
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int cmd_eval(const std::string& input, const RiskFlags& flags) {
    RiskSpec spec = resolve_spec(flags);
    EmpiricalDistribution d = read_samples(input);

    std::string out = "{\"measure\": \"" + spec.measure + ":" + spec.family + "\"";
    if (spec.measure == "divergence") {
        RiskResult r = divergence_risk(d, spec.resolve());
        out += ", \"value\": " + jnum(r.value);
        out += ", \"t_star\": " + (r.t_star ? jnum(*r.t_star) : "null");
        out += ", \"mu_star\": " + (r.mu_star ? jnum(*r.mu_star) : "null");
        out += ", \"epsilon\": " + jnum(spec.epsilon);
        out += ", \"diagnostics\": {\"iterations\": " + std::to_string(r.iterations);
        out += ", \"boundary\": " + jbool(r.boundary);
        out += ", \"renormalized_weights\": " + jbool(d.was_renormalized()) + "}";
    } else {
        FundamentalFunction phi = risk_fundamental(spec.resolve());
        const double v = spec.measure == "spectral" ? spectral_risk(d, phi)
                                                    : tm_risk(d, phi);
        out += ", \"value\": " + jnum(v);
        out += ", \"t_star\": null, \"mu_star\": null";
        out += ", \"epsilon\": " + jnum(spec.epsilon);
        out += ", \"diagnostics\": {\"renormalized_weights\": " +
               jbool(d.was_renormalized()) + "}";
    }
    out += "}";
    std::cout << out << "\n";
    return 0;
}

int cmd_construct(const std::string& reference, const std::string& out_path) {
    ReferenceDistribution ref = parse_reference(reference);
    const ReferenceCheck check = check_reference(ref);
    if (check == ReferenceCheck::invalid)
        throw std::invalid_argument(
            "reference fails the quasiconcavity necessity bound "
            "(t -> Y*(t) t must be increasing; Y*(t) <= Y*(1)/t is necessary)");

    YoungFunction Phi = young_from_envelope(ref, EnvelopeSide::dual);
    DivergenceSpec derived = divergence_from_young(Phi, 1.0);

    // serializable risk spec: the pareto catalog maps to the power family
    // exactly; everything else is tabulated
    RiskSpec spec;
    spec.epsilon = 1.0;
    if (ref.tag() == ReferenceDistribution::Tag::pareto) {
        spec.family = "power";
        spec.p = ref.param();
    } else {
        spec.family = "custom";
        std::vector<std::pair<double, double>> table;
        table.emplace_back(0.0, 0.0);
        table.emplace_back(1.0, 0.0);
        const double x_max = std::max(2.0, Phi.phi_inv(1e6 + Phi.phi(1.0)));
        const int steps = 48;
        for (int i = 1; i <= steps; ++i) {
            const double x = std::exp(std::log(x_max) * i / steps);
            if (x <= 1.0) continue;
            table.emplace_back(x, derived.f(x));
        }
        spec.f_table = std::move(table);
    }

    // fundamental-function samples of the constructed risk measure
    FundamentalFunction phi_risk = risk_fundamental(derived);
    std::string fsamples = "[";
    const int npts = 64;
    for (int i = 0; i <= npts; ++i) {
        const double t = std::exp(std::log(1e-9) * (1.0 - double(i) / npts));
        if (i) fsamples += ", ";
        fsamples += "[" + jnum(t) + ", " + jnum(phi_risk(t)) + "]";
    }
    fsamples += "]";

    ReferenceDistribution ref_copy = ref;
    FundamentalFunction phi_psi = FundamentalFunction::from_function(
        [ref_copy](double t) { return ref_copy(t) * t; }, false, "E*t");
    const bool krein = krein_condition(phi_psi);
    std::optional<bool> coincide = marcinkiewicz_coincidence(Phi);

    std::string out = "{\"reference\": \"" + ref.name() + "\"";
    out += ", \"risk_spec\": " + spec.serialize();
    out += ", \"fundamental\": " + fsamples;
    out += ", \"krein\": " + jbool(krein);
    out += ", \"coincidence\": " + (coincide ? jbool(*coincide) : std::string("null"));
    out += ", \"check\": \"";
    out += (check == ReferenceCheck::ok ? "ok" : "needs_majorant");
    out += "\"}";
    write_output(out, out_path);
    return 0;
}

int cmd_compare(const std::string& input, const RiskFlags& flags) {
    RiskSpec spec = resolve_spec(flags);
    EmpiricalDistribution d = read_samples(input);
    EmpiricalDistribution da = d.transformed([](double x) { return std::abs(x); });
    FundamentalFunction phi = risk_fundamental(spec.resolve());

    const double m = marcinkiewicz_norm(da, phi);
    const double o = orlicz_norm_for_fundamental(da, phi);
    const double l = lorentz_norm(da, phi);
    const double tm = tm_risk(da, phi);
    const bool ok = m <= o + 1e-9 && o <= l + 1e-9 && m <= tm + 1e-9 && tm <= l + 1e-9;

    std::string out = "{\"marcinkiewicz\": " + jnum(m);
    out += ", \"orlicz\": " + jnum(o);
    out += ", \"lorentz\": " + jnum(l);
    out += ", \"tm\": " + jnum(tm);
    out += ", \"sandwich_ok\": " + jbool(ok) + "}";
    std::cout << out << "\n";
    return 0;
}

int cmd_deviation(const std::string& input, const std::string& reference,
                  const std::string& xs_csv, double grid_min, double grid_max,
                  int grid_points) {
    ReferenceDistribution ref = parse_reference(reference);
    EmpiricalDistribution d = read_samples(input);
    YoungFunction Psi = young_from_envelope(ref, EnvelopeSide::primal);

    std::vector<double> grid;
    if (!xs_csv.empty()) {
        std::stringstream ss(xs_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::strtod(tok.c_str(), nullptr));
    } else {
        if (!(grid_points >= 1) || !(grid_max > grid_min))
            throw std::invalid_argument("deviation: need --xs or a valid grid range");
        for (int i = 0; i < grid_points; ++i)
            grid.push_back(grid_min +
                           (grid_max - grid_min) * i / std::max(1, grid_points - 1));
    }

    EmpiricalDistribution da = d.transformed([](double x) { return std::abs(x); });
    const double norm = luxemburg_norm(da, Psi);
    auto rows = verify_deviation(d, Psi, grid);
    std::string out = "{\"reference\": \"" + ref.name() + "\"";
    out += ", \"luxemburg_norm\": " + jnum(norm);
    out += ", \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ", ";
        out += "{\"x\": " + jnum(rows[i].x);
        out += ", \"survival\": " + jnum(rows[i].survival);
        out += ", \"bound\": " + jnum(rows[i].bound);
        out += ", \"pass\": " + jbool(rows[i].pass) + "}";
    }
    out += "]}";
    std::cout << out << "\n";
    return 0;
}

int cmd_train(const std::string& features_path, const std::string& config_path,
              const std::string& out_params, const std::string& out_history) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }

    TrainConfig cfg;
    if (!j.is_object() || !j.contains("risk"))
        throw std::invalid_argument("config: object with a 'risk' entry required");
    for (const auto& [key, value] : j.items()) {
        if (key == "risk") cfg.risk = RiskSpec::parse(value.dump());
        else if (key == "loss") {
            const std::string l = value.get<std::string>();
            if (l == "squared") cfg.loss = LossKind::squared;
            else if (l == "absolute") cfg.loss = LossKind::absolute;
            else if (l == "logistic") cfg.loss = LossKind::logistic;
            else throw std::invalid_argument("config: unknown loss '" + l + "'");
        } else if (key == "step_size") cfg.step_size = value.get<double>();
        else if (key == "max_epochs") cfg.max_epochs = value.get<int>();
        else if (key == "tolerance") cfg.tolerance = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    Csv csv = read_csv(features_path);
    auto ycol = csv.column("y");
    if (!ycol) throw InputError(features_path + ":1: required column 'y' not found");
    auto wcol = csv.column("w");
    Dataset data;
    data.n = csv.rows.size();
    for (std::size_t j2 = 0; j2 < csv.header.size(); ++j2)
        if (j2 != *ycol && (!wcol || j2 != *wcol)) ++data.dim;
    for (const auto& row : csv.rows) {
        for (std::size_t j2 = 0; j2 < csv.header.size(); ++j2) {
            if (j2 == *ycol || (wcol && j2 == *wcol)) continue;
            data.features.push_back(row[j2]);
        }
        data.targets.push_back(row[*ycol]);
        if (wcol) data.weights.push_back(row[*wcol]);
    }

    TrainResult res = train(data, cfg);

    std::string pj = "{\"params\": [";
    for (std::size_t i = 0; i < res.params.size(); ++i) {
        if (i) pj += ", ";
        pj += jnum(res.params[i]);
    }
    pj += "], \"epochs\": " + std::to_string(res.epochs);
    pj += ", \"final_objective\": " + jnum(res.history.back());
    pj += ", \"seed\": " + std::to_string(cfg.seed) + "}";
    write_output(pj, out_params);

    std::string hist = "epoch,objective\n";
    for (std::size_t i = 0; i < res.history.size(); ++i)
        hist += std::to_string(i) + "," + jnum(res.history[i]) + "\n";
    if (out_history.empty()) std::cout << hist;
    else {
        std::ofstream hout(out_history);
        if (!hout) throw InputError("cannot write '" + out_history + "'");
        hout << hist;
    }
    return 0;
}

int cmd_plotdata(const std::string& families_csv, double epsilon,
                 const std::string& kind, int points, const std::string& out_path) {
    std::vector<std::string> names;
    std::vector<FundamentalFunction> phis;
    std::stringstream ss(families_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "llogl") {
            phis.push_back(FundamentalFunction::from_function(
                [](double t) { return t + t * std::log(1.0 / t); }, true, "llogl"));
            names.push_back(tok);
            continue;
        }
        if (tok == "lexp") {
            phis.push_back(FundamentalFunction::from_function(
                [](double t) { return 1.0 / (1.0 - std::log(t)); }, false, "lexp"));
            names.push_back(tok);
            continue;
        }
        RiskSpec spec;
        spec.epsilon = epsilon;
        if (tok.rfind("cvar:", 0) == 0) {
            spec.family = "cvar";
            spec.alpha = std::strtod(tok.c_str() + 5, nullptr);
        } else if (tok.rfind("power:", 0) == 0) {
            spec.family = "power";
            spec.p = std::strtod(tok.c_str() + 6, nullptr);
        } else {
            spec.family = tok;
        }
        DivergenceSpec resolved = RiskSpec::parse(spec.serialize()).resolve();
        phis.push_back(kind == "regret" ? regret_fundamental(resolved)
                                        : risk_fundamental(resolved));
        names.push_back(tok);
    }
    if (phis.empty()) throw std::invalid_argument("plotdata: no families given");

    std::string out = "t";
    for (const std::string& n : names) out += "," + n;
    out += "\n";
    for (int i = 1; i <= points; ++i) {
        const double t = static_cast<double>(i) / points;
        out += jnum(t);
        for (const auto& phi : phis) out += "," + jnum(phi(t));
        out += "\n";
    }
    if (out_path.empty()) std::cout << out;
    else {
        std::ofstream f(out_path);
        if (!f) throw InputError("cannot write '" + out_path + "'");
        f << out;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail-sensitive risk measures on empirical distributions"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a risk measure on samples");
    RiskFlags eval_flags;
    std::string eval_input;
    add_risk_flags(eval, eval_flags);
    eval->add_option("input", eval_input, "CSV with column x (and optional w)")->required();

    // construct
    auto* construct =
        app.add_subcommand("construct", "derive a risk spec from a reference distribution");
    std::string construct_ref, construct_out;
    construct->add_option("--reference", construct_ref,
                          "exponential | pareto:P | JSON table file")->required();
    construct->add_option("--out", construct_out, "output file (stdout if omitted)");

    // compare
    auto* compare = app.add_subcommand(
        "compare", "Marcinkiewicz/Orlicz/Lorentz/TM values sharing one fundamental function");
    RiskFlags compare_flags;
    std::string compare_input;
    add_risk_flags(compare, compare_flags);
    compare->add_option("input", compare_input, "CSV with column x")->required();

    // deviation
    auto* deviation = app.add_subcommand("deviation", "verify an Orlicz deviation inequality");
    std::string dev_input, dev_ref, dev_xs;
    double dev_min = 0.0, dev_max = 0.0;
    int dev_points = 0;
    deviation->add_option("--reference", dev_ref, "exponential | pareto:P | file")->required();
    deviation->add_option("--xs", dev_xs, "comma-separated thresholds");
    deviation->add_option("--grid-min", dev_min, "grid start");
    deviation->add_option("--grid-max", dev_max, "grid end");
    deviation->add_option("--grid-points", dev_points, "grid size");
    deviation->add_option("input", dev_input, "CSV with column x")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "risk-averse linear model training");
    std::string train_features, train_config, train_params_out, train_history_out;
    train_cmd->add_option("--config", train_config, "train config JSON")->required();
    train_cmd->add_option("--out-params", train_params_out, "params JSON output");
    train_cmd->add_option("--out-history", train_history_out, "history CSV output");
    train_cmd->add_option("features", train_features, "CSV with target column y")->required();

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "fundamental-function curves as CSV");
    std::string plot_families, plot_kind = "risk", plot_out;
    double plot_eps = 1.0;
    int plot_points = 256;
    plot->add_option("--families", plot_families,
                     "comma list: kl,chi2,cvar:A,power:P,expectation,llogl,lexp")->required();
    plot->add_option("--epsilon", plot_eps, "risk-aversion level");
    plot->add_option("--kind", plot_kind, "risk|regret");
    plot->add_option("--points", plot_points, "rows in (0,1]");
    plot->add_option("--out", plot_out, "output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (*eval) return cmd_eval(eval_input, eval_flags);
        if (*construct) return cmd_construct(construct_ref, construct_out);
        if (*compare) return cmd_compare(compare_input, compare_flags);
        if (*deviation)
            return cmd_deviation(dev_input, dev_ref, dev_xs, dev_min, dev_max, dev_points);
        if (*train_cmd)
            return cmd_train(train_features, train_config, train_params_out, train_history_out);
        if (*plot) return cmd_plotdata(plot_families, plot_eps, plot_kind, plot_points, plot_out);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
