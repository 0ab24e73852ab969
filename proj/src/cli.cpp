#include "winmdp/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <sstream>

#include "winmdp/classification.hpp"
#include "winmdp/graph.hpp"
#include "winmdp/oracle.hpp"
#include "winmdp/parser.hpp"
#include "winmdp/result.hpp"
#include "winmdp/solver.hpp"
#include "winmdp/strategy_io.hpp"

namespace winmdp {

namespace {

using nlohmann::json;

struct Usage : std::runtime_error {
    explicit Usage(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Usage("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Objective {
    Variant variant;
    LabelKind kind;
};

Objective parse_objective(const std::string& text) {
    auto dash = text.find('-');
    if (dash != std::string::npos) {
        std::string v = text.substr(0, dash), k = text.substr(dash + 1);
        std::optional<Variant> variant;
        if (v == "dfw") variant = Variant::DFW;
        if (v == "fw") variant = Variant::FW;
        if (v == "bw") variant = Variant::BW;
        if (variant && (k == "mp" || k == "par"))
            return {*variant, k == "mp" ? LabelKind::MeanPayoff : LabelKind::Parity};
    }
    throw Usage("objective must be one of {dfw,fw,bw}-{mp,par}, got '" + text + "'");
}

// Shared validation: the model's labeling must match the objective, fixed
// variants need a window size, bw must not get one.
WindowSpec make_spec(const Mdp& m, const Objective& objective, int lambda, std::ostream& err) {
    if (objective.kind != m.kind())
        throw Usage("objective expects a " + to_string(objective.kind) +
                    " labeling but the model is " + to_string(m.kind()));
    WindowSpec spec;
    spec.variant = objective.variant;
    if (objective.variant == Variant::BW) {
        if (lambda != 0) throw Usage("bw objectives take no --lambda");
        return spec;
    }
    if (lambda < 1) throw Usage("--lambda must be a positive window size");
    if (lambda > 10 * m.state_count())
        err << "warning: lambda " << lambda << " exceeds 10x the state count; "
            << "this is usually a mistake\n";
    spec.lambda = lambda;
    return spec;
}

int state_index_checked(const Mdp& m, const std::string& name) {
    int s = m.state_index(name);
    if (s < 0) throw Usage("unknown state '" + name + "'");
    return s;
}

long long elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - since)
        .count();
}

int cmd_check(const std::string& file, const std::string& objective_text, int lambda,
              const std::string& state_name, const std::string& threshold_text, long long cap,
              const std::string& export_path, std::ostream& out, std::ostream& err) {
    Mdp m = parse_model(read_file(file));
    for (const auto& w : m.warnings()) err << "warning: " << w << "\n";
    Objective objective = parse_objective(objective_text);
    WindowSpec spec = make_spec(m, objective, lambda, err);
    int state = state_index_checked(m, state_name);

    std::optional<Rational> threshold;
    if (!threshold_text.empty()) {
        threshold = parse_rational(threshold_text);
        if (!threshold || *threshold < 0 || *threshold > 1)
            throw Usage("threshold must be a probability, got '" + threshold_text + "'");
    }

    auto t0 = std::chrono::steady_clock::now();
    Verdict v = solve(m, spec, cap > 0 ? std::optional<long long>(cap) : std::nullopt);
    json doc;
    doc["model"] = model_document(m);
    doc["result"] = verdict_document(m, v);
    doc["query"] = {{"state", state_name}, {"value", rat_str(v.values[state])}};
    if (threshold) doc["query"]["threshold"] = rat_str(*threshold);

    int code = 0;
    if (threshold) {
        Decision d = decide_threshold(v, state, *threshold);
        doc["query"]["decision"] = to_string(d);
        code = d == Decision::Yes ? 0 : d == Decision::No ? 1 : 3;
    }
    doc["timing_ms"] = elapsed_ms(t0);

    if (!export_path.empty()) {
        std::ofstream strategy_out(export_path, std::ios::binary);
        if (!strategy_out) throw Usage("cannot write '" + export_path + "'");
        strategy_out << export_strategy(m, v.strategy);
        doc["strategy_file"] = export_path;
    }
    out << doc.dump(2) << "\n";
    return code;
}

int cmd_classify(const std::string& file, const std::string& kind_text, int lambda, bool bounded,
                 long long cap, std::ostream& out, std::ostream& err) {
    Mdp m = parse_model(read_file(file));
    for (const auto& w : m.warnings()) err << "warning: " << w << "\n";
    LabelKind kind;
    if (kind_text == "mp")
        kind = LabelKind::MeanPayoff;
    else if (kind_text == "par")
        kind = LabelKind::Parity;
    else
        throw Usage("--kind must be mp or par");
    if (kind != m.kind()) throw Usage("--kind does not match the model labeling");
    if (bounded == (lambda != 0)) throw Usage("classify needs exactly one of --lambda, --bounded");
    if (!bounded && lambda < 1) throw Usage("--lambda must be a positive window size");

    auto t0 = std::chrono::steady_clock::now();
    MecDecomposition dec = mec_decomposition(m);
    json rows = json::array();
    for (const auto& mec : dec.mecs) {
        Mdp sub = restrict(m, mec.states, mec.actions);
        EcStatus status = bounded
                              ? classify_bounded(sub, kind,
                                                 cap > 0 ? std::optional<long long>(cap)
                                                         : std::nullopt)
                              : classify_fixed(sub, kind, lambda);
        json row;
        json states = json::array();
        for (int s : mec.states) states.push_back(m.state_name(s));
        row["states"] = std::move(states);
        row["class"] = ec_class_name(status.cls);
        if (status.lambda_star >= 0) row["lambda_star"] = status.lambda_star;
        if (status.cap >= 0) row["cap"] = status.cap;
        if (status.cls == EcClass::Good) {
            json region = json::array();
            for (size_t i = 0; i < mec.states.size(); ++i)
                if (status.region[i]) region.push_back(m.state_name(mec.states[i]));
            row["safe_region"] = std::move(region);
        }
        rows.push_back(std::move(row));
    }
    json doc;
    doc["model"] = model_document(m);
    doc["kind"] = kind_text;
    if (!bounded) doc["lambda"] = lambda;
    doc["mecs"] = std::move(rows);
    doc["timing_ms"] = elapsed_ms(t0);
    out << doc.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& file, const std::string& objective_text, int lambda,
                 const std::string& state_name, long long samples, int horizon, uint64_t seed,
                 const std::string& strategy_path, std::ostream& out, std::ostream& err) {
    Mdp m = parse_model(read_file(file));
    for (const auto& w : m.warnings()) err << "warning: " << w << "\n";
    Objective objective = parse_objective(objective_text);
    WindowSpec spec = make_spec(m, objective, lambda, err);
    int state = state_index_checked(m, state_name);

    MealyStrategy sigma;
    std::string source;
    if (!strategy_path.empty()) {
        sigma = import_strategy(m, read_file(strategy_path));
        source = strategy_path;
    } else {
        std::vector<int> first(m.state_count());
        for (int s = 0; s < m.state_count(); ++s) first[s] = m.enabled(s)[0];
        sigma = MealyStrategy::memoryless(first);
        source = "default (memoryless, smallest enabled action)";
    }

    auto t0 = std::chrono::steady_clock::now();
    Estimate est = monte_carlo(m, sigma, spec, state, samples, horizon, seed);
    json doc;
    doc["model"] = model_document(m);
    doc["query"] = {{"objective", objective_text}, {"state", state_name}, {"seed", seed}};
    if (spec.lambda) doc["query"]["lambda"] = *spec.lambda;
    doc["strategy"] = source;
    doc["result"] = estimate_document(est);
    doc["timing_ms"] = elapsed_ms(t0);
    out << doc.dump(2) << "\n";
    return 0;
}

int cmd_oracle(const std::string& file, const std::string& objective_text, int lambda,
               const std::string& strategy_path, long long guard, std::ostream& out,
               std::ostream& err) {
    Mdp m = parse_model(read_file(file));
    for (const auto& w : m.warnings()) err << "warning: " << w << "\n";
    Objective objective = parse_objective(objective_text);
    WindowSpec spec = make_spec(m, objective, lambda, err);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<Rational> values;
    std::string method;
    if (!strategy_path.empty()) {
        MealyStrategy sigma = import_strategy(m, read_file(strategy_path));
        values = eval_strategy_exact_all(m, sigma, spec);
        method = "exact product evaluation of the given strategy";
    } else {
        values = brute_force_value(m, spec, guard > 0 ? guard : 10000);
        method = "exhaustive enumeration of memoryless unfolding strategies";
    }
    json doc;
    doc["model"] = model_document(m);
    doc["query"] = {{"objective", objective_text}};
    if (spec.lambda) doc["query"]["lambda"] = *spec.lambda;
    doc["method"] = method;
    json vals = json::object();
    for (int s = 0; s < m.state_count(); ++s) vals[m.state_name(s)] = rat_str(values[s]);
    doc["values"] = std::move(vals);
    doc["timing_ms"] = elapsed_ms(t0);
    out << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CLI::App app{"exact window objective checker for MDPs"};
    app.require_subcommand(1);

    std::string file, objective, state, threshold, strategy_path, export_path, kind;
    int lambda = 0, horizon = 100;
    long long cap = 0, samples = 10000, guard = 10000;
    uint64_t seed = 1;
    bool bounded = false;

    CLI::App* check = app.add_subcommand("check", "solve an objective and test a threshold");
    check->add_option("file", file)->required();
    check->add_option("--objective", objective)->required();
    check->add_option("--lambda", lambda);
    check->add_option("--state", state)->required();
    check->add_option("--threshold", threshold);
    check->add_option("--cap", cap);
    check->add_option("--export-strategy", export_path);

    CLI::App* classify = app.add_subcommand("classify", "classify maximal end components");
    classify->add_option("file", file)->required();
    classify->add_option("--kind", kind)->required();
    classify->add_option("--lambda", lambda);
    classify->add_flag("--bounded", bounded);
    classify->add_option("--cap", cap);

    CLI::App* simulate = app.add_subcommand("simulate", "monte carlo estimation of an objective");
    simulate->add_option("file", file)->required();
    simulate->add_option("--objective", objective)->required();
    simulate->add_option("--lambda", lambda);
    simulate->add_option("--state", state)->required();
    simulate->add_option("--samples", samples);
    simulate->add_option("--horizon", horizon);
    simulate->add_option("--seed", seed);
    simulate->add_option("--strategy", strategy_path);

    CLI::App* oracle = app.add_subcommand("oracle", "independent reference values");
    oracle->add_option("file", file)->required();
    oracle->add_option("--objective", objective)->required();
    oracle->add_option("--lambda", lambda);
    oracle->add_option("--strategy", strategy_path);
    oracle->add_option("--guard", guard);

    std::vector<const char*> argv;
    argv.push_back("winmdp");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return {code == 0 ? 0 : 2, out.str(), err.str()};
    }

    int code = 0;
    try {
        if (check->parsed())
            code = cmd_check(file, objective, lambda, state, threshold, cap, export_path, out,
                             err);
        else if (classify->parsed())
            code = cmd_classify(file, kind, lambda, bounded, cap, out, err);
        else if (simulate->parsed())
            code = cmd_simulate(file, objective, lambda, state, samples, horizon, seed,
                                strategy_path, out, err);
        else if (oracle->parsed())
            code = cmd_oracle(file, objective, lambda, strategy_path, guard, out, err);
    } catch (const Usage& e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    } catch (const StrategyFormatError& e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    } catch (const PartialStrategy& e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    } catch (const OracleTooLarge& e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        code = 2;
    }
    return {code, out.str(), err.str()};
}

}  // namespace winmdp
