#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "winmdp/cli.hpp"
#include "winmdp/mealy.hpp"
#include "winmdp/model.hpp"
#include "winmdp/oracle.hpp"
#include "winmdp/parser.hpp"
#include "winmdp/result.hpp"
#include "winmdp/solver.hpp"
#include "winmdp/strategy_io.hpp"

namespace py = pybind11;

namespace {

using winmdp::LabelKind;
using winmdp::Mdp;
using winmdp::MealyStrategy;
using winmdp::Variant;
using winmdp::WindowSpec;

WindowSpec make_spec(const Mdp& m, const std::string& objective, std::optional<int> lambda) {
    std::optional<Variant> variant;
    LabelKind kind = LabelKind::MeanPayoff;
    auto dash = objective.find('-');
    if (dash != std::string::npos) {
        std::string v = objective.substr(0, dash), k = objective.substr(dash + 1);
        if (v == "dfw") variant = Variant::DFW;
        if (v == "fw") variant = Variant::FW;
        if (v == "bw") variant = Variant::BW;
        if (k == "par")
            kind = LabelKind::Parity;
        else if (k != "mp")
            variant.reset();
    }
    if (!variant)
        throw std::invalid_argument("objective must be one of {dfw,fw,bw}-{mp,par}, got '" +
                                    objective + "'");
    if (kind != m.kind())
        throw std::invalid_argument("objective expects a " + winmdp::to_string(kind) +
                                    " labeling but the model is " + winmdp::to_string(m.kind()));
    WindowSpec spec;
    spec.variant = *variant;
    if (spec.variant == Variant::BW) {
        if (lambda) throw std::invalid_argument("bw objectives take no window size");
    } else {
        if (!lambda || *lambda < 1)
            throw std::invalid_argument("fixed window objectives need a window size >= 1");
        spec.lambda = *lambda;
    }
    return spec;
}

int state_of(const Mdp& m, const std::string& name) {
    int s = m.state_index(name);
    if (s < 0) throw std::invalid_argument("unknown state '" + name + "'");
    return s;
}

MealyStrategy strategy_of(const Mdp& m, const std::optional<std::string>& text) {
    if (text) return winmdp::import_strategy(m, *text);
    std::vector<int> pick(m.state_count());
    for (int s = 0; s < m.state_count(); ++s) pick[s] = m.enabled(s).front();
    return MealyStrategy::memoryless(pick);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "exact window objective checking on finite MDPs";

    py::register_exception<winmdp::ModelError>(mod, "ModelError", PyExc_ValueError);
    py::register_exception<winmdp::StrategyFormatError>(mod, "StrategyFormatError",
                                                        PyExc_ValueError);
    py::register_exception<winmdp::PartialStrategy>(mod, "PartialStrategy", PyExc_ValueError);
    py::register_exception<winmdp::OracleTooLarge>(mod, "OracleTooLarge", PyExc_RuntimeError);

    mod.def(
        "model_info",
        [](const std::string& text) {
            return winmdp::model_document(winmdp::parse_model(text)).dump();
        },
        py::arg("model"));

    mod.def(
        "canonical_model",
        [](const std::string& text) { return winmdp::print_model(winmdp::parse_model(text)); },
        py::arg("model"));

    mod.def(
        "solve",
        [](const std::string& text, const std::string& objective, std::optional<int> lambda,
           std::optional<long long> cap) {
            Mdp m = winmdp::parse_model(text);
            WindowSpec spec = make_spec(m, objective, lambda);
            winmdp::Verdict v = winmdp::solve(m, spec, cap);
            nlohmann::json doc = winmdp::verdict_document(m, v);
            doc["strategy"] = nlohmann::json::parse(winmdp::export_strategy(m, v.strategy));
            return doc.dump();
        },
        py::arg("model"), py::arg("objective"), py::arg("window") = std::nullopt,
        py::arg("cap") = std::nullopt);

    mod.def(
        "evaluate_strategy",
        [](const std::string& text, const std::string& objective, std::optional<int> lambda,
           const std::string& state, std::optional<std::string> strategy) {
            Mdp m = winmdp::parse_model(text);
            WindowSpec spec = make_spec(m, objective, lambda);
            MealyStrategy sigma = strategy_of(m, strategy);
            return winmdp::rat_str(
                winmdp::eval_strategy_exact(m, sigma, spec, state_of(m, state)));
        },
        py::arg("model"), py::arg("objective"), py::arg("window"), py::arg("state"),
        py::arg("strategy") = std::nullopt);

    mod.def(
        "brute_force",
        [](const std::string& text, const std::string& objective, std::optional<int> lambda,
           long long guard) {
            Mdp m = winmdp::parse_model(text);
            WindowSpec spec = make_spec(m, objective, lambda);
            std::vector<winmdp::Rational> values = winmdp::brute_force_value(m, spec, guard);
            nlohmann::json doc = nlohmann::json::object();
            for (int s = 0; s < m.state_count(); ++s)
                doc[m.state_name(s)] = winmdp::rat_str(values[s]);
            return doc.dump();
        },
        py::arg("model"), py::arg("objective"), py::arg("window") = std::nullopt,
        py::arg("guard") = 10000);

    mod.def(
        "monte_carlo",
        [](const std::string& text, const std::string& objective, std::optional<int> lambda,
           const std::string& state, long long samples, int horizon, uint64_t seed,
           std::optional<std::string> strategy) {
            Mdp m = winmdp::parse_model(text);
            WindowSpec spec = make_spec(m, objective, lambda);
            MealyStrategy sigma = strategy_of(m, strategy);
            return winmdp::estimate_document(winmdp::monte_carlo(m, sigma, spec,
                                                                 state_of(m, state), samples,
                                                                 horizon, seed))
                .dump();
        },
        py::arg("model"), py::arg("objective"), py::arg("window"), py::arg("state"),
        py::arg("samples") = 10000, py::arg("horizon") = 100, py::arg("seed") = 1,
        py::arg("strategy") = std::nullopt);

    mod.def(
        "cli",
        [](const std::vector<std::string>& args) {
            winmdp::CliResult r = winmdp::run_cli(args);
            return py::make_tuple(r.exit_code, r.out, r.err);
        },
        py::arg("args"));
}
