#include "winmdp/strategy_io.hpp"

#include <json.hpp>
#include <unordered_map>

namespace winmdp {

using nlohmann::json;

std::string export_strategy(const Mdp& m, const MealyStrategy& sigma) {
    json doc;
    doc["memory"] = json::array();
    for (int q = 0; q < sigma.memory_count(); ++q) doc["memory"].push_back(sigma.memory_name(q));

    json init = json::object();
    const auto& initials = sigma.initials();
    for (int s = 0; s < static_cast<int>(initials.size()); ++s)
        if (initials[s] >= 0) init[m.state_name(s)] = sigma.memory_name(initials[s]);
    doc["initial"] = std::move(init);

    json actions = json::array();
    for (const auto& e : sigma.action_entries())
        actions.push_back({{"state", m.state_name(e.state)},
                           {"memory", sigma.memory_name(e.memory)},
                           {"action", m.action_name(e.action)}});
    doc["actions"] = std::move(actions);

    json updates = json::array();
    for (const auto& e : sigma.update_entries())
        updates.push_back({{"action", m.action_name(e.action)},
                           {"state", m.state_name(e.state)},
                           {"memory", sigma.memory_name(e.memory)},
                           {"to", sigma.memory_name(e.to)}});
    doc["updates"] = std::move(updates);
    return doc.dump(2);
}

MealyStrategy import_strategy(const Mdp& m, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw StrategyFormatError(std::string("strategy document is not valid json: ") +
                                  e.what());
    }
    auto need = [&](const char* key) -> const json& {
        if (!doc.contains(key))
            throw StrategyFormatError(std::string("missing '") + key + "' section");
        return doc[key];
    };

    std::unordered_map<std::string, int> state_ids, action_ids, memory_ids;
    for (int s = 0; s < m.state_count(); ++s) state_ids[m.state_name(s)] = s;
    for (int a = 0; a < m.action_count(); ++a) action_ids[m.action_name(a)] = a;

    auto lookup = [](const std::unordered_map<std::string, int>& ids, const json& v,
                     const char* what) {
        if (!v.is_string()) throw StrategyFormatError(std::string(what) + " must be a string");
        auto it = ids.find(v.get<std::string>());
        if (it == ids.end())
            throw StrategyFormatError(std::string("unknown ") + what + " '" +
                                      v.get<std::string>() + "'");
        return it->second;
    };

    MealyStrategy sigma;
    for (const auto& name : need("memory")) {
        if (!name.is_string()) throw StrategyFormatError("memory cell names must be strings");
        auto [it, fresh] = memory_ids.emplace(name.get<std::string>(), sigma.memory_count());
        if (!fresh)
            throw StrategyFormatError("duplicate memory cell '" + name.get<std::string>() + "'");
        sigma.add_memory(name.get<std::string>());
    }
    for (const auto& [state, mem] : need("initial").items())
        sigma.set_initial(lookup(state_ids, json(state), "state"),
                          lookup(memory_ids, mem, "memory cell"));
    for (const auto& row : need("actions"))
        sigma.set_action(lookup(state_ids, row.at("state"), "state"),
                         lookup(memory_ids, row.at("memory"), "memory cell"),
                         lookup(action_ids, row.at("action"), "action"));
    for (const auto& row : need("updates"))
        sigma.set_update(lookup(action_ids, row.at("action"), "action"),
                         lookup(state_ids, row.at("state"), "state"),
                         lookup(memory_ids, row.at("memory"), "memory cell"),
                         lookup(memory_ids, row.at("to"), "memory cell"));
    return sigma;
}

}  // namespace winmdp
