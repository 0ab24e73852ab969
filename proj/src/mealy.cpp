#include "winmdp/mealy.hpp"

#include <algorithm>
#include <tuple>

namespace winmdp {

int MealyStrategy::initial_memory(int s) const {
    if (s < 0 || s >= static_cast<int>(init_.size()) || init_[s] < 0)
        throw PartialStrategy("no initial memory for state " + std::to_string(s));
    return init_[s];
}

int MealyStrategy::next_action(int s, int q) const {
    auto it = action_.find(akey(s, q));
    if (it == action_.end())
        throw PartialStrategy("no action for state " + std::to_string(s) + " in memory " +
                              std::to_string(q));
    return it->second;
}

int MealyStrategy::update(int a, int t, int q) const {
    auto it = update_.find(ukey(a, t, q));
    if (it == update_.end())
        throw PartialStrategy("no memory update for action " + std::to_string(a) +
                              " into state " + std::to_string(t) + " from memory " +
                              std::to_string(q));
    return it->second;
}

bool MealyStrategy::has_initial(int s) const {
    return s >= 0 && s < static_cast<int>(init_.size()) && init_[s] >= 0;
}

bool MealyStrategy::has_action(int s, int q) const { return action_.count(akey(s, q)) > 0; }

bool MealyStrategy::has_update(int a, int t, int q) const {
    return update_.count(ukey(a, t, q)) > 0;
}

int MealyStrategy::add_memory(const std::string& name) {
    memory_names_.push_back(name);
    return memory_count() - 1;
}

void MealyStrategy::set_initial(int s, int q) {
    if (static_cast<int>(init_.size()) <= s) init_.resize(s + 1, -1);
    init_[s] = q;
}

void MealyStrategy::set_action(int s, int q, int a) { action_[akey(s, q)] = a; }

void MealyStrategy::set_update(int a, int t, int q, int to) { update_[ukey(a, t, q)] = to; }

MealyStrategy MealyStrategy::memoryless(const std::vector<int>& action_of_state) {
    MealyStrategy out;
    int q = out.add_memory("m0");
    for (int s = 0; s < static_cast<int>(action_of_state.size()); ++s) {
        out.set_initial(s, q);
        out.set_action(s, q, action_of_state[s]);
    }
    // Updates must be total over every (played action, entered state) pair
    // that can occur; with one memory cell every pair maps back to it.
    for (int s = 0; s < static_cast<int>(action_of_state.size()); ++s)
        for (int t = 0; t < static_cast<int>(action_of_state.size()); ++t)
            out.set_update(action_of_state[t], s, q, q);
    return out;
}

std::vector<MealyStrategy::ActionEntry> MealyStrategy::action_entries() const {
    std::vector<ActionEntry> out;
    out.reserve(action_.size());
    for (const auto& [key, a] : action_) {
        int s = static_cast<int>(key & 0xffffff);
        int q = static_cast<int>(key >> 24);
        out.push_back({s, q, a});
    }
    std::sort(out.begin(), out.end(), [](const ActionEntry& x, const ActionEntry& y) {
        return std::tie(x.state, x.memory) < std::tie(y.state, y.memory);
    });
    return out;
}

std::vector<MealyStrategy::UpdateEntry> MealyStrategy::update_entries() const {
    std::vector<UpdateEntry> out;
    out.reserve(update_.size());
    for (const auto& [key, to] : update_) {
        int t = static_cast<int>(key & 0xffffff);
        int a = static_cast<int>((key >> 24) & 0xffff);
        int q = static_cast<int>(key >> 40);
        out.push_back({a, t, q, to});
    }
    std::sort(out.begin(), out.end(), [](const UpdateEntry& x, const UpdateEntry& y) {
        return std::tie(x.action, x.state, x.memory) < std::tie(y.action, y.state, y.memory);
    });
    return out;
}

}  // namespace winmdp
