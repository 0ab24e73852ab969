#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace winmdp {

class PartialStrategy : public std::runtime_error {
public:
    explicit PartialStrategy(const std::string& what) : std::runtime_error(what) {}
};

// Pure finite-memory strategy: finite memory set Q, per-state initial memory,
// action choice from (state, memory) and memory update from (played action,
// entered state, memory). Tables are sparse; queries off the table throw
// PartialStrategy, so evaluation only succeeds on strategies that are total
// over their reachable product.
class MealyStrategy {
public:
    int memory_count() const { return static_cast<int>(memory_names_.size()); }
    const std::string& memory_name(int q) const { return memory_names_[q]; }

    int initial_memory(int s) const;
    int next_action(int s, int q) const;
    int update(int a, int t, int q) const;

    bool has_initial(int s) const;
    bool has_action(int s, int q) const;
    bool has_update(int a, int t, int q) const;

    int add_memory(const std::string& name);
    void set_initial(int s, int q);
    void set_action(int s, int q, int a);
    void set_update(int a, int t, int q, int to);

    // One-memory strategy from a per-state action table (every entry >= 0).
    static MealyStrategy memoryless(const std::vector<int>& action_of_state);

    struct ActionEntry {
        int state, memory, action;
    };
    struct UpdateEntry {
        int action, state, memory, to;
    };
    std::vector<ActionEntry> action_entries() const;   // sorted
    std::vector<UpdateEntry> update_entries() const;   // sorted
    const std::vector<int>& initials() const { return init_; }

private:
    static uint64_t akey(int s, int q) {
        return (static_cast<uint64_t>(q) << 24) | static_cast<uint64_t>(s);
    }
    static uint64_t ukey(int a, int t, int q) {
        return (static_cast<uint64_t>(q) << 40) | (static_cast<uint64_t>(a) << 24) |
               static_cast<uint64_t>(t);
    }

    std::vector<std::string> memory_names_;
    std::vector<int> init_;  // -1 undefined
    std::unordered_map<uint64_t, int> action_;
    std::unordered_map<uint64_t, int> update_;
};

}  // namespace winmdp
