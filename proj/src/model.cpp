#include "winmdp/model.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

namespace winmdp {

std::string to_string(LabelKind kind) {
    return kind == LabelKind::MeanPayoff ? "mp" : "par";
}

std::optional<Rational> parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view part) -> std::optional<mpz_class> {
        if (part.empty()) return std::nullopt;
        size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) return std::nullopt;
        for (size_t k = i; k < part.size(); ++k)
            if (part[k] < '0' || part[k] > '9') return std::nullopt;
        return mpz_class(std::string(part), 10);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        auto num = parse_int(text);
        if (!num) return std::nullopt;
        return Rational(*num);
    }
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    Rational q(*num, *den);
    q.canonicalize();
    return q;
}

int Mdp::state_index(const std::string& name) const {
    for (int s = 0; s < state_count(); ++s)
        if (state_names_[s] == name) return s;
    return -1;
}

int Mdp::action_index(const std::string& name) const {
    for (int a = 0; a < action_count(); ++a)
        if (action_names_[a] == name) return a;
    return -1;
}

long long Mdp::max_abs_weight() const {
    long long w = 0;
    for (int s = 0; s < state_count(); ++s)
        for (int a : enabled_[s]) w = std::max(w, std::llabs(weights_[a]));
    return w;
}

int Mdp::max_priority() const {
    int d = 0;
    for (int p : priorities_) d = std::max(d, p);
    return d;
}

bool Mdp::has_action(int s, int a) const {
    return std::binary_search(enabled_[s].begin(), enabled_[s].end(), a);
}

const Distribution& Mdp::dist(int s, int a) const {
    auto it = std::lower_bound(enabled_[s].begin(), enabled_[s].end(), a);
    return dists_[s][it - enabled_[s].begin()];
}

int Mdp::transition_count() const {
    int n = 0;
    for (const auto& row : dists_)
        for (const auto& d : row) n += static_cast<int>(d.support.size());
    return n;
}

MdpBuilder::PendingState* MdpBuilder::find_state(const std::string& name) {
    auto it = state_ids_.find(name);
    return it == state_ids_.end() ? nullptr : &states_[it->second];
}

int MdpBuilder::add_state(const std::string& name, int priority, int line) {
    if (find_state(name))
        throw ModelError(ModelErrorCode::DuplicateState, "duplicate state '" + name + "'",
                         line);
    if (kind_ == LabelKind::Parity && priority < 0)
        throw ModelError(ModelErrorCode::NegativePriority,
                         "state '" + name + "' needs a natural priority", line);
    state_ids_.emplace(name, static_cast<int>(states_.size()));
    states_.push_back({name, priority, line, {}});
    return static_cast<int>(states_.size()) - 1;
}

int MdpBuilder::add_action(const std::string& state, const std::string& action,
                           std::optional<long long> weight, int line) {
    PendingState* st = find_state(state);
    if (!st)
        throw ModelError(ModelErrorCode::UnknownState, "unknown state '" + state + "'", line);
    for (const auto& act : st->actions)
        if (act.name == action)
            throw ModelError(ModelErrorCode::DuplicateAction,
                             "action '" + action + "' declared twice at state '" + state + "'",
                             line);
    if (kind_ == LabelKind::MeanPayoff && !weight)
        throw ModelError(ModelErrorCode::MissingWeight,
                         "action '" + action + "' needs a weight", line);
    if (kind_ == LabelKind::Parity && weight)
        throw ModelError(ModelErrorCode::UnexpectedWeight,
                         "parity models take no action weights", line);
    st->actions.push_back({action, weight, line, {}});
    return static_cast<int>(st->actions.size()) - 1;
}

void MdpBuilder::add_successor(const std::string& state, const std::string& action,
                               const std::string& successor, const Rational& prob, int line) {
    PendingState* st = find_state(state);
    if (st)
        for (auto& act : st->actions) {
            if (act.name != action) continue;
            // gmp comparisons assume canonical form, so normalize on entry
            Rational p = prob;
            p.canonicalize();
            act.successors.emplace_back(successor, std::move(p), line);
            return;
        }
    throw ModelError(ModelErrorCode::UnknownState,
                     "no action '" + action + "' at state '" + state + "'", line);
}

Mdp MdpBuilder::build() && {
    if (states_.empty()) throw ModelError(ModelErrorCode::EmptyModel, "model has no states");

    Mdp m;
    m.kind_ = kind_;
    std::unordered_map<std::string, int> state_ids;
    for (const auto& st : states_) {
        state_ids.emplace(st.name, static_cast<int>(m.state_names_.size()));
        m.state_names_.push_back(st.name);
        m.priorities_.push_back(st.priority);
    }

    // Global action alphabet in first-appearance order. The same name may be
    // reused at different states; a weight conflict makes it a fresh check.
    std::unordered_map<std::string, int> action_ids;
    for (const auto& st : states_) {
        for (const auto& act : st.actions) {
            auto [it, fresh] = action_ids.emplace(act.name, static_cast<int>(m.action_names_.size()));
            if (fresh) {
                m.action_names_.push_back(act.name);
                m.weights_.push_back(act.weight.value_or(0));
            } else if (kind_ == LabelKind::MeanPayoff && m.weights_[it->second] != *act.weight) {
                throw ModelError(ModelErrorCode::DuplicateAction,
                                 "action '" + act.name + "' reused with a different weight",
                                 act.line);
            }
        }
    }

    m.enabled_.resize(m.state_count());
    m.dists_.resize(m.state_count());
    for (const auto& st : states_) {
        int s = state_ids[st.name];
        if (st.actions.empty())
            throw ModelError(ModelErrorCode::Deadlock,
                             "state '" + st.name + "' has no enabled action", st.line);
        // Keep (action index, distribution) sorted by action index.
        std::vector<std::pair<int, Distribution>> row;
        for (const auto& act : st.actions) {
            int a = action_ids[act.name];
            Distribution dist;
            if (act.successors.empty())
                throw ModelError(ModelErrorCode::EmptySupport,
                                 "action '" + act.name + "' at '" + st.name +
                                     "' has empty support",
                                 act.line);
            Rational sum = 0;
            for (const auto& [succ_name, prob, line] : act.successors) {
                auto succ_it = state_ids.find(succ_name);
                if (succ_it == state_ids.end())
                    throw ModelError(ModelErrorCode::UnknownState,
                                     "unknown successor '" + succ_name + "'", line);
                if (prob <= 0)
                    throw ModelError(ModelErrorCode::NonPositiveProbability,
                                     "probability " + rat_str(prob) + " is not positive", line);
                for (const auto& [t, _] : dist.support)
                    if (t == succ_it->second)
                        throw ModelError(ModelErrorCode::DuplicateSuccessor,
                                         "successor '" + succ_name + "' listed twice", line);
                dist.support.emplace_back(succ_it->second, prob);
                sum += prob;
            }
            if (sum != 1)
                throw ModelError(ModelErrorCode::DistributionSum,
                                 "probabilities of action '" + act.name + "' at '" + st.name +
                                     "' sum to " + rat_str(sum),
                                 act.line);
            std::sort(dist.support.begin(), dist.support.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            row.emplace_back(a, std::move(dist));
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [a, dist] : row) {
            m.enabled_[s].push_back(a);
            m.dists_[s].push_back(std::move(dist));
        }
    }

    if (kind_ == LabelKind::Parity && m.max_priority() > m.state_count() + 1)
        m.warnings_.push_back("maximum priority " + std::to_string(m.max_priority()) +
                              " exceeds |S|+1; priorities can be compressed");
    return m;
}

void validate_mdp(const Mdp& m) {
    if (m.state_count() == 0) throw ModelError(ModelErrorCode::EmptyModel, "model has no states");
    for (int s = 0; s < m.state_count(); ++s) {
        if (m.kind() == LabelKind::Parity && m.priority(s) < 0)
            throw ModelError(ModelErrorCode::NegativePriority,
                             "state '" + m.state_name(s) + "' has negative priority");
        if (m.enabled(s).empty())
            throw ModelError(ModelErrorCode::Deadlock,
                             "state '" + m.state_name(s) + "' has no enabled action");
        int prev = -1;
        for (int a : m.enabled(s)) {
            if (a <= prev)
                throw ModelError(ModelErrorCode::DuplicateAction,
                                 "enabled actions of '" + m.state_name(s) + "' not ascending");
            prev = a;
            const auto& dist = m.dist(s, a);
            if (dist.support.empty())
                throw ModelError(ModelErrorCode::EmptySupport,
                                 "empty support at '" + m.state_name(s) + "'");
            Rational sum = 0;
            int prev_t = -1;
            for (const auto& [t, p] : dist.support) {
                if (t <= prev_t)
                    throw ModelError(ModelErrorCode::DuplicateSuccessor,
                                     "support of '" + m.state_name(s) + "' not ascending");
                prev_t = t;
                if (t < 0 || t >= m.state_count())
                    throw ModelError(ModelErrorCode::UnknownState, "successor out of range");
                if (p <= 0)
                    throw ModelError(ModelErrorCode::NonPositiveProbability,
                                     "non-positive probability");
                sum += p;
            }
            if (sum != 1)
                throw ModelError(ModelErrorCode::DistributionSum,
                                 "distribution at '" + m.state_name(s) + "' sums to " +
                                     rat_str(sum));
        }
    }
}

Mdp assemble_mdp(LabelKind kind, std::vector<std::string> state_names,
                 std::vector<int> priorities, std::vector<std::string> action_names,
                 std::vector<long long> weights,
                 std::vector<std::vector<std::pair<int, Distribution>>> rows) {
    Mdp m;
    m.kind_ = kind;
    m.state_names_ = std::move(state_names);
    m.priorities_ = std::move(priorities);
    if (kind == LabelKind::MeanPayoff) m.priorities_.assign(m.state_names_.size(), -1);
    m.action_names_ = std::move(action_names);
    m.weights_ = std::move(weights);
    if (kind == LabelKind::Parity) m.weights_.assign(m.action_names_.size(), 0);
    m.enabled_.resize(m.state_names_.size());
    m.dists_.resize(m.state_names_.size());
    for (size_t s = 0; s < rows.size(); ++s)
        for (auto& [a, dist] : rows[s]) {
            for (auto& [t, p] : dist.support) p.canonicalize();
            m.enabled_[s].push_back(a);
            m.dists_[s].push_back(std::move(dist));
        }
    validate_mdp(m);
    return m;
}

Mdp restrict(const Mdp& m, const std::vector<int>& keep_states,
             const std::vector<std::vector<int>>& keep_actions) {
    std::vector<int> order(keep_states);
    std::vector<size_t> perm(order.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t x, size_t y) { return order[x] < order[y]; });

    std::vector<int> new_index(m.state_count(), -1);
    Mdp out;
    out.kind_ = m.kind();
    out.action_names_ = std::vector<std::string>();
    for (int a = 0; a < m.action_count(); ++a) out.action_names_.push_back(m.action_name(a));
    out.weights_ = std::vector<long long>();
    for (int a = 0; a < m.action_count(); ++a) out.weights_.push_back(m.weight(a));

    for (size_t i : perm) {
        int s = keep_states[i];
        if (new_index[s] != -1)
            throw ModelError(ModelErrorCode::DuplicateState,
                             "state '" + m.state_name(s) + "' kept twice");
        new_index[s] = static_cast<int>(out.state_names_.size());
        out.state_names_.push_back(m.state_name(s));
        out.priorities_.push_back(m.kind() == LabelKind::Parity ? m.priority(s) : -1);
    }

    out.enabled_.resize(out.state_names_.size());
    out.dists_.resize(out.state_names_.size());
    for (size_t i : perm) {
        int s = keep_states[i];
        int ns = new_index[s];
        std::vector<int> actions(keep_actions[i]);
        std::sort(actions.begin(), actions.end());
        for (int a : actions) {
            if (!m.has_action(s, a))
                throw ModelError(ModelErrorCode::UnknownState,
                                 "action '" + m.action_name(a) + "' not enabled at '" +
                                     m.state_name(s) + "'");
            Distribution nd;
            for (const auto& [t, p] : m.dist(s, a).support) {
                if (new_index[t] == -1)
                    throw ModelError(ModelErrorCode::UnknownState,
                                     "restriction drops successor '" + m.state_name(t) +
                                         "' of kept action '" + m.action_name(a) + "'");
                nd.support.emplace_back(new_index[t], p);
            }
            std::sort(nd.support.begin(), nd.support.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            out.enabled_[ns].push_back(a);
            out.dists_[ns].push_back(std::move(nd));
        }
        if (out.enabled_[ns].empty())
            throw ModelError(ModelErrorCode::Deadlock,
                             "restriction leaves '" + m.state_name(s) + "' without actions");
    }
    return out;
}

Mdp restrict_states(const Mdp& m, const std::vector<int>& keep_states) {
    std::vector<bool> keep(m.state_count(), false);
    for (int s : keep_states) keep[s] = true;
    std::vector<std::vector<int>> actions;
    actions.reserve(keep_states.size());
    for (int s : keep_states) {
        std::vector<int> row;
        for (int a : m.enabled(s)) {
            bool inside = true;
            for (const auto& [t, _] : m.dist(s, a).support)
                if (!keep[t]) inside = false;
            if (inside) row.push_back(a);
        }
        actions.push_back(std::move(row));
    }
    return restrict(m, keep_states, actions);
}

}  // namespace winmdp
