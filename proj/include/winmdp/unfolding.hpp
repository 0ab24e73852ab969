#pragma once

#include <array>
#include <vector>

#include "winmdp/mealy.hpp"
#include "winmdp/model.hpp"

namespace winmdp {

// Window unfolding of an MDP. Configs track the original state, the number of
// steps the oldest still-open window has been open, and the running window
// status: the accumulated weight (mean-payoff, in [-lambda*W, 0]) or the
// running minimal priority (parity, in [0, d]).
//
// Mean-payoff: config (s, l, z), l in 0..lambda. Taking action a with weight w
// to t moves to (t, l+1, z+w) while z+w < 0 and l < lambda, and resets to
// (t, 0, 0) when z+w >= 0 (window closed) or from l = lambda (window failed).
// Bad configs are exactly those with l = lambda (and then z < 0).
//
// Parity: config (s, l, c), l in 0..lambda-1, c = min priority seen by the
// open window. With c even the window is closed and the step resets to
// (t, 0, p(t)); with c odd and l < lambda-1 it moves to (t, l+1, min(c,p(t)));
// from l = lambda-1 with c odd (bad) it resets to (t, 0, p(t)).
struct UnfoldedMdp {
    Mdp mdp;  // configs as states, same action alphabet as the original
    LabelKind kind = LabelKind::MeanPayoff;
    int lambda = 0;
    std::vector<bool> bad;
    std::vector<int> initial;                    // original state -> config
    std::vector<int> back;                       // config -> original state
    std::vector<std::array<long long, 2>> tag;   // config -> (l, z or c)
};

// Builds the reachable part of the unfolding, breadth first from the initial
// configs of states 0,1,... so config indexing is deterministic. `kind` must
// match m.kind(); lambda must be >= 1.
UnfoldedMdp unfold(const Mdp& m, int lambda, LabelKind kind);

// Turns a memoryless strategy on the unfolding (one action per config, total)
// into a Mealy strategy on the original MDP whose memory is the config space.
MealyStrategy lift_strategy(const UnfoldedMdp& u, const std::vector<int>& config_action);

// Copy of m where every flagged state keeps only its smallest enabled action,
// rewired into a self loop. Used to freeze losing sinks during reachability.
Mdp make_absorbing(const Mdp& m, const std::vector<bool>& states);

}  // namespace winmdp
