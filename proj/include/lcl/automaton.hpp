#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcl/problem.hpp"

namespace lcl {

// M_Pi over a restriction: states are labels (rooted) or ordered label pairs
// (unrooted); an edge means the two states can appear consecutively along a
// downward path in some correct solution.
struct Automaton {
    bool rooted = true;
    std::vector<LabelId> label_states;                  // rooted states
    std::vector<std::pair<LabelId, LabelId>> pair_states;  // unrooted states
    std::vector<std::vector<int>> adj;                  // over state indices, sorted
    std::string origin;

    int size() const { return static_cast<int>(adj.size()); }
};

Automaton build_automaton_rooted(const RootedProblem& p, const LabelSet& allowed);
Automaton build_automaton_unrooted(const UnrootedProblem& p, const ConfigSet& allowed_configs);

// Partition into maximal SCCs; components ordered by smallest contained state
// index, members ascending.
std::vector<std::vector<int>> strongly_connected_components(const Automaton& a);

// gcd of the lengths of all closed walks inside the component; nullopt when
// the component has no edge (singleton without a self-loop).
std::optional<int> component_period(const Automaton& a, const std::vector<int>& comp);

struct ComponentInfo {
    std::vector<int> states;
    std::optional<int> period;
    bool flexible = false;  // period == 1 and at least one edge
};

std::vector<ComponentInfo> analyze_components(const Automaton& a);

// Vertex sets of the path-flexible SCCs of the automaton of the restriction,
// as label sets. Deterministic order.
std::vector<LabelSet> flex_scc_rooted(const RootedProblem& p, const LabelSet& sigma_sub);

// Flexible SCCs lifted to sets of label pairs. A lifted set D is emitted only
// when its pair-state preimage {(x,y) : {x,y} in D} is exactly a flexible SCC.
std::vector<PairSet> flex_scc_unrooted(const UnrootedProblem& p, const ConfigSet& v_sub);

std::string automaton_to_dot(const Automaton& a, const Problem& p);

}  // namespace lcl
