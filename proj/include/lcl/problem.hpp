#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lcl {

// Label ids are dense 0..|Sigma|-1 in declaration order.
using LabelId = int;

// Multiset of exactly Delta label ids, sorted non-decreasing (canonical form).
using Config = std::vector<LabelId>;

// Multiset of exactly 2 label ids, sorted.
using PairConfig = std::array<LabelId, 2>;

// Sorted, duplicate-free label id set.
using LabelSet = std::vector<LabelId>;
using ConfigSet = std::vector<Config>;
using PairSet = std::vector<PairConfig>;

struct RootedRule {
    LabelId parent;
    Config children;

    friend bool operator==(const RootedRule&, const RootedRule&) = default;
    friend auto operator<=>(const RootedRule&, const RootedRule&) = default;
};

// Pi = (Delta, Sigma, V): node v with exactly Delta children u_1..u_Delta is
// correct iff (label(v), {label(u_1),..,label(u_Delta)}) is a listed rule.
// Leaves are unconstrained; leaf constraints are not representable.
struct RootedProblem {
    int delta = 1;
    std::vector<std::string> labels;
    std::vector<RootedRule> rules;  // canonical: sorted by (parent, children), deduplicated

    int num_labels() const { return static_cast<int>(labels.size()); }
    LabelSet all_labels() const;
    const std::string& label_name(LabelId id) const { return labels.at(static_cast<size_t>(id)); }
    std::optional<LabelId> find_label(const std::string& name) const;
};

// Pi = (Delta, Sigma, V, E): solutions label half-edges; a degree-Delta node's
// half-edge multiset must be in V, every edge's label pair must be in E.
struct UnrootedProblem {
    int delta = 2;
    std::vector<std::string> labels;
    ConfigSet node_configs;  // canonical: each sorted, list sorted, deduplicated
    PairSet edge_configs;

    int num_labels() const { return static_cast<int>(labels.size()); }
    const std::string& label_name(LabelId id) const { return labels.at(static_cast<size_t>(id)); }
    std::optional<LabelId> find_label(const std::string& name) const;
    bool edge_allowed(LabelId a, LabelId b) const;
};

using Problem = std::variant<RootedProblem, UnrootedProblem>;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseOptions {
    // Duplicate configurations are an error by default; with normalize set
    // they are dropped and reported through `warnings`.
    bool normalize = false;
};

struct ParsedProblem {
    Problem problem;
    std::vector<std::string> warnings;
};

ParsedProblem parse_problem(const std::string& text, const ParseOptions& opts = {});
std::string serialize_problem(const Problem& p);

RootedProblem canonicalize(RootedProblem p);
UnrootedProblem canonicalize(UnrootedProblem p);

// Keeps exactly the rules with parent in `allowed` and all children in
// `allowed`. The label universe is untouched so ids stay comparable across
// restriction levels.
RootedProblem restrict_rooted(const RootedProblem& p, const LabelSet& allowed);

// Keeps node configuration C iff every 2-element sub-multiset of C is in
// `allowed_pairs`. Edge constraints are unchanged.
UnrootedProblem restrict_unrooted(const UnrootedProblem& p, const PairSet& allowed_pairs);

// --- multiset / ordered-set helpers used across the analysis modules ---

inline PairConfig make_pair_config(LabelId a, LabelId b) {
    return a <= b ? PairConfig{a, b} : PairConfig{b, a};
}

bool is_submultiset(const Config& sub, const Config& sup);
PairSet sub_pairs(const Config& c);   // distinct 2-element sub-multisets
PairSet all_pairs(int num_labels);    // the full multiset-pair universe over Sigma

bool contains(const LabelSet& s, LabelId x);
bool contains(const PairSet& s, const PairConfig& x);
bool contains(const ConfigSet& s, const Config& x);
bool is_subset(const LabelSet& a, const LabelSet& b);
bool is_subset(const PairSet& a, const PairSet& b);
bool is_subset(const ConfigSet& a, const ConfigSet& b);
LabelSet sorted_unique(LabelSet v);
PairSet sorted_unique(PairSet v);
ConfigSet sorted_unique(ConfigSet v);

}  // namespace lcl
