#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcl/certificate.hpp"
#include "lcl/problem.hpp"

namespace lcl {

// Greatest fixed point of F(X) = {s in X : some rule (s,S) has S a multiset
// over X}; equals the labels that can root complete Delta-ary trees of every
// depth using only labels from sigma_sub.
LabelSet trim_rooted(const RootedProblem& p, const LabelSet& sigma_sub);

// Unrooted analogue over node configurations: C survives iff each of its
// half-edge labels extends downward forever through configurations of d_sub,
// compatibly with the edge constraints. Computed with an auxiliary
// extendible-below label fixed point.
ConfigSet trim_unrooted(const UnrootedProblem& p, const ConfigSet& d_sub);

// Number of pruning iterations after which trim stabilizes, maximized over
// label subsets (rooted) or configuration subsets (unrooted), clamped to >= 1.
// When the subset count exceeds `subset_cap` the safe stabilization bound
// (|Sigma|, resp. |V|) is returned instead.
int pruning_constant(const RootedProblem& p, uint64_t subset_cap = 1ull << 16);
int pruning_constant(const UnrootedProblem& p, uint64_t subset_cap = 1ull << 16);

enum class DepthKind { Zero, Finite, Infinite };

// Alternating chain of trimmed sets and flexible components. For rooted
// problems r_sets/c_sets hold label sets; for unrooted, v_sets hold node
// configuration sets and d_sets hold pair sets.
struct GoodSequence {
    std::vector<LabelSet> r_sets;
    std::vector<LabelSet> c_sets;
    std::vector<ConfigSet> v_sets;
    std::vector<PairSet> d_sets;

    int length_rooted() const { return static_cast<int>(r_sets.size()); }
    int length_unrooted() const { return static_cast<int>(v_sets.size()); }
};

struct DepthResult {
    DepthKind kind = DepthKind::Zero;
    int k = 0;                   // meaningful when kind == Finite
    GoodSequence witness;        // longest good sequence found
    GoodSequence state_trace;    // for Infinite: chain ending in a repeated component
};

// Convention: a good sequence of length k must end in a non-empty trimmed
// set; a branch whose trim comes up empty terminates at the previous length.
// Any non-strict component step (the same component recurring) proves the
// depth is infinite, which also bounds finite depths by the universe size.
DepthResult depth(const RootedProblem& p);
DepthResult depth(const UnrootedProblem& p);
DepthResult depth(const Problem& p);

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassReport {
    DepthResult depth;
    std::string cls;     // short class token, e.g. "Theta(n^{1/2})"
    std::string detail;  // full statement
    std::optional<Certificate> certificate;
    CertSearchStatus cert_status = CertSearchStatus::NotFound;
    std::vector<std::string> caveats;
    int exit_code = 0;  // 0 ok, 2 unsolvable
};

// Locality-class report per the depth/certificate machinery. For rooted
// problems with non-zero depth a certificate search always runs; a verified
// certificate together with finite depth is an internal contradiction and
// throws InternalError.
ClassReport classify(const Problem& p, const CertSearchBounds& bounds = {});

std::string class_report_to_json(const ClassReport& report, const Problem& p);

}  // namespace lcl
