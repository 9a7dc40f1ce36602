#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcl/instances.hpp"
#include "lcl/problem.hpp"
#include "lcl/rng.hpp"
#include "lcl/tree.hpp"

namespace lcl {

struct Locality {
    bool full = false;  // "n": the whole component is visible
    long t = 0;

    long resolve(int n) const { return full ? n : t; }
    static Locality of(long t_) { return {false, t_}; }
    static Locality full_visibility() { return {true, 0}; }
};

// One node of a revealed view. Views disclose the degrees of nodes inside the
// view and nothing about nodes outside it; rooted views additionally disclose
// the parent/child orientation of visible edges and whether a visible node has
// a parent at all.
struct ViewNode {
    int id = -1;
    int child_count = 0;          // rooted: children in the full instance
    bool has_parent = false;      // rooted
    int parent = -1;              // rooted: visible parent id, -1 otherwise
    std::vector<int> children;    // rooted: visible children, ascending
    int degree = 0;               // unrooted: degree in the full instance
    std::vector<int> slots;       // unrooted: neighbor per slot (ascending neighbor id), -1 if not visible
    int reveal_index = -1;        // -1 while unrevealed
    std::vector<int> output;      // labels chosen when this node was processed
};

struct View {
    int n = 0;
    long locality = 0;
    int step = 0;     // 1-based reveal step
    int current = -1;
    bool rooted = true;
    std::vector<ViewNode> nodes;  // ascending by id; fresh copies per step

    const ViewNode* find(int id) const;
};

// Global memory is whatever state the implementation keeps between reveals;
// the harness never inspects it. The random stream is hidden from the
// schedule, which is fixed before the first reveal.
class OnlineAlgorithm {
public:
    virtual ~OnlineAlgorithm() = default;
    // Rooted problems return one label; unrooted return one label per
    // incident slot of the current node, in slot order.
    virtual std::vector<int> on_reveal(const View& view, Rng& random) = 0;
};

struct Violation {
    std::string what;
    int node = -1;
};

struct Verdict {
    bool pass = false;
    std::vector<Violation> violations;
};

struct RunTrace {
    const Tree* graph = nullptr;
    Schedule schedule;
    long locality = 0;
    int n = 0;
    std::vector<uint64_t> view_fingerprints;  // one per step
    std::vector<std::vector<int>> outputs;    // by node id
    Verdict verdict;
    bool aborted = false;
    std::string abort_reason;
};

RunTrace reveal_run(const Tree& g, const Problem& p, const Schedule& sched, OnlineAlgorithm& alg,
                    Locality T, uint64_t seed);

// Size-guarded export: per-step fingerprints are dropped first, then outputs,
// so the result stays under max_bytes (best effort).
std::string trace_to_json(const RunTrace& trace, size_t max_bytes = 1 << 20);

Verdict check_rooted(const Tree& g, const std::vector<int>& labels, const RootedProblem& p);
Verdict check_unrooted(const Tree& g, const std::vector<std::vector<int>>& half_edges,
                       const UnrootedProblem& p);
Verdict check_labeling(const Tree& g, const std::vector<std::vector<int>>& outputs, const Problem& p);

// Brute-force solving oracle. `allowed_per_node`, when given, restricts each
// node's label set (rooted); for the unrooted solver `allowed` restricts the
// node configurations usable at non-root nodes and `forced_root` pins the
// root's configuration.
std::optional<std::vector<int>> solve_offline_rooted(
    const Tree& g, const RootedProblem& p,
    const std::vector<LabelSet>* allowed_per_node = nullptr);

std::optional<std::vector<std::vector<int>>> solve_offline_unrooted(
    const Tree& g, const UnrootedProblem& p, const ConfigSet* allowed = nullptr,
    std::optional<Config> forced_root = std::nullopt, int root = 0);

struct FailureEstimate {
    int trials = 0;
    int failures = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

// Exact (Clopper-Pearson) binomial interval.
std::pair<double, double> binomial_ci95(int failures, int trials);

struct RunInfo {
    int n = 0;
    Locality T;
    int u_prefix_len = 0;
};

using AlgorithmFactory = std::function<std::unique_ptr<OnlineAlgorithm>(const RunInfo&)>;

struct TrialSetup {
    const Tree* g = nullptr;
    const Problem* p = nullptr;
    AlgorithmFactory factory;
    Locality T;
    std::function<Schedule(uint64_t)> sampler;  // derived seed per trial
};

FailureEstimate estimate_failure(const TrialSetup& setup, int trials, uint64_t master_seed);
std::string failure_estimate_to_json(const FailureEstimate& e);

struct IsoVerdict {
    bool pass = false;
    std::string detail;
};

// Checks that within every layer the u-nodes' radius-`radius` views are
// pairwise identical (orientation-preserving canonical form) and that all
// u-balls are pairwise disjoint.
IsoVerdict view_isomorphism(const Tree& g, const Schedule& sched, long radius);
IsoVerdict assert_view_isomorphism(const RunTrace& trace);

// ---- shipped algorithms ----

// Labels every node from a per-component offline solution; with full
// visibility this is a correctness ceiling for solvable instances.
std::unique_ptr<OnlineAlgorithm> make_offline_oracle(const Problem& p);

std::unique_ptr<OnlineAlgorithm> make_uniform_random(const Problem& p);

// Fixed-commitment victim (rooted): commits the given labels cyclically to the
// u-node prefix of the schedule, then completes best-effort from the full
// view. With commit labels drawn from an inflexible component this exhibits
// the parity failure; with a label outside trim, certain failure; with labels
// from two different components, a walk-connectivity failure.
std::unique_ptr<OnlineAlgorithm> make_commit_victim(const RootedProblem& p,
                                                    std::vector<LabelId> commit_labels,
                                                    int prefix_len);

// Registry used by the CLI: name is one of "offline-oracle", "random",
// "commit-victim", "parity-victim", "outside-trim-victim", "split-scc-victim".
// The victim aliases auto-select their commit labels from the problem
// structure when `commit_labels` is empty.
std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name, const Problem& p,
                                                const RunInfo& info,
                                                std::vector<LabelId> commit_labels = {});

}  // namespace lcl
