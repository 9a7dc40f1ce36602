// Test-only reference implementations, kept independent of the code paths
// they check.
#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lcl/automaton.hpp"
#include "lcl/depth.hpp"
#include "lcl/instances.hpp"
#include "lcl/problem.hpp"
#include "lcl/rng.hpp"

namespace oracles {

using namespace lcl;

// ---- random problem generators ----

inline std::vector<Config> all_configs(int num_labels, int arity) {
    std::vector<Config> out;
    Config cur;
    std::function<void(int, int)> gen = [&](int from, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int l = from; l < num_labels; ++l) {
            cur.push_back(l);
            gen(l, left - 1);
            cur.pop_back();
        }
    };
    gen(0, arity);
    return out;
}

inline RootedProblem random_rooted_problem(Rng& rng, int max_labels, int max_delta) {
    RootedProblem p;
    p.delta = 1 + static_cast<int>(uniform_below(rng, static_cast<uint64_t>(max_delta)));
    int num = 1 + static_cast<int>(uniform_below(rng, static_cast<uint64_t>(max_labels)));
    for (int i = 0; i < num; ++i) p.labels.push_back(std::string(1, static_cast<char>('a' + i)));
    uint64_t density = 1 + uniform_below(rng, 9);
    for (int parent = 0; parent < num; ++parent)
        for (const auto& c : all_configs(num, p.delta))
            if (uniform_below(rng, 10) < density) p.rules.push_back({parent, c});
    return canonicalize(std::move(p));
}

inline UnrootedProblem random_unrooted_problem(Rng& rng, int max_labels, int max_delta) {
    UnrootedProblem p;
    p.delta = 2 + static_cast<int>(uniform_below(rng, static_cast<uint64_t>(max_delta) - 1));
    int num = 1 + static_cast<int>(uniform_below(rng, static_cast<uint64_t>(max_labels)));
    for (int i = 0; i < num; ++i) p.labels.push_back(std::string(1, static_cast<char>('a' + i)));
    uint64_t density = 2 + uniform_below(rng, 8);
    for (const auto& c : all_configs(num, p.delta))
        if (uniform_below(rng, 10) < density) p.node_configs.push_back(c);
    for (const auto& e : all_configs(num, 2))
        if (uniform_below(rng, 10) < density) p.edge_configs.push_back({e[0], e[1]});
    return canonicalize(std::move(p));
}

// ---- naive depth enumerator (by-definition, no chain pruning) ----
//
// Explores every good sequence depth-first up to length cap+1, where cap is
// the universe size. Any sequence reaching length cap+1 must contain a
// repeated component set (the component chain is weakly decreasing and
// non-empty), hence the depth is infinite.

struct NaiveDepth {
    bool infinite = false;
    int best = 0;
};

inline NaiveDepth naive_depth_rooted(const RootedProblem& p) {
    NaiveDepth result;
    int cap = p.num_labels() + 1;
    std::function<void(const LabelSet&, int)> go = [&](const LabelSet& prev_c, int len) {
        if (result.infinite) return;
        LabelSet r = trim_rooted(p, prev_c);
        if (r.empty()) return;
        int now = len + 1;
        result.best = std::max(result.best, now);
        if (now >= cap) {
            result.infinite = true;
            return;
        }
        for (const auto& comp : flex_scc_rooted(p, r)) go(comp, now);
    };
    go(p.all_labels(), 0);
    return result;
}

inline NaiveDepth naive_depth_unrooted(const UnrootedProblem& p) {
    NaiveDepth result;
    int cap = static_cast<int>(p.node_configs.size()) + 1;
    std::function<void(const ConfigSet&, const PairSet&, int)> go =
        [&](const ConfigSet& prev_v, const PairSet& prev_d, int len) {
            if (result.infinite) return;
            UnrootedProblem restricted = restrict_unrooted(p, prev_d);
            ConfigSet pool;
            for (const auto& c : restricted.node_configs)
                if (contains(prev_v, c)) pool.push_back(c);
            ConfigSet v = trim_unrooted(p, pool);
            if (v.empty()) return;
            int now = len + 1;
            result.best = std::max(result.best, now);
            if (now >= cap) {
                result.infinite = true;
                return;
            }
            for (const auto& d : flex_scc_unrooted(p, v)) go(v, d, now);
        };
    go(p.node_configs, all_pairs(p.num_labels()), 0);
    return result;
}

// ---- node-count recurrences for the lower-bound constructions ----

inline long long rooted_lb_count(int delta, int beta, int k, int t) {
    long long s = 4ll * t + 4;
    long long tbeta = 0, w = 1;
    for (int l = 0; l <= beta; ++l) {
        tbeta += w;
        w *= delta;
    }
    long long leaves = 1;
    for (int l = 0; l < beta; ++l) leaves *= delta;
    std::vector<long long> gr(static_cast<size_t>(k) + 2), gco(static_cast<size_t>(k) + 1),
        gc(static_cast<size_t>(k) + 1);
    gr[1] = tbeta;
    for (int i = 1; i <= k; ++i) {
        gco[static_cast<size_t>(i)] = s * (1 + (delta - 1) * gr[static_cast<size_t>(i)]);
        gc[static_cast<size_t>(i)] = gco[static_cast<size_t>(i)] + gr[static_cast<size_t>(i)];
        gr[static_cast<size_t>(i) + 1] = tbeta + leaves * delta * gc[static_cast<size_t>(i)];
    }
    long long total = gr[static_cast<size_t>(k) + 1];
    for (int i = 1; i <= k; ++i) total += gco[static_cast<size_t>(i)];
    return total;
}

inline long long unrooted_lb_count(int delta, int gamma, int k, int t) {
    long long s = 4ll * t + 4;
    // T_gamma levels: 1, (delta-1), (delta-1)^2, ...
    long long tg = 0, w = 1;
    for (int l = 0; l <= gamma; ++l) {
        tg += w;
        w *= delta - 1;
    }
    // T_gamma^* levels: 1, delta, delta(delta-1), ...
    long long tgs = 1;
    w = delta;
    for (int l = 1; l <= gamma; ++l) {
        tgs += w;
        w *= delta - 1;
    }
    long long leaves_t = 1;
    for (int l = 0; l < gamma; ++l) leaves_t *= delta - 1;
    long long leaves_ts = delta;
    for (int l = 1; l < gamma; ++l) leaves_ts *= delta - 1;
    std::vector<long long> gr(static_cast<size_t>(k) + 2), gc(static_cast<size_t>(k) + 1);
    gr[1] = tg;
    for (int i = 1; i <= k; ++i) {
        gc[static_cast<size_t>(i)] =
            s + (s - 1) * (delta - 2) * gr[static_cast<size_t>(i)] + (delta - 1) * gr[static_cast<size_t>(i)];
        gr[static_cast<size_t>(i) + 1] = tg + leaves_t * (delta - 1) * gc[static_cast<size_t>(i)];
    }
    // G = G*_{R,k+1}
    return tgs + leaves_ts * (delta - 1) * gc[static_cast<size_t>(k)];
}

// ---- leaf-peeling oracle (naive per-round recomputation) ----

inline std::set<int> peel_oracle(const Tree& g, int tau) {
    auto adj = g.adjacency();
    std::set<int> alive;
    for (int v = 0; v < g.n; ++v) alive.insert(v);
    for (int round = 0; round < tau; ++round) {
        std::vector<int> to_remove;
        for (int v : alive) {
            int deg = 0;
            for (int w : adj[static_cast<size_t>(v)])
                if (alive.count(w)) ++deg;
            if (deg == 1) to_remove.push_back(v);
        }
        if (to_remove.empty()) break;
        for (int v : to_remove) alive.erase(v);
    }
    return alive;
}

// ---- random trees ----

inline Tree random_attachment_tree(Rng& rng, int n) {
    Tree g;
    g.rooted = false;
    g.add_node(-1);
    for (int v = 1; v < n; ++v) g.add_node(static_cast<int>(uniform_below(rng, static_cast<uint64_t>(v))));
    return g;
}

}  // namespace oracles
