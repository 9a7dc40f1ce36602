#include "lcl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lcl/automaton.hpp"
#include "lcl/depth.hpp"

namespace lcl {

const ViewNode* View::find(int id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const ViewNode& vn, int key) { return vn.id < key; });
    if (it == nodes.end() || it->id != id) return nullptr;
    return &*it;
}

namespace {

uint64_t fnv_mix(uint64_t h, uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL;
    return h * 0x100000001b3ULL;
}

uint64_t fingerprint_view(const View& v) {
    uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv_mix(h, static_cast<uint64_t>(v.step));
    h = fnv_mix(h, static_cast<uint64_t>(v.current));
    for (const auto& nd : v.nodes) {
        h = fnv_mix(h, static_cast<uint64_t>(nd.id));
        h = fnv_mix(h, static_cast<uint64_t>(nd.child_count));
        h = fnv_mix(h, static_cast<uint64_t>(nd.degree));
        h = fnv_mix(h, static_cast<uint64_t>(nd.parent + 2));
        h = fnv_mix(h, static_cast<uint64_t>(nd.reveal_index + 2));
        for (int c : nd.children) h = fnv_mix(h, static_cast<uint64_t>(c));
        for (int s : nd.slots) h = fnv_mix(h, static_cast<uint64_t>(s + 2));
        for (int o : nd.output) h = fnv_mix(h, static_cast<uint64_t>(o + 2));
    }
    return h;
}

}  // namespace

RunTrace reveal_run(const Tree& g, const Problem& p, const Schedule& sched, OnlineAlgorithm& alg,
                    Locality T, uint64_t seed) {
    RunTrace trace;
    trace.graph = &g;
    trace.schedule = sched;
    trace.n = g.n;
    trace.locality = T.resolve(g.n);

    if (static_cast<int>(sched.order.size()) != g.n)
        throw std::invalid_argument("schedule does not cover the instance");
    {
        std::vector<char> seen(static_cast<size_t>(g.n), 0);
        for (int v : sched.order) {
            if (v < 0 || v >= g.n || seen[static_cast<size_t>(v)])
                throw std::invalid_argument("schedule is not a permutation of the nodes");
            seen[static_cast<size_t>(v)] = 1;
        }
    }

    bool rooted = std::holds_alternative<RootedProblem>(p);
    int num_labels = rooted ? std::get<RootedProblem>(p).num_labels()
                            : std::get<UnrootedProblem>(p).num_labels();
    auto adj = g.adjacency();
    auto ch = g.children_lists();

    std::vector<char> visible_flag(static_cast<size_t>(g.n), 0);
    std::vector<int> visible_sorted;
    std::vector<int> reveal_index(static_cast<size_t>(g.n), -1);
    trace.outputs.assign(static_cast<size_t>(g.n), {});
    Rng rng = make_rng(seed, "alg-stream");

    for (int step = 0; step < g.n; ++step) {
        int v = sched.order[static_cast<size_t>(step)];
        std::vector<int> fresh;
        for (int w : ball(adj, v, trace.locality))
            if (!visible_flag[static_cast<size_t>(w)]) {
                visible_flag[static_cast<size_t>(w)] = 1;
                fresh.push_back(w);
            }
        if (!fresh.empty()) {
            size_t old = visible_sorted.size();
            visible_sorted.insert(visible_sorted.end(), fresh.begin(), fresh.end());
            std::inplace_merge(visible_sorted.begin(),
                               visible_sorted.begin() + static_cast<long>(old), visible_sorted.end());
        }

        View view;
        view.n = g.n;
        view.locality = trace.locality;
        view.step = step + 1;
        view.current = v;
        view.rooted = rooted;
        view.nodes.reserve(visible_sorted.size());
        for (int w : visible_sorted) {
            ViewNode nd;
            nd.id = w;
            nd.reveal_index = reveal_index[static_cast<size_t>(w)];
            nd.output = trace.outputs[static_cast<size_t>(w)];
            if (rooted) {
                nd.child_count = static_cast<int>(ch[static_cast<size_t>(w)].size());
                int par = g.parent[static_cast<size_t>(w)];
                nd.has_parent = par >= 0;
                nd.parent = (par >= 0 && visible_flag[static_cast<size_t>(par)]) ? par : -1;
                for (int c : ch[static_cast<size_t>(w)])
                    if (visible_flag[static_cast<size_t>(c)]) nd.children.push_back(c);
            } else {
                nd.degree = static_cast<int>(adj[static_cast<size_t>(w)].size());
                for (int u : adj[static_cast<size_t>(w)])
                    nd.slots.push_back(visible_flag[static_cast<size_t>(u)] ? u : -1);
            }
            view.nodes.push_back(std::move(nd));
        }
        trace.view_fingerprints.push_back(fingerprint_view(view));

        std::vector<int> out = alg.on_reveal(view, rng);
        size_t expected = rooted ? 1 : adj[static_cast<size_t>(v)].size();
        bool ok = out.size() == expected;
        for (int l : out)
            if (l < 0 || l >= num_labels) ok = false;
        if (!ok) {
            trace.aborted = true;
            std::ostringstream os;
            os << "invalid output at step " << step + 1 << " for node " << v;
            trace.abort_reason = os.str();
            trace.verdict.pass = false;
            trace.verdict.violations.push_back({trace.abort_reason, v});
            return trace;
        }
        trace.outputs[static_cast<size_t>(v)] = std::move(out);
        reveal_index[static_cast<size_t>(v)] = step;
    }

    trace.verdict = check_labeling(g, trace.outputs, p);
    return trace;
}

std::string trace_to_json(const RunTrace& trace, size_t max_bytes) {
    auto build = [&](bool with_fingerprints, bool with_outputs) {
        nlohmann::ordered_json j;
        j["n"] = trace.n;
        j["locality"] = trace.locality;
        j["order"] = trace.schedule.order;
        j["verdict"] = trace.verdict.pass ? "PASS" : "FAIL";
        if (trace.aborted) j["aborted"] = trace.abort_reason;
        nlohmann::ordered_json viols = nlohmann::ordered_json::array();
        for (const auto& v : trace.verdict.violations)
            viols.push_back({{"node", v.node}, {"what", v.what}});
        j["violations"] = std::move(viols);
        if (with_outputs) j["outputs"] = trace.outputs;
        if (with_fingerprints) {
            std::vector<std::string> fps;
            for (uint64_t f : trace.view_fingerprints) fps.push_back(std::to_string(f));
            j["view_fingerprints"] = std::move(fps);
        }
        return j.dump() + "\n";
    };
    for (auto [fp, out] : {std::pair{true, true}, {false, true}, {false, false}}) {
        std::string text = build(fp, out);
        if (text.size() <= max_bytes) return text;
    }
    return build(false, false);
}

Verdict check_rooted(const Tree& g, const std::vector<int>& labels, const RootedProblem& p) {
    Verdict v;
    if (static_cast<int>(labels.size()) != g.n) {
        v.violations.push_back({"labeling size mismatch", -1});
        return v;
    }
    auto ch = g.children_lists();
    for (int node = 0; node < g.n; ++node) {
        int l = labels[static_cast<size_t>(node)];
        if (l < 0 || l >= p.num_labels()) {
            v.violations.push_back({"missing or out-of-range label", node});
            continue;
        }
        const auto& kids = ch[static_cast<size_t>(node)];
        if (static_cast<int>(kids.size()) != p.delta) continue;  // leaves and sub-Delta nodes
        Config c;
        for (int k : kids) c.push_back(labels[static_cast<size_t>(k)]);
        std::sort(c.begin(), c.end());
        bool ok = false;
        for (const auto& rule : p.rules)
            if (rule.parent == l && rule.children == c) {
                ok = true;
                break;
            }
        if (!ok) v.violations.push_back({"no constraint matches node and child labels", node});
    }
    v.pass = v.violations.empty();
    return v;
}

Verdict check_unrooted(const Tree& g, const std::vector<std::vector<int>>& half_edges,
                       const UnrootedProblem& p) {
    Verdict v;
    if (static_cast<int>(half_edges.size()) != g.n) {
        v.violations.push_back({"labeling size mismatch", -1});
        return v;
    }
    auto adj = g.adjacency();
    auto slot_of = [&](int node, int nbr) {
        const auto& row = adj[static_cast<size_t>(node)];
        return static_cast<size_t>(std::lower_bound(row.begin(), row.end(), nbr) - row.begin());
    };
    for (int node = 0; node < g.n; ++node) {
        const auto& he = half_edges[static_cast<size_t>(node)];
        if (he.size() != adj[static_cast<size_t>(node)].size()) {
            v.violations.push_back({"half-edge labeling arity mismatch", node});
            continue;
        }
        bool in_range = true;
        for (int l : he)
            if (l < 0 || l >= p.num_labels()) in_range = false;
        if (!in_range) {
            v.violations.push_back({"missing or out-of-range half-edge label", node});
            continue;
        }
        if (static_cast<int>(he.size()) == p.delta) {
            Config c(he.begin(), he.end());
            std::sort(c.begin(), c.end());
            if (!contains(p.node_configs, c))
                v.violations.push_back({"node configuration not allowed", node});
        }
    }
    for (int node = 0; node < g.n; ++node) {
        for (int nbr : adj[static_cast<size_t>(node)]) {
            if (nbr < node) continue;  // each edge once
            if (half_edges[static_cast<size_t>(node)].size() != adj[static_cast<size_t>(node)].size() ||
                half_edges[static_cast<size_t>(nbr)].size() != adj[static_cast<size_t>(nbr)].size())
                continue;  // already reported
            int a = half_edges[static_cast<size_t>(node)][slot_of(node, nbr)];
            int b = half_edges[static_cast<size_t>(nbr)][slot_of(nbr, node)];
            if (a < 0 || b < 0 || a >= p.num_labels() || b >= p.num_labels()) continue;
            if (!p.edge_allowed(a, b))
                v.violations.push_back({"edge pair not allowed with neighbor " + std::to_string(nbr), node});
        }
    }
    v.pass = v.violations.empty();
    return v;
}

Verdict check_labeling(const Tree& g, const std::vector<std::vector<int>>& outputs, const Problem& p) {
    if (std::holds_alternative<RootedProblem>(p)) {
        std::vector<int> labels(static_cast<size_t>(g.n), -1);
        for (int v = 0; v < g.n; ++v)
            if (outputs[static_cast<size_t>(v)].size() == 1) labels[static_cast<size_t>(v)] = outputs[static_cast<size_t>(v)][0];
        return check_rooted(g, labels, std::get<RootedProblem>(p));
    }
    return check_unrooted(g, outputs, std::get<UnrootedProblem>(p));
}

// ---------------- offline solving oracle ----------------

namespace {

using Mask = uint64_t;

Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

bool assign_multiset(const Config& conf, const std::vector<Mask>& kid_masks, size_t slot,
                     std::vector<int>& used, std::vector<LabelId>* chosen) {
    if (slot == kid_masks.size()) return true;
    LabelId prev = -1;
    for (size_t e = 0; e < conf.size(); ++e) {
        if (std::find(used.begin(), used.end(), static_cast<int>(e)) != used.end()) continue;
        if (conf[e] == prev) continue;
        prev = conf[e];
        if (!(kid_masks[slot] & (Mask{1} << conf[e]))) continue;
        used.push_back(static_cast<int>(e));
        if (chosen) (*chosen)[slot] = conf[e];
        if (assign_multiset(conf, kid_masks, slot + 1, used, chosen)) return true;
        used.pop_back();
    }
    return false;
}

std::vector<int> reverse_bfs_order(const Tree& g) {
    std::vector<int> order;
    order.reserve(static_cast<size_t>(g.n));
    auto ch = g.children_lists();
    std::queue<int> q;
    for (int r : g.roots()) q.push(r);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        for (int c : ch[static_cast<size_t>(v)]) q.push(c);
    }
    std::reverse(order.begin(), order.end());
    return order;
}

}  // namespace

std::optional<std::vector<int>> solve_offline_rooted(const Tree& g, const RootedProblem& p,
                                                     const std::vector<LabelSet>* allowed_per_node) {
    if (p.num_labels() > 63) throw std::invalid_argument("offline solver supports at most 63 labels");
    auto ch = g.children_lists();
    std::vector<Mask> feas(static_cast<size_t>(g.n), 0);
    Mask everything = full_mask(p.num_labels());
    auto allowed_mask = [&](int v) {
        if (!allowed_per_node) return everything;
        Mask m = 0;
        for (LabelId l : (*allowed_per_node)[static_cast<size_t>(v)]) m |= Mask{1} << l;
        return m;
    };

    for (int v : reverse_bfs_order(g)) {
        const auto& kids = ch[static_cast<size_t>(v)];
        Mask allow = allowed_mask(v);
        if (static_cast<int>(kids.size()) != p.delta) {
            bool kids_ok = true;
            for (int c : kids)
                if (feas[static_cast<size_t>(c)] == 0) kids_ok = false;
            feas[static_cast<size_t>(v)] = kids_ok ? allow : 0;
            continue;
        }
        std::vector<Mask> kid_masks;
        for (int c : kids) kid_masks.push_back(feas[static_cast<size_t>(c)]);
        Mask m = 0;
        for (const auto& rule : p.rules) {
            if (!(allow & (Mask{1} << rule.parent))) continue;
            if (m & (Mask{1} << rule.parent)) continue;
            std::vector<int> used;
            if (assign_multiset(rule.children, kid_masks, 0, used, nullptr)) m |= Mask{1} << rule.parent;
        }
        feas[static_cast<size_t>(v)] = m;
    }

    for (int r : g.roots())
        if (feas[static_cast<size_t>(r)] == 0) return std::nullopt;

    std::vector<int> labels(static_cast<size_t>(g.n), -1);
    auto pick_smallest = [](Mask m) {
        for (int i = 0; i < 64; ++i)
            if (m & (Mask{1} << i)) return i;
        return -1;
    };
    std::queue<int> q;
    for (int r : g.roots()) {
        labels[static_cast<size_t>(r)] = pick_smallest(feas[static_cast<size_t>(r)]);
        q.push(r);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        const auto& kids = ch[static_cast<size_t>(v)];
        if (kids.empty()) continue;
        if (static_cast<int>(kids.size()) == p.delta) {
            std::vector<Mask> kid_masks;
            for (int c : kids) kid_masks.push_back(feas[static_cast<size_t>(c)]);
            bool done = false;
            for (const auto& rule : p.rules) {
                if (rule.parent != labels[static_cast<size_t>(v)]) continue;
                std::vector<int> used;
                std::vector<LabelId> chosen(kids.size(), -1);
                if (assign_multiset(rule.children, kid_masks, 0, used, &chosen)) {
                    for (size_t i = 0; i < kids.size(); ++i)
                        labels[static_cast<size_t>(kids[i])] = chosen[i];
                    done = true;
                    break;
                }
            }
            if (!done) throw std::logic_error("offline DP reconstruction failed");
        } else {
            for (int c : kids)
                labels[static_cast<size_t>(c)] = pick_smallest(feas[static_cast<size_t>(c)]);
        }
        for (int c : kids) q.push(c);
    }
    return labels;
}

std::optional<std::vector<std::vector<int>>> solve_offline_unrooted(
    const Tree& g, const UnrootedProblem& p, const ConfigSet* allowed_in,
    std::optional<Config> forced_root, int root) {
    if (p.num_labels() > 63) throw std::invalid_argument("offline solver supports at most 63 labels");
    const ConfigSet& allowed = allowed_in ? *allowed_in : p.node_configs;
    auto adj = g.adjacency();
    if (g.n == 0) return std::vector<std::vector<int>>{};

    // Orient the tree at `root`.
    std::vector<int> par(static_cast<size_t>(g.n), -2);
    std::vector<std::vector<int>> ch(static_cast<size_t>(g.n));
    std::vector<int> order;
    {
        std::queue<int> q;
        par[static_cast<size_t>(root)] = -1;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order.push_back(v);
            for (int w : adj[static_cast<size_t>(v)]) {
                if (par[static_cast<size_t>(w)] != -2) continue;
                par[static_cast<size_t>(w)] = v;
                ch[static_cast<size_t>(v)].push_back(w);
                q.push(w);
            }
        }
        if (static_cast<int>(order.size()) != g.n)
            throw std::invalid_argument("unrooted solver expects a connected tree");
    }

    std::vector<Mask> compat(static_cast<size_t>(p.num_labels()), 0);
    for (LabelId x = 0; x < p.num_labels(); ++x)
        for (LabelId b = 0; b < p.num_labels(); ++b)
            if (p.edge_allowed(x, b)) compat[static_cast<size_t>(x)] |= Mask{1} << b;

    // D[v]: labels usable on v's parent-side half-edge.
    std::vector<Mask> D(static_cast<size_t>(g.n), 0);
    Mask everything = full_mask(p.num_labels());

    auto kid_accept_masks = [&](int v) {
        // For child c: the set of parent-side labels x at v such that c can
        // answer with some b in D(c), {x,b} in E.
        std::vector<Mask> res;
        for (int c : ch[static_cast<size_t>(v)]) {
            Mask m = 0;
            for (LabelId x = 0; x < p.num_labels(); ++x)
                if (compat[static_cast<size_t>(x)] & D[static_cast<size_t>(c)]) m |= Mask{1} << x;
            res.push_back(m);
        }
        return res;
    };

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (v == root) continue;
        int deg = static_cast<int>(adj[static_cast<size_t>(v)].size());
        if (ch[static_cast<size_t>(v)].empty()) {
            D[static_cast<size_t>(v)] = everything;  // leaf nodes are unconstrained
            continue;
        }
        auto accepts = kid_accept_masks(v);
        if (deg != p.delta) {
            bool ok = true;
            for (Mask m : accepts)
                if (m == 0) ok = false;
            D[static_cast<size_t>(v)] = ok ? everything : 0;
            continue;
        }
        Mask m = 0;
        for (const auto& conf : allowed) {
            for (size_t bi = 0; bi < conf.size(); ++bi) {
                if (bi > 0 && conf[bi] == conf[bi - 1]) continue;
                LabelId b = conf[bi];
                if (m & (Mask{1} << b)) continue;
                Config rest = conf;
                rest.erase(rest.begin() + static_cast<long>(bi));
                std::vector<int> used;
                if (assign_multiset(rest, accepts, 0, used, nullptr)) m |= Mask{1} << b;
            }
        }
        D[static_cast<size_t>(v)] = m;
    }

    // Root feasibility and reconstruction.
    std::vector<std::vector<int>> he(static_cast<size_t>(g.n));
    for (int v = 0; v < g.n; ++v) he[static_cast<size_t>(v)].assign(adj[static_cast<size_t>(v)].size(), -1);
    auto slot_of = [&](int node, int nbr) {
        const auto& row = adj[static_cast<size_t>(node)];
        return static_cast<size_t>(std::lower_bound(row.begin(), row.end(), nbr) - row.begin());
    };
    auto pick_smallest = [](Mask m) {
        for (int i = 0; i < 64; ++i)
            if (m & (Mask{1} << i)) return i;
        return -1;
    };

    // place(v, conf): writes v's child-side half-edges from the multiset and
    // completes the children. descend(c): c's parent-side label is already
    // written; pick c's own configuration around it and continue downward.
    std::function<bool(int, const Config&)> place;
    std::function<bool(int)> descend;

    place = [&](int v, const Config& toward_children) -> bool {
        auto accepts = kid_accept_masks(v);
        std::vector<int> used;
        std::vector<LabelId> chosen(ch[static_cast<size_t>(v)].size(), -1);
        if (!assign_multiset(toward_children, accepts, 0, used, &chosen)) return false;
        for (size_t i = 0; i < ch[static_cast<size_t>(v)].size(); ++i) {
            int c = ch[static_cast<size_t>(v)][i];
            LabelId x = chosen[i];
            he[static_cast<size_t>(v)][slot_of(v, c)] = x;
            Mask reply = compat[static_cast<size_t>(x)] & D[static_cast<size_t>(c)];
            he[static_cast<size_t>(c)][slot_of(c, v)] = pick_smallest(reply);
            if (!descend(c)) return false;
        }
        return true;
    };

    descend = [&](int c) -> bool {
        if (ch[static_cast<size_t>(c)].empty()) return true;
        int cdeg = static_cast<int>(adj[static_cast<size_t>(c)].size());
        LabelId b = he[static_cast<size_t>(c)][slot_of(c, par[static_cast<size_t>(c)])];
        if (cdeg != p.delta) {
            auto gaccepts = kid_accept_masks(c);
            for (size_t gi = 0; gi < ch[static_cast<size_t>(c)].size(); ++gi) {
                LabelId x2 = pick_smallest(gaccepts[gi]);
                if (x2 < 0) return false;
                int gc = ch[static_cast<size_t>(c)][gi];
                he[static_cast<size_t>(c)][slot_of(c, gc)] = x2;
                Mask r2 = compat[static_cast<size_t>(x2)] & D[static_cast<size_t>(gc)];
                he[static_cast<size_t>(gc)][slot_of(gc, c)] = pick_smallest(r2);
                if (!descend(gc)) return false;
            }
            return true;
        }
        for (const auto& conf : allowed) {
            if (!std::binary_search(conf.begin(), conf.end(), b)) continue;
            Config rest = conf;
            rest.erase(std::lower_bound(rest.begin(), rest.end(), b));
            if (place(c, rest)) return true;
        }
        return false;
    };

    return [&]() -> std::optional<std::vector<std::vector<int>>> {
        int deg = static_cast<int>(adj[static_cast<size_t>(root)].size());
        if (forced_root) {
            if (deg != p.delta) return std::nullopt;
            if (place(root, *forced_root)) return he;
            return std::nullopt;
        }
        if (deg != p.delta) {
            auto accepts = kid_accept_masks(root);
            for (size_t i = 0; i < ch[static_cast<size_t>(root)].size(); ++i) {
                LabelId x = pick_smallest(accepts[i]);
                if (x < 0) return std::nullopt;
                int c = ch[static_cast<size_t>(root)][i];
                he[static_cast<size_t>(root)][slot_of(root, c)] = x;
                Mask r = compat[static_cast<size_t>(x)] & D[static_cast<size_t>(c)];
                he[static_cast<size_t>(c)][slot_of(c, root)] = pick_smallest(r);
                if (!descend(c)) return std::nullopt;
            }
            return he;
        }
        for (const auto& conf : allowed)
            if (place(root, conf)) return he;
        return std::nullopt;
    }();
}

// ---------------- failure estimation ----------------

namespace {

double binom_cdf(int k, int n, double p) {
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return k >= n ? 1.0 : 0.0;
    double total = 0.0;
    for (int i = 0; i <= k; ++i) {
        double lg = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                    i * std::log(p) + (n - i) * std::log1p(-p);
        total += std::exp(lg);
    }
    return std::min(total, 1.0);
}

}  // namespace

std::pair<double, double> binomial_ci95(int k, int n) {
    const double alpha = 0.05;
    double lo = 0.0, hi = 1.0;
    if (k > 0) {
        // largest p with P(X >= k) <= alpha/2, i.e. 1 - cdf(k-1) = alpha/2
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 100; ++it) {
            double mid = (a + b) / 2;
            if (1.0 - binom_cdf(k - 1, n, mid) < alpha / 2) a = mid;
            else b = mid;
        }
        lo = a;
    }
    if (k < n) {
        // smallest p with P(X <= k) <= alpha/2
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 100; ++it) {
            double mid = (a + b) / 2;
            if (binom_cdf(k, n, mid) > alpha / 2) a = mid;
            else b = mid;
        }
        hi = b;
    }
    return {lo, hi};
}

FailureEstimate estimate_failure(const TrialSetup& setup, int trials, uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    FailureEstimate est;
    est.trials = trials;
    for (int i = 0; i < trials; ++i) {
        Schedule sched = setup.sampler(derive_seed(master_seed, "sched", static_cast<uint64_t>(i)));
        RunInfo info{setup.g->n, setup.T, sched.prefix_length()};
        auto alg = setup.factory(info);
        RunTrace trace = reveal_run(*setup.g, *setup.p, sched, *alg, setup.T,
                                    derive_seed(master_seed, "alg", static_cast<uint64_t>(i)));
        if (trace.aborted || !trace.verdict.pass) ++est.failures;
    }
    est.p_hat = static_cast<double>(est.failures) / trials;
    std::tie(est.ci_lo, est.ci_hi) = binomial_ci95(est.failures, trials);
    return est;
}

std::string failure_estimate_to_json(const FailureEstimate& e) {
    nlohmann::ordered_json j;
    j["trials"] = e.trials;
    j["failures"] = e.failures;
    j["p_hat"] = e.p_hat;
    j["ci95"] = {e.ci_lo, e.ci_hi};
    return j.dump() + "\n";
}

// ---------------- view isomorphism ----------------

namespace {

std::string canon_code(const Tree& g, const std::vector<std::vector<int>>& adj,
                       const std::set<int>& ball_set, int v, int from, bool rooted,
                       const std::vector<std::vector<int>>& ch) {
    std::string sig = "(";
    if (rooted) {
        sig += std::to_string(ch[static_cast<size_t>(v)].size());
        sig += g.parent[static_cast<size_t>(v)] >= 0 ? "p" : "r";
    } else {
        sig += std::to_string(adj[static_cast<size_t>(v)].size());
    }
    std::vector<std::string> parts;
    for (int w : adj[static_cast<size_t>(v)]) {
        if (w == from || !ball_set.count(w)) continue;
        std::string tag;
        if (rooted) tag = (w == g.parent[static_cast<size_t>(v)]) ? "u" : "d";
        parts.push_back(tag + canon_code(g, adj, ball_set, w, v, rooted, ch));
    }
    std::sort(parts.begin(), parts.end());
    for (auto& s : parts) sig += s;
    return sig + ")";
}

}  // namespace

IsoVerdict view_isomorphism(const Tree& g, const Schedule& sched, long radius) {
    auto adj = g.adjacency();
    auto ch = g.children_lists();
    IsoVerdict verdict;
    std::vector<std::vector<int>> all_balls;
    for (size_t layer = 0; layer < sched.u_nodes.size(); ++layer) {
        std::string expected;
        for (int u : sched.u_nodes[layer]) {
            auto b = ball(adj, u, radius);
            std::set<int> bs(b.begin(), b.end());
            std::string code = canon_code(g, adj, bs, u, -1, g.rooted, ch);
            if (expected.empty()) expected = code;
            else if (code != expected) {
                verdict.detail = "layer " + std::to_string(layer + 1) +
                                 ": view of node " + std::to_string(u) + " differs";
                return verdict;
            }
            all_balls.push_back(std::move(b));
        }
    }
    std::set<int> seen;
    size_t total = 0;
    for (const auto& b : all_balls) {
        total += b.size();
        seen.insert(b.begin(), b.end());
    }
    if (seen.size() != total) {
        verdict.detail = "u-node balls overlap";
        return verdict;
    }
    verdict.pass = true;
    verdict.detail = "identical within layers, pairwise disjoint";
    return verdict;
}

IsoVerdict assert_view_isomorphism(const RunTrace& trace) {
    if (!trace.graph) throw std::invalid_argument("trace has no graph attached");
    return view_isomorphism(*trace.graph, trace.schedule, trace.locality);
}

// ---------------- shipped algorithms ----------------

namespace {

// Rebuilds the current node's component from a full-visibility rooted view.
struct ViewComponent {
    std::vector<int> ids;          // component node ids, ascending
    std::map<int, int> compact;    // id -> compact index
    Tree tree;
};

ViewComponent component_from_view_rooted(const View& view, int start) {
    std::map<int, const ViewNode*> byid;
    for (const auto& nd : view.nodes) byid[nd.id] = &nd;
    std::set<int> comp;
    std::queue<int> q;
    comp.insert(start);
    q.push(start);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        const ViewNode* nd = byid.at(v);
        std::vector<int> nbrs = nd->children;
        if (nd->parent >= 0) nbrs.push_back(nd->parent);
        for (int w : nbrs)
            if (comp.insert(w).second) q.push(w);
    }
    ViewComponent out;
    out.ids.assign(comp.begin(), comp.end());
    for (size_t i = 0; i < out.ids.size(); ++i) out.compact[out.ids[i]] = static_cast<int>(i);
    out.tree.rooted = true;
    out.tree.n = static_cast<int>(out.ids.size());
    out.tree.parent.assign(out.ids.size(), -1);
    for (size_t i = 0; i < out.ids.size(); ++i) {
        const ViewNode* nd = byid.at(out.ids[i]);
        out.tree.parent[i] = nd->parent >= 0 ? out.compact.at(nd->parent) : -1;
    }
    return out;
}

ViewComponent component_from_view_unrooted(const View& view, int start) {
    std::map<int, const ViewNode*> byid;
    for (const auto& nd : view.nodes) byid[nd.id] = &nd;
    std::set<int> comp;
    std::queue<int> q;
    comp.insert(start);
    q.push(start);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : byid.at(v)->slots)
            if (w >= 0 && comp.insert(w).second) q.push(w);
    }
    ViewComponent out;
    out.ids.assign(comp.begin(), comp.end());
    for (size_t i = 0; i < out.ids.size(); ++i) out.compact[out.ids[i]] = static_cast<int>(i);
    out.tree.rooted = false;
    out.tree.n = static_cast<int>(out.ids.size());
    out.tree.parent.assign(out.ids.size(), -1);
    // orient by BFS from the first id
    std::set<int> seen{out.ids[0]};
    q.push(out.ids[0]);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : byid.at(v)->slots) {
            if (w < 0 || !seen.insert(w).second) continue;
            out.tree.parent[static_cast<size_t>(out.compact.at(w))] = out.compact.at(v);
            q.push(w);
        }
    }
    return out;
}

class OfflineOracle : public OnlineAlgorithm {
public:
    explicit OfflineOracle(Problem p) : p_(std::move(p)) {}

    std::vector<int> on_reveal(const View& view, Rng&) override {
        auto it = plan_.find(view.current);
        if (it == plan_.end()) {
            solve_component(view);
            it = plan_.find(view.current);
        }
        return it->second;
    }

private:
    void solve_component(const View& view) {
        if (std::holds_alternative<RootedProblem>(p_)) {
            auto comp = component_from_view_rooted(view, view.current);
            auto sol = solve_offline_rooted(comp.tree, std::get<RootedProblem>(p_));
            for (size_t i = 0; i < comp.ids.size(); ++i)
                plan_[comp.ids[i]] = sol ? std::vector<int>{(*sol)[i]} : std::vector<int>{0};
        } else {
            auto comp = component_from_view_unrooted(view, view.current);
            auto sol = solve_offline_unrooted(comp.tree, std::get<UnrootedProblem>(p_));
            for (size_t i = 0; i < comp.ids.size(); ++i) {
                if (sol) {
                    plan_[comp.ids[i]] = (*sol)[i];
                } else {
                    const ViewNode* nd = view.find(comp.ids[i]);
                    plan_[comp.ids[i]] = std::vector<int>(static_cast<size_t>(nd->degree), 0);
                }
            }
        }
    }

    const Problem p_;
    std::map<int, std::vector<int>> plan_;
};

class UniformRandom : public OnlineAlgorithm {
public:
    explicit UniformRandom(const Problem& p) {
        if (std::holds_alternative<RootedProblem>(p)) {
            rooted_ = true;
            num_labels_ = std::get<RootedProblem>(p).num_labels();
        } else {
            rooted_ = false;
            num_labels_ = std::get<UnrootedProblem>(p).num_labels();
        }
    }

    std::vector<int> on_reveal(const View& view, Rng& rng) override {
        size_t arity = 1;
        if (!rooted_) arity = static_cast<size_t>(view.find(view.current)->degree);
        std::vector<int> out;
        for (size_t i = 0; i < arity; ++i)
            out.push_back(static_cast<int>(uniform_below(rng, static_cast<uint64_t>(num_labels_))));
        return out;
    }

private:
    bool rooted_ = true;
    int num_labels_ = 1;
};

class CommitVictim : public OnlineAlgorithm {
public:
    CommitVictim(RootedProblem p, std::vector<LabelId> commits, int prefix_len)
        : p_(std::move(p)), commits_(std::move(commits)), prefix_len_(prefix_len) {
        if (commits_.empty()) throw std::invalid_argument("commit victim needs at least one label");
    }

    std::vector<int> on_reveal(const View& view, Rng&) override {
        ++step_;
        if (step_ <= prefix_len_)
            return {commits_[static_cast<size_t>((step_ - 1) % static_cast<int>(commits_.size()))]};
        if (!planned_) plan_completion(view);
        auto it = plan_.find(view.current);
        if (it != plan_.end()) return {it->second};
        return {0};  // no valid completion exists; emit something checkable
    }

private:
    void plan_completion(const View& view) {
        planned_ = true;
        auto comp = component_from_view_rooted(view, view.current);
        // Pin every label already emitted (the committed prefix).
        std::vector<LabelSet> allowed(comp.ids.size());
        LabelSet everything;
        for (LabelId l = 0; l < p_.num_labels(); ++l) everything.push_back(l);
        for (size_t i = 0; i < comp.ids.size(); ++i) {
            const ViewNode* nd = view.find(comp.ids[i]);
            if (nd && nd->output.size() == 1) allowed[i] = {nd->output[0]};
            else allowed[i] = everything;
        }
        auto sol = solve_offline_rooted(comp.tree, p_, &allowed);
        if (!sol) return;  // fall back to constant output
        for (size_t i = 0; i < comp.ids.size(); ++i) plan_[comp.ids[i]] = (*sol)[i];
    }

    const RootedProblem p_;
    std::vector<LabelId> commits_;
    int prefix_len_;
    int step_ = 0;
    bool planned_ = false;
    std::map<int, int> plan_;
};

}  // namespace

std::unique_ptr<OnlineAlgorithm> make_offline_oracle(const Problem& p) {
    return std::make_unique<OfflineOracle>(p);
}

std::unique_ptr<OnlineAlgorithm> make_uniform_random(const Problem& p) {
    return std::make_unique<UniformRandom>(p);
}

std::unique_ptr<OnlineAlgorithm> make_commit_victim(const RootedProblem& p,
                                                    std::vector<LabelId> commit_labels,
                                                    int prefix_len) {
    return std::make_unique<CommitVictim>(p, std::move(commit_labels), prefix_len);
}

namespace {

// Auto-selection of victim commit labels from the problem structure.
std::vector<LabelId> pick_victim_labels(const std::string& name, const RootedProblem& p) {
    LabelSet trimmed = trim_rooted(p, p.all_labels());
    if (name == "outside-trim-victim") {
        for (LabelId l : p.all_labels())
            if (!contains(trimmed, l)) return {l};
        throw std::invalid_argument("no label outside trim(Sigma); pass --commit explicitly");
    }
    Automaton a = build_automaton_rooted(p, trimmed);
    auto infos = analyze_components(a);
    if (name == "parity-victim") {
        for (const auto& info : infos)
            if (info.period && *info.period >= 2)
                return {a.label_states[static_cast<size_t>(info.states.front())]};
        throw std::invalid_argument("no inflexible component in trim(Sigma); pass --commit explicitly");
    }
    // split-scc-victim: two labels from different components
    if (infos.size() >= 2)
        return {a.label_states[static_cast<size_t>(infos[0].states.front())],
                a.label_states[static_cast<size_t>(infos[1].states.front())]};
    throw std::invalid_argument("automaton has a single component; pass --commit explicitly");
}

}  // namespace

std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name, const Problem& p,
                                                const RunInfo& info,
                                                std::vector<LabelId> commit_labels) {
    if (name == "offline-oracle") return make_offline_oracle(p);
    if (name == "random") return make_uniform_random(p);
    bool victim = name == "commit-victim" || name == "parity-victim" ||
                  name == "outside-trim-victim" || name == "split-scc-victim";
    if (!victim) throw std::invalid_argument("unknown algorithm \"" + name + "\"");
    if (!std::holds_alternative<RootedProblem>(p))
        throw std::invalid_argument("commit victims are defined for rooted problems");
    const auto& rp = std::get<RootedProblem>(p);
    if (commit_labels.empty()) {
        if (name == "commit-victim") commit_labels = {0};
        else commit_labels = pick_victim_labels(name, rp);
    }
    return make_commit_victim(rp, std::move(commit_labels), info.u_prefix_len);
}

}  // namespace lcl
