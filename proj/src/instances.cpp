#include "lcl/instances.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "lcl/rng.hpp"

namespace lcl {

namespace {

int64_t ipow(int64_t base, int exp) {
    int64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

[[noreturn]] void bad_param(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

int64_t complete_tree_size(int delta, int depth, TreeKind kind) {
    int64_t total = 0, width = 1;
    for (int level = 0; level <= depth; ++level) {
        total += width;
        if (level == 0) {
            switch (kind) {
                case TreeKind::DeltaAry: width = delta; break;
                case TreeKind::T: width = delta - 1; break;
                case TreeKind::TStar: width = delta; break;
            }
        } else {
            width *= kind == TreeKind::DeltaAry ? delta : delta - 1;
        }
    }
    return total;
}

Tree complete_tree(int delta, int depth, TreeKind kind) {
    if (depth < 0) bad_param("depth must be >= 0");
    if (kind == TreeKind::DeltaAry && delta < 1) bad_param("delta must be >= 1");
    if (kind != TreeKind::DeltaAry && delta < 2) bad_param("delta must be >= 2 for T/T*");
    Tree g;
    g.rooted = kind == TreeKind::DeltaAry;
    g.params.kind = "complete-tree";
    g.params.delta = delta;
    int root = g.add_node(-1);
    std::queue<std::pair<int, int>> q;  // (node, level)
    q.emplace(root, 0);
    while (!q.empty()) {
        auto [v, level] = q.front();
        q.pop();
        if (level == depth) continue;
        int kids;
        if (kind == TreeKind::DeltaAry) kids = delta;
        else if (level == 0) kids = kind == TreeKind::TStar ? delta : delta - 1;
        else kids = delta - 1;
        for (int i = 0; i < kids; ++i) q.emplace(g.add_node(v), level + 1);
    }
    return g;
}

int64_t chunk_instance_node_count(int sigma_size, int delta, int d, int b) {
    int64_t tree_size = (ipow(delta, 2 * d + 1) - 1) / (delta - 1);
    int64_t full = (sigma_size + 1) * ipow(delta, d + 1) * tree_size;
    return b == 0 ? full - ipow(delta, d) : full;
}

int64_t chunk_choice_count(int sigma_size, int delta, int d) {
    return 2ll * sigma_size * (sigma_size + 1) * ipow(delta, 2 * d + 1);
}

namespace {

void validate_chunk_params(int sigma_size, int delta, int d) {
    if (sigma_size < 1) bad_param("sigma size must be >= 1");
    if (delta < 2) bad_param("delta must be >= 2");
    if (d < 1) bad_param("d must be >= 1");
    if (ipow(delta, d) <= 2ll * sigma_size)
        bad_param("depth parameter too small: need delta^d > 2*|Sigma|");
}

}  // namespace

ChunkInstance build_chunk_instance(int sigma_size, int delta, int d, const Choice& choice) {
    validate_chunk_params(sigma_size, delta, d);
    if (choice.b != 0 && choice.b != 1) bad_param("b must be 0 or 1");

    int num_chunks = sigma_size + 1;
    int64_t trees_per_chunk = ipow(delta, d + 1);
    int64_t tree_size = (ipow(delta, 2 * d + 1) - 1) / (delta - 1);
    int64_t mid_per_tree = ipow(delta, d);
    int64_t level_d_start = (ipow(delta, d) - 1) / (delta - 1);
    int64_t level_2d_start = (ipow(delta, 2 * d) - 1) / (delta - 1);
    int64_t total_mid = num_chunks * trees_per_chunk * mid_per_tree;

    if (choice.u < 0 || choice.u >= total_mid) bad_param("u is not a middle-node index");
    if (choice.chunk < 0 || choice.chunk >= num_chunks) bad_param("chunk out of range");

    int64_t u_tree_global = choice.u / mid_per_tree;  // tree index across all chunks
    int u_chunk = static_cast<int>(u_tree_global / trees_per_chunk);
    int64_t u_pos = choice.u % mid_per_tree;          // middle-node position within its tree
    if (u_chunk == choice.chunk) bad_param("u must lie outside chunk C");

    // Block layout: tree j of chunk c starts at base(c,j); chunk-C trees lose
    // their root when b=0 (the root is identified with a leaf descendant of u).
    auto rootless = [&](int c, int64_t j) {
        return choice.b == 0 && c == choice.chunk && j < mid_per_tree;
    };
    std::vector<int64_t> base(static_cast<size_t>(num_chunks * trees_per_chunk));
    int64_t offset = 0;
    for (int c = 0; c < num_chunks; ++c)
        for (int64_t j = 0; j < trees_per_chunk; ++j) {
            base[static_cast<size_t>(c * trees_per_chunk + j)] = offset;
            offset += rootless(c, j) ? tree_size - 1 : tree_size;
        }

    // Leaf descendants of u sit at a contiguous arithmetic range of its tree.
    int64_t u_base = base[static_cast<size_t>(u_tree_global)];
    auto u_leaf = [&](int64_t idx) {
        return static_cast<int>(u_base + level_2d_start + u_pos * ipow(delta, d) + idx);
    };

    ChunkInstance inst;
    inst.sigma_size = sigma_size;
    inst.delta = delta;
    inst.d = d;
    inst.choice = choice;
    Tree& g = inst.tree;
    g.rooted = true;
    g.n = static_cast<int>(offset);
    g.parent.assign(static_cast<size_t>(g.n), -1);
    g.chunk.assign(static_cast<size_t>(g.n), -1);
    g.params.kind = "chunks";
    g.params.delta = delta;
    g.params.d = d;
    g.params.sigma_size = sigma_size;

    for (int c = 0; c < num_chunks; ++c) {
        for (int64_t j = 0; j < trees_per_chunk; ++j) {
            int64_t start = base[static_cast<size_t>(c * trees_per_chunk + j)];
            if (rootless(c, j)) {
                // Nodes are BFS indices 1..tree_size-1 of the original tree.
                for (int64_t i = 1; i < tree_size; ++i) {
                    int64_t pi = (i - 1) / delta;
                    g.parent[static_cast<size_t>(start + i - 1)] =
                        pi == 0 ? u_leaf(j) : static_cast<int>(start + pi - 1);
                    g.chunk[static_cast<size_t>(start + i - 1)] = static_cast<int32_t>(c);
                }
            } else {
                for (int64_t i = 0; i < tree_size; ++i) {
                    g.parent[static_cast<size_t>(start + i)] =
                        i == 0 ? -1 : static_cast<int>(start + (i - 1) / delta);
                    g.chunk[static_cast<size_t>(start + i)] = static_cast<int32_t>(c);
                }
                if (choice.b == 1 && c == choice.chunk && j < trees_per_chunk) {
                    // First delta^{d+1} trees hang under u's leaf descendants,
                    // delta per leaf, in tree order.
                    g.parent[static_cast<size_t>(start)] = u_leaf(j / delta);
                }
            }
            // Middle nodes, canonical (BFS) order within the tree.
            int64_t mid_start = rootless(c, j) ? start + level_d_start - 1 : start + level_d_start;
            for (int64_t m = 0; m < mid_per_tree; ++m)
                inst.middle_nodes.push_back(static_cast<int>(mid_start + m));
        }
    }
    if (choice.b == 0)
        for (int64_t j = 0; j < mid_per_tree; ++j)
            g.merged.emplace_back(u_leaf(j), choice.chunk);
    return inst;
}

std::vector<Choice> enumerate_choices(int sigma_size, int delta, int d) {
    validate_chunk_params(sigma_size, delta, d);
    int num_chunks = sigma_size + 1;
    int64_t trees_per_chunk = ipow(delta, d + 1);
    int64_t mid_per_tree = ipow(delta, d);
    int64_t total_mid = num_chunks * trees_per_chunk * mid_per_tree;
    std::vector<Choice> out;
    out.reserve(static_cast<size_t>(chunk_choice_count(sigma_size, delta, d)));
    for (int b = 0; b <= 1; ++b)
        for (int64_t u = 0; u < total_mid; ++u) {
            int u_chunk = static_cast<int>(u / (trees_per_chunk * mid_per_tree));
            for (int c = 0; c < num_chunks; ++c)
                if (c != u_chunk) out.push_back({b, static_cast<int>(u), c});
        }
    return out;
}

namespace {

struct RootedLbBuilder {
    Tree& g;
    int delta, beta, k, t, s;
    int next_path_id = 0;

    int add(int parent, LayerKind kind, int layer, int path = -1) {
        int v = g.add_node(parent);
        g.layer_kind.push_back(static_cast<int8_t>(kind));
        g.layer_index.push_back(static_cast<int16_t>(layer));
        g.core_path.push_back(path);
        return v;
    }

    // Complete Delta-ary tree of depth beta; returns (root, leaves).
    std::pair<int, std::vector<int>> emit_tbeta(int parent, int layer) {
        int root = add(parent, LayerKind::R, layer);
        std::vector<int> frontier{root};
        for (int level = 0; level < beta; ++level) {
            std::vector<int> next;
            for (int v : frontier)
                for (int i = 0; i < delta; ++i) next.push_back(add(v, LayerKind::R, layer));
            frontier = std::move(next);
        }
        return {root, std::move(frontier)};
    }

    int emit_gr(int i, int parent) {
        auto [root, leaves] = emit_tbeta(parent, i);
        if (i >= 2)
            for (int leaf : leaves)
                for (int c = 0; c < delta; ++c) emit_gc(i - 1, leaf, true);
        return root;
    }

    // Core path v_1..v_s with Delta-1 copies of G_{R,i} under each node;
    // standalone versions get one more copy under v_s. Returns (v_1, v_s).
    std::pair<int, int> emit_gc(int i, int parent, bool standalone) {
        int path_id = next_path_id++;
        int prev = parent, v1 = -1, vs = -1;
        for (int j = 0; j < s; ++j) {
            int v = add(prev, LayerKind::C, i, path_id);
            if (j == 0) v1 = v;
            vs = v;
            for (int c = 0; c < delta - 1; ++c) emit_gr(i, v);
            prev = v;
        }
        if (standalone) emit_gr(i, vs);
        return {v1, vs};
    }

    void build() {
        int tail = -1;
        for (int i = 1; i <= k; ++i) tail = emit_gc(i, tail, false).second;
        emit_gr(k + 1, tail);
    }
};

struct UnrootedLbBuilder {
    Tree& g;
    int delta, gamma, k, t, s;
    int next_path_id = 0;

    int add(int parent, LayerKind kind, int layer, int path = -1) {
        int v = g.add_node(parent);
        g.layer_kind.push_back(static_cast<int8_t>(kind));
        g.layer_index.push_back(static_cast<int16_t>(layer));
        g.core_path.push_back(path);
        return v;
    }

    // T_gamma (star: T_gamma^*); as a part, the root has delta-1 children
    // (delta with star) and other internal nodes delta-1 each.
    std::pair<int, std::vector<int>> emit_t(int parent, int layer, bool star) {
        int root = add(parent, LayerKind::R, layer);
        std::vector<int> frontier{root};
        for (int level = 0; level < gamma; ++level) {
            int kids = level == 0 ? (star ? delta : delta - 1) : delta - 1;
            std::vector<int> next;
            for (int v : frontier)
                for (int i = 0; i < kids; ++i) next.push_back(add(v, LayerKind::R, layer));
            frontier = std::move(next);
        }
        return {root, std::move(frontier)};
    }

    int emit_gr(int i, int parent, bool star) {
        auto [root, leaves] = emit_t(parent, i, star);
        if (i >= 2)
            for (int leaf : leaves)
                for (int c = 0; c < delta - 1; ++c) emit_gc(i - 1, leaf);
        return root;
    }

    void emit_gc(int i, int parent) {
        int path_id = next_path_id++;
        int prev = parent;
        for (int j = 0; j < s; ++j) {
            int v = add(prev, LayerKind::C, i, path_id);
            int copies = j == s - 1 ? delta - 1 : delta - 2;
            for (int c = 0; c < copies; ++c) emit_gr(i, v, false);
            prev = v;
        }
    }

    void build() { emit_gr(k + 1, -1, true); }
};

}  // namespace

Tree build_lb_rooted(int delta, int beta, int k, int t) {
    if (delta < 2) bad_param("delta must be >= 2");
    if (beta < 1) bad_param("beta must be >= 1");
    if (k < 1) bad_param("k must be >= 1");
    if (t < 1) bad_param("t must be >= 1");
    Tree g;
    g.rooted = true;
    g.params = {"rooted-lb", delta, beta, 0, k, t, 0, 0};
    RootedLbBuilder builder{g, delta, beta, k, t, 4 * t + 4};
    builder.build();
    return g;
}

Tree build_lb_unrooted(int delta, int gamma, int k, int t) {
    if (delta < 3) bad_param("delta must be >= 3 for the unrooted construction");
    if (gamma < 1) bad_param("gamma must be >= 1");
    if (k < 1) bad_param("k must be >= 1");
    if (t < 1) bad_param("t must be >= 1");
    Tree g;
    g.rooted = false;
    g.params = {"unrooted-lb", delta, 0, gamma, k, t, 0, 0};
    UnrootedLbBuilder builder{g, delta, gamma, k, t, 4 * t + 4};
    builder.build();
    return g;
}

namespace {

std::vector<int> bfs_remaining(const Tree& g, const std::vector<char>& taken) {
    std::vector<int> out;
    auto ch = g.children_lists();
    std::queue<int> q;
    for (int r : g.roots()) q.push(r);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (!taken[static_cast<size_t>(v)]) out.push_back(v);
        for (int c : ch[static_cast<size_t>(v)]) q.push(c);
    }
    return out;
}

Schedule sample_schedule_impl(const Tree& g, int t, uint64_t seed) {
    if (g.params.t != t) bad_param("schedule t does not match the instance");
    int s = 4 * t + 4;
    auto paths = core_paths(g);
    if (paths.empty()) bad_param("instance has no core paths");
    int k = 0;
    for (const auto& p : paths) {
        if (static_cast<int>(p.nodes.size()) != s) bad_param("core path length != 4t+4");
        k = std::max(k, p.layer);
    }

    Schedule sched;
    sched.seed = seed;
    std::vector<char> taken(static_cast<size_t>(g.n), 0);
    for (int layer = 1; layer <= k; ++layer) {
        std::vector<int> us, ds, pids;
        for (const auto& p : paths) {
            if (p.layer != layer) continue;
            Rng rng = make_rng(seed, "dist", static_cast<uint64_t>(p.id));
            int d = 2 * t + 1 + (coin(rng) ? 1 : 0);
            if (d < 2 * t + 1 || s - 1 - d < 2 * t + 1)
                throw std::logic_error("u-node too close to a core-path end");
            int u = p.nodes[static_cast<size_t>(d)];
            us.push_back(u);
            ds.push_back(d);
            pids.push_back(p.id);
            taken[static_cast<size_t>(u)] = 1;
        }
        // One uniform permutation per layer, applied to consistently ordered
        // (u, d, path) triples.
        std::vector<size_t> perm(us.size());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        Rng prng = make_rng(seed, "perm", static_cast<uint64_t>(layer));
        shuffle_vec(perm, prng);
        std::vector<int> us2, ds2, pids2;
        for (size_t i : perm) {
            us2.push_back(us[i]);
            ds2.push_back(ds[i]);
            pids2.push_back(pids[i]);
            sched.order.push_back(us[i]);
        }
        sched.u_nodes.push_back(std::move(us2));
        sched.d_samples.push_back(std::move(ds2));
        sched.u_paths.push_back(std::move(pids2));
    }
    for (int v : bfs_remaining(g, taken)) sched.order.push_back(v);
    return sched;
}

}  // namespace

Schedule sample_schedule_rooted(const Tree& g, int t, uint64_t seed) {
    if (!g.rooted || g.params.kind != "rooted-lb") bad_param("expected a rooted lower-bound instance");
    return sample_schedule_impl(g, t, seed);
}

Schedule sample_schedule_unrooted(const Tree& g, int t, uint64_t seed) {
    if (g.rooted || g.params.kind != "unrooted-lb") bad_param("expected an unrooted lower-bound instance");
    return sample_schedule_impl(g, t, seed);
}

Schedule chunk_schedule(const ChunkInstance& inst) {
    Schedule sched;
    sched.seed = 0;
    std::vector<char> taken(static_cast<size_t>(inst.tree.n), 0);
    for (int m : inst.middle_nodes) {
        sched.order.push_back(m);
        taken[static_cast<size_t>(m)] = 1;
    }
    for (int v : bfs_remaining(inst.tree, taken)) sched.order.push_back(v);
    return sched;
}

namespace {

// Largest h such that the full Delta-ary tree of depth h hangs below v.
std::vector<int> complete_below(const Tree& g, int delta) {
    auto ch = g.children_lists();
    std::vector<int> cb(static_cast<size_t>(g.n), 0);
    // bottom-up over a BFS order so parent/child id order does not matter
    std::vector<int> order;
    order.reserve(static_cast<size_t>(g.n));
    std::queue<int> q;
    for (int r : g.roots()) q.push(r);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        for (int c : ch[static_cast<size_t>(v)]) q.push(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        const auto& kids = ch[static_cast<size_t>(v)];
        if (static_cast<int>(kids.size()) != delta) continue;
        int m = INT32_MAX;
        for (int c : kids) m = std::min(m, cb[static_cast<size_t>(c)]);
        cb[static_cast<size_t>(v)] = m + 1;
    }
    return cb;
}

std::vector<int> descendants_within(const std::vector<std::vector<int>>& ch, int v, int radius) {
    std::vector<int> out{v};
    std::vector<std::pair<int, int>> stack{{v, 0}};
    while (!stack.empty()) {
        auto [u, d] = stack.back();
        stack.pop_back();
        if (d == radius) continue;
        for (int c : ch[static_cast<size_t>(u)]) {
            out.push_back(c);
            stack.emplace_back(c, d + 1);
        }
    }
    return out;
}

NodeSubsets node_subsets_rooted(const Tree& g, const Schedule& sched) {
    int beta = g.params.beta, k = g.params.k;
    auto ch = g.children_lists();
    auto cb = complete_below(g, g.params.delta);
    auto paths = core_paths(g);
    std::map<int, const CorePath*> path_by_id;
    for (const auto& p : paths) path_by_id[p.id] = &p;

    auto layer_rank = [&](int v) {
        // (R,1)=0, (C,1)=1, (R,2)=2, ...
        return 2 * (g.layer_of(v) - 1) + (g.kind_of(v) == LayerKind::C ? 1 : 0);
    };

    NodeSubsets out;
    out.r_sets.resize(static_cast<size_t>(k) + 1);
    out.c_sets.resize(static_cast<size_t>(k));

    // S'_{R,1}
    std::vector<char> sr(static_cast<size_t>(g.n), 0);
    for (int v = 0; v < g.n; ++v) sr[static_cast<size_t>(v)] = cb[static_cast<size_t>(v)] >= beta;
    out.r_sets[0] = sr;

    for (int i = 1; i <= k; ++i) {
        // S'_{C,i}
        std::vector<char> sc(static_cast<size_t>(g.n), 0);
        int rank_ci = 2 * (i - 1) + 1;
        for (int v = 0; v < g.n; ++v)
            if (layer_rank(v) > rank_ci) sc[static_cast<size_t>(v)] = 1;
        for (size_t l = 0; l < sched.u_nodes[static_cast<size_t>(i) - 1].size(); ++l) {
            int u = sched.u_nodes[static_cast<size_t>(i) - 1][l];
            const CorePath* p = path_by_id.at(sched.u_paths[static_cast<size_t>(i) - 1][l]);
            size_t pos = static_cast<size_t>(
                std::find(p->nodes.begin(), p->nodes.end(), u) - p->nodes.begin());
            if (p->is_main) {
                // u^i_0 and its layer-(C,i) descendants along P_i
                for (size_t j = pos; j < p->nodes.size(); ++j) sc[static_cast<size_t>(p->nodes[j])] = 1;
            } else {
                // u^i_l and its layer-(C,i) ancestors along Q^i_l
                for (size_t j = 0; j <= pos; ++j) sc[static_cast<size_t>(p->nodes[j])] = 1;
            }
        }
        out.c_sets[static_cast<size_t>(i) - 1] = sc;

        // S'_{R,i+1}
        std::vector<char> next(static_cast<size_t>(g.n), 0);
        for (int v = 0; v < g.n; ++v) {
            if (cb[static_cast<size_t>(v)] < beta) continue;
            bool ok = true;
            for (int w : descendants_within(ch, v, beta))
                if (!sc[static_cast<size_t>(w)]) {
                    ok = false;
                    break;
                }
            next[static_cast<size_t>(v)] = ok;
        }
        out.r_sets[static_cast<size_t>(i)] = next;
    }
    return out;
}

NodeSubsets node_subsets_unrooted(const Tree& g, const Schedule& sched) {
    int gamma = g.params.gamma, k = g.params.k;
    auto adj = g.adjacency();
    auto depth = g.depths();

    // f[v]: every node within distance gamma-1 of v has degree delta
    std::vector<char> f(static_cast<size_t>(g.n), 0);
    for (int v = 0; v < g.n; ++v)
        f[static_cast<size_t>(v)] = static_cast<int>(adj[static_cast<size_t>(v)].size()) == g.params.delta;
    for (int round = 1; round < gamma; ++round) {
        std::vector<char> next(static_cast<size_t>(g.n), 0);
        for (int v = 0; v < g.n; ++v) {
            if (!f[static_cast<size_t>(v)]) continue;
            bool ok = static_cast<int>(adj[static_cast<size_t>(v)].size()) == g.params.delta;
            for (int w : adj[static_cast<size_t>(v)])
                if (!f[static_cast<size_t>(w)]) {
                    ok = false;
                    break;
                }
            next[static_cast<size_t>(v)] = ok;
        }
        f = std::move(next);
    }

    auto path_between = [&](int a, int b, std::vector<char>& mark) {
        int x = a, y = b;
        while (x != y) {
            if (depth[static_cast<size_t>(x)] >= depth[static_cast<size_t>(y)]) {
                mark[static_cast<size_t>(x)] = 1;
                x = g.parent[static_cast<size_t>(x)];
            } else {
                mark[static_cast<size_t>(y)] = 1;
                y = g.parent[static_cast<size_t>(y)];
            }
        }
        mark[static_cast<size_t>(x)] = 1;
    };

    NodeSubsets out;
    out.r_sets.resize(static_cast<size_t>(k) + 1);
    out.c_sets.resize(static_cast<size_t>(k));
    out.r_sets[0] = f;

    for (int i = 1; i <= k; ++i) {
        const auto& u_layer = sched.u_nodes[static_cast<size_t>(i) - 1];
        std::vector<char> sc(static_cast<size_t>(g.n), 0);
        for (int u : u_layer) sc[static_cast<size_t>(u)] = 1;
        for (size_t j = 1; j < u_layer.size(); ++j) path_between(u_layer[0], u_layer[j], sc);
        out.c_sets[static_cast<size_t>(i) - 1] = sc;

        std::vector<char> next(static_cast<size_t>(g.n), 0);
        for (int v = 0; v < g.n; ++v) {
            if (!sc[static_cast<size_t>(v)] || !f[static_cast<size_t>(v)]) continue;
            bool ok = true;
            for (int w : ball(adj, v, gamma))
                if (!sc[static_cast<size_t>(w)]) {
                    ok = false;
                    break;
                }
            next[static_cast<size_t>(v)] = ok;
        }
        out.r_sets[static_cast<size_t>(i)] = next;
    }
    return out;
}

}  // namespace

NodeSubsets node_subsets(const Tree& g, const Schedule& sched) {
    if (g.params.kind == "rooted-lb") return node_subsets_rooted(g, sched);
    if (g.params.kind == "unrooted-lb") return node_subsets_unrooted(g, sched);
    bad_param("node subsets are defined for lower-bound instances");
}

std::pair<Tree, std::vector<int>> skeleton_tree(const Tree& g, int tau) {
    if (tau < 0) bad_param("tau must be >= 0");
    auto adj = g.adjacency();
    std::vector<int> deg(static_cast<size_t>(g.n));
    std::vector<char> alive(static_cast<size_t>(g.n), 1);
    for (int v = 0; v < g.n; ++v) deg[static_cast<size_t>(v)] = static_cast<int>(adj[static_cast<size_t>(v)].size());

    std::vector<int> candidates;
    for (int v = 0; v < g.n; ++v)
        if (deg[static_cast<size_t>(v)] == 1) candidates.push_back(v);
    for (int round = 0; round < tau && !candidates.empty(); ++round) {
        // a candidate may have dropped to degree 0 meanwhile; it stays
        std::vector<int> leaves;
        for (int v : candidates)
            if (alive[static_cast<size_t>(v)] && deg[static_cast<size_t>(v)] == 1) leaves.push_back(v);
        std::vector<int> next;
        for (int v : leaves) alive[static_cast<size_t>(v)] = 0;
        for (int v : leaves)
            for (int w : adj[static_cast<size_t>(v)]) {
                if (!alive[static_cast<size_t>(w)]) continue;
                if (--deg[static_cast<size_t>(w)] == 1) next.push_back(w);
            }
        candidates = std::move(next);
    }

    std::vector<int> psi;
    std::vector<int> new_id(static_cast<size_t>(g.n), -1);
    for (int v = 0; v < g.n; ++v)
        if (alive[static_cast<size_t>(v)]) {
            new_id[static_cast<size_t>(v)] = static_cast<int>(psi.size());
            psi.push_back(v);
        }
    Tree skel;
    skel.rooted = false;
    skel.n = static_cast<int>(psi.size());
    skel.parent.assign(static_cast<size_t>(skel.n), -1);
    // BFS forest over surviving nodes, smallest original id first.
    std::vector<char> seen(static_cast<size_t>(skel.n), 0);
    for (int start = 0; start < skel.n; ++start) {
        if (seen[static_cast<size_t>(start)]) continue;
        seen[static_cast<size_t>(start)] = 1;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[static_cast<size_t>(psi[static_cast<size_t>(v)])]) {
                int nw = new_id[static_cast<size_t>(w)];
                if (nw < 0 || seen[static_cast<size_t>(nw)]) continue;
                seen[static_cast<size_t>(nw)] = 1;
                skel.parent[static_cast<size_t>(nw)] = v;
                q.push(nw);
            }
        }
    }
    return {std::move(skel), std::move(psi)};
}

RulingSetResult path_ruling_set(const Tree& skel, int c) {
    if (c < 1) bad_param("c must be >= 1");
    auto adj = skel.adjacency();
    std::vector<char> kept(static_cast<size_t>(skel.n), 0);
    for (int v = 0; v < skel.n; ++v)
        kept[static_cast<size_t>(v)] = adj[static_cast<size_t>(v)].size() <= 2;

    auto kept_neighbors = [&](int v) {
        std::vector<int> out;
        for (int w : adj[static_cast<size_t>(v)])
            if (kept[static_cast<size_t>(w)]) out.push_back(w);
        return out;
    };

    RulingSetResult result;
    std::vector<char> visited(static_cast<size_t>(skel.n), 0);
    for (int v = 0; v < skel.n; ++v) {
        if (!kept[static_cast<size_t>(v)] || visited[static_cast<size_t>(v)]) continue;
        if (kept_neighbors(v).size() > 1) continue;  // interior; handled from an endpoint
        // Walk the path from its canonical endpoint (smallest id endpoint is
        // reached first by the outer loop).
        std::vector<int> path;
        int prev = -1, cur = v;
        while (cur != -1) {
            visited[static_cast<size_t>(cur)] = 1;
            path.push_back(cur);
            int nxt = -1;
            for (int w : kept_neighbors(cur))
                if (w != prev) {
                    nxt = w;
                    break;
                }
            prev = cur;
            cur = nxt;
        }
        size_t m = path.size();
        std::vector<size_t> ruling_idx;
        for (size_t i = 0; i < m; i += static_cast<size_t>(c) + 1) ruling_idx.push_back(i);
        for (size_t i : ruling_idx) result.ruling.push_back(path[i]);
        for (size_t r = 0; r < ruling_idx.size(); ++r) {
            size_t from = ruling_idx[r] + 1;
            size_t to = r + 1 < ruling_idx.size() ? ruling_idx[r + 1] : m;
            std::vector<int> seg(path.begin() + static_cast<long>(from), path.begin() + static_cast<long>(to));
            if (static_cast<int>(seg.size()) >= c) result.segments.push_back(std::move(seg));
        }
    }
    return result;
}

std::string schedule_to_json(const Schedule& s) {
    nlohmann::ordered_json j;
    j["order"] = s.order;
    j["u_nodes"] = s.u_nodes;
    j["d_samples"] = s.d_samples;
    j["u_paths"] = s.u_paths;
    j["seed"] = std::to_string(s.seed);
    return j.dump() + "\n";
}

Schedule schedule_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Schedule s;
    s.order = j.at("order").get<std::vector<int>>();
    if (j.contains("u_nodes")) s.u_nodes = j["u_nodes"].get<std::vector<std::vector<int>>>();
    if (j.contains("d_samples")) s.d_samples = j["d_samples"].get<std::vector<std::vector<int>>>();
    if (j.contains("u_paths")) s.u_paths = j["u_paths"].get<std::vector<std::vector<int>>>();
    if (j.contains("seed")) s.seed = std::stoull(j["seed"].get<std::string>());
    return s;
}

}  // namespace lcl
