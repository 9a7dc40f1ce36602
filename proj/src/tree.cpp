#include "lcl/tree.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace lcl {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::vector<int>> Tree::children_lists() const {
    std::vector<std::vector<int>> ch(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v)
        if (parent[static_cast<size_t>(v)] >= 0) ch[static_cast<size_t>(parent[static_cast<size_t>(v)])].push_back(v);
    return ch;
}

std::vector<std::vector<int>> Tree::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        int p = parent[static_cast<size_t>(v)];
        if (p >= 0) {
            adj[static_cast<size_t>(v)].push_back(p);
            adj[static_cast<size_t>(p)].push_back(v);
        }
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

std::vector<int> Tree::roots() const {
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (parent[static_cast<size_t>(v)] < 0) out.push_back(v);
    return out;
}

std::vector<int> Tree::depths() const {
    std::vector<int> d(static_cast<size_t>(n), -1);
    auto ch = children_lists();
    std::queue<int> q;
    for (int r : roots()) {
        d[static_cast<size_t>(r)] = 0;
        q.push(r);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int c : ch[static_cast<size_t>(v)]) {
            d[static_cast<size_t>(c)] = d[static_cast<size_t>(v)] + 1;
            q.push(c);
        }
    }
    return d;
}

std::vector<CorePath> core_paths(const Tree& g) {
    if (g.core_path.empty()) return {};
    int max_id = -1;
    for (int v = 0; v < g.n; ++v) max_id = std::max(max_id, g.core_path[static_cast<size_t>(v)]);
    if (max_id < 0) return {};
    std::vector<CorePath> paths(static_cast<size_t>(max_id) + 1);
    auto depth = g.depths();
    for (int v = 0; v < g.n; ++v) {
        int id = g.core_path[static_cast<size_t>(v)];
        if (id < 0) continue;
        paths[static_cast<size_t>(id)].id = id;
        paths[static_cast<size_t>(id)].layer = g.layer_of(v);
        paths[static_cast<size_t>(id)].nodes.push_back(v);
    }
    for (auto& p : paths)
        std::sort(p.nodes.begin(), p.nodes.end(), [&](int a, int b) {
            return depth[static_cast<size_t>(a)] < depth[static_cast<size_t>(b)];
        });
    // P_i: the layer's path whose head sits nearest the construction root.
    std::map<int, int> best_depth;
    for (const auto& p : paths) {
        int d = depth[static_cast<size_t>(p.nodes.front())];
        auto it = best_depth.find(p.layer);
        if (it == best_depth.end() || d < it->second) best_depth[p.layer] = d;
    }
    for (auto& p : paths)
        p.is_main = depth[static_cast<size_t>(p.nodes.front())] == best_depth[p.layer];
    return paths;
}

std::vector<int> ball(const std::vector<std::vector<int>>& adj, int v, long radius) {
    std::vector<int> out{v};
    if (radius <= 0) return out;
    std::vector<long> dist(adj.size(), -1);
    dist[static_cast<size_t>(v)] = 0;
    std::queue<int> q;
    q.push(v);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (dist[static_cast<size_t>(u)] == radius) continue;
        for (int w : adj[static_cast<size_t>(u)]) {
            if (dist[static_cast<size_t>(w)] != -1) continue;
            dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
            out.push_back(w);
            q.push(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string layer_string(const Tree& g, int v) {
    switch (g.kind_of(v)) {
        case LayerKind::R: return "R:" + std::to_string(g.layer_of(v));
        case LayerKind::C: return "C:" + std::to_string(g.layer_of(v));
        default: return "";
    }
}

ordered_json params_json(const LbParams& p) {
    ordered_json j;
    j["kind"] = p.kind;
    j["delta"] = p.delta;
    if (p.beta) j["beta"] = p.beta;
    if (p.gamma) j["gamma"] = p.gamma;
    if (p.k) j["k"] = p.k;
    if (p.t) j["t"] = p.t;
    if (p.d) j["d"] = p.d;
    if (p.sigma_size) j["sigma"] = p.sigma_size;
    return j;
}

}  // namespace

std::string tree_to_json(const Tree& g) {
    ordered_json j;
    j["kind"] = g.rooted ? "rooted" : "unrooted";
    j["n"] = g.n;
    if (g.rooted) {
        j["parent"] = g.parent;
    } else {
        ordered_json edges = ordered_json::array();
        for (int v = 0; v < g.n; ++v)
            if (g.parent[static_cast<size_t>(v)] >= 0)
                edges.push_back({g.parent[static_cast<size_t>(v)], v});
        j["edges"] = std::move(edges);
    }
    ordered_json ann;
    if (!g.layer_kind.empty()) {
        ordered_json layers = ordered_json::array();
        for (int v = 0; v < g.n; ++v) layers.push_back(layer_string(g, v));
        ann["layer"] = std::move(layers);
    }
    if (!g.core_path.empty()) ann["core_path"] = g.core_path;
    if (!g.chunk.empty()) ann["chunk"] = g.chunk;
    j["annotations"] = std::move(ann);
    if (!g.merged.empty()) {
        ordered_json merged = ordered_json::array();
        for (auto [node, chunk] : g.merged) merged.push_back({node, chunk});
        j["merged"] = std::move(merged);
    }
    if (!g.params.kind.empty()) j["params"] = params_json(g.params);
    return j.dump() + "\n";
}

Tree tree_from_json(const std::string& text) {
    json j = json::parse(text);
    Tree g;
    std::string kind = j.at("kind").get<std::string>();
    g.rooted = kind == "rooted";
    if (!g.rooted && kind != "unrooted") throw std::runtime_error("tree kind must be rooted|unrooted");
    g.n = j.at("n").get<int>();
    if (g.rooted) {
        g.parent = j.at("parent").get<std::vector<int>>();
        if (static_cast<int>(g.parent.size()) != g.n) throw std::runtime_error("parent array size mismatch");
    } else {
        // Orientation in the file is not trusted; rebuild parents by BFS.
        std::vector<std::vector<int>> adj(static_cast<size_t>(g.n));
        for (const auto& e : j.at("edges")) {
            int a = e.at(0).get<int>(), b = e.at(1).get<int>();
            adj[static_cast<size_t>(a)].push_back(b);
            adj[static_cast<size_t>(b)].push_back(a);
        }
        g.parent.assign(static_cast<size_t>(g.n), -2);
        for (int start = 0; start < g.n; ++start) {
            if (g.parent[static_cast<size_t>(start)] != -2) continue;
            g.parent[static_cast<size_t>(start)] = -1;
            std::queue<int> q;
            q.push(start);
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int w : adj[static_cast<size_t>(v)]) {
                    if (g.parent[static_cast<size_t>(w)] != -2) continue;
                    g.parent[static_cast<size_t>(w)] = v;
                    q.push(w);
                }
            }
        }
    }
    if (j.contains("annotations")) {
        const auto& ann = j["annotations"];
        if (ann.contains("layer")) {
            g.layer_kind.assign(static_cast<size_t>(g.n), static_cast<int8_t>(LayerKind::None));
            g.layer_index.assign(static_cast<size_t>(g.n), 0);
            int v = 0;
            for (const auto& entry : ann["layer"]) {
                std::string s = entry.get<std::string>();
                if (!s.empty()) {
                    g.layer_kind[static_cast<size_t>(v)] =
                        static_cast<int8_t>(s[0] == 'R' ? LayerKind::R : LayerKind::C);
                    g.layer_index[static_cast<size_t>(v)] = static_cast<int16_t>(std::stoi(s.substr(2)));
                }
                ++v;
            }
        }
        if (ann.contains("core_path")) g.core_path = ann["core_path"].get<std::vector<int32_t>>();
        if (ann.contains("chunk")) g.chunk = ann["chunk"].get<std::vector<int32_t>>();
    }
    if (j.contains("merged"))
        for (const auto& e : j["merged"]) g.merged.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    if (j.contains("params")) {
        const auto& p = j["params"];
        g.params.kind = p.value("kind", "");
        g.params.delta = p.value("delta", 0);
        g.params.beta = p.value("beta", 0);
        g.params.gamma = p.value("gamma", 0);
        g.params.k = p.value("k", 0);
        g.params.t = p.value("t", 0);
        g.params.d = p.value("d", 0);
        g.params.sigma_size = p.value("sigma", 0);
    }
    return g;
}

}  // namespace lcl
