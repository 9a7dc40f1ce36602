#include "lcl/automaton.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace lcl {

Automaton build_automaton_rooted(const RootedProblem& p, const LabelSet& allowed) {
    Automaton a;
    a.rooted = true;
    a.label_states = allowed;
    a.adj.assign(allowed.size(), {});
    RootedProblem r = restrict_rooted(p, allowed);

    std::vector<int> index_of(p.labels.size(), -1);
    for (size_t i = 0; i < allowed.size(); ++i) index_of[static_cast<size_t>(allowed[i])] = static_cast<int>(i);

    for (const auto& rule : r.rules) {
        int from = index_of[static_cast<size_t>(rule.parent)];
        for (LabelId c : rule.children) a.adj[static_cast<size_t>(from)].push_back(index_of[static_cast<size_t>(c)]);
    }
    for (auto& row : a.adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    std::ostringstream os;
    os << "rooted restriction to " << allowed.size() << "/" << p.labels.size() << " labels";
    a.origin = os.str();
    return a;
}

Automaton build_automaton_unrooted(const UnrootedProblem& p, const ConfigSet& allowed_configs) {
    Automaton a;
    a.rooted = false;
    for (LabelId x = 0; x < p.num_labels(); ++x) {
        for (LabelId y = 0; y < p.num_labels(); ++y) {
            Config pair = {std::min(x, y), std::max(x, y)};
            bool present = false;
            for (const auto& c : allowed_configs)
                if (is_submultiset(pair, c)) {
                    present = true;
                    break;
                }
            if (present) a.pair_states.emplace_back(x, y);
        }
    }
    a.adj.assign(a.pair_states.size(), {});
    for (size_t i = 0; i < a.pair_states.size(); ++i) {
        for (size_t j = 0; j < a.pair_states.size(); ++j) {
            // (x1,x2) -> (y1,y2) iff {x2,y1} is an allowed edge pair
            if (p.edge_allowed(a.pair_states[i].second, a.pair_states[j].first))
                a.adj[i].push_back(static_cast<int>(j));
        }
    }
    std::ostringstream os;
    os << "unrooted restriction to " << allowed_configs.size() << "/" << p.node_configs.size()
       << " node configurations";
    a.origin = os.str();
    return a;
}

namespace {

// Iterative Tarjan.
struct SccState {
    const Automaton& a;
    std::vector<int> index, low, on_stack;
    std::vector<int> stack;
    int counter = 0;
    std::vector<std::vector<int>> comps;

    explicit SccState(const Automaton& a_) : a(a_) {
        index.assign(static_cast<size_t>(a.size()), -1);
        low.assign(static_cast<size_t>(a.size()), 0);
        on_stack.assign(static_cast<size_t>(a.size()), 0);
    }

    void run(int root) {
        struct Frame {
            int v;
            size_t edge;
        };
        std::vector<Frame> frames{{root, 0}};
        index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<size_t>(root)] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& edges = a.adj[static_cast<size_t>(f.v)];
            if (f.edge < edges.size()) {
                int w = edges[f.edge++];
                if (index[static_cast<size_t>(w)] == -1) {
                    index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<size_t>(w)] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<size_t>(w)]) {
                    low[static_cast<size_t>(f.v)] = std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
                }
            } else {
                if (low[static_cast<size_t>(f.v)] == index[static_cast<size_t>(f.v)]) {
                    std::vector<int> comp;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<size_t>(w)] = 0;
                        comp.push_back(w);
                    } while (w != f.v);
                    comps.push_back(std::move(comp));
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<size_t>(frames.back().v)] =
                        std::min(low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
            }
        }
    }
};

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const Automaton& a) {
    SccState s(a);
    for (int v = 0; v < a.size(); ++v)
        if (s.index[static_cast<size_t>(v)] == -1) s.run(v);
    for (auto& c : s.comps) std::sort(c.begin(), c.end());
    std::sort(s.comps.begin(), s.comps.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return s.comps;
}

std::optional<int> component_period(const Automaton& a, const std::vector<int>& comp) {
    std::vector<int> in_comp(static_cast<size_t>(a.size()), 0);
    for (int v : comp) in_comp[static_cast<size_t>(v)] = 1;

    // BFS layering from comp.front(); period = gcd over intra-component edges
    // (u,v) of level(u)+1-level(v).
    std::vector<int> level(static_cast<size_t>(a.size()), -1);
    std::queue<int> q;
    level[static_cast<size_t>(comp.front())] = 0;
    q.push(comp.front());
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : a.adj[static_cast<size_t>(u)]) {
            if (!in_comp[static_cast<size_t>(v)]) continue;
            if (level[static_cast<size_t>(v)] == -1) {
                level[static_cast<size_t>(v)] = level[static_cast<size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    int g = 0;
    bool any_edge = false;
    for (int u : comp) {
        for (int v : a.adj[static_cast<size_t>(u)]) {
            if (!in_comp[static_cast<size_t>(v)]) continue;
            any_edge = true;
            g = std::gcd(g, std::abs(level[static_cast<size_t>(u)] + 1 - level[static_cast<size_t>(v)]));
        }
    }
    if (!any_edge) return std::nullopt;
    return g;
}

std::vector<ComponentInfo> analyze_components(const Automaton& a) {
    std::vector<ComponentInfo> out;
    for (auto& comp : strongly_connected_components(a)) {
        ComponentInfo info;
        info.period = component_period(a, comp);
        info.flexible = info.period.has_value() && *info.period == 1;
        info.states = std::move(comp);
        out.push_back(std::move(info));
    }
    return out;
}

std::vector<LabelSet> flex_scc_rooted(const RootedProblem& p, const LabelSet& sigma_sub) {
    Automaton a = build_automaton_rooted(p, sigma_sub);
    std::vector<LabelSet> out;
    for (const auto& info : analyze_components(a)) {
        if (!info.flexible) continue;
        LabelSet s;
        for (int idx : info.states) s.push_back(a.label_states[static_cast<size_t>(idx)]);
        out.push_back(sorted_unique(std::move(s)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PairSet> flex_scc_unrooted(const UnrootedProblem& p, const ConfigSet& v_sub) {
    Automaton a = build_automaton_unrooted(p, v_sub);
    auto infos = analyze_components(a);
    std::vector<PairSet> out;
    for (const auto& info : infos) {
        if (!info.flexible) continue;
        PairSet d;
        for (int idx : info.states) {
            auto [x, y] = a.pair_states[static_cast<size_t>(idx)];
            d.push_back(make_pair_config(x, y));
        }
        d = sorted_unique(std::move(d));
        // Lift-back consistency: the preimage of d must be exactly this SCC.
        std::vector<int> lifted;
        for (size_t i = 0; i < a.pair_states.size(); ++i) {
            auto [x, y] = a.pair_states[i];
            if (contains(d, make_pair_config(x, y))) lifted.push_back(static_cast<int>(i));
        }
        if (lifted == info.states) out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string automaton_to_dot(const Automaton& a, const Problem& p) {
    auto name_of = [&](int idx) -> std::string {
        if (a.rooted) {
            const auto& rp = std::get<RootedProblem>(p);
            return "L:" + rp.label_name(a.label_states[static_cast<size_t>(idx)]);
        }
        const auto& up = std::get<UnrootedProblem>(p);
        auto [x, y] = a.pair_states[static_cast<size_t>(idx)];
        return "P:" + up.label_name(x) + "|" + up.label_name(y);
    };
    std::ostringstream os;
    os << "digraph automaton {\n";
    os << "  // " << a.origin << "\n";
    for (int v = 0; v < a.size(); ++v) os << "  \"" << name_of(v) << "\";\n";
    for (int v = 0; v < a.size(); ++v)
        for (int w : a.adj[static_cast<size_t>(v)])
            os << "  \"" << name_of(v) << "\" -> \"" << name_of(w) << "\";\n";
    os << "}\n";
    return os.str();
}

}  // namespace lcl
