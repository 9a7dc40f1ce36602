#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lcl/automaton.hpp"
#include "lcl/problem.hpp"
#include "lcl/rng.hpp"

using namespace lcl;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RootedProblem fixture_rooted(const std::string& name) {
    return std::get<RootedProblem>(parse_problem(read_fixture(name)).problem);
}

UnrootedProblem fixture_unrooted(const std::string& name) {
    return std::get<UnrootedProblem>(parse_problem(read_fixture(name)).problem);
}

// Reachability-by-length: for K = (|comp|+1)^2, every ordered pair must be
// connected by walks of every length in [K, K+|comp|].
bool flexible_by_bruteforce(const Automaton& a, const std::vector<int>& comp) {
    int n = static_cast<int>(comp.size());
    int big = (n + 1) * (n + 1);
    std::vector<int> idx(static_cast<size_t>(a.size()), -1);
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(comp[static_cast<size_t>(i)])] = i;
    std::vector<std::vector<char>> reach(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i) reach[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    auto step = [&](const std::vector<std::vector<char>>& m) {
        std::vector<std::vector<char>> out(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
        for (int u = 0; u < n; ++u)
            for (int w : a.adj[static_cast<size_t>(comp[static_cast<size_t>(u)])]) {
                int wi = idx[static_cast<size_t>(w)];
                if (wi < 0) continue;
                for (int v = 0; v < n; ++v)
                    if (m[static_cast<size_t>(v)][static_cast<size_t>(u)])
                        out[static_cast<size_t>(v)][static_cast<size_t>(wi)] = 1;
            }
        return out;
    };
    std::vector<std::vector<std::vector<char>>> by_len{reach};
    for (int k = 1; k <= big + n; ++k) by_len.push_back(step(by_len.back()));
    for (int k = big; k <= big + n; ++k)
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (!by_len[static_cast<size_t>(k)][static_cast<size_t>(u)][static_cast<size_t>(v)]) return false;
    return true;
}

}  // namespace

TEST_CASE("rooted automaton: 2-coloring") {
    auto p = fixture_rooted("two_coloring_rooted.json");
    Automaton a = build_automaton_rooted(p, p.all_labels());
    REQUIRE(a.size() == 2);
    CHECK(a.adj[0] == std::vector<int>{1});
    CHECK(a.adj[1] == std::vector<int>{0});
}

TEST_CASE("rooted automaton: 3-coloring is complete minus loops") {
    auto p = fixture_rooted("three_coloring_rooted.json");
    Automaton a = build_automaton_rooted(p, p.all_labels());
    REQUIRE(a.size() == 3);
    for (int v = 0; v < 3; ++v) {
        CHECK(a.adj[static_cast<size_t>(v)].size() == 2);
        for (int w : a.adj[static_cast<size_t>(v)]) CHECK(w != v);
    }
}

TEST_CASE("rooted automaton: single label self-loop") {
    auto p = fixture_rooted("single_label_always_valid.json");
    Automaton a = build_automaton_rooted(p, p.all_labels());
    REQUIRE(a.size() == 1);
    CHECK(a.adj[0] == std::vector<int>{0});
}

TEST_CASE("unrooted automaton: sinkless orientation") {
    auto p = fixture_unrooted("sinkless_orientation.json");
    Automaton a = build_automaton_unrooted(p, p.node_configs);
    REQUIRE(a.size() == 4);  // all ordered pairs over {I,O}
    auto idx = [&](LabelId x, LabelId y) {
        for (size_t i = 0; i < a.pair_states.size(); ++i)
            if (a.pair_states[i] == std::make_pair(x, y)) return static_cast<int>(i);
        return -1;
    };
    int io = idx(0, 1), ii = idx(0, 0);
    REQUIRE(io >= 0);
    REQUIRE(ii >= 0);
    // (I,O) has a self-loop: exiting on O and entering on I forms {O,I};
    // (I,I) does not, since {I,I} is no edge configuration
    CHECK(std::find(a.adj[static_cast<size_t>(io)].begin(), a.adj[static_cast<size_t>(io)].end(), io) !=
          a.adj[static_cast<size_t>(io)].end());
    CHECK(std::find(a.adj[static_cast<size_t>(ii)].begin(), a.adj[static_cast<size_t>(ii)].end(), ii) ==
          a.adj[static_cast<size_t>(ii)].end());
}

TEST_CASE("unrooted automaton: empty cases") {
    auto p = fixture_unrooted("sinkless_orientation.json");
    CHECK(build_automaton_unrooted(p, {}).size() == 0);
    UnrootedProblem no_edges = p;
    no_edges.edge_configs.clear();
    Automaton a = build_automaton_unrooted(no_edges, no_edges.node_configs);
    CHECK(a.size() == 4);
    for (const auto& row : a.adj) CHECK(row.empty());
}

TEST_CASE("SCC examples and deterministic order") {
    auto p = fixture_rooted("two_coloring_rooted.json");
    Automaton a = build_automaton_rooted(p, p.all_labels());
    auto comps = strongly_connected_components(a);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0] == std::vector<int>{0, 1});

    Automaton b;
    b.rooted = true;
    b.label_states = {0, 1};
    b.adj = {{}, {}};
    auto comps2 = strongly_connected_components(b);
    REQUIRE(comps2.size() == 2);
    CHECK(comps2[0] == std::vector<int>{0});
    CHECK(comps2[1] == std::vector<int>{1});

    auto p3 = fixture_rooted("three_coloring_rooted.json");
    Automaton c = build_automaton_rooted(p3, p3.all_labels());
    auto comps3 = strongly_connected_components(c);
    REQUIRE(comps3.size() == 1);
    CHECK(comps3[0].size() == 3);
}

TEST_CASE("SCC output is a partition on random digraphs") {
    Rng rng = make_rng(11, "scc");
    for (int trial = 0; trial < 50; ++trial) {
        Automaton a;
        a.rooted = true;
        int n = 1 + static_cast<int>(uniform_below(rng, 8));
        for (int i = 0; i < n; ++i) a.label_states.push_back(i);
        a.adj.assign(static_cast<size_t>(n), {});
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (uniform_below(rng, 4) == 0) a.adj[static_cast<size_t>(u)].push_back(v);
        auto comps = strongly_connected_components(a);
        std::vector<int> seen(static_cast<size_t>(n), 0);
        for (const auto& c : comps)
            for (int v : c) seen[static_cast<size_t>(v)]++;
        for (int v = 0; v < n; ++v) CHECK(seen[static_cast<size_t>(v)] == 1);
    }
}

TEST_CASE("component periods") {
    auto p2 = fixture_rooted("two_coloring_rooted.json");
    Automaton a2 = build_automaton_rooted(p2, p2.all_labels());
    CHECK(component_period(a2, {0, 1}) == 2);

    auto p1 = fixture_rooted("single_label_always_valid.json");
    Automaton a1 = build_automaton_rooted(p1, p1.all_labels());
    CHECK(component_period(a1, {0}) == 1);

    auto p3 = fixture_rooted("three_coloring_rooted.json");
    Automaton a3 = build_automaton_rooted(p3, p3.all_labels());
    CHECK(component_period(a3, {0, 1, 2}) == 1);

    Automaton b;
    b.rooted = true;
    b.label_states = {0};
    b.adj = {{}};
    CHECK_FALSE(component_period(b, {0}).has_value());
}

TEST_CASE("period divides sampled closed-walk lengths") {
    Rng rng = make_rng(12, "period");
    for (int trial = 0; trial < 40; ++trial) {
        Automaton a;
        a.rooted = true;
        int n = 1 + static_cast<int>(uniform_below(rng, 6));
        for (int i = 0; i < n; ++i) a.label_states.push_back(i);
        a.adj.assign(static_cast<size_t>(n), {});
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (uniform_below(rng, 3) == 0) a.adj[static_cast<size_t>(u)].push_back(v);
        for (const auto& comp : strongly_connected_components(a)) {
            auto period = component_period(a, comp);
            if (!period) continue;
            std::vector<char> in_comp(static_cast<size_t>(n), 0);
            for (int v : comp) in_comp[static_cast<size_t>(v)] = 1;
            for (int run = 0; run < 20; ++run) {
                int start = comp[uniform_below(rng, comp.size())];
                int cur = start;
                for (int len = 1; len <= 2 * n; ++len) {
                    std::vector<int> nexts;
                    for (int w : a.adj[static_cast<size_t>(cur)])
                        if (in_comp[static_cast<size_t>(w)]) nexts.push_back(w);
                    if (nexts.empty()) break;
                    cur = nexts[uniform_below(rng, nexts.size())];
                    if (cur == start) CHECK(len % *period == 0);
                }
            }
        }
    }
}

TEST_CASE("flexibility matches brute-force walk-length check") {
    Rng rng = make_rng(13, "flex");
    for (int trial = 0; trial < 40; ++trial) {
        Automaton a;
        a.rooted = true;
        int n = 1 + static_cast<int>(uniform_below(rng, 5));
        for (int i = 0; i < n; ++i) a.label_states.push_back(i);
        a.adj.assign(static_cast<size_t>(n), {});
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (uniform_below(rng, 3) == 0) a.adj[static_cast<size_t>(u)].push_back(v);
        for (const auto& info : analyze_components(a))
            CHECK(info.flexible == flexible_by_bruteforce(a, info.states));
    }
}

TEST_CASE("flex_scc_rooted examples") {
    auto p2 = fixture_rooted("two_coloring_rooted.json");
    CHECK(flex_scc_rooted(p2, p2.all_labels()).empty());

    auto p3 = fixture_rooted("three_coloring_rooted.json");
    auto f3 = flex_scc_rooted(p3, p3.all_labels());
    REQUIRE(f3.size() == 1);
    CHECK(f3[0] == LabelSet{0, 1, 2});

    auto p1 = fixture_rooted("single_label_always_valid.json");
    auto f1 = flex_scc_rooted(p1, p1.all_labels());
    REQUIRE(f1.size() == 1);
    CHECK(f1[0] == LabelSet{0});
}

TEST_CASE("flex_scc_unrooted examples") {
    auto p = fixture_unrooted("sinkless_orientation.json");
    auto f = flex_scc_unrooted(p, p.node_configs);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == all_pairs(2));  // lifted component covers all three pairs

    CHECK(flex_scc_unrooted(p, {}).empty());

    UnrootedProblem no_edges = p;
    no_edges.edge_configs.clear();
    CHECK(flex_scc_unrooted(no_edges, no_edges.node_configs).empty());
}

TEST_CASE("flex_scc outputs pairwise disjoint") {
    Rng rng = make_rng(14, "disjoint");
    for (int trial = 0; trial < 30; ++trial) {
        RootedProblem p;
        p.delta = 1 + static_cast<int>(uniform_below(rng, 2));
        int num = 2 + static_cast<int>(uniform_below(rng, 3));
        for (int i = 0; i < num; ++i) p.labels.push_back(std::string(1, static_cast<char>('a' + i)));
        std::function<void(Config&, int, int)> gen = [&](Config& cur, int from, int left) {
            if (left == 0) {
                if (uniform_below(rng, 3) == 0)
                    p.rules.push_back({static_cast<LabelId>(uniform_below(rng, static_cast<uint64_t>(num))), cur});
                return;
            }
            for (int l = from; l < num; ++l) {
                cur.push_back(l);
                gen(cur, l, left - 1);
                cur.pop_back();
            }
        };
        Config cur;
        gen(cur, 0, p.delta);
        p = canonicalize(std::move(p));
        auto comps = flex_scc_rooted(p, p.all_labels());
        std::set<LabelId> seen;
        for (const auto& c : comps)
            for (LabelId l : c) CHECK(seen.insert(l).second);
    }
}

TEST_CASE("DOT export naming") {
    auto p = fixture_rooted("two_coloring_rooted.json");
    Automaton a = build_automaton_rooted(p, p.all_labels());
    std::string dot = automaton_to_dot(a, Problem{p});
    CHECK(dot.find("\"L:W\"") != std::string::npos);
    CHECK(dot.find("\"L:W\" -> \"L:B\"") != std::string::npos);

    auto up = fixture_unrooted("sinkless_orientation.json");
    Automaton ua = build_automaton_unrooted(up, up.node_configs);
    std::string udot = automaton_to_dot(ua, Problem{up});
    CHECK(udot.find("\"P:I|O\"") != std::string::npos);
}
