// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lcl/automaton.hpp"
#include "lcl/depth.hpp"
#include "lcl/harness.hpp"
#include "lcl/instances.hpp"
#include "lcl/problem.hpp"
#include "oracles.hpp"

using namespace lcl;

namespace {

int g_failures = 0;
int g_checks = 0;

#define EXPECT(cond, msg)                                                     \
    do {                                                                      \
        ++g_checks;                                                           \
        if (!(cond)) {                                                        \
            std::cerr << "  [check failed] " << __FILE__ << ":" << __LINE__   \
                      << " " << msg << "\n";                                  \
            ++local_failures;                                                 \
        }                                                                     \
    } while (0)

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
    if (!in) {
        std::cerr << "missing fixture " << name << "\n";
        std::exit(2);
    }
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

struct Criterion {
    int number;
    const char* description;
    int (*run)();
};

// 1. trim_rooted matches the offline-DP labelability oracle on depth-(beta+1)
//    complete trees, for 500 random problems and all label subsets.
int criterion_trim_oracle() {
    int local_failures = 0;
    Rng rng = make_rng(1001, "acc-trim");
    for (int i = 0; i < 500; ++i) {
        RootedProblem p = oracles::random_rooted_problem(rng, 4, 3);
        int beta = pruning_constant(p);
        Tree tree = complete_tree(p.delta, beta + 1, TreeKind::DeltaAry);
        int n = p.num_labels();
        for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
            LabelSet subset;
            for (int l = 0; l < n; ++l)
                if (mask & (1ull << l)) subset.push_back(l);
            LabelSet trimmed = trim_rooted(p, subset);
            for (LabelId sigma : subset) {
                std::vector<LabelSet> allowed(static_cast<size_t>(tree.n), subset);
                allowed[0] = {sigma};
                bool solvable = solve_offline_rooted(tree, p, &allowed).has_value();
                EXPECT(solvable == contains(trimmed, sigma),
                       "trim/DP mismatch at problem " << i << " sigma " << sigma);
                if (local_failures > 5) return local_failures;
            }
        }
    }
    return local_failures;
}

// 2. depth() equals the naive by-definition good-sequence enumerator.
int criterion_depth_oracle() {
    int local_failures = 0;
    Rng rng = make_rng(1002, "acc-depth");
    for (int i = 0; i < 200; ++i) {
        RootedProblem p = oracles::random_rooted_problem(rng, 3, 3);
        DepthResult d = depth(p);
        auto naive = oracles::naive_depth_rooted(p);
        bool match = naive.infinite ? d.kind == DepthKind::Infinite
                     : naive.best == 0 ? d.kind == DepthKind::Zero
                                       : (d.kind == DepthKind::Finite && d.k == naive.best);
        EXPECT(match, "rooted depth mismatch at problem " << i);
    }
    for (int i = 0; i < 100; ++i) {
        UnrootedProblem p = oracles::random_unrooted_problem(rng, 3, 3);
        DepthResult d = depth(p);
        auto naive = oracles::naive_depth_unrooted(p);
        bool match = naive.infinite ? d.kind == DepthKind::Infinite
                     : naive.best == 0 ? d.kind == DepthKind::Zero
                                       : (d.kind == DepthKind::Finite && d.k == naive.best);
        EXPECT(match, "unrooted depth mismatch at problem " << i);
    }
    return local_failures;
}

// 3. the five canonical fixtures classify as stated.
int criterion_canonical_classifications() {
    int local_failures = 0;

    ClassReport empty = classify(Problem{fixture_rooted("empty_constraints.json")});
    EXPECT(empty.depth.kind == DepthKind::Zero, "empty constraints: depth 0");
    EXPECT(empty.cls == "unsolvable", "empty constraints: unsolvable");

    ClassReport single = classify(Problem{fixture_rooted("single_label_always_valid.json")});
    EXPECT(single.depth.kind == DepthKind::Infinite, "always-valid: depth inf");
    EXPECT(single.certificate.has_value(), "always-valid: certificate found");
    if (single.certificate) {
        EXPECT(single.certificate->d1 == 2 && single.certificate->d2 == 3,
               "always-valid: certificate at (2,3)");
    }

    ClassReport two = classify(Problem{fixture_rooted("two_coloring_rooted.json")});
    EXPECT(two.depth.kind == DepthKind::Finite && two.depth.k == 1, "2-coloring: depth 1");
    EXPECT(two.cls == "Theta(n^{1/1})", "2-coloring: Theta(n)");

    ClassReport three = classify(Problem{fixture_rooted("three_coloring_rooted.json")});
    EXPECT(three.depth.kind == DepthKind::Infinite, "3-coloring: depth inf");
    EXPECT(three.certificate.has_value(), "3-coloring: certificate found");
    if (three.certificate)
        EXPECT(three.certificate->d1 == 2 && three.certificate->d2 == 3,
               "3-coloring: certificate at (2,3)");

    ClassReport sinkless = classify(Problem{fixture_unrooted("sinkless_orientation.json")});
    EXPECT(sinkless.depth.kind == DepthKind::Infinite, "sinkless orientation: depth inf");
    EXPECT(sinkless.cls == "O(log n)", "sinkless orientation: O(log n)");

    return local_failures;
}

// 4. chunk-instance node counts and choice counts match the closed formulas.
int criterion_formula_checks() {
    int local_failures = 0;
    for (int delta : {2, 3}) {
        for (int d = 2; d <= 4; ++d) {
            for (int sigma = 1; sigma <= 3; ++sigma) {
                long long tree_size = 1, pw = 1;
                for (int i = 0; i < 2 * d; ++i) {
                    pw *= delta;
                    tree_size += pw;
                }
                long long trees = (sigma + 1);
                for (int i = 0; i < d + 1; ++i) trees *= delta;
                long long n_formula = trees * tree_size;
                long long mid = 1;
                for (int i = 0; i < d; ++i) mid *= delta;
                long long choices_formula = 2ll * sigma * (sigma + 1);
                for (int i = 0; i < 2 * d + 1; ++i) choices_formula *= delta;

                EXPECT(chunk_instance_node_count(sigma, delta, d, 1) == n_formula,
                       "node-count formula for delta=" << delta << " d=" << d << " sigma=" << sigma);
                EXPECT(chunk_choice_count(sigma, delta, d) == choices_formula,
                       "choice-count formula for delta=" << delta << " d=" << d << " sigma=" << sigma);
                EXPECT(choices_formula < n_formula, "instance count below node count");

                bool pre_ok = mid > 2ll * sigma;  // delta^d > 2|Sigma|
                if (!pre_ok) {
                    bool rejected = false;
                    try {
                        build_chunk_instance(sigma, delta, d, {1, 0, 1});
                    } catch (const std::invalid_argument&) {
                        rejected = true;
                    }
                    EXPECT(rejected, "precondition-violating parameters rejected");
                    continue;
                }

                // u = 0 lives in chunk 0; attach to chunk 1
                ChunkInstance b1 = build_chunk_instance(sigma, delta, d, {1, 0, 1});
                EXPECT(b1.tree.n == n_formula, "built node count (b=1)");
                EXPECT(static_cast<long long>(b1.middle_nodes.size()) == trees * mid,
                       "middle node count");
                ChunkInstance b0 = build_chunk_instance(sigma, delta, d, {0, 0, 1});
                EXPECT(b0.tree.n == n_formula - mid, "built node count (b=0 merges delta^d)");

                auto choices = enumerate_choices(sigma, delta, d);
                EXPECT(static_cast<long long>(choices.size()) == choices_formula,
                       "enumerated choice count");
                EXPECT(static_cast<long long>(choices.size()) < b1.tree.n,
                       "fewer instances than nodes");
            }
        }
    }
    return local_failures;
}

// 5. lower-bound structure: degrees, path lengths, u distances, containment.
int criterion_lb_structure() {
    int local_failures = 0;
    for (int delta : {2, 3}) {
        for (int k : {1, 2}) {
            for (int t : {1, 2}) {
                Tree g = build_lb_rooted(delta, 1, k, t);
                auto ch = g.children_lists();
                for (int v = 0; v < g.n; ++v) {
                    size_t c = ch[static_cast<size_t>(v)].size();
                    if (c != 0 && c != static_cast<size_t>(delta)) {
                        EXPECT(false, "rooted degree invariant");
                        break;
                    }
                }
                auto paths = core_paths(g);
                for (const auto& p : paths)
                    EXPECT(static_cast<int>(p.nodes.size()) == 4 * t + 4, "core path length");

                Schedule s = sample_schedule_rooted(g, t, 4242);
                auto adj = g.adjacency();
                for (size_t layer = 0; layer < s.u_nodes.size(); ++layer) {
                    for (size_t l = 0; l < s.u_nodes[layer].size(); ++l) {
                        int d = s.d_samples[layer][l];
                        EXPECT(d >= 2 * t + 1 && d <= 2 * t + 2, "u distance from the root end");
                        EXPECT(4 * t + 3 - d >= 2 * t + 1, "u distance from the far end");
                    }
                }

                NodeSubsets sub = node_subsets(g, s);
                int final_count = 0;
                for (int v = 0; v < g.n; ++v) final_count += sub.r_sets.back()[static_cast<size_t>(v)];
                EXPECT(final_count > 0, "S'_{R,k+1} non-empty");
                for (int i = 0; i < k; ++i) {
                    for (int v = 0; v < g.n; ++v) {
                        if (sub.c_sets[static_cast<size_t>(i)][static_cast<size_t>(v)] &&
                            !sub.r_sets[static_cast<size_t>(i)][static_cast<size_t>(v)]) {
                            EXPECT(false, "S'_C subset of S'_R at level " << i + 1);
                            break;
                        }
                        if (sub.r_sets[static_cast<size_t>(i) + 1][static_cast<size_t>(v)] &&
                            !sub.c_sets[static_cast<size_t>(i)][static_cast<size_t>(v)]) {
                            EXPECT(false, "S'_R subset of S'_C at level " << i + 1);
                            break;
                        }
                    }
                }

                if (delta >= 3) {
                    Tree ug = build_lb_unrooted(delta, 1, k, t);
                    auto uadj = ug.adjacency();
                    for (int v = 0; v < ug.n; ++v) {
                        size_t deg = uadj[static_cast<size_t>(v)].size();
                        if (deg != 1 && deg != static_cast<size_t>(delta)) {
                            EXPECT(false, "unrooted degree invariant");
                            break;
                        }
                    }
                    for (const auto& p : core_paths(ug))
                        EXPECT(static_cast<int>(p.nodes.size()) == 4 * t + 4, "unrooted path length");
                    Schedule us = sample_schedule_unrooted(ug, t, 77);
                    for (const auto& layer : us.d_samples)
                        for (int d : layer)
                            EXPECT(d >= 2 * t + 1 && d <= 2 * t + 2, "unrooted u distance");
                    NodeSubsets usub = node_subsets(ug, us);
                    int ufinal = 0;
                    for (int v = 0; v < ug.n; ++v) ufinal += usub.r_sets.back()[static_cast<size_t>(v)];
                    EXPECT(ufinal > 0, "S_{R,k+1} non-empty (unrooted)");
                    for (size_t i = 0; i < usub.c_sets.size(); ++i)
                        for (int v = 0; v < ug.n; ++v) {
                            if (usub.c_sets[i][static_cast<size_t>(v)] && !usub.r_sets[i][static_cast<size_t>(v)])
                                EXPECT(false, "unrooted containment S_C in S_R");
                            if (usub.r_sets[i + 1][static_cast<size_t>(v)] && !usub.c_sets[i][static_cast<size_t>(v)])
                                EXPECT(false, "unrooted containment S_R in S_C");
                        }
                }
            }
        }
    }
    bool rejected = false;
    try {
        build_lb_unrooted(2, 1, 1, 1);
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    EXPECT(rejected, "unrooted lb requires delta >= 3");
    return local_failures;
}

// 6. independence: u-node views are identical per layer and disjoint, over 50
//    sampled schedules of the (delta=2, k=2, t=2) instance.
int criterion_independence() {
    int local_failures = 0;
    Tree g = build_lb_rooted(2, 1, 2, 2);
    for (int i = 0; i < 50; ++i) {
        Schedule s = sample_schedule_rooted(g, 2, 9000 + static_cast<uint64_t>(i));
        IsoVerdict v = view_isomorphism(g, s, 2);
        EXPECT(v.pass, "schedule " << i << ": " << v.detail);
        if (local_failures > 3) return local_failures;
    }
    return local_failures;
}

// 7. failure exhibition: parity victim >= 0.4 over 200 trials, oracle at 0.
int criterion_failure_exhibition() {
    int local_failures = 0;
    RootedProblem p = fixture_rooted("two_coloring_delta2.json");
    int beta = pruning_constant(p);
    EXPECT(beta == 1, "2-coloring-by-level has beta 1");
    Tree g = build_lb_rooted(2, beta, 1, 2);
    Problem prob{p};
    TrialSetup setup;
    setup.g = &g;
    setup.p = &prob;
    setup.T = Locality::full_visibility();
    setup.sampler = [&](uint64_t seed) { return sample_schedule_rooted(g, 2, seed); };

    setup.factory = [&](const RunInfo& info) { return make_algorithm("parity-victim", prob, info); };
    FailureEstimate victim = estimate_failure(setup, 200, 20250808);
    EXPECT(victim.p_hat >= 0.4, "parity victim failure frequency " << victim.p_hat << " >= 0.4");

    setup.factory = [&](const RunInfo& info) { return make_algorithm("offline-oracle", prob, info); };
    FailureEstimate oracle = estimate_failure(setup, 200, 20250808);
    EXPECT(oracle.failures == 0, "offline oracle failure count " << oracle.failures << " == 0");
    return local_failures;
}

// 8. skeleton equals an independent peeling oracle; ruling-set segments have
//    lengths in [c, 2c] for c in {3, 5}.
int criterion_skeleton_ruling() {
    int local_failures = 0;
    Rng rng = make_rng(1008, "acc-skel");
    for (int i = 0; i < 100; ++i) {
        int n = 2 + static_cast<int>(uniform_below(rng, 1999));
        Tree g = oracles::random_attachment_tree(rng, n);
        int tau = static_cast<int>(uniform_below(rng, 20));
        auto [skel, psi] = skeleton_tree(g, tau);
        auto expected = oracles::peel_oracle(g, tau);
        bool same = psi.size() == expected.size();
        if (same)
            for (int v : psi) same = same && expected.count(v) == 1;
        EXPECT(same, "skeleton/oracle mismatch at tree " << i);

        for (int c : {3, 5}) {
            auto rs = path_ruling_set(skel, c);
            for (const auto& seg : rs.segments) {
                if (static_cast<int>(seg.size()) < c || static_cast<int>(seg.size()) > 2 * c) {
                    EXPECT(false, "segment length " << seg.size() << " outside [c,2c]");
                    break;
                }
            }
        }
    }
    return local_failures;
}

// 9. certificate search round-trips through verify, is deterministic, and
//    2-coloring stays NOT_FOUND up to depth 6.
int criterion_certificate_roundtrip() {
    int local_failures = 0;

    for (const char* name : {"three_coloring_rooted.json", "single_label_always_valid.json"}) {
        RootedProblem p = fixture_rooted(name);
        auto a = search_certificate(p);
        EXPECT(a.status == CertSearchStatus::Found, name << ": certificate found");
        if (a.status != CertSearchStatus::Found) continue;
        EXPECT(verify_certificate(p, *a.certificate).pass, name << ": search output verifies");
        auto b = search_certificate(p);
        EXPECT(b.status == CertSearchStatus::Found &&
                   certificate_to_json(*a.certificate, p) == certificate_to_json(*b.certificate, p),
               name << ": deterministic");
    }

    Rng rng = make_rng(1009, "acc-cert");
    for (int i = 0; i < 50; ++i) {
        RootedProblem p = oracles::random_rooted_problem(rng, 3, 2);
        auto res = search_certificate(p, {4, -1, 1'000'000});
        if (res.status == CertSearchStatus::Found)
            EXPECT(verify_certificate(p, *res.certificate).pass,
                   "random problem " << i << ": round-trip verification");
    }

    RootedProblem two = fixture_rooted("two_coloring_rooted.json");
    for (int max_depth = 2; max_depth <= 6; ++max_depth) {
        auto res = search_certificate(two, {max_depth, -1, 10'000'000});
        EXPECT(res.status == CertSearchStatus::NotFound,
               "2-coloring NOT_FOUND at max_depth " << max_depth);
    }
    return local_failures;
}

const Criterion kCriteria[] = {
    {1, "trim matches the offline-DP labelability oracle", criterion_trim_oracle},
    {2, "depth matches the naive good-sequence enumerator", criterion_depth_oracle},
    {3, "canonical problem classifications", criterion_canonical_classifications},
    {4, "chunk-instance and choice-count formulas", criterion_formula_checks},
    {5, "lower-bound instance structure and subset containment", criterion_lb_structure},
    {6, "u-node view independence over 50 schedules", criterion_independence},
    {7, "parity-victim failure exhibition vs offline oracle", criterion_failure_exhibition},
    {8, "skeleton peeling oracle and ruling-set segment lengths", criterion_skeleton_ruling},
    {9, "certificate round-trip, determinism, 2-coloring absence", criterion_certificate_roundtrip},
};

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    bool all_pass = true;
    for (const auto& c : kCriteria) {
        auto start = clock::now();
        int failures = 0;
        try {
            failures = c.run();
        } catch (const std::exception& e) {
            std::cerr << "  [exception] " << e.what() << "\n";
            failures = 1;
        }
        double secs = std::chrono::duration<double>(clock::now() - start).count();
        std::printf("criterion %d %s: %s (%.2fs)\n", c.number, failures == 0 ? "PASS" : "FAIL",
                    c.description, secs);
        std::fflush(stdout);
        if (failures != 0) {
            all_pass = false;
            g_failures += failures;
        }
    }
    std::printf("%d criteria, %d checks, %s\n", static_cast<int>(std::size(kCriteria)), g_checks,
                all_pass ? "all passed" : "FAILURES PRESENT");
    return all_pass ? 0 : 1;
}
