#include "lcl/certificate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace lcl {

namespace {

using Mask = uint32_t;

void collect_leaves(const LabeledTree& t, std::vector<LabelId>& out) {
    if (t.children.empty()) {
        out.push_back(t.label);
        return;
    }
    for (const auto& c : t.children) collect_leaves(c, out);
}

// depth 0 for a single node; -1 when the tree is not complete Delta-ary.
int complete_depth(const LabeledTree& t, int delta) {
    if (t.children.empty()) return 0;
    if (static_cast<int>(t.children.size()) != delta) return -1;
    int d = complete_depth(t.children.front(), delta);
    if (d < 0) return -1;
    for (const auto& c : t.children)
        if (complete_depth(c, delta) != d) return -1;
    return d + 1;
}

void check_constraints(const RootedProblem& p, const LabeledTree& t, const std::string& where,
                       std::vector<CertificateViolation>& out) {
    if (t.label < 0 || t.label >= p.num_labels()) {
        out.push_back({3, where + ": label id out of range"});
        return;
    }
    if (t.children.empty()) return;
    if (static_cast<int>(t.children.size()) == p.delta) {
        Config kids;
        for (const auto& c : t.children) kids.push_back(c.label);
        std::sort(kids.begin(), kids.end());
        bool ok = false;
        for (const auto& rule : p.rules)
            if (rule.parent == t.label && rule.children == kids) {
                ok = true;
                break;
            }
        if (!ok)
            out.push_back({3, where + ": node labeled \"" + p.label_name(t.label) +
                                  "\" has no matching constraint for its children"});
    }
    for (size_t i = 0; i < t.children.size(); ++i)
        check_constraints(p, t.children[i], where + "." + std::to_string(i), out);
}

}  // namespace

CertificateVerdict verify_certificate(const RootedProblem& p, const Certificate& c) {
    CertificateVerdict v;
    auto violate = [&](int cond, std::string msg) { v.violations.push_back({cond, std::move(msg)}); };

    // 1: coprime positive depths.
    if (c.d1 < 1 || c.d2 < 1) violate(1, "depths must be >= 1");
    else if (std::gcd(c.d1, c.d2) != 1)
        violate(1, "gcd(" + std::to_string(c.d1) + "," + std::to_string(c.d2) + ") != 1");

    // sigma_t sanity (it hosts conditions 4 and 5).
    LabelSet sigma = c.sigma_t;
    if (sigma.empty()) violate(5, "sigma_t is empty");
    for (LabelId s : sigma)
        if (s < 0 || s >= p.num_labels()) violate(5, "sigma_t contains an out-of-range label id");
    if (sorted_unique(sigma) != c.sigma_t) violate(5, "sigma_t must be strictly ascending");

    size_t t = c.sigma_t.size();
    if (c.trees1.size() != t || c.trees2.size() != t)
        violate(2, "expected " + std::to_string(t) + " trees per sequence");

    auto check_sequence = [&](const std::vector<LabeledTree>& trees, int d, int seq,
                              const std::vector<LabelId>& expected_pattern) {
        std::optional<std::vector<LabelId>> common;
        for (size_t i = 0; i < trees.size(); ++i) {
            std::string where = "trees" + std::to_string(seq) + "[" + std::to_string(i) + "]";
            int depth = complete_depth(trees[i], p.delta);
            if (depth < 0) {
                violate(2, where + ": not a complete tree of arity " + std::to_string(p.delta));
                continue;
            }
            if (depth != d) {
                violate(2, where + ": depth " + std::to_string(depth) + " != " + std::to_string(d));
                continue;
            }
            check_constraints(p, trees[i], where, v.violations);
            if (i < c.sigma_t.size() && trees[i].label != c.sigma_t[i])
                violate(5, where + ": root label is not sigma_" + std::to_string(i + 1));
            std::vector<LabelId> leaves;
            collect_leaves(trees[i], leaves);
            for (LabelId l : leaves)
                if (!contains(c.sigma_t, l)) {
                    violate(4, where + ": leaf label outside sigma_t");
                    break;
                }
            if (!common) common = leaves;
            else if (*common != leaves)
                violate(4, where + ": leaf labeling differs from the first tree of the sequence");
        }
        if (common && !expected_pattern.empty() && *common != expected_pattern)
            violate(4, "recorded leaf_pattern" + std::to_string(seq) + " does not match the trees");
    };
    check_sequence(c.trees1, c.d1, 1, c.leaf_pattern1);
    check_sequence(c.trees2, c.d2, 2, c.leaf_pattern2);

    v.pass = v.violations.empty();
    return v;
}

namespace {

// Feasible-root-set search for one depth: masks reachable at level j are the
// exact feasible label sets of concrete leaf patterns over sigma_t.
struct PatternSearch {
    PatternSearch(const RootedProblem& p_, Mask sigma_mask_, std::vector<LabelId> sigma_,
                  uint64_t* expansions_, uint64_t cap_)
        : p(p_), sigma_mask(sigma_mask_), sigma(std::move(sigma_)), expansions(expansions_), cap(cap_) {}

    const RootedProblem& p;
    Mask sigma_mask;
    std::vector<LabelId> sigma;
    uint64_t* expansions;
    uint64_t cap;
    bool budget_hit = false;

    // combine memo: child multiset of masks -> resulting mask
    std::map<std::vector<Mask>, Mask> combine_memo;

    // per level: reachable masks with one witness child combination
    struct Level {
        std::vector<Mask> masks;                      // sorted
        std::map<Mask, std::vector<Mask>> witness;    // mask -> child masks (level below)
        std::map<Mask, LabelId> leaf_witness;         // level 0 only
    };
    std::vector<Level> levels;

    Mask combine(const std::vector<Mask>& kids) {
        auto it = combine_memo.find(kids);
        if (it != combine_memo.end()) return it->second;
        if (++*expansions > cap) {
            budget_hit = true;
            return 0;
        }
        Mask out = 0;
        for (const auto& rule : p.rules) {
            if (out & (Mask{1} << rule.parent)) continue;
            if (assignable(rule.children, kids)) out |= Mask{1} << rule.parent;
        }
        combine_memo.emplace(kids, out);
        return out;
    }

    // Can the multiset `conf` be distributed over the child masks?
    bool assignable(const Config& conf, const std::vector<Mask>& kids) {
        return assign_rec(conf, kids, 0, std::vector<int>{});
    }

    // Straight backtracking: slot i takes conf element index e.
    bool assign_rec(const Config& conf, const std::vector<Mask>& kids, size_t slot,
                    std::vector<int> used_idx) {
        if (slot == kids.size()) return true;
        LabelId prev = -1;
        for (size_t e = 0; e < conf.size(); ++e) {
            if (std::find(used_idx.begin(), used_idx.end(), static_cast<int>(e)) != used_idx.end())
                continue;
            if (conf[e] == prev) continue;  // skip duplicate choices
            prev = conf[e];
            if (!(kids[slot] & (Mask{1} << conf[e]))) continue;
            used_idx.push_back(static_cast<int>(e));
            if (assign_rec(conf, kids, slot + 1, used_idx)) return true;
            used_idx.pop_back();
        }
        return false;
    }

    // Builds reachability up to `depth` levels; true when a mask covering
    // sigma_t is reachable at the top.
    bool run(int depth) {
        levels.assign(static_cast<size_t>(depth) + 1, {});
        Level& base = levels[0];
        for (LabelId s : sigma) {
            Mask m = Mask{1} << s;
            base.masks.push_back(m);
            base.leaf_witness[m] = s;
        }
        base.masks = dedup(base.masks);
        for (int j = 1; j <= depth; ++j) {
            Level& prev = levels[static_cast<size_t>(j) - 1];
            Level& cur = levels[static_cast<size_t>(j)];
            std::vector<Mask> kids(static_cast<size_t>(p.delta));
            enumerate_multisets(prev.masks, kids, 0, 0, cur);
            if (budget_hit) return false;
            cur.masks = dedup(cur.masks);
            if (cur.masks.empty()) return false;
        }
        return top_mask(depth).has_value();
    }

    std::optional<Mask> top_mask(int depth) const {
        for (Mask m : levels[static_cast<size_t>(depth)].masks)
            if ((m & sigma_mask) == sigma_mask) return m;
        return std::nullopt;
    }

    void enumerate_multisets(const std::vector<Mask>& pool, std::vector<Mask>& kids, size_t slot,
                             size_t from, Level& out) {
        if (budget_hit) return;
        if (slot == kids.size()) {
            Mask m = combine(kids);
            if (m != 0 && !out.witness.count(m)) {
                out.masks.push_back(m);
                out.witness.emplace(m, kids);
            }
            return;
        }
        for (size_t i = from; i < pool.size(); ++i) {
            kids[slot] = pool[i];
            enumerate_multisets(pool, kids, slot + 1, i, out);
        }
    }

    static std::vector<Mask> dedup(std::vector<Mask> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    // Leaf pattern of the witness subtree for `mask` at level `j`, depth-first.
    void pattern_of(Mask mask, int j, std::vector<LabelId>& out) const {
        if (j == 0) {
            out.push_back(levels[0].leaf_witness.at(mask));
            return;
        }
        const auto& kids = levels[static_cast<size_t>(j)].witness.at(mask);
        for (Mask k : kids) pattern_of(k, j - 1, out);
    }
};

// Feasible sets of every aligned subtree of the fixed leaf pattern.
struct PatternDp {
    PatternDp(const RootedProblem& p_, const std::vector<LabelId>& pattern_, int depth_)
        : p(p_), pattern(pattern_), depth(depth_) {}

    const RootedProblem& p;
    const std::vector<LabelId>& pattern;
    int depth;
    // feas[j][i]: feasible roots of the i-th span at level j (span size delta^j)
    std::vector<std::vector<Mask>> feas;

    void build() {
        feas.assign(static_cast<size_t>(depth) + 1, {});
        feas[0].resize(pattern.size());
        for (size_t i = 0; i < pattern.size(); ++i) feas[0][i] = Mask{1} << pattern[i];
        for (int j = 1; j <= depth; ++j) {
            size_t spans = feas[static_cast<size_t>(j) - 1].size() / static_cast<size_t>(p.delta);
            feas[static_cast<size_t>(j)].resize(spans);
            for (size_t i = 0; i < spans; ++i) {
                std::vector<Mask> kids;
                for (int d = 0; d < p.delta; ++d)
                    kids.push_back(feas[static_cast<size_t>(j) - 1][i * static_cast<size_t>(p.delta) + static_cast<size_t>(d)]);
                Mask out = 0;
                for (const auto& rule : p.rules) {
                    if (out & (Mask{1} << rule.parent)) continue;
                    if (assignable(rule.children, kids)) out |= Mask{1} << rule.parent;
                }
                feas[static_cast<size_t>(j)][i] = out;
            }
        }
    }

    bool assignable(const Config& conf, const std::vector<Mask>& kids) const {
        std::vector<int> used;
        return assign_rec(conf, kids, 0, used);
    }

    bool assign_rec(const Config& conf, const std::vector<Mask>& kids, size_t slot,
                    std::vector<int>& used) const {
        if (slot == kids.size()) return true;
        LabelId prev = -1;
        for (size_t e = 0; e < conf.size(); ++e) {
            if (std::find(used.begin(), used.end(), static_cast<int>(e)) != used.end()) continue;
            if (conf[e] == prev) continue;
            prev = conf[e];
            if (!(kids[slot] & (Mask{1} << conf[e]))) continue;
            used.push_back(static_cast<int>(e));
            if (assign_rec(conf, kids, slot + 1, used)) return true;
            used.pop_back();
        }
        return false;
    }

    // Deterministic top-down assignment with root label sigma.
    LabeledTree build_tree(LabelId sigma) const {
        return build_node(sigma, depth, 0);
    }

    LabeledTree build_node(LabelId sigma, int j, size_t span) const {
        LabeledTree t;
        t.label = sigma;
        if (j == 0) return t;
        std::vector<Mask> kids;
        for (int d = 0; d < p.delta; ++d)
            kids.push_back(feas[static_cast<size_t>(j) - 1][span * static_cast<size_t>(p.delta) + static_cast<size_t>(d)]);
        for (const auto& rule : p.rules) {
            if (rule.parent != sigma) continue;
            std::vector<LabelId> chosen(kids.size(), -1);
            if (choose_assignment(rule.children, kids, 0, std::vector<int>{}, chosen)) {
                for (int d = 0; d < p.delta; ++d)
                    t.children.push_back(
                        build_node(chosen[static_cast<size_t>(d)], j - 1, span * static_cast<size_t>(p.delta) + static_cast<size_t>(d)));
                return t;
            }
        }
        // Unreachable when sigma is in the span's feasible set.
        throw std::logic_error("certificate reconstruction failed");
    }

    bool choose_assignment(const Config& conf, const std::vector<Mask>& kids, size_t slot,
                           std::vector<int> used, std::vector<LabelId>& chosen) const {
        if (slot == kids.size()) return true;
        LabelId prev = -1;
        for (size_t e = 0; e < conf.size(); ++e) {
            if (std::find(used.begin(), used.end(), static_cast<int>(e)) != used.end()) continue;
            if (conf[e] == prev) continue;
            prev = conf[e];
            if (!(kids[slot] & (Mask{1} << conf[e]))) continue;
            used.push_back(static_cast<int>(e));
            chosen[slot] = conf[e];
            if (choose_assignment(conf, kids, slot + 1, used, chosen)) return true;
            used.pop_back();
        }
        return false;
    }
};

std::vector<std::pair<int, int>> coprime_pairs(int max_depth) {
    std::vector<std::pair<int, int>> out;
    for (int d1 = 2; d1 < max_depth; ++d1)
        for (int d2 = d1 + 1; d2 <= max_depth; ++d2)
            if (std::gcd(d1, d2) == 1) out.emplace_back(d1, d2);
    std::sort(out.begin(), out.end());
    return out;
}

void subsets_of_size(int n, int k, std::vector<LabelId>& cur, int from,
                     std::vector<std::vector<LabelId>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int i = from; i < n; ++i) {
        cur.push_back(i);
        subsets_of_size(n, k, cur, i + 1, out);
        cur.pop_back();
    }
}

}  // namespace

CertSearchResult search_certificate(const RootedProblem& p, const CertSearchBounds& bounds) {
    CertSearchResult result;
    result.explored = bounds;
    if (bounds.max_depth < 2) throw std::invalid_argument("max_depth must be >= 2");
    int max_sigma = bounds.max_sigma < 0 ? p.num_labels() : std::min(bounds.max_sigma, p.num_labels());
    result.explored.max_sigma = max_sigma;
    if (p.rules.empty()) return result;  // no labeled tree exists at all

    auto pairs = coprime_pairs(bounds.max_depth);
    for (int size = 1; size <= max_sigma; ++size) {
        std::vector<std::vector<LabelId>> subsets;
        std::vector<LabelId> cur;
        subsets_of_size(p.num_labels(), size, cur, 0, subsets);
        for (const auto& sigma : subsets) {
            Mask sigma_mask = 0;
            for (LabelId s : sigma) sigma_mask |= Mask{1} << s;
            for (auto [d1, d2] : pairs) {
                PatternSearch s1(p, sigma_mask, sigma, &result.expansions, bounds.expansion_cap);
                bool ok1 = s1.run(d1);
                if (s1.budget_hit) {
                    result.status = CertSearchStatus::BudgetExceeded;
                    return result;
                }
                if (!ok1) continue;
                PatternSearch s2(p, sigma_mask, sigma, &result.expansions, bounds.expansion_cap);
                bool ok2 = s2.run(d2);
                if (s2.budget_hit) {
                    result.status = CertSearchStatus::BudgetExceeded;
                    return result;
                }
                if (!ok2) continue;

                Certificate cert;
                cert.sigma_t = sigma;
                cert.d1 = d1;
                cert.d2 = d2;
                s1.pattern_of(*s1.top_mask(d1), d1, cert.leaf_pattern1);
                s2.pattern_of(*s2.top_mask(d2), d2, cert.leaf_pattern2);

                PatternDp dp1(p, cert.leaf_pattern1, d1);
                dp1.build();
                PatternDp dp2(p, cert.leaf_pattern2, d2);
                dp2.build();
                for (LabelId s : sigma) {
                    cert.trees1.push_back(dp1.build_tree(s));
                    cert.trees2.push_back(dp2.build_tree(s));
                }
                result.status = CertSearchStatus::Found;
                result.certificate = std::move(cert);
                return result;
            }
        }
    }
    return result;
}

namespace {

nlohmann::ordered_json tree_to_json(const LabeledTree& t, const RootedProblem& p) {
    if (t.children.empty()) return p.label_name(t.label);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    arr.push_back(p.label_name(t.label));
    for (const auto& c : t.children) arr.push_back(tree_to_json(c, p));
    return arr;
}

LabeledTree tree_from_json(const nlohmann::json& j, const RootedProblem& p) {
    LabeledTree t;
    if (j.is_string()) {
        auto id = p.find_label(j.get<std::string>());
        if (!id) throw ParseError("unknown label in certificate tree");
        t.label = *id;
        return t;
    }
    if (!j.is_array() || j.empty() || !j[0].is_string())
        throw ParseError("certificate tree nodes must be \"label\" or [\"label\", children...]");
    auto id = p.find_label(j[0].get<std::string>());
    if (!id) throw ParseError("unknown label in certificate tree");
    t.label = *id;
    for (size_t i = 1; i < j.size(); ++i) t.children.push_back(tree_from_json(j[i], p));
    return t;
}

}  // namespace

std::string certificate_to_json(const Certificate& c, const RootedProblem& p) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json sigma = nlohmann::ordered_json::array();
    for (LabelId s : c.sigma_t) sigma.push_back(p.label_name(s));
    j["sigma_t"] = std::move(sigma);
    j["d1"] = c.d1;
    j["d2"] = c.d2;
    nlohmann::ordered_json t1 = nlohmann::ordered_json::array();
    for (const auto& t : c.trees1) t1.push_back(tree_to_json(t, p));
    j["trees1"] = std::move(t1);
    nlohmann::ordered_json t2 = nlohmann::ordered_json::array();
    for (const auto& t : c.trees2) t2.push_back(tree_to_json(t, p));
    j["trees2"] = std::move(t2);
    return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text, const RootedProblem& p) {
    nlohmann::json j = nlohmann::json::parse(text);
    Certificate c;
    for (const auto& s : j.at("sigma_t")) {
        auto id = p.find_label(s.get<std::string>());
        if (!id) throw ParseError("unknown label in sigma_t");
        c.sigma_t.push_back(*id);
    }
    c.d1 = j.at("d1").get<int>();
    c.d2 = j.at("d2").get<int>();
    for (const auto& t : j.at("trees1")) c.trees1.push_back(tree_from_json(t, p));
    for (const auto& t : j.at("trees2")) c.trees2.push_back(tree_from_json(t, p));
    if (!c.trees1.empty()) collect_leaves(c.trees1.front(), c.leaf_pattern1);
    if (!c.trees2.empty()) collect_leaves(c.trees2.front(), c.leaf_pattern2);
    return c;
}

}  // namespace lcl
