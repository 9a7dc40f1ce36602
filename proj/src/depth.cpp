#include "lcl/depth.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "lcl/automaton.hpp"

namespace lcl {

namespace {

// One application of the rooted pruning operator.
LabelSet trim_step_rooted(const RootedProblem& p, const LabelSet& current) {
    LabelSet next;
    for (LabelId s : current) {
        for (const auto& rule : p.rules) {
            if (rule.parent != s) continue;
            bool ok = true;
            for (LabelId c : rule.children)
                if (!contains(current, c)) {
                    ok = false;
                    break;
                }
            if (ok) {
                next.push_back(s);
                break;
            }
        }
    }
    return next;
}

// Returns (fixed point, stabilization index m), m = least m with R_m = R_{m+1}.
std::pair<LabelSet, int> trim_rooted_trace(const RootedProblem& p, LabelSet current) {
    int m = 0;
    for (;;) {
        LabelSet next = trim_step_rooted(p, current);
        if (next == current) return {std::move(current), m};
        current = std::move(next);
        ++m;
    }
}

bool contains_label(const Config& c, LabelId x) {
    return std::binary_search(c.begin(), c.end(), x);
}

Config remove_one(Config c, LabelId x) {
    auto it = std::lower_bound(c.begin(), c.end(), x);
    c.erase(it);
    return c;
}

// Labels that can sit at the top of a depth-j hanging subtree, for growing j;
// stabilizes to the "extendible below forever" set.
LabelSet ext_step(const UnrootedProblem& p, const ConfigSet& d_sub, const LabelSet& ext_prev) {
    auto completable = [&](LabelId x) {
        for (LabelId b : ext_prev)
            if (p.edge_allowed(x, b)) return true;
        return false;
    };
    LabelSet next;
    for (LabelId b = 0; b < p.num_labels(); ++b) {
        bool found = false;
        for (const auto& c : d_sub) {
            if (!contains_label(c, b)) continue;
            Config rest = remove_one(c, b);
            bool ok = true;
            for (LabelId x : rest)
                if (!completable(x)) {
                    ok = false;
                    break;
                }
            if (ok) {
                found = true;
                break;
            }
        }
        if (found) next.push_back(b);
    }
    return next;
}

ConfigSet survivors_for_ext(const UnrootedProblem& p, const ConfigSet& d_sub, const LabelSet& ext) {
    auto completable = [&](LabelId x) {
        for (LabelId b : ext)
            if (p.edge_allowed(x, b)) return true;
        return false;
    };
    ConfigSet out;
    for (const auto& c : d_sub) {
        bool ok = true;
        for (LabelId x : c)
            if (!completable(x)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(c);
    }
    return out;
}

// Ext chain with stabilization bookkeeping. Returns the survivor sets per tree
// depth i (survivors(i) uses ext at depth i-1) plus the final fixed point.
struct UnrootedTrimTrace {
    ConfigSet fixed_point;
    int stabilization = 1;  // least i >= 1 with survivors_i = survivors_inf
};

UnrootedTrimTrace trim_unrooted_trace(const UnrootedProblem& p, const ConfigSet& d_sub) {
    LabelSet ext(static_cast<size_t>(p.num_labels()));
    for (int i = 0; i < p.num_labels(); ++i) ext[static_cast<size_t>(i)] = i;

    std::vector<ConfigSet> survivors_at;  // survivors_at[i] = configs rooting T_{i+1}^*
    survivors_at.push_back(survivors_for_ext(p, d_sub, ext));
    for (;;) {
        LabelSet next = ext_step(p, d_sub, ext);
        if (next == ext) break;
        ext = std::move(next);
        survivors_at.push_back(survivors_for_ext(p, d_sub, ext));
    }
    UnrootedTrimTrace out;
    out.fixed_point = survivors_at.back();
    out.stabilization = 1;
    for (size_t i = 0; i < survivors_at.size(); ++i) {
        if (survivors_at[i] == out.fixed_point) {
            out.stabilization = static_cast<int>(i) + 1;
            break;
        }
    }
    return out;
}

}  // namespace

LabelSet trim_rooted(const RootedProblem& p, const LabelSet& sigma_sub) {
    return trim_rooted_trace(p, sigma_sub).first;
}

ConfigSet trim_unrooted(const UnrootedProblem& p, const ConfigSet& d_sub) {
    return trim_unrooted_trace(p, d_sub).fixed_point;
}

int pruning_constant(const RootedProblem& p, uint64_t subset_cap) {
    int n = p.num_labels();
    if (n >= 63 || (1ull << n) > subset_cap) return std::max(1, n);
    int best = 1;
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
        LabelSet subset;
        for (int i = 0; i < n; ++i)
            if (mask & (1ull << i)) subset.push_back(i);
        best = std::max(best, trim_rooted_trace(p, std::move(subset)).second);
    }
    return best;
}

int pruning_constant(const UnrootedProblem& p, uint64_t subset_cap) {
    size_t n = p.node_configs.size();
    if (n >= 63 || (1ull << n) > subset_cap) return std::max<int>(1, static_cast<int>(n));
    int best = 1;
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
        ConfigSet subset;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) subset.push_back(p.node_configs[i]);
        best = std::max(best, trim_unrooted_trace(p, subset).stabilization);
    }
    return best;
}

namespace {

struct RootedDepthSearch {
    explicit RootedDepthSearch(const RootedProblem& p_) : p(p_) {}

    const RootedProblem& p;
    bool infinite = false;
    int best = 0;
    GoodSequence best_witness;
    GoodSequence trace;  // set on infinity

    // prev_c: Sigma_{i-1}^C; chain holds the alternating sets so far.
    void explore(const LabelSet& prev_c, int completed, GoodSequence chain) {
        LabelSet r = trim_rooted(p, prev_c);
        if (r.empty()) return;
        chain.r_sets.push_back(r);
        if (completed + 1 > best) {
            best = completed + 1;
            best_witness = chain;
        }
        for (const auto& comp : flex_scc_rooted(p, r)) {
            if (infinite) return;
            if (comp == prev_c) {
                // Non-strict step: the same component recurs forever.
                infinite = true;
                trace = chain;
                trace.c_sets.push_back(comp);
                return;
            }
            GoodSequence next = chain;
            next.c_sets.push_back(comp);
            explore(comp, completed + 1, std::move(next));
        }
    }
};

struct UnrootedDepthSearch {
    explicit UnrootedDepthSearch(const UnrootedProblem& p_) : p(p_) {}

    const UnrootedProblem& p;
    bool infinite = false;
    int best = 0;
    GoodSequence best_witness;
    GoodSequence trace;

    void explore(const ConfigSet& prev_v, const PairSet& prev_d, int completed, GoodSequence chain) {
        UnrootedProblem restricted = restrict_unrooted(p, prev_d);
        ConfigSet pool;
        for (const auto& c : restricted.node_configs)
            if (contains(prev_v, c)) pool.push_back(c);
        ConfigSet v = trim_unrooted(p, pool);
        if (v.empty()) return;
        chain.v_sets.push_back(v);
        if (completed + 1 > best) {
            best = completed + 1;
            best_witness = chain;
        }
        for (const auto& d : flex_scc_unrooted(p, v)) {
            if (infinite) return;
            if (d == prev_d) {
                infinite = true;
                trace = chain;
                trace.d_sets.push_back(d);
                return;
            }
            GoodSequence next = chain;
            next.d_sets.push_back(d);
            explore(v, d, completed + 1, std::move(next));
        }
    }
};

}  // namespace

DepthResult depth(const RootedProblem& p) {
    RootedDepthSearch search(p);
    search.explore(p.all_labels(), 0, GoodSequence{});
    DepthResult out;
    if (search.infinite) {
        out.kind = DepthKind::Infinite;
        out.witness = search.best_witness;
        out.state_trace = search.trace;
    } else if (search.best == 0) {
        out.kind = DepthKind::Zero;
    } else {
        out.kind = DepthKind::Finite;
        out.k = search.best;
        out.witness = search.best_witness;
    }
    return out;
}

DepthResult depth(const UnrootedProblem& p) {
    UnrootedDepthSearch search(p);
    search.explore(p.node_configs, all_pairs(p.num_labels()), 0, GoodSequence{});
    DepthResult out;
    if (search.infinite) {
        out.kind = DepthKind::Infinite;
        out.witness = search.best_witness;
        out.state_trace = search.trace;
    } else if (search.best == 0) {
        out.kind = DepthKind::Zero;
    } else {
        out.kind = DepthKind::Finite;
        out.k = search.best;
        out.witness = search.best_witness;
    }
    return out;
}

DepthResult depth(const Problem& p) {
    if (std::holds_alternative<RootedProblem>(p)) return depth(std::get<RootedProblem>(p));
    return depth(std::get<UnrootedProblem>(p));
}

ClassReport classify(const Problem& p, const CertSearchBounds& bounds) {
    ClassReport report;
    report.depth = depth(p);

    auto finite_class = [&](int k) {
        std::ostringstream os;
        os << "Theta(n^{1/" << k << "})";
        return os.str();
    };

    if (std::holds_alternative<UnrootedProblem>(p)) {
        switch (report.depth.kind) {
            case DepthKind::Zero:
                report.cls = "unsolvable";
                report.detail = "no correct labeling exists on large regular trees";
                report.exit_code = 2;
                break;
            case DepthKind::Finite:
                report.cls = finite_class(report.depth.k);
                report.detail = report.cls + " in deterministic LOCAL and randomized online-LOCAL";
                break;
            case DepthKind::Infinite:
                report.cls = "O(log n)";
                report.detail = "solvable in CONGEST, and hence online-LOCAL, with locality O(log n)";
                break;
        }
        return report;
    }

    const auto& rp = std::get<RootedProblem>(p);
    if (report.depth.kind == DepthKind::Zero) {
        report.cls = "unsolvable";
        report.detail = "no correct labeling exists on large regular trees";
        report.exit_code = 2;
        return report;
    }

    CertSearchResult cert = search_certificate(rp, bounds);
    report.cert_status = cert.status;
    if (cert.status == CertSearchStatus::Found) {
        CertificateVerdict verdict = verify_certificate(rp, *cert.certificate);
        if (!verdict.pass) throw InternalError("certificate search returned an invalid certificate");
        report.certificate = cert.certificate;
    }
    if (cert.status == CertSearchStatus::BudgetExceeded)
        report.caveats.push_back("certificate search stopped at the expansion cap; results below the cap only");

    if (report.depth.kind == DepthKind::Finite) {
        if (report.certificate)
            throw InternalError("finite depth and a verified certificate cannot coexist");
        report.cls = finite_class(report.depth.k);
        report.detail = report.cls + " in both deterministic LOCAL and randomized online-LOCAL";
        return report;
    }

    // Infinite depth.
    if (report.certificate) {
        report.cls = "O(log* n) LOCAL / O(1) online-LOCAL";
        report.detail =
            "coprime certificate found: O(log* n) in deterministic LOCAL and O(1) in online-LOCAL";
    } else {
        report.cls = "Theta(log n)";
        std::ostringstream os;
        os << "no certificate with max_depth=" << bounds.max_depth << ", max_sigma="
           << (bounds.max_sigma < 0 ? rp.num_labels() : bounds.max_sigma)
           << "; classification is conditional on certificate absence beyond these bounds";
        report.detail = "Theta(log n) in both models, conditional on certificate absence";
        report.caveats.push_back(os.str());
    }
    return report;
}

namespace {

nlohmann::ordered_json label_set_json(const LabelSet& s, const std::vector<std::string>& names) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (LabelId x : s) arr.push_back(names[static_cast<size_t>(x)]);
    return arr;
}

nlohmann::ordered_json config_set_json(const ConfigSet& s, const std::vector<std::string>& names) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : s) {
        nlohmann::ordered_json cfg = nlohmann::ordered_json::array();
        for (LabelId x : c) cfg.push_back(names[static_cast<size_t>(x)]);
        arr.push_back(std::move(cfg));
    }
    return arr;
}

nlohmann::ordered_json pair_set_json(const PairSet& s, const std::vector<std::string>& names) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& pr : s)
        arr.push_back({names[static_cast<size_t>(pr[0])], names[static_cast<size_t>(pr[1])]});
    return arr;
}

nlohmann::ordered_json witness_json(const GoodSequence& w, const Problem& p) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    if (std::holds_alternative<RootedProblem>(p)) {
        const auto& names = std::get<RootedProblem>(p).labels;
        for (size_t i = 0; i < w.r_sets.size(); ++i) {
            arr.push_back(label_set_json(w.r_sets[i], names));
            if (i < w.c_sets.size()) arr.push_back(label_set_json(w.c_sets[i], names));
        }
    } else {
        const auto& names = std::get<UnrootedProblem>(p).labels;
        for (size_t i = 0; i < w.v_sets.size(); ++i) {
            arr.push_back(config_set_json(w.v_sets[i], names));
            if (i < w.d_sets.size()) arr.push_back(pair_set_json(w.d_sets[i], names));
        }
    }
    return arr;
}

}  // namespace

std::string class_report_to_json(const ClassReport& report, const Problem& p) {
    nlohmann::ordered_json j;
    switch (report.depth.kind) {
        case DepthKind::Zero: j["depth"] = "0"; break;
        case DepthKind::Finite: j["depth"] = std::to_string(report.depth.k); break;
        case DepthKind::Infinite: j["depth"] = "inf"; break;
    }
    j["class"] = report.cls;
    j["detail"] = report.detail;
    j["witness_good_sequence"] = witness_json(
        report.depth.kind == DepthKind::Infinite ? report.depth.state_trace : report.depth.witness, p);
    if (report.certificate && std::holds_alternative<RootedProblem>(p)) {
        j["certificate"] =
            nlohmann::ordered_json::parse(certificate_to_json(*report.certificate, std::get<RootedProblem>(p)));
    } else {
        j["certificate"] = nullptr;
    }
    j["caveats"] = report.caveats;
    return j.dump(2) + "\n";
}

}  // namespace lcl
