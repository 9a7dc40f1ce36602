#include "lcl/problem.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lcl {

using nlohmann::json;
using nlohmann::ordered_json;

LabelSet RootedProblem::all_labels() const {
    LabelSet out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<LabelId>(i);
    return out;
}

std::optional<LabelId> RootedProblem::find_label(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name) return static_cast<LabelId>(i);
    return std::nullopt;
}

std::optional<LabelId> UnrootedProblem::find_label(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name) return static_cast<LabelId>(i);
    return std::nullopt;
}

bool UnrootedProblem::edge_allowed(LabelId a, LabelId b) const {
    return contains(edge_configs, make_pair_config(a, b));
}

bool is_submultiset(const Config& sub, const Config& sup) {
    size_t i = 0;
    for (LabelId x : sub) {
        while (i < sup.size() && sup[i] < x) ++i;
        if (i == sup.size() || sup[i] != x) return false;
        ++i;
    }
    return true;
}

PairSet sub_pairs(const Config& c) {
    PairSet out;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = i + 1; j < c.size(); ++j) out.push_back(make_pair_config(c[i], c[j]));
    return sorted_unique(std::move(out));
}

PairSet all_pairs(int num_labels) {
    PairSet out;
    for (LabelId a = 0; a < num_labels; ++a)
        for (LabelId b = a; b < num_labels; ++b) out.push_back({a, b});
    return out;
}

bool contains(const LabelSet& s, LabelId x) { return std::binary_search(s.begin(), s.end(), x); }
bool contains(const PairSet& s, const PairConfig& x) { return std::binary_search(s.begin(), s.end(), x); }
bool contains(const ConfigSet& s, const Config& x) { return std::binary_search(s.begin(), s.end(), x); }

template <typename T>
static bool subset_impl(const T& a, const T& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
bool is_subset(const LabelSet& a, const LabelSet& b) { return subset_impl(a, b); }
bool is_subset(const PairSet& a, const PairSet& b) { return subset_impl(a, b); }
bool is_subset(const ConfigSet& a, const ConfigSet& b) { return subset_impl(a, b); }

template <typename T>
static T sorted_unique_impl(T v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}
LabelSet sorted_unique(LabelSet v) { return sorted_unique_impl(std::move(v)); }
PairSet sorted_unique(PairSet v) { return sorted_unique_impl(std::move(v)); }
ConfigSet sorted_unique(ConfigSet v) { return sorted_unique_impl(std::move(v)); }

RootedProblem canonicalize(RootedProblem p) {
    for (auto& r : p.rules) std::sort(r.children.begin(), r.children.end());
    std::sort(p.rules.begin(), p.rules.end());
    p.rules.erase(std::unique(p.rules.begin(), p.rules.end()), p.rules.end());
    return p;
}

UnrootedProblem canonicalize(UnrootedProblem p) {
    for (auto& c : p.node_configs) std::sort(c.begin(), c.end());
    p.node_configs = sorted_unique(std::move(p.node_configs));
    for (auto& e : p.edge_configs) e = make_pair_config(e[0], e[1]);
    p.edge_configs = sorted_unique(std::move(p.edge_configs));
    return p;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

std::vector<std::string> parse_label_list(const json& j) {
    if (!j.contains("labels") || !j["labels"].is_array()) fail("missing \"labels\" array");
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& l : j["labels"]) {
        if (!l.is_string()) fail("label entries must be strings");
        std::string name = l.get<std::string>();
        if (name.empty()) fail("label names must be non-empty");
        if (!seen.insert(name).second) fail("duplicate label \"" + name + "\"");
        labels.push_back(std::move(name));
    }
    if (labels.empty()) fail("label set must be non-empty");
    return labels;
}

LabelId lookup(const std::vector<std::string>& labels, const std::string& name,
               const std::string& where) {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name) return static_cast<LabelId>(i);
    fail("unknown label \"" + name + "\" in " + where);
}

Config parse_config(const json& arr, const std::vector<std::string>& labels, int arity,
                    const std::string& where) {
    if (!arr.is_array()) fail(where + ": expected an array of labels");
    if (static_cast<int>(arr.size()) != arity)
        fail(where + ": expected " + std::to_string(arity) + " labels, got " +
             std::to_string(arr.size()));
    Config c;
    for (const auto& l : arr) {
        if (!l.is_string()) fail(where + ": labels must be strings");
        c.push_back(lookup(labels, l.get<std::string>(), where));
    }
    std::sort(c.begin(), c.end());
    return c;
}

}  // namespace

ParsedProblem parse_problem(const std::string& text, const ParseOptions& opts) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) fail("problem file must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) fail("missing \"kind\"");
    std::string kind = j["kind"].get<std::string>();
    if (!j.contains("delta") || !j["delta"].is_number_integer()) fail("missing integer \"delta\"");
    int delta = j["delta"].get<int>();

    ParsedProblem out;
    if (kind == "rooted") {
        if (delta < 1) fail("delta must be >= 1");
        RootedProblem p;
        p.delta = delta;
        p.labels = parse_label_list(j);
        if (!j.contains("configurations") || !j["configurations"].is_array())
            fail("missing \"configurations\" array");
        size_t idx = 0;
        for (const auto& entry : j["configurations"]) {
            std::string where = "configurations[" + std::to_string(idx++) + "]";
            if (!entry.is_object() || !entry.contains("parent") || !entry.contains("children"))
                fail(where + ": expected {\"parent\":label,\"children\":[...]}");
            RootedRule r;
            r.parent = lookup(p.labels, entry["parent"].get<std::string>(), where);
            r.children = parse_config(entry["children"], p.labels, p.delta, where);
            p.rules.push_back(std::move(r));
        }
        size_t before = p.rules.size();
        p = canonicalize(std::move(p));
        if (p.rules.size() != before) {
            if (!opts.normalize) fail("duplicate configuration entries (use normalization to drop them)");
            out.warnings.push_back("dropped " + std::to_string(before - p.rules.size()) +
                                   " duplicate configuration(s)");
        }
        out.problem = std::move(p);
    } else if (kind == "unrooted") {
        if (delta < 2) fail("delta must be >= 2 for unrooted problems");
        UnrootedProblem p;
        p.delta = delta;
        p.labels = parse_label_list(j);
        if (!j.contains("node_configs") || !j["node_configs"].is_array())
            fail("missing \"node_configs\" array");
        if (!j.contains("edge_configs") || !j["edge_configs"].is_array())
            fail("missing \"edge_configs\" array");
        size_t idx = 0;
        for (const auto& entry : j["node_configs"])
            p.node_configs.push_back(
                parse_config(entry, p.labels, p.delta, "node_configs[" + std::to_string(idx++) + "]"));
        idx = 0;
        for (const auto& entry : j["edge_configs"]) {
            Config c = parse_config(entry, p.labels, 2, "edge_configs[" + std::to_string(idx++) + "]");
            p.edge_configs.push_back({c[0], c[1]});
        }
        size_t before_n = p.node_configs.size(), before_e = p.edge_configs.size();
        p = canonicalize(std::move(p));
        size_t dropped = (before_n - p.node_configs.size()) + (before_e - p.edge_configs.size());
        if (dropped > 0) {
            if (!opts.normalize) fail("duplicate configuration entries (use normalization to drop them)");
            out.warnings.push_back("dropped " + std::to_string(dropped) + " duplicate configuration(s)");
        }
        out.problem = std::move(p);
    } else {
        fail("kind must be \"rooted\" or \"unrooted\"");
    }
    return out;
}

std::string serialize_problem(const Problem& p) {
    ordered_json j;
    if (std::holds_alternative<RootedProblem>(p)) {
        const auto& rp = std::get<RootedProblem>(p);
        j["kind"] = "rooted";
        j["delta"] = rp.delta;
        j["labels"] = rp.labels;
        ordered_json configs = ordered_json::array();
        for (const auto& r : rp.rules) {
            ordered_json entry;
            entry["parent"] = rp.label_name(r.parent);
            ordered_json children = ordered_json::array();
            for (LabelId c : r.children) children.push_back(rp.label_name(c));
            entry["children"] = std::move(children);
            configs.push_back(std::move(entry));
        }
        j["configurations"] = std::move(configs);
    } else {
        const auto& up = std::get<UnrootedProblem>(p);
        j["kind"] = "unrooted";
        j["delta"] = up.delta;
        j["labels"] = up.labels;
        ordered_json nodes = ordered_json::array();
        for (const auto& c : up.node_configs) {
            ordered_json arr = ordered_json::array();
            for (LabelId x : c) arr.push_back(up.label_name(x));
            nodes.push_back(std::move(arr));
        }
        j["node_configs"] = std::move(nodes);
        ordered_json edges = ordered_json::array();
        for (const auto& e : up.edge_configs)
            edges.push_back({up.label_name(e[0]), up.label_name(e[1])});
        j["edge_configs"] = std::move(edges);
    }
    return j.dump(2) + "\n";
}

RootedProblem restrict_rooted(const RootedProblem& p, const LabelSet& allowed) {
    RootedProblem out;
    out.delta = p.delta;
    out.labels = p.labels;
    for (const auto& r : p.rules) {
        if (!contains(allowed, r.parent)) continue;
        bool ok = true;
        for (LabelId c : r.children)
            if (!contains(allowed, c)) {
                ok = false;
                break;
            }
        if (ok) out.rules.push_back(r);
    }
    return out;
}

UnrootedProblem restrict_unrooted(const UnrootedProblem& p, const PairSet& allowed_pairs) {
    UnrootedProblem out;
    out.delta = p.delta;
    out.labels = p.labels;
    out.edge_configs = p.edge_configs;
    for (const auto& c : p.node_configs) {
        bool ok = true;
        for (const auto& pr : sub_pairs(c))
            if (!contains(allowed_pairs, pr)) {
                ok = false;
                break;
            }
        if (ok) out.node_configs.push_back(c);
    }
    return out;
}

}  // namespace lcl
