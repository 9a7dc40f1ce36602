#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lcl/automaton.hpp"
#include "lcl/depth.hpp"
#include "lcl/harness.hpp"
#include "lcl/instances.hpp"
#include "lcl/problem.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

ordered_json report_header(const std::string& command, ordered_json params) {
    ordered_json j;
    j["tool"] = "lcltree";
    j["version"] = kVersion;
    j["command"] = command;
    j["params"] = std::move(params);
    return j;
}

void emit(const ordered_json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

lcl::Problem load_problem(const std::string& path, bool normalize) {
    auto parsed = lcl::parse_problem(read_file(path), {normalize});
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    return parsed.problem;
}

lcl::Locality parse_locality(const std::string& s) {
    if (s == "n") return lcl::Locality::full_visibility();
    return lcl::Locality::of(std::stol(s));
}

int cmd_classify(const std::string& problem_path, int max_depth, int max_sigma, uint64_t cap,
                 bool normalize, const std::string& out_path) {
    lcl::Problem p = load_problem(problem_path, normalize);
    lcl::CertSearchBounds bounds{max_depth, max_sigma, cap};
    lcl::ClassReport report = lcl::classify(p, bounds);

    ordered_json params;
    params["problem"] = problem_path;
    params["max_depth"] = max_depth;
    params["max_sigma"] = max_sigma;
    params["expansion_cap"] = cap;
    ordered_json j = report_header("classify", std::move(params));
    j["report"] = ordered_json::parse(lcl::class_report_to_json(report, p));
    emit(j, out_path);
    return report.exit_code;
}

int cmd_certificate(const std::string& problem_path, int max_depth, int max_sigma, uint64_t cap,
                    bool normalize, const std::string& out_path) {
    lcl::Problem p = load_problem(problem_path, normalize);
    if (!std::holds_alternative<lcl::RootedProblem>(p))
        throw std::runtime_error("certificates are defined for rooted problems");
    const auto& rp = std::get<lcl::RootedProblem>(p);
    lcl::CertSearchResult res = lcl::search_certificate(rp, {max_depth, max_sigma, cap});

    ordered_json params;
    params["problem"] = problem_path;
    params["max_depth"] = max_depth;
    params["max_sigma"] = max_sigma;
    params["expansion_cap"] = cap;
    ordered_json j = report_header("certificate", std::move(params));
    switch (res.status) {
        case lcl::CertSearchStatus::Found: j["status"] = "FOUND"; break;
        case lcl::CertSearchStatus::NotFound: j["status"] = "NOT_FOUND"; break;
        case lcl::CertSearchStatus::BudgetExceeded: j["status"] = "BUDGET_EXCEEDED"; break;
    }
    j["explored"] = {{"max_depth", res.explored.max_depth},
                     {"max_sigma", res.explored.max_sigma},
                     {"expansions", res.expansions}};
    if (res.certificate)
        j["certificate"] = ordered_json::parse(lcl::certificate_to_json(*res.certificate, rp));
    emit(j, out_path);
    return 0;
}

int cmd_gen(const std::string& kind, int delta, int beta, int gamma, int k, int t, int d, int sigma,
            int b, int u, int chunk, int depth, const std::string& tree_kind, uint64_t seed,
            const std::string& out_path, const std::string& schedule_out) {
    ordered_json params;
    params["kind"] = kind;
    params["seed"] = std::to_string(seed);
    ordered_json j;

    if (kind == "rooted-lb" || kind == "unrooted-lb") {
        bool rooted = kind == "rooted-lb";
        params["delta"] = delta;
        params[rooted ? "beta" : "gamma"] = rooted ? beta : gamma;
        params["k"] = k;
        params["t"] = t;
        lcl::Tree g = rooted ? lcl::build_lb_rooted(delta, beta, k, t)
                             : lcl::build_lb_unrooted(delta, gamma, k, t);
        j = report_header("gen", std::move(params));
        j["node_count"] = g.n;
        j["core_paths"] = static_cast<int>(lcl::core_paths(g).size());
        j["s"] = 4 * t + 4;
        if (!out_path.empty()) write_file(out_path, lcl::tree_to_json(g));
        if (!schedule_out.empty()) {
            lcl::Schedule sched = rooted ? lcl::sample_schedule_rooted(g, t, seed)
                                         : lcl::sample_schedule_unrooted(g, t, seed);
            write_file(schedule_out, lcl::schedule_to_json(sched));
            j["u_prefix_length"] = sched.prefix_length();
        }
    } else if (kind == "chunks") {
        params["sigma"] = sigma;
        params["delta"] = delta;
        params["d"] = d;
        params["b"] = b;
        params["u"] = u;
        params["chunk"] = chunk;
        lcl::ChunkInstance inst = lcl::build_chunk_instance(sigma, delta, d, {b, u, chunk});
        j = report_header("gen", std::move(params));
        j["node_count"] = inst.tree.n;
        j["node_count_formula"] = lcl::chunk_instance_node_count(sigma, delta, d, b);
        j["choice_count_formula"] = lcl::chunk_choice_count(sigma, delta, d);
        j["middle_nodes"] = static_cast<int>(inst.middle_nodes.size());
        if (!out_path.empty()) {
            lcl::Tree& g = inst.tree;
            std::string text = lcl::tree_to_json(g);
            // append middle nodes and choice alongside the tree
            ordered_json tj = ordered_json::parse(text);
            tj["middle_nodes"] = inst.middle_nodes;
            tj["choice"] = {{"b", b}, {"u", u}, {"chunk", chunk}};
            write_file(out_path, tj.dump() + "\n");
        }
        if (!schedule_out.empty())
            write_file(schedule_out, lcl::schedule_to_json(lcl::chunk_schedule(inst)));
    } else if (kind == "complete-tree") {
        params["delta"] = delta;
        params["depth"] = depth;
        params["tree_kind"] = tree_kind;
        lcl::TreeKind tk = lcl::TreeKind::DeltaAry;
        if (tree_kind == "t") tk = lcl::TreeKind::T;
        else if (tree_kind == "t-star") tk = lcl::TreeKind::TStar;
        else if (tree_kind != "delta-ary") throw std::runtime_error("tree kind must be delta-ary|t|t-star");
        lcl::Tree g = lcl::complete_tree(delta, depth, tk);
        j = report_header("gen", std::move(params));
        j["node_count"] = g.n;
        j["node_count_formula"] = lcl::complete_tree_size(delta, depth, tk);
        if (!out_path.empty()) write_file(out_path, lcl::tree_to_json(g));
    } else {
        throw std::runtime_error("gen kind must be rooted-lb|unrooted-lb|chunks|complete-tree");
    }
    emit(j, "");
    return 0;
}

int cmd_simulate(const std::string& problem_path, const std::string& instance_path,
                 const std::string& schedule_path, bool sample, const std::string& algorithm,
                 const std::string& commit, const std::string& locality, int trials, uint64_t seed,
                 bool normalize) {
    if (trials < 1) throw std::runtime_error("trials must be >= 1");
    lcl::Problem p = load_problem(problem_path, normalize);
    lcl::Tree g = lcl::tree_from_json(read_file(instance_path));

    int problem_delta = std::holds_alternative<lcl::RootedProblem>(p)
                            ? std::get<lcl::RootedProblem>(p).delta
                            : std::get<lcl::UnrootedProblem>(p).delta;
    if (g.params.delta != 0 && g.params.delta != problem_delta)
        throw std::runtime_error("instance delta does not match the problem");
    bool problem_rooted = std::holds_alternative<lcl::RootedProblem>(p);
    if (problem_rooted != g.rooted)
        throw std::runtime_error("instance kind does not match the problem");

    std::vector<lcl::LabelId> commit_ids;
    if (!commit.empty()) {
        std::stringstream ss(commit);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::optional<lcl::LabelId> id =
                problem_rooted ? std::get<lcl::RootedProblem>(p).find_label(item)
                               : std::get<lcl::UnrootedProblem>(p).find_label(item);
            if (!id) throw std::runtime_error("unknown commit label \"" + item + "\"");
            commit_ids.push_back(*id);
        }
    }

    lcl::Locality T = parse_locality(locality);
    lcl::TrialSetup setup;
    setup.g = &g;
    setup.p = &p;
    setup.T = T;
    setup.factory = [&](const lcl::RunInfo& info) {
        return lcl::make_algorithm(algorithm, p, info, commit_ids);
    };
    if (sample) {
        if (g.params.kind != "rooted-lb" && g.params.kind != "unrooted-lb")
            throw std::runtime_error("--sample needs a lower-bound instance with embedded params");
        setup.sampler = [&](uint64_t s) {
            return g.rooted ? lcl::sample_schedule_rooted(g, g.params.t, s)
                            : lcl::sample_schedule_unrooted(g, g.params.t, s);
        };
    } else {
        lcl::Schedule fixed = lcl::schedule_from_json(read_file(schedule_path));
        setup.sampler = [fixed](uint64_t) { return fixed; };
    }

    lcl::FailureEstimate est = lcl::estimate_failure(setup, trials, seed);

    ordered_json params;
    params["problem"] = problem_path;
    params["instance"] = instance_path;
    params["schedule"] = sample ? "(sampled per trial)" : schedule_path;
    params["algorithm"] = algorithm;
    if (!commit.empty()) params["commit"] = commit;
    params["locality"] = locality;
    params["trials"] = trials;
    params["seed"] = std::to_string(seed);
    ordered_json j = report_header("simulate", std::move(params));
    j["estimate"] = ordered_json::parse(lcl::failure_estimate_to_json(est));
    emit(j, "");
    return 0;
}

int cmd_check(const std::string& problem_path, const std::string& tree_path,
              const std::string& labeling_path, bool normalize) {
    lcl::Problem p = load_problem(problem_path, normalize);
    lcl::Tree g = lcl::tree_from_json(read_file(tree_path));
    nlohmann::json lj = nlohmann::json::parse(read_file(labeling_path));

    lcl::Verdict verdict;
    if (std::holds_alternative<lcl::RootedProblem>(p)) {
        const auto& rp = std::get<lcl::RootedProblem>(p);
        std::vector<int> labels;
        for (const auto& entry : lj.at("labels")) {
            if (entry.is_null()) {
                labels.push_back(-1);
                continue;
            }
            auto id = rp.find_label(entry.get<std::string>());
            labels.push_back(id ? *id : -1);
        }
        verdict = lcl::check_rooted(g, labels, rp);
    } else {
        const auto& up = std::get<lcl::UnrootedProblem>(p);
        std::vector<std::vector<int>> he;
        for (const auto& node_labels : lj.at("half_edges")) {
            std::vector<int> row;
            for (const auto& entry : node_labels) {
                if (entry.is_null()) {
                    row.push_back(-1);
                    continue;
                }
                auto id = up.find_label(entry.get<std::string>());
                row.push_back(id ? *id : -1);
            }
            he.push_back(std::move(row));
        }
        verdict = lcl::check_unrooted(g, he, up);
    }

    ordered_json params;
    params["problem"] = problem_path;
    params["tree"] = tree_path;
    params["labeling"] = labeling_path;
    ordered_json j = report_header("check", std::move(params));
    j["verdict"] = verdict.pass ? "PASS" : "FAIL";
    ordered_json viols = ordered_json::array();
    for (const auto& v : verdict.violations) viols.push_back({{"node", v.node}, {"what", v.what}});
    j["violations"] = std::move(viols);
    emit(j, "");
    return verdict.pass ? 0 : 3;
}

int cmd_export_automaton(const std::string& problem_path, const std::string& allowed_csv,
                         bool normalize, const std::string& out_path) {
    lcl::Problem p = load_problem(problem_path, normalize);
    lcl::Automaton a;
    if (std::holds_alternative<lcl::RootedProblem>(p)) {
        const auto& rp = std::get<lcl::RootedProblem>(p);
        lcl::LabelSet allowed = rp.all_labels();
        if (!allowed_csv.empty()) {
            allowed.clear();
            std::stringstream ss(allowed_csv);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto id = rp.find_label(item);
                if (!id) throw std::runtime_error("unknown label \"" + item + "\"");
                allowed.push_back(*id);
            }
            allowed = lcl::sorted_unique(std::move(allowed));
        }
        a = lcl::build_automaton_rooted(rp, allowed);
    } else {
        const auto& up = std::get<lcl::UnrootedProblem>(p);
        a = lcl::build_automaton_unrooted(up, up.node_configs);
    }
    std::string dot = lcl::automaton_to_dot(a, p);
    if (out_path.empty()) std::cout << dot;
    else write_file(out_path, dot);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LCL locality classifier and online-LOCAL stress harness for regular trees"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    bool normalize = false;
    app.add_flag("--normalize", normalize, "drop duplicate problem entries with a warning");

    // classify
    auto* classify = app.add_subcommand("classify", "decide the locality class of a problem");
    std::string cl_problem, cl_out;
    int cl_max_depth = 6, cl_max_sigma = -1;
    uint64_t cl_cap = 10'000'000;
    classify->add_option("problem", cl_problem)->required();
    classify->add_option("--max-depth", cl_max_depth);
    classify->add_option("--max-sigma", cl_max_sigma);
    classify->add_option("--cap", cl_cap);
    classify->add_option("-o,--out", cl_out);

    // certificate
    auto* certificate = app.add_subcommand("certificate", "search for a coprime certificate");
    std::string ce_problem, ce_out;
    int ce_max_depth = 6, ce_max_sigma = -1;
    uint64_t ce_cap = 10'000'000;
    certificate->add_option("problem", ce_problem)->required();
    certificate->add_option("--max-depth", ce_max_depth);
    certificate->add_option("--max-sigma", ce_max_sigma);
    certificate->add_option("--cap", ce_cap);
    certificate->add_option("-o,--out", ce_out);

    // gen
    auto* gen = app.add_subcommand("gen", "generate instances and schedules");
    std::string g_kind, g_out, g_schedule_out, g_tree_kind = "delta-ary";
    int g_delta = 2, g_beta = 1, g_gamma = 1, g_k = 1, g_t = 1, g_d = 3, g_sigma = 2;
    int g_b = 0, g_u = 0, g_chunk = 0, g_depth = 2;
    uint64_t g_seed = 1;
    gen->add_option("kind", g_kind, "rooted-lb|unrooted-lb|chunks|complete-tree")->required();
    gen->add_option("--delta", g_delta);
    gen->add_option("--beta", g_beta);
    gen->add_option("--gamma", g_gamma);
    gen->add_option("--k", g_k);
    gen->add_option("--t", g_t);
    gen->add_option("--d", g_d);
    gen->add_option("--sigma", g_sigma);
    gen->add_option("--b", g_b);
    gen->add_option("--u", g_u);
    gen->add_option("--chunk", g_chunk);
    gen->add_option("--depth", g_depth);
    gen->add_option("--tree-kind", g_tree_kind, "delta-ary|t|t-star");
    gen->add_option("--seed", g_seed);
    gen->add_option("-o,--out", g_out);
    gen->add_option("--schedule-out", g_schedule_out);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "estimate failure frequency of an algorithm");
    std::string s_problem, s_instance, s_schedule, s_algorithm, s_commit, s_locality = "0";
    bool s_sample = false;
    int s_trials = 100;
    uint64_t s_seed = 1;
    simulate->add_option("--problem", s_problem)->required();
    simulate->add_option("--instance", s_instance)->required();
    auto* opt_sched = simulate->add_option("--schedule", s_schedule);
    auto* opt_sample = simulate->add_flag("--sample", s_sample, "resample the schedule each trial");
    opt_sched->excludes(opt_sample);
    opt_sample->excludes(opt_sched);
    simulate->add_option("--algorithm", s_algorithm,
                         "offline-oracle|random|commit-victim|parity-victim|outside-trim-victim|split-scc-victim")
        ->required();
    simulate->add_option("--commit", s_commit, "comma-separated commit labels for victims");
    simulate->add_option("--locality", s_locality, "integer or \"n\"");
    simulate->add_option("--trials", s_trials);
    simulate->add_option("--seed", s_seed);

    // check
    auto* check = app.add_subcommand("check", "verify a labeling file");
    std::string k_problem, k_tree, k_labeling;
    check->add_option("--problem", k_problem)->required();
    check->add_option("--tree", k_tree)->required();
    check->add_option("--labeling", k_labeling)->required();

    // export-automaton
    auto* exp = app.add_subcommand("export-automaton", "write the automaton in DOT format");
    std::string e_problem, e_allowed, e_out;
    exp->add_option("problem", e_problem)->required();
    exp->add_option("--allowed", e_allowed, "comma-separated label restriction (rooted)");
    exp->add_option("-o,--out", e_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed())
            return cmd_classify(cl_problem, cl_max_depth, cl_max_sigma, cl_cap, normalize, cl_out);
        if (certificate->parsed())
            return cmd_certificate(ce_problem, ce_max_depth, ce_max_sigma, ce_cap, normalize, ce_out);
        if (gen->parsed())
            return cmd_gen(g_kind, g_delta, g_beta, g_gamma, g_k, g_t, g_d, g_sigma, g_b, g_u,
                           g_chunk, g_depth, g_tree_kind, g_seed, g_out, g_schedule_out);
        if (simulate->parsed())
            return cmd_simulate(s_problem, s_instance, s_schedule, s_sample, s_algorithm, s_commit,
                                s_locality, s_trials, s_seed, normalize);
        if (check->parsed()) return cmd_check(k_problem, k_tree, k_labeling, normalize);
        if (exp->parsed()) return cmd_export_automaton(e_problem, e_allowed, normalize, e_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
