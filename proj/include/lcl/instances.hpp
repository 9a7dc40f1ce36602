#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lcl/tree.hpp"

namespace lcl {

enum class TreeKind {
    DeltaAry,  // every internal node has Delta children (rooted-formalism convention)
    T,         // root has Delta-1 children, every other internal node degree Delta
    TStar,     // root has Delta children, every other internal node degree Delta
};

Tree complete_tree(int delta, int depth, TreeKind kind);
int64_t complete_tree_size(int delta, int depth, TreeKind kind);

struct Choice {
    int b = 0;      // 0: identify roots with leaf descendants, 1: attach as children
    int u = 0;      // index into the middle-node list M
    int chunk = 0;  // chunk C, must not contain u
};

struct ChunkInstance {
    Tree tree;
    std::vector<int> middle_nodes;  // chunk-major, tree-minor, canonical within tree
    Choice choice;
    int sigma_size = 0;
    int delta = 0;
    int d = 0;
};

// (|Sigma|+1) chunks of Delta^{d+1} complete Delta-ary height-2d trees, with
// the (b,u,C) attachment applied. Requires Delta^d > 2*sigma_size.
ChunkInstance build_chunk_instance(int sigma_size, int delta, int d, const Choice& choice);

std::vector<Choice> enumerate_choices(int sigma_size, int delta, int d);
int64_t chunk_instance_node_count(int sigma_size, int delta, int d, int b);
int64_t chunk_choice_count(int sigma_size, int delta, int d);

// Layered rooted lower-bound tree: chained core paths of s = 4t+4 nodes with
// T_beta padding, topped off with the recursive G_{R,k+1}.
Tree build_lb_rooted(int delta, int beta, int k, int t);

// Unrooted analogue built around T_gamma / T_gamma^*; all degrees in {1,Delta}.
Tree build_lb_unrooted(int delta, int gamma, int k, int t);

struct Schedule {
    std::vector<int> order;                    // permutation of node ids
    std::vector<std::vector<int>> u_nodes;     // per layer 1..k
    std::vector<std::vector<int>> d_samples;   // distance of each u-node from its path's root end
    std::vector<std::vector<int>> u_paths;     // core-path id of each u-node
    uint64_t seed = 0;

    int prefix_length() const {
        int len = 0;
        for (const auto& layer : u_nodes) len += static_cast<int>(layer.size());
        return len;
    }
};

// Per layer i: samples a distance in {2t+1, 2t+2} from the root end of every
// layer-(C,i) core path, reveals those u-nodes first (uniformly permuted
// within the layer), then everything else breadth-first by node id.
Schedule sample_schedule_rooted(const Tree& g, int t, uint64_t seed);
Schedule sample_schedule_unrooted(const Tree& g, int t, uint64_t seed);

// Deterministic chunk-instance schedule: middle nodes in M order, then the
// rest breadth-first.
Schedule chunk_schedule(const ChunkInstance& inst);

struct NodeSubsets {
    // r_sets[i] = S_{R,i+1}, i in 0..k; c_sets[i] = S_{C,i+1}, i in 0..k-1.
    std::vector<std::vector<char>> r_sets;
    std::vector<std::vector<char>> c_sets;
};

NodeSubsets node_subsets(const Tree& g, const Schedule& sched);

// tau rounds of removing degree-1 nodes; second element maps surviving node
// ids back to ids in the input tree.
std::pair<Tree, std::vector<int>> skeleton_tree(const Tree& g, int tau);

struct RulingSetResult {
    std::vector<int> ruling;
    std::vector<std::vector<int>> segments;  // node-id lists, lengths in [c, 2c]
};

// Drops skeleton nodes of degree > 2, greedily places a (c+1, c) ruling set on
// each remaining path from its canonical endpoint, and returns the inter-ruling
// segments of length >= c.
RulingSetResult path_ruling_set(const Tree& skel, int c);

std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);

}  // namespace lcl
