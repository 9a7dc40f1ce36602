#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lcl {

// Layer tags: (R,i) / (C,i) from the layered lower-bound constructions.
enum class LayerKind : int8_t { None = -1, R = 0, C = 1 };

struct LbParams {
    std::string kind;  // "rooted-lb", "unrooted-lb", "chunks", "complete-tree"
    int delta = 0;
    int beta = 0;   // rooted stabilization constant
    int gamma = 0;  // unrooted stabilization constant
    int k = 0;
    int t = 0;
    int d = 0;          // chunk depth parameter
    int sigma_size = 0; // chunk |Sigma|
};

// Tree/forest with construction-order node ids. Rooted instances use the
// parent array (-1 at roots); unrooted instances reuse the same array as the
// construction tree and are interpreted through their undirected adjacency.
// Annotations ride in sidecar arrays that are empty when untagged.
struct Tree {
    bool rooted = true;
    int n = 0;
    std::vector<int> parent;

    std::vector<int8_t> layer_kind;   // LayerKind values
    std::vector<int16_t> layer_index;
    std::vector<int32_t> core_path;   // core-path id or -1
    std::vector<int32_t> chunk;       // chunk id or -1
    std::vector<std::pair<int, int>> merged;  // (node, chunk whose tree root merged here)

    LbParams params;

    int add_node(int par) {
        parent.push_back(par);
        return n++;
    }

    bool has_annotations() const { return !layer_kind.empty(); }
    LayerKind kind_of(int v) const {
        return layer_kind.empty() ? LayerKind::None : static_cast<LayerKind>(layer_kind[static_cast<size_t>(v)]);
    }
    int layer_of(int v) const { return layer_index.empty() ? 0 : layer_index[static_cast<size_t>(v)]; }
    int core_path_of(int v) const { return core_path.empty() ? -1 : core_path[static_cast<size_t>(v)]; }

    std::vector<std::vector<int>> children_lists() const;
    std::vector<std::vector<int>> adjacency() const;  // undirected, sorted
    std::vector<int> roots() const;
    std::vector<int> depths() const;  // distance from the construction root(s)
    int degree(const std::vector<std::vector<int>>& adj, int v) const {
        return static_cast<int>(adj[static_cast<size_t>(v)].size());
    }
};

struct CorePath {
    int id = 0;
    int layer = 0;
    std::vector<int> nodes;  // v_1 .. v_s, v_1 nearest the construction root
    bool is_main = false;    // P_i: the layer's path nearest the root
};

// Reconstructs the per-layer core paths from annotations.
std::vector<CorePath> core_paths(const Tree& g);

std::string tree_to_json(const Tree& g);
Tree tree_from_json(const std::string& text);

// Radius-r ball around v (node set, sorted), in the undirected tree.
std::vector<int> ball(const std::vector<std::vector<int>>& adj, int v, long radius);

}  // namespace lcl
