#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shrubkit/common.hpp"

namespace shrubkit {

// undirected simple graph with named vertex colors; vertices are 0..n-1
struct ColoredGraph {
  int n = 0;
  std::vector<std::vector<Vertex>> adj;            // sorted neighbor lists
  std::vector<std::pair<Vertex, Vertex>> edges;    // sorted, u < v
  std::map<std::string, std::vector<Vertex>> colors;  // sorted vertex lists

  bool has_edge(Vertex u, Vertex v) const {
    if (u == v) return false;
    return contains_sorted(adj[u], v);
  }
  bool has_color(const std::string& name, Vertex v) const {
    auto it = colors.find(name);
    return it != colors.end() && contains_sorted(it->second, v);
  }
  int degree(Vertex v) const { return static_cast<int>(adj[v].size()); }
};

ColoredGraph make_graph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges);

// text format: "graph <n>", "edge <u> <v>" with u < v, "color <name> <v>..."
ColoredGraph load_graph(const std::string& text);
std::string serialize_graph(const ColoredGraph& g);

// induced subgraph on the sorted vertex list `keep`; vertex i of the result
// corresponds to keep[i]
ColoredGraph induced_subgraph(const ColoredGraph& g, const std::vector<Vertex>& keep);

// vertices at distance <= r from v, sorted ascending
std::vector<Vertex> ball(const ColoredGraph& g, Vertex v, int r);

// same, restricted to vertices with alive[w] != 0 (v must be alive)
std::vector<Vertex> ball_masked(const ColoredGraph& g, const std::vector<char>& alive,
                                Vertex v, int r);

// true iff every u-v path of length <= r meets S; endpoints in S always count
// as separated, and u == v is separated only when u is in S
bool is_r_separated(const ColoredGraph& g, Vertex u, Vertex v, int r,
                    const std::vector<Vertex>& s_sorted);

// smallest k such that repeatedly deleting a minimum-degree vertex never
// deletes a vertex of degree > k
int degeneracy(const ColoredGraph& g);

// min-degree removal sequence, ties by smallest id; first removed comes first
std::vector<Vertex> peel_order(const ColoredGraph& g);

struct DirectedGraph {
  int n = 0;
  std::vector<std::pair<Vertex, Vertex>> arcs;  // sorted unique

  bool has_arc(Vertex u, Vertex v) const {
    return std::binary_search(arcs.begin(), arcs.end(), std::make_pair(u, v));
  }
  bool operator==(const DirectedGraph&) const = default;
};

DirectedGraph make_digraph(int n, std::vector<std::pair<Vertex, Vertex>> arcs);

// rooted forest as parent map, parent[v] == -1 for roots; depth counts nodes,
// so a single vertex has depth 1
struct TreedepthForest {
  std::vector<int> parent;
  int depth = 0;
};

// the forest is valid for g iff every edge of g joins an ancestor-descendant
// pair and the parent map is acyclic and spans all vertices
bool validate_treedepth_forest(const ColoredGraph& g, const TreedepthForest& f,
                               int claimed_depth);

// exact minimum elimination-forest depth; throws CapError when a connected
// component exceeds cap vertices
TreedepthForest treedepth(const ColoredGraph& g, int cap = 25);

// valid elimination forest without optimality guarantees (never throws)
TreedepthForest heuristic_treedepth_forest(const ColoredGraph& g);

// proper coloring where every union of two color classes induces a star
// forest; verified before returning
std::vector<int> star_coloring(const ColoredGraph& g);
bool is_star_coloring(const ColoredGraph& g, const std::vector<int>& color);

}  // namespace shrubkit
