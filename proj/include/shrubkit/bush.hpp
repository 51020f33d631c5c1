#pragma once

#include <map>
#include <string>
#include <vector>

#include "shrubkit/logic.hpp"
#include "shrubkit/wcol.hpp"

namespace shrubkit {

// rooted tree of equal-depth leaves with a symmetric reflexive same-depth
// info-arc relation; leaves carry labels and arcs carry label-pair relations
struct Bush {
  int depth = 0;
  int n_universe = 0;                       // vertex id space of the leaves
  std::vector<std::vector<int>> tuples;     // node id -> identity tuple
  std::vector<int> parent;                  // -1 for the root
  std::vector<Vertex> leaf_vertex;          // -1 for internal nodes
  std::vector<int> leaf_label;              // -1 for internal nodes
  int num_labels = 0;
  // ordered arcs; presence is symmetric, labels may differ per direction
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> arcs;

  int root() const { return 0; }
  bool is_leaf(int id) const { return leaf_vertex[id] >= 0; }
  int node_count() const { return static_cast<int>(tuples.size()); }
  std::vector<int> ancestors(int id) const;  // id first, root last
  int leaf_of(Vertex v) const;               // -1 when v has no leaf
};

// throws ValidationError when structural invariants fail
void validate_bush(const Bush& b);

// tree depth d = wcol_of_order(G,ord,r); node tuples are the i smallest
// wreach_r members (by ord) padded by repeating v; leaf labels are rank-q
// types of v prefixed to its depth-d tuple; arc labels record exactly the
// label pairs realized by formula-satisfying leaf pairs at their lowest arc
Bush build_bush(const ColoredGraph& g, const VertexOrder& ord, int r, int q,
                const Formula& phi);

DirectedGraph decode_bush(const Bush& b);

// keeps the leaves in w (given as graph vertices), their ancestors, and arcs
// among kept nodes
Bush restrict_bush(const Bush& b, const std::vector<Vertex>& w);

struct OneLabelCheck {
  int s;
  int lhs;       // wcol_s of the output Gaifman graph
  int rhs;       // |labels| * wcol_s of the input Gaifman graph + 1
  bool exact;    // both sides over exhaustively optimal orders
  bool holds;
};

struct OneLabelResult {
  Bush bush;
  int input_labels = 0;
  std::vector<OneLabelCheck> checks;
};

// single-label bush of depth d+1 that decodes identically; node (X,a) of the
// per-label subtree T_a is encoded as the tuple [a] followed by X's tuple
OneLabelResult one_label(const Bush& b, const std::vector<int>& s_list = {1, 2});

struct AppendixDigraph {
  DirectedGraph d;       // over bush node ids
  int max_outdeg = 0;
  long long bound = 0;   // 1 + d^2 * 2^d with d = wcol_{2r}(G, ord)
};

// edge (Y,X) for distinct nodes iff X is the root or max(X) lies in Y; the
// Gaifman graph of b is a subgraph of the underlying undirected graph
AppendixDigraph appendix_digraph(const Bush& b, const ColoredGraph& g,
                                 const VertexOrder& ord, int r);

// parent-child edges plus info-arc edges, loops dropped
ColoredGraph bush_gaifman(const Bush& b);

// root first, then ascending max element (last tuple entry), ties by
// rank-lexicographic tuple comparison, internal before leaf
VertexOrder bush_extended_order(const Bush& b, const VertexOrder& ord);

std::string bush_to_json(const Bush& b);
Bush bush_from_json(const std::string& text);
std::string bush_to_dot(const Bush& b);

}  // namespace shrubkit
