#pragma once

#include <string>
#include <vector>

#include "shrubkit/graph.hpp"

namespace shrubkit {

// total order on vertices; seq[i] is the vertex at position i, rank is its
// inverse; u <= v means rank[u] <= rank[v]
struct VertexOrder {
  std::vector<Vertex> seq;
  std::vector<int> rank;
};

VertexOrder order_from_sequence(std::vector<Vertex> seq);
VertexOrder identity_order(int n);

// text format: single "order v0 v1 ... v(n-1)" line; must be a permutation
VertexOrder parse_order(const std::string& text, int n);
std::string serialize_order(const VertexOrder& ord);

// wreach[v] = vertices u that are within distance r of v in the subgraph
// induced by {w : rank[w] >= rank[u]}; each list sorted by ascending rank
std::vector<std::vector<Vertex>> wreach_sets(const ColoredGraph& g,
                                             const VertexOrder& ord, int r);
std::vector<Vertex> wreach(const ColoredGraph& g, const VertexOrder& ord, int r,
                           Vertex v);

int wcol_of_order(const ColoredGraph& g, const VertexOrder& ord, int r);

// strategies: "degeneracy" (reverse min-degree peeling), "bfs" (visit order
// from smallest ids), "sorted-degree" (non-increasing degree, ties by id)
VertexOrder heuristic_order(const ColoredGraph& g, const std::string& strategy);

struct ExactWcol {
  int value;
  VertexOrder order;
};

// minimum of wcol_of_order over every vertex order; throws CapError if n > cap
ExactWcol exact_wcol(const ColoredGraph& g, int r, int cap = 10);

struct UniversalReport {
  long long lhs;
  long long rhs;
  int wcol_2r_exact;
  bool holds;
};

// compares wcol_r under ord against (2r+1)^r * (optimal wcol_2r)^(4r^2);
// informational, meaningful for heuristic orders; needs n <= cap
UniversalReport check_universal_inequality(const ColoredGraph& g, const VertexOrder& ord,
                                           int r, int cap = 10);

}  // namespace shrubkit
