#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shrubkit/common.hpp"
#include "shrubkit/graph.hpp"
#include "shrubkit/logic.hpp"
#include "shrubkit/wcol.hpp"

namespace shrubkit {

// iterative core-selection trace for one source vertex: m holds the selected
// cores in discovery order, paths[k][i] is the canonical connecting path from
// core i+1 to core k+1 chosen inside the step-(i+1) residual graph, and
// s_prefix[k] is the sorted union of all path vertices through step k+1
struct SplitterTrace {
  std::vector<Vertex> m;
  std::vector<std::vector<std::vector<Vertex>>> paths;
  std::vector<std::vector<Vertex>> s_prefix;
};

SplitterTrace splitter_sets(const ColoredGraph& g, const VertexOrder& ord, int r,
                            Vertex v);

// lexicographically smallest simple a-b path of length <= budget, by vertex id
std::vector<Vertex> canonical_path(const ColoredGraph& h, Vertex a, Vertex b,
                                   int budget);
std::vector<Vertex> canonical_path_masked(const ColoredGraph& h,
                                          const std::vector<char>& alive, Vertex a,
                                          Vertex b, int budget);

// rooted tree whose internal nodes are deduplicated core-prefix tuples (node 0
// is the empty root whenever any node exists), with leaf->internal pointers;
// alpha stores the separator set attached to each internal node; label fields
// are populated by label_quasibush
struct QuasiBush {
  std::vector<std::vector<Vertex>> tuples;
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<Vertex>> alpha;  // sorted vertex sets
  int n_universe = 0;
  std::vector<Vertex> leaves;      // sorted
  std::vector<int> leaf_parent;    // aligned with leaves
  std::set<std::pair<Vertex, int>> pointers;  // (leaf vertex, internal node id)
  bool labeled = false;
  int num_labels = 0;
  std::vector<int> leaf_label;  // aligned with leaves, -1 when unlabeled
  std::map<std::pair<Vertex, int>, std::vector<int>> pointer_label;

  int node_count() const { return static_cast<int>(tuples.size()); }
  int leaf_count() const { return static_cast<int>(leaves.size()); }
  int leaf_index(Vertex v) const;
  // internal ancestor chain of leaf v: parent of v first, root last
  std::vector<int> leaf_ancestors(Vertex v) const;
  int depth() const;  // longest internal tuple
};

void validate_quasibush(const QuasiBush& b);

QuasiBush build_separator_quasibush(const ColoredGraph& g, const VertexOrder& ord,
                                    int r);
QuasiBush label_quasibush(const QuasiBush& s, const ColoredGraph& g,
                          const Formula& phi, int q);
DirectedGraph decode_quasibush(const QuasiBush& b);
QuasiBush restrict_quasibush(const QuasiBush& b, const std::vector<Vertex>& a);

// splits the tree into one subtree per leaf label under a fresh root; decode
// is preserved and the result uses a single label (experimental)
QuasiBush one_label_quasibush(const QuasiBush& b);

struct QuasiBushStats {
  int depth = 0;
  int max_m = 0;
  int max_alpha = 0;
  struct Row {
    int s = 0;
    long long lhs = 0;
    long long rhs = 0;
    bool holds = false;
  };
  std::vector<Row> rows;
};

QuasiBushStats quasibush_stats(const QuasiBush& b, const ColoredGraph& g,
                               const VertexOrder& ord, int r);

// tree edges, leaf attachment edges, and pointer edges over node ids; leaves
// are numbered node_count()..node_count()+leaf_count()-1
ColoredGraph quasibush_gaifman(const QuasiBush& b);

// root first, then ascending representative (last tuple entry for internal
// nodes, the vertex itself for leaves) under ord, ties internal before leaf
VertexOrder quasibush_rep_order(const QuasiBush& b, const VertexOrder& ord);

std::string quasibush_to_json(const QuasiBush& b);
QuasiBush quasibush_from_json(const std::string& text);
std::string quasibush_to_dot(const QuasiBush& b);

}  // namespace shrubkit
