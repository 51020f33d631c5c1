#pragma once

#include <cstdint>
#include <vector>

#include "shrubkit/common.hpp"
#include "shrubkit/graph.hpp"
#include "shrubkit/quasibush.hpp"
#include "shrubkit/wcol.hpp"

namespace shrubkit {

// left-to-right greedy coloring along ord in which every vertex avoids the
// colors of its weak-reachability set; uses at most wcol_r(g, ord) colors
std::vector<int> wreach_greedy_coloring(const ColoredGraph& g,
                                        const VertexOrder& ord, int r);

struct CoverClass {
  std::vector<Vertex> vertices;  // sorted
  int treedepth_value = 0;
  bool exact = false;        // exact solver vs validated heuristic bound
  bool uncertified = false;  // exact certification infeasible at the cap
  bool has_qbush = false;
  QuasiBush restricted;  // shrubdepth covers: input quasi-bush on this class
};

struct CoverFamily {
  int p = 0;
  bool shrub = false;
  int num_colors = 0;    // coloring size behind the class enumeration
  int node_cover_p = 0;  // shrub covers: cover parameter used on tree nodes
  std::vector<CoverClass> classes;
};

// colors at radius 2^p, classes are unions of min(p, #colors) color classes,
// each certified by the exact treedepth solver when it fits under the cap and
// by a validated elimination-forest bound otherwise
CoverFamily low_treedepth_cover(const ColoredGraph& g, const VertexOrder& ord,
                                int p, int cap_treedepth = 25);

// closed-leaf assembly: covers the tree nodes of b at parameter
// (max leaf depth + 1) * p, keeps per node-class the leaves whose whole
// ancestor chain is inside it, and certifies the p-cover property, the
// restricted treedepth, and decode agreement on every class
CoverFamily shrubdepth_cover(const ColoredGraph& g, const QuasiBush& b, int p,
                             int cap_treedepth = 25);

struct CoverReport {
  bool cover_ok = false;
  bool certificates_ok = false;
  bool exhaustive = false;  // subset check exhaustive vs sampled
  int family_size = 0;
  int max_class_size = 0;
  std::vector<Vertex> witness;  // uncovered subset when cover_ok is false
};

CoverReport verify_cover(const ColoredGraph& g, const CoverFamily& f, int p,
                         std::uint64_t seed = 1, int cap_treedepth = 25);

}  // namespace shrubkit
