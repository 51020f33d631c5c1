#pragma once

#include <string>
#include <vector>

#include "shrubkit/common.hpp"
#include "shrubkit/graph.hpp"
#include "shrubkit/logic.hpp"

namespace shrubkit {

struct TypeReps {
  std::vector<Vertex> reps;  // sorted, smallest-id witness per realized type
  int types = 0;
};

// realized types tp(u/a) = { x-tuples over a satisfying psi(x..., u) } with u
// in the yvar role ranging over all vertices; yvar may be absent from psi, in
// which case all vertices share one type
TypeReps type_representatives(const ColoredGraph& g, const Formula& psi,
                              const std::string& yvar,
                              const std::vector<Vertex>& a);

struct KernelLevel {
  std::string psi;
  int a_size = 0;
  int a_psi_size = 0;
  int types = 0;
};

struct Kernel {
  ColoredGraph ghat;          // monadic lift of g induced on kept
  std::vector<Vertex> kept;   // sorted original ids; ghat vertex i = kept[i]
  Formula phi_hat;
  std::vector<KernelLevel> levels;  // one per recursion node, preorder
  int rank = 0;
  int formula_len = 0;
  double c_value = 0.0;       // smallest c with types <= c*max(|A|,1)^2 per level
  double bound = 0.0;         // len^q * (1+c)^(2^q - 1) * |A|^(2^q), report only
  bool within_bound = false;
};

Kernel kernelize(const ColoredGraph& g, const std::vector<Vertex>& a,
                 const Formula& phi);

struct KernelCheck {
  bool ok = false;
  std::vector<Vertex> witness;  // an A-tuple where the two evaluations differ
};

// brute-force comparison of phi over g and phi_hat over ghat on every tuple
// of a in the free-variable positions
KernelCheck verify_kernel(const ColoredGraph& g, const Kernel& k,
                          const std::vector<Vertex>& a, const Formula& phi);

}  // namespace shrubkit
