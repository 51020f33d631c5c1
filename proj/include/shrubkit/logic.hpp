#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "shrubkit/graph.hpp"

namespace shrubkit {

enum class FK { Edge, Eq, Color, Not, And, Or, Exists, Forall };

struct FNode;
using FPtr = std::shared_ptr<const FNode>;

struct FNode {
  FK kind;
  std::string a, b;  // variable names (Edge/Eq) or color name in a (Color, var in b)
  std::string var;   // quantified variable
  FPtr l, r;         // children (Not uses l only)
};

FPtr mk_edge(std::string a, std::string b);
FPtr mk_eq(std::string a, std::string b);
FPtr mk_color(std::string name, std::string v);
FPtr mk_not(FPtr x);
FPtr mk_and(FPtr l, FPtr r);
FPtr mk_or(FPtr l, FPtr r);
FPtr mk_exists(std::string var, FPtr body);
FPtr mk_forall(std::string var, FPtr body);

struct Formula {
  FPtr root;
  std::vector<std::string> free_vars;  // sorted
  int rank = 0;                        // quantifier depth
};

Formula wrap_formula(FPtr root);

// grammar: implications/iff-free; "->" desugars to !a|b, "!=" to !(a=b);
// quantifier bodies extend maximally to the right; bound variables are
// renamed apart during parsing so no shadowing remains
Formula parse_formula(const std::string& text);
std::string formula_to_string(const Formula& f);
std::string node_to_string(const FPtr& node);

using Assignment = std::vector<std::pair<std::string, Vertex>>;

bool evaluate(const ColoredGraph& g, const Formula& f, const Assignment& asg);
bool evaluate_node(const ColoredGraph& g, const FPtr& node, Assignment& asg);

// rewrites every universal quantifier as negated existential; logically
// equivalent, same quantifier rank
Formula normalize(const Formula& f);

// existential subformulas at depth 1 of the Boolean skeleton (no descent
// through quantifiers); input must be normalized
std::vector<FPtr> exists_depth1(const Formula& normalized);

// digraph of the binary relation defined by f; free variables are bound in
// sorted name order (first -> source, second -> target); diagonal dropped
DirectedGraph interpret(const ColoredGraph& g, const Formula& f);

// {v over A^yvars : f(u over xvars, v)}; variable blocks are disjoint name
// lists covering exactly the free variables of f
std::set<std::vector<Vertex>> phi_type(const ColoredGraph& g, const Formula& f,
                                       const std::vector<std::string>& xvars,
                                       const std::vector<std::string>& yvars,
                                       const std::vector<Vertex>& u,
                                       const std::vector<Vertex>& a);

int count_nodes(const FPtr& node);

}  // namespace shrubkit
