#include "shrubkit/kernel.hpp"

#include <cmath>
#include <map>
#include <set>

namespace shrubkit {

TypeReps type_representatives(const ColoredGraph& g, const Formula& psi,
                              const std::string& yvar,
                              const std::vector<Vertex>& a) {
  std::vector<std::string> xvars;
  bool has_y = false;
  for (const auto& v : psi.free_vars) {
    if (v == yvar)
      has_y = true;
    else
      xvars.push_back(v);
  }
  std::vector<std::string> ublock;
  if (has_y) ublock.push_back(yvar);
  std::map<std::set<std::vector<Vertex>>, Vertex> first;
  for (Vertex u = 0; u < g.n; ++u) {
    std::vector<Vertex> ut;
    if (has_y) ut.push_back(u);
    first.emplace(phi_type(g, psi, ublock, xvars, ut, a), u);
  }
  TypeReps out;
  out.types = static_cast<int>(first.size());
  for (const auto& [t, u] : first) {
    (void)t;
    out.reps.push_back(u);
  }
  std::sort(out.reps.begin(), out.reps.end());
  return out;
}

namespace {

// every quantifier inside node gets its range restricted to the color
FPtr relativize(const FPtr& node, const std::string& color) {
  switch (node->kind) {
    case FK::Edge:
    case FK::Eq:
    case FK::Color:
      return node;
    case FK::Not:
      return mk_not(relativize(node->l, color));
    case FK::And:
      return mk_and(relativize(node->l, color), relativize(node->r, color));
    case FK::Or:
      return mk_or(relativize(node->l, color), relativize(node->r, color));
    case FK::Exists:
      return mk_exists(node->var,
                       mk_and(mk_color(color, node->var),
                              relativize(node->l, color)));
    case FK::Forall:
      throw ValidationError("unexpected universal quantifier after normalization");
  }
  throw ValidationError("unknown formula node");
}

// replaces depth-1 existential nodes through the Boolean skeleton
FPtr rebuild(const FPtr& node, const std::map<const FNode*, FPtr>& repl) {
  auto it = repl.find(node.get());
  if (it != repl.end()) return it->second;
  switch (node->kind) {
    case FK::Not:
      return mk_not(rebuild(node->l, repl));
    case FK::And:
      return mk_and(rebuild(node->l, repl), rebuild(node->r, repl));
    case FK::Or:
      return mk_or(rebuild(node->l, repl), rebuild(node->r, repl));
    default:
      return node;
  }
}

std::vector<Vertex> sorted_union(const std::vector<Vertex>& a,
                                 const std::vector<Vertex>& b) {
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string fresh_color(const ColoredGraph& g, char prefix, int& counter) {
  for (;;) {
    std::string name = std::string(1, prefix) + std::to_string(counter);
    ++counter;
    if (!g.colors.count(name)) return name;
  }
}

struct RecResult {
  std::vector<Vertex> kept;
  std::map<std::string, std::vector<Vertex>> colors;  // fresh, original ids
  FPtr phi;
  std::vector<KernelLevel> levels;
};

// phi must be normalized; a sorted
RecResult rec(const ColoredGraph& g, const std::vector<Vertex>& a,
              const Formula& phi, int& counter) {
  if (phi.rank == 0) return {a, {}, phi.root, {}};
  RecResult res;
  res.kept = a;
  std::map<const FNode*, FPtr> repl;
  for (const FPtr& e : exists_depth1(phi)) {
    Formula body = wrap_formula(e->l);
    TypeReps tr = type_representatives(g, body, e->var, a);
    KernelLevel level;
    level.psi = node_to_string(e);
    level.a_size = static_cast<int>(a.size());
    level.a_psi_size = static_cast<int>(tr.reps.size());
    level.types = tr.types;
    RecResult sub = rec(g, sorted_union(a, tr.reps), body, counter);
    std::string pn = fresh_color(g, 'P', counter);
    std::string qn = fresh_color(g, 'Q', counter);
    for (auto& [name, verts] : sub.colors) res.colors[name] = std::move(verts);
    res.colors[pn] = tr.reps;
    res.colors[qn] = sub.kept;
    res.kept = sorted_union(res.kept, sub.kept);
    repl[e.get()] =
        mk_exists(e->var, mk_and(mk_color(pn, e->var), relativize(sub.phi, qn)));
    res.levels.push_back(std::move(level));
    for (auto& l : sub.levels) res.levels.push_back(std::move(l));
  }
  res.phi = rebuild(phi.root, repl);
  return res;
}

}  // namespace

Kernel kernelize(const ColoredGraph& g, const std::vector<Vertex>& a,
                 const Formula& phi) {
  std::vector<Vertex> as = sorted_unique(a);
  for (Vertex v : as)
    if (v < 0 || v >= g.n)
      throw ValidationError("target vertex " + std::to_string(v) +
                            " outside the graph");
  Formula phi_n = normalize(phi);
  int counter = 0;
  RecResult r = rec(g, as, phi_n, counter);

  ColoredGraph lifted = g;
  for (const auto& [name, verts] : r.colors) lifted.colors[name] = verts;

  Kernel k;
  k.kept = r.kept;
  k.ghat = induced_subgraph(lifted, r.kept);
  k.phi_hat = wrap_formula(r.phi);
  k.levels = std::move(r.levels);
  k.rank = phi_n.rank;
  k.formula_len = count_nodes(phi_n.root);

  // reported size-bound shape at epsilon = 1 with empirically fitted c
  for (const auto& level : k.levels) {
    double base = std::max(level.a_size, 1);
    k.c_value = std::max(k.c_value, level.types / (base * base));
  }
  double asize = std::max<double>(static_cast<double>(as.size()), 1.0);
  double exp_q = std::pow(2.0, k.rank);
  k.bound = std::pow(static_cast<double>(std::max(k.formula_len, 1)), k.rank) *
            std::pow(1.0 + k.c_value, exp_q - 1.0) * std::pow(asize, exp_q);
  k.within_bound = static_cast<double>(k.ghat.n) <= k.bound;
  return k;
}

KernelCheck verify_kernel(const ColoredGraph& g, const Kernel& k,
                          const std::vector<Vertex>& a, const Formula& phi) {
  std::vector<Vertex> as = sorted_unique(a);
  std::map<Vertex, int> pos;
  for (size_t i = 0; i < k.kept.size(); ++i) pos[k.kept[i]] = static_cast<int>(i);
  for (Vertex v : as)
    if (!pos.count(v))
      throw ValidationError("target vertex missing from the kernel");

  const auto& vars = phi.free_vars;
  int m = static_cast<int>(vars.size());
  KernelCheck out;
  if (as.empty() && m > 0) {
    out.ok = true;
    return out;
  }
  std::vector<int> idx(m, 0);
  for (;;) {
    Assignment ag, ah;
    std::vector<Vertex> tuple;
    for (int i = 0; i < m; ++i) {
      Vertex v = as[idx[i]];
      ag.emplace_back(vars[i], v);
      ah.emplace_back(vars[i], pos.at(v));
      tuple.push_back(v);
    }
    if (evaluate(g, phi, ag) != evaluate(k.ghat, k.phi_hat, ah)) {
      out.ok = false;
      out.witness = tuple;
      return out;
    }
    int i = m - 1;
    while (i >= 0 && idx[i] + 1 == static_cast<int>(as.size())) {
      idx[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++idx[i];
  }
  out.ok = true;
  return out;
}

}  // namespace shrubkit
