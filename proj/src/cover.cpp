#include "shrubkit/cover.hpp"

#include <numeric>
#include <random>
#include <set>

namespace shrubkit {

std::vector<int> wreach_greedy_coloring(const ColoredGraph& g,
                                        const VertexOrder& ord, int r) {
  auto wr = wreach_sets(g, ord, r);
  std::vector<int> color(g.n, -1);
  for (Vertex v : ord.seq) {
    std::set<int> taken;
    for (Vertex u : wr[v])
      if (u != v && color[u] >= 0) taken.insert(color[u]);
    int c = 0;
    while (taken.count(c)) ++c;
    color[v] = c;
  }
  for (Vertex v = 0; v < g.n; ++v)
    for (Vertex u : wr[v])
      if (u != v && color[u] == color[v])
        throw ValidationError("weak-reachability coloring clash");
  return color;
}

namespace {

bool covered(const std::vector<CoverClass>& classes, const std::vector<Vertex>& x) {
  for (const auto& c : classes)
    if (std::includes(c.vertices.begin(), c.vertices.end(), x.begin(), x.end()))
      return true;
  return false;
}

// exhaustive when the subset space is small, otherwise seeded sampling
bool cover_property(const ColoredGraph& g, const std::vector<CoverClass>& classes,
                    int p, std::uint64_t seed, bool& exhaustive,
                    std::vector<Vertex>& witness) {
  if (g.n == 0 || p <= 0) {
    exhaustive = true;
    return true;
  }
  int maxk = std::min(p, g.n);
  double total = 0, cnk = 1;
  for (int k = 1; k <= maxk; ++k) {
    cnk = cnk * (g.n - k + 1) / k;
    total += cnk;
  }
  exhaustive = g.n <= 20 && total <= 300000.0;
  if (exhaustive) {
    for (int k = 1; k <= maxk; ++k) {
      std::vector<int> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      for (;;) {
        std::vector<Vertex> x(idx.begin(), idx.end());
        if (!covered(classes, x)) {
          witness = x;
          return false;
        }
        int i = k - 1;
        while (i >= 0 && idx[i] == g.n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 2000; ++t) {
    int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(maxk));
    std::set<Vertex> xs;
    while (static_cast<int>(xs.size()) < k)
      xs.insert(static_cast<Vertex>(rng() % static_cast<std::uint64_t>(g.n)));
    std::vector<Vertex> x(xs.begin(), xs.end());
    if (!covered(classes, x)) {
      witness = x;
      return false;
    }
  }
  return true;
}

void certify_treedepth(const ColoredGraph& g, CoverClass& cls, int cap) {
  ColoredGraph h = induced_subgraph(g, cls.vertices);
  if (h.n <= cap) {
    cls.treedepth_value = treedepth(h, cap).depth;
    cls.exact = true;
    return;
  }
  TreedepthForest f = heuristic_treedepth_forest(h);
  if (!validate_treedepth_forest(h, f, f.depth))
    throw ValidationError("heuristic elimination forest invalid");
  cls.treedepth_value = f.depth;
  cls.exact = false;
  cls.uncertified = true;
}

}  // namespace

CoverFamily low_treedepth_cover(const ColoredGraph& g, const VertexOrder& ord,
                                int p, int cap_treedepth) {
  if (p < 1) throw ValidationError("cover parameter must be at least 1");
  int radius = p >= 20 ? (1 << 20) : (1 << p);
  std::vector<int> color = wreach_greedy_coloring(g, ord, radius);
  CoverFamily fam;
  fam.p = p;
  for (int c : color) fam.num_colors = std::max(fam.num_colors, c + 1);
  if (g.n == 0) return fam;

  int k = fam.num_colors;
  int m = std::min(p, k);
  double count = 1;
  for (int i = 0; i < m; ++i) count = count * (k - i) / (i + 1);
  if (count > 200000.0)
    throw ResourceError("cover family would exceed 200000 classes");

  std::vector<std::vector<Vertex>> by_color(k);
  for (Vertex v = 0; v < g.n; ++v) by_color[color[v]].push_back(v);

  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    CoverClass cls;
    for (int i : idx)
      cls.vertices.insert(cls.vertices.end(), by_color[i].begin(),
                          by_color[i].end());
    std::sort(cls.vertices.begin(), cls.vertices.end());
    certify_treedepth(g, cls, cap_treedepth);
    fam.classes.push_back(std::move(cls));
    int i = m - 1;
    while (i >= 0 && idx[i] == k - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }

  // any p vertices touch at most p colors, so coverage holds by construction;
  // a failure here means the enumeration itself is broken
  bool exhaustive = false;
  std::vector<Vertex> witness;
  if (!cover_property(g, fam.classes, p, 1, exhaustive, witness))
    throw ValidationError("cover property violated by construction");
  return fam;
}

CoverFamily shrubdepth_cover(const ColoredGraph& g, const QuasiBush& b, int p,
                             int cap_treedepth) {
  if (p < 1) throw ValidationError("cover parameter must be at least 1");
  validate_quasibush(b);
  if (b.n_universe != g.n || b.leaf_count() != g.n)
    throw ValidationError("quasi-bush does not cover this graph");
  DirectedGraph base = decode_quasibush(b);
  {
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (auto [u, v] : g.edges) {
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    if (!(base == make_digraph(g.n, std::move(arcs))))
      throw ValidationError("quasi-bush does not decode to the graph");
  }
  CoverFamily fam;
  fam.p = p;
  fam.shrub = true;
  if (g.n == 0) return fam;

  int d = 0;
  for (int li = 0; li < b.leaf_count(); ++li)
    d = std::max(d, static_cast<int>(b.tuples[b.leaf_parent[li]].size()) + 1);
  fam.node_cover_p = (d + 1) * p;

  ColoredGraph gf = quasibush_gaifman(b);
  VertexOrder gord = heuristic_order(gf, "degeneracy");
  CoverFamily e = low_treedepth_cover(gf, gord, fam.node_cover_p, cap_treedepth);
  fam.num_colors = e.num_colors;

  int nn = b.node_count();
  std::set<std::vector<Vertex>> seen;
  for (const auto& c : e.classes) {
    std::vector<char> in(gf.n, 0);
    for (Vertex x : c.vertices) in[x] = 1;
    // a leaf joins the class only when its entire ancestor chain is inside
    std::vector<Vertex> cprime;
    for (int li = 0; li < b.leaf_count(); ++li) {
      if (!in[nn + li]) continue;
      bool closed = true;
      for (int x : b.leaf_ancestors(b.leaves[li])) {
        if (!in[x]) {
          closed = false;
          break;
        }
      }
      if (closed) cprime.push_back(b.leaves[li]);
    }
    if (cprime.empty() || !seen.insert(cprime).second) continue;

    QuasiBush rb = restrict_quasibush(b, cprime);
    CoverClass cls;
    cls.vertices = cprime;
    ColoredGraph gfr = quasibush_gaifman(rb);
    if (gfr.n <= cap_treedepth) {
      cls.treedepth_value = treedepth(gfr, cap_treedepth).depth;
      cls.exact = true;
      // the restricted node set lies inside the node class, so its exact
      // treedepth can never exceed the class certificate
      if (cls.treedepth_value > c.treedepth_value)
        throw ValidationError("restricted treedepth exceeds its node-class bound");
    } else {
      TreedepthForest f = heuristic_treedepth_forest(gfr);
      if (!validate_treedepth_forest(gfr, f, f.depth))
        throw ValidationError("heuristic elimination forest invalid");
      cls.treedepth_value = f.depth;
      cls.exact = false;
      cls.uncertified = cls.treedepth_value > c.treedepth_value;
    }
    DirectedGraph rd = decode_quasibush(rb);
    for (Vertex u : cprime) {
      for (Vertex v : cprime) {
        if (u == v) continue;
        if (base.has_arc(u, v) != rd.has_arc(u, v))
          throw ValidationError("restricted decode disagrees on the class");
      }
    }
    cls.has_qbush = true;
    cls.restricted = std::move(rb);
    fam.classes.push_back(std::move(cls));
  }

  bool exhaustive = false;
  std::vector<Vertex> witness;
  if (!cover_property(g, fam.classes, p, 1, exhaustive, witness))
    throw ValidationError("closed-leaf classes fail the cover property");
  return fam;
}

CoverReport verify_cover(const ColoredGraph& g, const CoverFamily& f, int p,
                         std::uint64_t seed, int cap_treedepth) {
  CoverReport rep;
  rep.family_size = static_cast<int>(f.classes.size());
  for (const auto& c : f.classes)
    rep.max_class_size =
        std::max(rep.max_class_size, static_cast<int>(c.vertices.size()));
  rep.cover_ok = cover_property(g, f.classes, p, seed, rep.exhaustive, rep.witness);
  rep.certificates_ok = true;
  for (const auto& c : f.classes) {
    if (c.uncertified) continue;
    if (c.has_qbush) {
      // decode agreement against the graph the quasi-bush represents
      DirectedGraph rd = decode_quasibush(c.restricted);
      for (Vertex u : c.vertices)
        for (Vertex v : c.vertices)
          if (u != v && rd.has_arc(u, v) != g.has_edge(u, v))
            rep.certificates_ok = false;
      ColoredGraph gfr = quasibush_gaifman(c.restricted);
      if (gfr.n <= cap_treedepth) {
        int td = treedepth(gfr, cap_treedepth).depth;
        if (c.exact ? td != c.treedepth_value : td > c.treedepth_value)
          rep.certificates_ok = false;
      }
    } else if (!f.shrub) {
      ColoredGraph h = induced_subgraph(g, c.vertices);
      if (h.n <= cap_treedepth) {
        int td = treedepth(h, cap_treedepth).depth;
        if (c.exact ? td != c.treedepth_value : td > c.treedepth_value)
          rep.certificates_ok = false;
      }
    }
  }
  return rep;
}

}  // namespace shrubkit
