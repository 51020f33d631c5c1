#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace oracles {

using namespace shrubkit;

namespace {

void paths_from(const ColoredGraph& g, const VertexOrder& ord, int r, Vertex v,
                std::vector<char>& used, std::vector<Vertex>& path,
                std::set<Vertex>& out) {
  Vertex last = path.back();
  int min_rank = ord.rank[path[0]];
  for (Vertex w : path) min_rank = std::min(min_rank, ord.rank[w]);
  if (ord.rank[last] == min_rank) out.insert(last);
  if (static_cast<int>(path.size()) > r) return;
  for (Vertex w : g.adj[last]) {
    if (used[w]) continue;
    used[w] = 1;
    path.push_back(w);
    paths_from(g, ord, r, v, used, path, out);
    path.pop_back();
    used[w] = 0;
  }
}

}  // namespace

std::vector<Vertex> wreach_paths(const ColoredGraph& g, const VertexOrder& ord,
                                 int r, Vertex v) {
  std::set<Vertex> out;
  std::vector<char> used(g.n, 0);
  std::vector<Vertex> path{v};
  used[v] = 1;
  paths_from(g, ord, r, v, used, path, out);
  std::vector<Vertex> res(out.begin(), out.end());
  std::sort(res.begin(), res.end(),
            [&](Vertex a, Vertex b) { return ord.rank[a] < ord.rank[b]; });
  return res;
}

int wcol_paths(const ColoredGraph& g, const VertexOrder& ord, int r) {
  int best = 0;
  for (Vertex v = 0; v < g.n; ++v)
    best = std::max(best, static_cast<int>(wreach_paths(g, ord, r, v).size()));
  return best;
}

int exact_wcol_paths(const ColoredGraph& g, int r) {
  std::vector<Vertex> seq(g.n);
  std::iota(seq.begin(), seq.end(), 0);
  int best = g.n == 0 ? 0 : g.n;
  do {
    best = std::min(best, wcol_paths(g, order_from_sequence(seq), r));
  } while (std::next_permutation(seq.begin(), seq.end()));
  return best;
}

namespace {

int td_mask(const std::vector<std::uint32_t>& adj, std::uint32_t mask,
            std::unordered_map<std::uint32_t, int>& memo) {
  if (mask == 0) return 0;
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  // split into connected components first
  std::uint32_t comp = 0;
  {
    int v = std::countr_zero(mask);
    std::uint32_t frontier = 1u << v;
    while (frontier) {
      comp |= frontier;
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f;) {
        int u = std::countr_zero(f);
        f &= f - 1;
        next |= adj[u] & mask & ~comp;
      }
      frontier = next;
    }
  }
  int res;
  if (comp != mask) {
    res = std::max(td_mask(adj, comp, memo), td_mask(adj, mask & ~comp, memo));
  } else {
    res = 32;
    for (std::uint32_t m = mask; m;) {
      int v = std::countr_zero(m);
      m &= m - 1;
      res = std::min(res, 1 + td_mask(adj, mask & ~(1u << v), memo));
    }
  }
  memo[mask] = res;
  return res;
}

}  // namespace

int treedepth_recursive(const ColoredGraph& g) {
  std::vector<std::uint32_t> adj(g.n, 0);
  for (auto [u, v] : g.edges) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  std::uint32_t full = g.n >= 32 ? ~0u : (1u << g.n) - 1;
  std::unordered_map<std::uint32_t, int> memo;
  return td_mask(adj, full, memo);
}

DirectedGraph symmetric_digraph(const ColoredGraph& g) {
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (auto [u, v] : g.edges) {
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  return make_digraph(g.n, std::move(arcs));
}

DirectedGraph decode_transposed(const QuasiBush& b) {
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (Vertex u : b.leaves) {
    for (Vertex v : b.leaves) {
      if (u == v) continue;
      // lowest ancestor of v that u points to, then test v's label there
      int w = -1;
      for (int anc : b.leaf_ancestors(v)) {
        if (b.pointers.count({u, anc})) {
          w = anc;
          break;
        }
      }
      auto it = b.pointer_label.find({u, w});
      if (it == b.pointer_label.end()) continue;
      int lv = b.leaf_label[b.leaf_index(v)];
      if (std::binary_search(it->second.begin(), it->second.end(), lv))
        arcs.emplace_back(u, v);
    }
  }
  return make_digraph(b.n_universe, std::move(arcs));
}

ColoredGraph path_graph(int n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return make_graph(n, es);
}

ColoredGraph cycle_graph(int n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  if (n >= 3) es.emplace_back(0, n - 1);
  return make_graph(n, es);
}

ColoredGraph star_graph(int leaves) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int i = 1; i <= leaves; ++i) es.emplace_back(0, i);
  return make_graph(leaves + 1, es);
}

ColoredGraph random_tree(int n, std::mt19937_64& rng) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int i = 1; i < n; ++i)
    es.emplace_back(static_cast<Vertex>(rng() % static_cast<std::uint64_t>(i)), i);
  return make_graph(n, es);
}

ColoredGraph subdivided_grid(int w, int h, int sub) {
  std::vector<std::pair<Vertex, Vertex>> es;
  int next = w * h;
  auto connect = [&](int a, int b) {
    int prev = a;
    for (int s = 0; s < sub; ++s) {
      es.emplace_back(prev, next);
      prev = next++;
    }
    es.emplace_back(prev, b);
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      int id = r * w + c;
      if (c + 1 < w) connect(id, id + 1);
      if (r + 1 < h) connect(id, id + w);
    }
  }
  return make_graph(next, es);
}

ColoredGraph gnp(int n, double avg_deg, std::mt19937_64& rng) {
  double p = n > 1 ? std::min(1.0, avg_deg / n) : 0.0;
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if ((rng() >> 11) * 0x1.0p-53 < p) es.emplace_back(u, v);
  return make_graph(n, es);
}

void add_random_colors(ColoredGraph& g, std::mt19937_64& rng) {
  std::vector<Vertex> red, blue;
  for (Vertex v = 0; v < g.n; ++v) {
    switch (rng() % 3) {
      case 0: red.push_back(v); break;
      case 1: blue.push_back(v); break;
      default: break;
    }
  }
  g.colors["red"] = std::move(red);
  g.colors["blue"] = std::move(blue);
}

std::vector<ColoredGraph> all_graphs_up_to_iso(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  int m = static_cast<int>(pairs.size());
  std::vector<Vertex> perm(n);
  std::set<std::uint64_t> seen;
  std::vector<ColoredGraph> out;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t canon = ~0ull;
    do {
      std::uint64_t img = 0;
      for (int e = 0; e < m; ++e) {
        if (!(mask & (1ull << e))) continue;
        int a = perm[pairs[e].first], b = perm[pairs[e].second];
        if (a > b) std::swap(a, b);
        for (int f = 0; f < m; ++f)
          if (pairs[f] == std::make_pair(a, b)) {
            img |= 1ull << f;
            break;
          }
      }
      canon = std::min(canon, img);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(canon).second) continue;
    std::vector<std::pair<Vertex, Vertex>> es;
    for (int e = 0; e < m; ++e)
      if (mask & (1ull << e)) es.push_back(pairs[e]);
    out.push_back(make_graph(n, es));
  }
  return out;
}

}  // namespace oracles
