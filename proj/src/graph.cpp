#include "shrubkit/graph.hpp"

#include <bit>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace shrubkit {

int thread_count() {
  const char* env = std::getenv("SHRUBKIT_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min(v, 64L));
}

void parallel_for(int n, const std::function<void(int)>& f) {
  int threads = std::min(thread_count(), std::max(n, 1));
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < n; i += threads) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {
constexpr long long kSat = std::numeric_limits<long long>::max();
}

long long sat_add(long long a, long long b) {
  if (a > kSat - b) return kSat;
  return a + b;
}

long long sat_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

long long sat_pow(long long base, long long exp) {
  long long r = 1;
  for (long long i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

ColoredGraph make_graph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  ColoredGraph g;
  g.n = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    if (u > v) std::swap(u, v);
    g.edges.emplace_back(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t i = 0;
  if (s[0] == '-') i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  try {
    out = std::stoi(s);
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

ColoredGraph load_graph(const std::string& text) {
  ColoredGraph g;
  bool have_header = false;
  std::set<std::pair<Vertex, Vertex>> seen_edges;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks[0] != "graph" || toks.size() != 2)
        throw ParseError("expected 'graph <n>' header", lineno);
      int n;
      if (!parse_int(toks[1], n) || n < 0)
        throw ParseError("invalid vertex count", lineno);
      g.n = n;
      g.adj.assign(n, {});
      have_header = true;
      continue;
    }
    if (toks[0] == "edge") {
      if (toks.size() != 3) throw ParseError("expected 'edge <u> <v>'", lineno);
      int u, v;
      if (!parse_int(toks[1], u) || !parse_int(toks[2], v))
        throw ParseError("invalid edge endpoints", lineno);
      if (u < 0 || v < 0 || u >= g.n || v >= g.n)
        throw ParseError("edge endpoint out of range", lineno);
      if (u >= v) throw ParseError("edge endpoints must satisfy u < v", lineno);
      if (!seen_edges.emplace(u, v).second)
        throw ParseError("duplicate edge", lineno);
    } else if (toks[0] == "color") {
      if (toks.size() < 2) throw ParseError("expected 'color <name> <v>...'", lineno);
      const std::string& name = toks[1];
      if (g.colors.count(name)) throw ParseError("duplicate color name", lineno);
      std::vector<Vertex> vs;
      for (size_t i = 2; i < toks.size(); ++i) {
        int v;
        if (!parse_int(toks[i], v)) throw ParseError("invalid color vertex", lineno);
        if (v < 0 || v >= g.n) throw ParseError("color vertex out of range", lineno);
        vs.push_back(v);
      }
      std::sort(vs.begin(), vs.end());
      if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
        throw ParseError("repeated vertex in color", lineno);
      g.colors[name] = std::move(vs);
    } else {
      throw ParseError("unknown directive '" + toks[0] + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("missing 'graph <n>' header", 1);
  g.edges.assign(seen_edges.begin(), seen_edges.end());
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

std::string serialize_graph(const ColoredGraph& g) {
  std::ostringstream out;
  out << "graph " << g.n << "\n";
  for (auto [u, v] : g.edges) out << "edge " << u << " " << v << "\n";
  for (const auto& [name, vs] : g.colors) {
    out << "color " << name;
    for (Vertex v : vs) out << " " << v;
    out << "\n";
  }
  return out.str();
}

ColoredGraph induced_subgraph(const ColoredGraph& g, const std::vector<Vertex>& keep) {
  std::vector<int> newid(g.n, -1);
  for (size_t i = 0; i < keep.size(); ++i) newid[keep[i]] = static_cast<int>(i);
  ColoredGraph h;
  h.n = static_cast<int>(keep.size());
  h.adj.assign(h.n, {});
  for (auto [u, v] : g.edges)
    if (newid[u] >= 0 && newid[v] >= 0) h.edges.emplace_back(newid[u], newid[v]);
  for (auto& [u, v] : h.edges)
    if (u > v) std::swap(u, v);
  std::sort(h.edges.begin(), h.edges.end());
  for (auto [u, v] : h.edges) {
    h.adj[u].push_back(v);
    h.adj[v].push_back(u);
  }
  for (auto& a : h.adj) std::sort(a.begin(), a.end());
  for (const auto& [name, vs] : g.colors) {
    std::vector<Vertex> nv;
    for (Vertex v : vs)
      if (newid[v] >= 0) nv.push_back(newid[v]);
    std::sort(nv.begin(), nv.end());
    if (!nv.empty()) h.colors[name] = std::move(nv);
  }
  return h;
}

std::vector<Vertex> ball(const ColoredGraph& g, Vertex v, int r) {
  std::vector<char> alive(g.n, 1);
  return ball_masked(g, alive, v, r);
}

std::vector<Vertex> ball_masked(const ColoredGraph& g, const std::vector<char>& alive,
                                Vertex v, int r) {
  std::vector<int> dist(g.n, -1);
  std::deque<Vertex> q;
  dist[v] = 0;
  q.push_back(v);
  std::vector<Vertex> out;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    out.push_back(u);
    if (dist[u] == r) continue;
    for (Vertex w : g.adj[u]) {
      if (!alive[w] || dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      q.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_r_separated(const ColoredGraph& g, Vertex u, Vertex v, int r,
                    const std::vector<Vertex>& s_sorted) {
  if (contains_sorted(s_sorted, u) || contains_sorted(s_sorted, v)) return true;
  if (u == v) return false;
  std::vector<char> alive(g.n, 1);
  for (Vertex s : s_sorted) alive[s] = 0;
  std::vector<int> dist(g.n, -1);
  std::deque<Vertex> q;
  dist[u] = 0;
  q.push_back(u);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    if (x == v) return false;
    if (dist[x] == r) continue;
    for (Vertex w : g.adj[x]) {
      if (!alive[w] || dist[w] >= 0) continue;
      dist[w] = dist[x] + 1;
      q.push_back(w);
    }
  }
  return true;
}

std::vector<Vertex> peel_order(const ColoredGraph& g) {
  std::vector<int> deg(g.n);
  for (Vertex v = 0; v < g.n; ++v) deg[v] = g.degree(v);
  std::vector<char> removed(g.n, 0);
  std::vector<Vertex> order;
  order.reserve(g.n);
  for (int step = 0; step < g.n; ++step) {
    Vertex best = -1;
    for (Vertex v = 0; v < g.n; ++v)
      if (!removed[v] && (best == -1 || deg[v] < deg[best])) best = v;
    removed[best] = 1;
    order.push_back(best);
    for (Vertex w : g.adj[best])
      if (!removed[w]) --deg[w];
  }
  return order;
}

int degeneracy(const ColoredGraph& g) {
  std::vector<int> deg(g.n);
  for (Vertex v = 0; v < g.n; ++v) deg[v] = g.degree(v);
  std::vector<char> removed(g.n, 0);
  int k = 0;
  for (int step = 0; step < g.n; ++step) {
    Vertex best = -1;
    for (Vertex v = 0; v < g.n; ++v)
      if (!removed[v] && (best == -1 || deg[v] < deg[best])) best = v;
    k = std::max(k, deg[best]);
    removed[best] = 1;
    for (Vertex w : g.adj[best])
      if (!removed[w]) --deg[w];
  }
  return k;
}

DirectedGraph make_digraph(int n, std::vector<std::pair<Vertex, Vertex>> arcs) {
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  return DirectedGraph{n, std::move(arcs)};
}

bool validate_treedepth_forest(const ColoredGraph& g, const TreedepthForest& f,
                               int claimed_depth) {
  if (static_cast<int>(f.parent.size()) != g.n) return false;
  std::vector<int> depth(g.n, -1);
  // resolve depths, detecting cycles via path lengths exceeding n
  std::function<int(Vertex, int)> node_depth = [&](Vertex v, int guard) -> int {
    if (guard > g.n) return -1;
    if (depth[v] >= 0) return depth[v];
    int p = f.parent[v];
    if (p == -1) return depth[v] = 1;
    if (p < 0 || p >= g.n || p == v) return -1;
    int pd = node_depth(p, guard + 1);
    if (pd < 0) return -1;
    return depth[v] = pd + 1;
  };
  int maxd = 0;
  for (Vertex v = 0; v < g.n; ++v) {
    int d = node_depth(v, 0);
    if (d < 0) return false;
    maxd = std::max(maxd, d);
  }
  if (maxd != claimed_depth && !(g.n == 0 && claimed_depth == 0)) return false;
  auto is_ancestor = [&](Vertex a, Vertex b) {
    // a ancestor of b (or equal)
    Vertex x = b;
    int guard = 0;
    while (x != -1 && guard++ <= g.n) {
      if (x == a) return true;
      x = f.parent[x];
    }
    return false;
  };
  for (auto [u, v] : g.edges)
    if (!is_ancestor(u, v) && !is_ancestor(v, u)) return false;
  return true;
}

namespace {

// exact treedepth of one connected component via memoized branch and bound
// over elimination roots; masks index the component-local vertex list
struct TdSolver {
  int nloc;
  std::vector<uint32_t> adjmask;
  struct Entry {
    int lb = 2;
    int exact = -1;
    int choice = -1;
  };
  std::map<uint32_t, Entry> memo;

  std::vector<uint32_t> components(uint32_t mask) const {
    std::vector<uint32_t> comps;
    uint32_t rest = mask;
    while (rest) {
      uint32_t seed = rest & ~(rest - 1);
      uint32_t comp = seed;
      uint32_t frontier = seed;
      while (frontier) {
        uint32_t next = 0;
        uint32_t f = frontier;
        while (f) {
          int v = std::countr_zero(f);
          f &= f - 1;
          next |= adjmask[v] & mask & ~comp;
        }
        comp |= next;
        frontier = next;
      }
      comps.push_back(comp);
      rest &= ~comp;
    }
    return comps;
  }

  // returns exact treedepth if <= budget, otherwise a lower bound > budget
  int solve(uint32_t mask, int budget) {
    int pc = std::popcount(mask);
    if (pc == 1) return 1;
    Entry& e = memo[mask];
    if (e.exact >= 0) return e.exact;
    if (e.lb > budget) return e.lb;
    int best = pc + 1;
    int bestv = -1;
    uint32_t iter = mask;
    while (iter) {
      int v = std::countr_zero(iter);
      iter &= iter - 1;
      int limit = std::min(budget, best - 1);
      if (limit < 1) break;
      uint32_t rem = mask & ~(1u << v);
      int cur = 1;
      bool ok = true;
      if (rem) {
        for (uint32_t comp : components(rem)) {
          int sub = solve(comp, limit - 1);
          cur = std::max(cur, 1 + sub);
          if (cur > limit) {
            ok = false;
            break;
          }
        }
      }
      if (ok && cur < best) {
        best = cur;
        bestv = v;
        if (best == 2) break;  // cannot go below 2 for >= 2 connected vertices
      }
    }
    if (bestv != -1 && best <= budget) {
      e.exact = best;
      e.choice = bestv;
      return best;
    }
    e.lb = std::max(e.lb, budget + 1);
    return e.lb;
  }

  void build_forest(uint32_t mask, int parent_local,
                    const std::vector<Vertex>& local_to_global,
                    std::vector<int>& parent_out) {
    if (std::popcount(mask) == 1) {
      int v = std::countr_zero(mask);
      parent_out[local_to_global[v]] =
          parent_local == -1 ? -1 : local_to_global[parent_local];
      return;
    }
    solve(mask, nloc);  // force exact + choice
    int v = memo[mask].choice;
    parent_out[local_to_global[v]] =
        parent_local == -1 ? -1 : local_to_global[parent_local];
    uint32_t rem = mask & ~(1u << v);
    for (uint32_t comp : components(rem))
      build_forest(comp, v, local_to_global, parent_out);
  }
};

}  // namespace

TreedepthForest treedepth(const ColoredGraph& g, int cap) {
  TreedepthForest f;
  f.parent.assign(g.n, -1);
  f.depth = 0;
  std::vector<char> seen(g.n, 0);
  for (Vertex s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp = ball(g, s, g.n);
    std::vector<Vertex> local;
    for (Vertex v : comp)
      if (!seen[v]) {
        seen[v] = 1;
        local.push_back(v);
      }
    int nloc = static_cast<int>(local.size());
    if (nloc > cap)
      throw CapError("component of size " + std::to_string(nloc) +
                     " exceeds treedepth cap " + std::to_string(cap));
    TdSolver solver;
    solver.nloc = nloc;
    solver.adjmask.assign(nloc, 0);
    std::vector<int> lidx(g.n, -1);
    for (int i = 0; i < nloc; ++i) lidx[local[i]] = i;
    for (int i = 0; i < nloc; ++i)
      for (Vertex w : g.adj[local[i]])
        if (lidx[w] >= 0) solver.adjmask[i] |= 1u << lidx[w];
    uint32_t full = nloc == 32 ? ~0u : ((1u << nloc) - 1);
    int depth = solver.solve(full, nloc);
    solver.build_forest(full, -1, local, f.parent);
    f.depth = std::max(f.depth, depth);
  }
  return f;
}

namespace {

int heuristic_td_rec(const ColoredGraph& g, const std::vector<Vertex>& verts,
                     int parent, std::vector<int>& parent_out) {
  if (verts.empty()) return 0;
  // split into components first
  std::vector<char> in(g.n, 0);
  for (Vertex v : verts) in[v] = 1;
  std::vector<char> seen(g.n, 0);
  int depth = 0;
  for (Vertex s : verts) {
    if (seen[s]) continue;
    std::vector<Vertex> comp;
    std::deque<Vertex> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop_front();
      comp.push_back(u);
      for (Vertex w : g.adj[u])
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    // root at a maximum-degree vertex within the component
    Vertex root = comp[0];
    int bestdeg = -1;
    for (Vertex v : comp) {
      int d = 0;
      for (Vertex w : g.adj[v])
        if (in[w]) ++d;
      if (d > bestdeg) {
        bestdeg = d;
        root = v;
      }
    }
    parent_out[root] = parent;
    std::vector<Vertex> rest;
    for (Vertex v : comp)
      if (v != root) rest.push_back(v);
    depth = std::max(depth, 1 + heuristic_td_rec(g, rest, root, parent_out));
  }
  return depth;
}

}  // namespace

TreedepthForest heuristic_treedepth_forest(const ColoredGraph& g) {
  TreedepthForest f;
  f.parent.assign(g.n, -1);
  std::vector<Vertex> all(g.n);
  for (Vertex v = 0; v < g.n; ++v) all[v] = v;
  f.depth = heuristic_td_rec(g, all, -1, f.parent);
  return f;
}

bool is_star_coloring(const ColoredGraph& g, const std::vector<int>& color) {
  if (static_cast<int>(color.size()) != g.n) return false;
  for (auto [u, v] : g.edges)
    if (color[u] == color[v]) return false;
  // union of two classes is a star forest iff it has no edge whose endpoints
  // both have degree >= 2 within the union
  int k = 0;
  for (int c : color) k = std::max(k, c + 1);
  for (int c1 = 0; c1 < k; ++c1) {
    for (int c2 = c1 + 1; c2 < k; ++c2) {
      std::vector<int> deg(g.n, 0);
      for (auto [u, v] : g.edges) {
        bool inu = color[u] == c1 || color[u] == c2;
        bool inv = color[v] == c1 || color[v] == c2;
        if (inu && inv) {
          ++deg[u];
          ++deg[v];
        }
      }
      for (auto [u, v] : g.edges) {
        bool inu = color[u] == c1 || color[u] == c2;
        bool inv = color[v] == c1 || color[v] == c2;
        if (inu && inv && deg[u] >= 2 && deg[v] >= 2) return false;
      }
    }
  }
  return true;
}

std::vector<int> star_coloring(const ColoredGraph& g) {
  // greedy proper coloring along the reversed peel order, then repair any
  // star violation by moving one endpoint to a fresh color; a vertex with a
  // globally unique color can never violate again, so this terminates
  std::vector<Vertex> order = peel_order(g);
  std::reverse(order.begin(), order.end());
  std::vector<int> color(g.n, -1);
  int next_fresh = 0;
  for (Vertex v : order) {
    std::vector<char> used(g.n + 1, 0);
    for (Vertex w : g.adj[v])
      if (color[w] >= 0) used[color[w]] = 1;
    int c = 0;
    while (used[c]) ++c;
    color[v] = c;
    next_fresh = std::max(next_fresh, c + 1);
  }
  for (int rounds = 0; rounds <= g.n; ++rounds) {
    // find a violating edge: both endpoints degree >= 2 in the class union
    Vertex fixv = -1;
    for (auto [u, v] : g.edges) {
      if (color[u] == color[v]) {
        fixv = u;
        break;
      }
      int c1 = color[u], c2 = color[v];
      int du = 0, dv = 0;
      for (Vertex w : g.adj[u])
        if (color[w] == c1 || color[w] == c2) ++du;
      for (Vertex w : g.adj[v])
        if (color[w] == c1 || color[w] == c2) ++dv;
      if (du >= 2 && dv >= 2) {
        fixv = u;
        break;
      }
    }
    if (fixv == -1) break;
    color[fixv] = next_fresh++;
  }
  if (!is_star_coloring(g, color))
    throw ValidationError("star coloring repair failed to converge");
  return color;
}

}  // namespace shrubkit
