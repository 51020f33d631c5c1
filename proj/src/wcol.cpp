#include "shrubkit/wcol.hpp"

#include <deque>
#include <numeric>
#include <sstream>

namespace shrubkit {

VertexOrder order_from_sequence(std::vector<Vertex> seq) {
  int n = static_cast<int>(seq.size());
  VertexOrder ord;
  ord.rank.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    Vertex v = seq[i];
    if (v < 0 || v >= n || ord.rank[v] != -1)
      throw ValidationError("order is not a permutation of 0..n-1");
    ord.rank[v] = i;
  }
  ord.seq = std::move(seq);
  return ord;
}

VertexOrder identity_order(int n) {
  std::vector<Vertex> seq(n);
  std::iota(seq.begin(), seq.end(), 0);
  return order_from_sequence(std::move(seq));
}

VertexOrder parse_order(const std::string& text, int n) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::istringstream ss(raw);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok != "order") throw ParseError("expected 'order v0 v1 ...'", lineno);
    std::vector<Vertex> seq;
    int v;
    while (ss >> v) seq.push_back(v);
    if (static_cast<int>(seq.size()) != n)
      throw ParseError("order lists " + std::to_string(seq.size()) +
                           " vertices, graph has " + std::to_string(n),
                       lineno);
    try {
      return order_from_sequence(std::move(seq));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  throw ParseError("missing 'order' line", lineno == 0 ? 1 : lineno);
}

std::string serialize_order(const VertexOrder& ord) {
  std::ostringstream out;
  out << "order";
  for (Vertex v : ord.seq) out << " " << v;
  out << "\n";
  return out.str();
}

std::vector<std::vector<Vertex>> wreach_sets(const ColoredGraph& g,
                                             const VertexOrder& ord, int r) {
  std::vector<std::vector<Vertex>> wr(g.n);
  std::vector<int> dist(g.n, -1);
  std::vector<Vertex> touched;
  // sources in ascending rank keep each wr[v] sorted by rank automatically
  for (int pos = 0; pos < g.n; ++pos) {
    Vertex u = ord.seq[pos];
    touched.clear();
    dist[u] = 0;
    touched.push_back(u);
    std::deque<Vertex> q{u};
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop_front();
      wr[x].push_back(u);
      if (dist[x] == r) continue;
      for (Vertex w : g.adj[x]) {
        if (dist[w] >= 0 || ord.rank[w] < pos) continue;
        dist[w] = dist[x] + 1;
        touched.push_back(w);
        q.push_back(w);
      }
    }
    for (Vertex t : touched) dist[t] = -1;
  }
  return wr;
}

std::vector<Vertex> wreach(const ColoredGraph& g, const VertexOrder& ord, int r,
                           Vertex v) {
  return wreach_sets(g, ord, r)[v];
}

int wcol_of_order(const ColoredGraph& g, const VertexOrder& ord, int r) {
  auto wr = wreach_sets(g, ord, r);
  size_t best = 0;
  for (const auto& s : wr) best = std::max(best, s.size());
  return static_cast<int>(best);
}

VertexOrder heuristic_order(const ColoredGraph& g, const std::string& strategy) {
  if (strategy == "degeneracy") {
    std::vector<Vertex> seq = peel_order(g);
    std::reverse(seq.begin(), seq.end());
    return order_from_sequence(std::move(seq));
  }
  if (strategy == "bfs") {
    std::vector<char> seen(g.n, 0);
    std::vector<Vertex> seq;
    for (Vertex s = 0; s < g.n; ++s) {
      if (seen[s]) continue;
      std::deque<Vertex> q{s};
      seen[s] = 1;
      while (!q.empty()) {
        Vertex u = q.front();
        q.pop_front();
        seq.push_back(u);
        for (Vertex w : g.adj[u])
          if (!seen[w]) {
            seen[w] = 1;
            q.push_back(w);
          }
      }
    }
    return order_from_sequence(std::move(seq));
  }
  if (strategy == "sorted-degree") {
    std::vector<Vertex> seq(g.n);
    std::iota(seq.begin(), seq.end(), 0);
    std::stable_sort(seq.begin(), seq.end(), [&](Vertex a, Vertex b) {
      if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
      return a < b;
    });
    return order_from_sequence(std::move(seq));
  }
  throw ValidationError("unknown order strategy '" + strategy + "'");
}

ExactWcol exact_wcol(const ColoredGraph& g, int r, int cap) {
  if (g.n > cap)
    throw CapError("exact wcol requested for n = " + std::to_string(g.n) +
                   " above cap " + std::to_string(cap));
  if (g.n == 0) return {0, identity_order(0)};
  std::vector<Vertex> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  int best = g.n + 1;
  std::vector<Vertex> best_perm = perm;
  // per-order computation aborts once some wreach set reaches the best size
  std::vector<int> rank(g.n), dist(g.n, -1), count(g.n);
  do {
    for (int i = 0; i < g.n; ++i) rank[perm[i]] = i;
    std::fill(count.begin(), count.end(), 0);
    int cur = 0;
    bool aborted = false;
    for (int pos = 0; pos < g.n && !aborted; ++pos) {
      Vertex u = perm[pos];
      std::vector<Vertex> touched{u};
      dist[u] = 0;
      std::deque<Vertex> q{u};
      while (!q.empty()) {
        Vertex x = q.front();
        q.pop_front();
        cur = std::max(cur, ++count[x]);
        if (cur >= best) {
          aborted = true;
          break;
        }
        if (dist[x] == r) continue;
        for (Vertex w : g.adj[x]) {
          if (dist[w] >= 0 || rank[w] < pos) continue;
          dist[w] = dist[x] + 1;
          touched.push_back(w);
          q.push_back(w);
        }
      }
      for (Vertex t : touched) dist[t] = -1;
      while (!q.empty()) {
        dist[q.front()] = -1;  // entries touched but unprocessed on abort
        q.pop_front();
      }
    }
    if (!aborted && cur < best) {
      best = cur;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, order_from_sequence(std::move(best_perm))};
}

UniversalReport check_universal_inequality(const ColoredGraph& g, const VertexOrder& ord,
                                           int r, int cap) {
  UniversalReport rep{};
  rep.lhs = wcol_of_order(g, ord, r);
  rep.wcol_2r_exact = exact_wcol(g, 2 * r, cap).value;
  long long factor = sat_pow(2LL * r + 1, r);
  rep.rhs = sat_mul(factor, sat_pow(rep.wcol_2r_exact, 4LL * r * r));
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace shrubkit
