#include "shrubkit/quasibush.hpp"

#include <deque>
#include <sstream>

#include "json.hpp"
#include "shrubkit/qtype.hpp"

namespace shrubkit {

using ordered_json = nlohmann::ordered_json;

namespace {

// shortest-path distance from a to b over alive && !used vertices, -1 if none
int masked_dist(const ColoredGraph& h, const std::vector<char>& alive,
                const std::vector<char>& used, Vertex a, Vertex b, int limit) {
  if (a == b) return 0;
  std::vector<int> dist(h.n, -1);
  std::deque<Vertex> q;
  dist[a] = 0;
  q.push_back(a);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    if (dist[x] == limit) continue;
    for (Vertex w : h.adj[x]) {
      if (!alive[w] || used[w] || dist[w] >= 0) continue;
      if (w == b) return dist[x] + 1;
      dist[w] = dist[x] + 1;
      q.push_back(w);
    }
  }
  return -1;
}

}  // namespace

std::vector<Vertex> canonical_path_masked(const ColoredGraph& h,
                                          const std::vector<char>& alive, Vertex a,
                                          Vertex b, int budget) {
  if (a < 0 || b < 0 || a >= h.n || b >= h.n || !alive[a] || !alive[b])
    throw ValidationError("path endpoints outside the masked graph");
  std::vector<char> used(h.n, 0);
  if (masked_dist(h, alive, used, a, b, budget) < 0)
    throw NoPathError("no simple path within length " + std::to_string(budget));
  // greedy lexicographic extension: the smallest feasible next vertex always
  // starts the lexicographically minimal completion, so no backtracking
  std::vector<Vertex> path{a};
  used[a] = 1;
  Vertex cur = a;
  int rem = budget;
  while (cur != b) {
    bool stepped = false;
    for (Vertex w : h.adj[cur]) {
      if (!alive[w] || used[w]) continue;
      int dd = w == b ? 0 : masked_dist(h, alive, used, w, b, rem - 1);
      if (dd < 0 || dd > rem - 1) continue;
      path.push_back(w);
      used[w] = 1;
      cur = w;
      --rem;
      stepped = true;
      break;
    }
    if (!stepped) throw NoPathError("path extension failed");
  }
  return path;
}

std::vector<Vertex> canonical_path(const ColoredGraph& h, Vertex a, Vertex b,
                                   int budget) {
  return canonical_path_masked(h, std::vector<char>(h.n, 1), a, b, budget);
}

SplitterTrace splitter_sets(const ColoredGraph& g, const VertexOrder& ord, int r,
                            Vertex v) {
  if (r < 1) throw ValidationError("radius must be at least 1");
  if (v < 0 || v >= g.n) throw ValidationError("source vertex out of range");
  SplitterTrace t;
  std::vector<char> alive(g.n, 1);
  std::vector<std::vector<char>> snapshots;  // residual graph before each step
  std::set<Vertex> acc;
  while (alive[v]) {
    snapshots.push_back(alive);
    std::vector<Vertex> b = ball_masked(g, alive, v, r);
    Vertex mk = b[0];
    for (Vertex x : b)
      if (ord.rank[x] < ord.rank[mk]) mk = x;
    if (!t.m.empty() && ord.rank[mk] <= ord.rank[t.m.back()])
      throw ValidationError("core sequence failed to increase");
    t.m.push_back(mk);
    int k = static_cast<int>(t.m.size());
    t.paths.emplace_back();
    for (int i = 0; i < k; ++i) {
      std::vector<Vertex> pi =
          canonical_path_masked(g, snapshots[i], t.m[i], mk, 2 * r);
      for (Vertex x : pi) acc.insert(x);
      t.paths.back().push_back(std::move(pi));
    }
    t.s_prefix.emplace_back(acc.begin(), acc.end());
    for (Vertex x : t.s_prefix.back()) alive[x] = 0;
  }
  return t;
}

int QuasiBush::leaf_index(Vertex v) const {
  auto it = std::lower_bound(leaves.begin(), leaves.end(), v);
  if (it == leaves.end() || *it != v) return -1;
  return static_cast<int>(it - leaves.begin());
}

std::vector<int> QuasiBush::leaf_ancestors(Vertex v) const {
  int li = leaf_index(v);
  if (li < 0) throw ValidationError("vertex is not a leaf");
  std::vector<int> out;
  for (int x = leaf_parent[li]; x != -1; x = parent[x]) out.push_back(x);
  return out;
}

int QuasiBush::depth() const {
  size_t d = 0;
  for (const auto& t : tuples) d = std::max(d, t.size());
  return static_cast<int>(d);
}

void validate_quasibush(const QuasiBush& b) {
  int nn = b.node_count();
  if (static_cast<int>(b.parent.size()) != nn ||
      static_cast<int>(b.alpha.size()) != nn)
    throw ValidationError("quasi-bush field sizes disagree");
  if (static_cast<int>(b.leaf_parent.size()) != b.leaf_count() ||
      static_cast<int>(b.leaf_label.size()) != b.leaf_count())
    throw ValidationError("quasi-bush leaf field sizes disagree");
  if (nn == 0) {
    if (b.leaf_count() > 0 || !b.pointers.empty())
      throw ValidationError("leaves or pointers without nodes");
    return;
  }
  if (b.parent[0] != -1 || !b.tuples[0].empty())
    throw ValidationError("node 0 must be the empty-tuple root");
  std::set<std::vector<Vertex>> seen;
  for (int id = 0; id < nn; ++id) {
    if (!seen.insert(b.tuples[id]).second)
      throw ValidationError("duplicate internal node tuple");
    if (id > 0) {
      int p = b.parent[id];
      if (p < 0 || p >= nn) throw ValidationError("parent id out of range");
      if (b.tuples[p].size() + 1 != b.tuples[id].size() ||
          !std::equal(b.tuples[p].begin(), b.tuples[p].end(), b.tuples[id].begin()))
        throw ValidationError("parent tuple is not the prefix");
    }
    if (!std::is_sorted(b.alpha[id].begin(), b.alpha[id].end()) ||
        std::adjacent_find(b.alpha[id].begin(), b.alpha[id].end()) !=
            b.alpha[id].end())
      throw ValidationError("alpha set not sorted unique");
  }
  if (!std::is_sorted(b.leaves.begin(), b.leaves.end()) ||
      std::adjacent_find(b.leaves.begin(), b.leaves.end()) != b.leaves.end())
    throw ValidationError("leaves not sorted unique");
  for (int li = 0; li < b.leaf_count(); ++li) {
    if (b.leaves[li] < 0 || b.leaves[li] >= b.n_universe)
      throw ValidationError("leaf vertex out of universe");
    if (b.leaf_parent[li] < 0 || b.leaf_parent[li] >= nn)
      throw ValidationError("leaf parent out of range");
    if (!b.pointers.count({b.leaves[li], 0}))
      throw ValidationError("leaf missing its root pointer");
    if (b.labeled) {
      if (b.leaf_label[li] < 0 || b.leaf_label[li] >= b.num_labels)
        throw ValidationError("leaf label out of range");
    } else if (b.leaf_label[li] != -1) {
      throw ValidationError("leaf label on unlabeled quasi-bush");
    }
  }
  for (const auto& [v, w] : b.pointers) {
    if (b.leaf_index(v) < 0) throw ValidationError("pointer tail is not a leaf");
    if (w < 0 || w >= nn) throw ValidationError("pointer head out of range");
  }
  if (b.labeled) {
    for (const auto& p : b.pointers)
      if (!b.pointer_label.count(p))
        throw ValidationError("pointer without a label set");
    for (const auto& [p, lab] : b.pointer_label) {
      if (!b.pointers.count(p)) throw ValidationError("label on missing pointer");
      if (!std::is_sorted(lab.begin(), lab.end()) ||
          std::adjacent_find(lab.begin(), lab.end()) != lab.end())
        throw ValidationError("pointer label not sorted unique");
      for (int x : lab)
        if (x < 0 || x >= b.num_labels)
          throw ValidationError("pointer label out of range");
    }
  } else if (!b.pointer_label.empty()) {
    throw ValidationError("pointer labels on unlabeled quasi-bush");
  }
}

QuasiBush build_separator_quasibush(const ColoredGraph& g, const VertexOrder& ord,
                                    int r) {
  if (r < 1) throw ValidationError("radius must be at least 1");
  std::vector<SplitterTrace> traces(g.n);
  parallel_for(g.n, [&](int v) { traces[v] = splitter_sets(g, ord, r, v); });

  // deduplicate core prefixes; equal tuples must carry equal separator sets
  std::map<std::vector<Vertex>, std::vector<Vertex>> alpha_of;
  alpha_of[{}] = {};
  for (Vertex v = 0; v < g.n; ++v) {
    const auto& t = traces[v];
    for (size_t k = 1; k <= t.m.size(); ++k) {
      std::vector<Vertex> key(t.m.begin(), t.m.begin() + k);
      auto [it, fresh] = alpha_of.emplace(key, t.s_prefix[k - 1]);
      if (!fresh && it->second != t.s_prefix[k - 1])
        throw WellDefinednessError("equal core tuples with different separator sets");
    }
  }

  QuasiBush b;
  b.n_universe = g.n;
  std::map<std::vector<Vertex>, int> id_of;
  {
    std::vector<std::vector<Vertex>> all;
    for (const auto& [key, a] : alpha_of) {
      (void)a;
      all.push_back(key);
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
                       if (x.size() != y.size()) return x.size() < y.size();
                       return x < y;
                     });
    for (auto& t : all) {
      id_of[t] = b.node_count();
      b.alpha.push_back(alpha_of.at(t));
      b.tuples.push_back(std::move(t));
    }
  }
  b.parent.assign(b.node_count(), -1);
  for (int id = 1; id < b.node_count(); ++id) {
    std::vector<Vertex> pre(b.tuples[id].begin(), b.tuples[id].end() - 1);
    b.parent[id] = id_of.at(pre);
  }
  for (Vertex v = 0; v < g.n; ++v) {
    b.leaves.push_back(v);
    b.leaf_parent.push_back(id_of.at(traces[v].m));
    b.leaf_label.push_back(-1);
  }

  // pointer rule: every leaf points at the root, and at each core prefix of a
  // source the previous separator set failed to disconnect it from
  std::vector<std::vector<std::pair<Vertex, int>>> rows(g.n);
  parallel_for(g.n, [&](int v) {
    const auto& t = traces[v];
    for (size_t k = 1; k <= t.m.size(); ++k) {
      std::vector<Vertex> key(t.m.begin(), t.m.begin() + k);
      int node = id_of.at(key);
      const std::vector<Vertex> empty_sep;
      const std::vector<Vertex>& sep = k == 1 ? empty_sep : t.s_prefix[k - 2];
      for (Vertex u = 0; u < g.n; ++u)
        if (!is_r_separated(g, u, v, r, sep)) rows[v].emplace_back(u, node);
    }
  });
  for (Vertex u = 0; u < g.n; ++u) b.pointers.insert({u, 0});
  for (auto& row : rows)
    for (auto& p : row) b.pointers.insert(p);

  validate_quasibush(b);

  // separator contract: the lowest pointed ancestor's set always disconnects
  std::vector<std::array<Vertex, 2>> bad(g.n, {-1, -1});
  parallel_for(g.n, [&](int u) {
    for (Vertex v = 0; v < g.n && bad[u][0] < 0; ++v) {
      if (u == v) continue;
      for (int w : b.leaf_ancestors(v)) {
        if (!b.pointers.count({u, w})) continue;
        if (!is_r_separated(g, u, v, r, b.alpha[w])) bad[u] = {u, v};
        break;
      }
    }
  });
  for (const auto& w : bad)
    if (w[0] >= 0)
      throw SeparatorPropertyError("lowest pointed ancestor fails to separate", w);
  return b;
}

QuasiBush label_quasibush(const QuasiBush& s, const ColoredGraph& g,
                          const Formula& phi, int q) {
  if (phi.free_vars.size() != 2)
    throw ArityError("quasi-bush labeling needs a formula with 2 free variables");
  validate_quasibush(s);
  if (s.n_universe != g.n || s.leaf_count() != g.n)
    throw ValidationError("quasi-bush does not cover this graph");

  QuasiBush b = s;
  b.pointer_label.clear();

  // leaf label: for every internal ancestor, the rank-q type of the leaf
  // prefixed to that ancestor's separator set, tagged with the ancestor depth
  TypeTable tt;
  std::vector<std::vector<int>> chains(g.n);
  for (Vertex v = 0; v < g.n; ++v) chains[v] = b.leaf_ancestors(v);
  std::map<std::vector<std::pair<int, int>>, int> dense;
  for (Vertex v = 0; v < g.n; ++v) {
    std::vector<std::pair<int, int>> lam;
    for (int w : chains[v]) {
      std::vector<Vertex> tuple{v};
      tuple.insert(tuple.end(), b.alpha[w].begin(), b.alpha[w].end());
      lam.emplace_back(tt.qtype(g, q, tuple),
                       static_cast<int>(b.tuples[w].size()));
    }
    std::sort(lam.begin(), lam.end());
    auto [it, fresh] = dense.emplace(std::move(lam), static_cast<int>(dense.size()));
    (void)fresh;
    b.leaf_label[v] = it->second;
  }
  b.num_labels = static_cast<int>(dense.size());
  b.labeled = true;

  DirectedGraph target = interpret(g, phi);

  // empirical pointer labels: pointer (v,w) collects the labels of leaves u
  // whose lowest ancestor pointed by v is w and that satisfy the relation
  // towards v; a label seen with both outcomes at one pointer is a witness
  // that rank q cannot define the relation at this radius
  std::map<std::pair<Vertex, int>, std::map<int, std::pair<bool, Vertex>>> seen;
  for (Vertex u = 0; u < g.n; ++u) {
    for (Vertex v = 0; v < g.n; ++v) {
      if (u == v) continue;
      int w = -1;
      for (int x : chains[u]) {
        if (b.pointers.count({v, x})) {
          w = x;
          break;
        }
      }
      bool val = target.has_arc(u, v);
      auto& slot = seen[{v, w}];
      auto it = slot.find(b.leaf_label[u]);
      if (it == slot.end()) {
        slot.emplace(b.leaf_label[u], std::make_pair(val, u));
      } else if (it->second.first != val) {
        Vertex pu = it->second.second;
        std::array<Vertex, 4> wit = val ? std::array<Vertex, 4>{u, v, pu, v}
                                        : std::array<Vertex, 4>{pu, v, u, v};
        throw AdequacyError(
            "leaf label witnessed with both an edge and a non-edge at one "
            "pointer; rank insufficient for this formula",
            wit);
      }
    }
  }
  for (const auto& p : b.pointers) b.pointer_label[p];
  for (const auto& [p, slot] : seen) {
    auto& lab = b.pointer_label[p];
    for (const auto& [l, rec] : slot)
      if (rec.first) lab.push_back(l);
    std::sort(lab.begin(), lab.end());
  }

  validate_quasibush(b);
  if (decode_quasibush(b) != target)
    throw ValidationError("quasi-bush decode mismatch after labeling");
  return b;
}

DirectedGraph decode_quasibush(const QuasiBush& b) {
  validate_quasibush(b);
  if (!b.labeled && b.leaf_count() > 0)
    throw ValidationError("decode needs a labeled quasi-bush");
  std::vector<std::vector<int>> chains(b.leaf_count());
  for (int li = 0; li < b.leaf_count(); ++li)
    chains[li] = b.leaf_ancestors(b.leaves[li]);
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (int ui = 0; ui < b.leaf_count(); ++ui) {
    Vertex u = b.leaves[ui];
    for (int vi = 0; vi < b.leaf_count(); ++vi) {
      if (ui == vi) continue;
      Vertex v = b.leaves[vi];
      int w = -1;
      for (int x : chains[ui]) {
        if (b.pointers.count({v, x})) {
          w = x;
          break;
        }
      }
      if (w == -1) throw ValidationError("no pointed ancestor; root pointer missing");
      auto it = b.pointer_label.find({v, w});
      if (it == b.pointer_label.end()) continue;
      if (std::binary_search(it->second.begin(), it->second.end(),
                             b.leaf_label[ui]))
        arcs.emplace_back(u, v);
    }
  }
  return make_digraph(b.n_universe, std::move(arcs));
}

QuasiBush restrict_quasibush(const QuasiBush& b, const std::vector<Vertex>& a) {
  validate_quasibush(b);
  std::vector<Vertex> keep_leaves = sorted_unique(a);
  for (Vertex v : keep_leaves)
    if (b.leaf_index(v) < 0)
      throw ValidationError("restriction vertex " + std::to_string(v) +
                            " is not a leaf");
  QuasiBush out;
  out.n_universe = b.n_universe;
  out.labeled = b.labeled;
  out.num_labels = b.num_labels;
  if (keep_leaves.empty()) return out;

  std::vector<char> keep(b.node_count(), 0);
  for (Vertex v : keep_leaves)
    for (int x : b.leaf_ancestors(v)) keep[x] = 1;
  std::vector<int> newid(b.node_count(), -1);
  for (int id = 0; id < b.node_count(); ++id) {
    if (!keep[id]) continue;
    newid[id] = out.node_count();
    out.tuples.push_back(b.tuples[id]);
    out.parent.push_back(b.parent[id] == -1 ? -1 : newid[b.parent[id]]);
    out.alpha.push_back(b.alpha[id]);
  }
  for (Vertex v : keep_leaves) {
    int li = b.leaf_index(v);
    out.leaves.push_back(v);
    out.leaf_parent.push_back(newid[b.leaf_parent[li]]);
    out.leaf_label.push_back(b.leaf_label[li]);
  }
  for (const auto& [v, w] : b.pointers) {
    if (!contains_sorted(keep_leaves, v) || !keep[w]) continue;
    out.pointers.insert({v, newid[w]});
    if (b.labeled) out.pointer_label[{v, newid[w]}] = b.pointer_label.at({v, w});
  }
  validate_quasibush(out);
  return out;
}

QuasiBush one_label_quasibush(const QuasiBush& b) {
  validate_quasibush(b);
  if (!b.labeled) throw ValidationError("one-label reduction needs labels");
  std::vector<int> labels;
  std::map<int, std::set<int>> subtree;
  for (int li = 0; li < b.leaf_count(); ++li) {
    int a = b.leaf_label[li];
    if (!subtree.count(a)) labels.push_back(a);
    for (int x : b.leaf_ancestors(b.leaves[li])) subtree[a].insert(x);
  }
  std::sort(labels.begin(), labels.end());

  QuasiBush out;
  out.n_universe = b.n_universe;
  out.labeled = true;
  out.num_labels = 1;
  out.tuples.push_back({});
  out.parent.push_back(-1);
  out.alpha.push_back({});
  // node (X,a) encoded as tuple [a] ++ tuple(X) under a fresh apex
  std::map<std::pair<int, int>, int> newid;
  {
    struct Row {
      int a, old;
    };
    std::vector<Row> rowsv;
    for (int a : labels)
      for (int x : subtree[a]) rowsv.push_back({a, x});
    std::stable_sort(rowsv.begin(), rowsv.end(), [&](const Row& l, const Row& r2) {
      size_t ll = b.tuples[l.old].size(), rl = b.tuples[r2.old].size();
      if (ll != rl) return ll < rl;
      if (l.a != r2.a) return l.a < r2.a;
      return b.tuples[l.old] < b.tuples[r2.old];
    });
    for (const Row& row : rowsv) {
      newid[{row.a, row.old}] = out.node_count();
      std::vector<Vertex> t{row.a};
      t.insert(t.end(), b.tuples[row.old].begin(), b.tuples[row.old].end());
      out.tuples.push_back(std::move(t));
      int op = b.parent[row.old];
      out.parent.push_back(op == -1 ? 0 : newid.at({row.a, op}));
      out.alpha.push_back(b.alpha[row.old]);
    }
  }
  for (int li = 0; li < b.leaf_count(); ++li) {
    out.leaves.push_back(b.leaves[li]);
    out.leaf_parent.push_back(newid.at({b.leaf_label[li], b.leaf_parent[li]}));
    out.leaf_label.push_back(0);
  }
  for (const auto& [v, w] : b.pointers) {
    const auto& lab = b.pointer_label.at({v, w});
    for (int a : labels) {
      if (!subtree[a].count(w)) continue;
      int nw = newid.at({a, w});
      out.pointers.insert({v, nw});
      out.pointer_label[{v, nw}] =
          std::binary_search(lab.begin(), lab.end(), a) ? std::vector<int>{0}
                                                        : std::vector<int>{};
    }
  }
  for (Vertex v : out.leaves) {
    out.pointers.insert({v, 0});
    out.pointer_label[{v, 0}];
  }
  validate_quasibush(out);
  return out;
}

ColoredGraph quasibush_gaifman(const QuasiBush& b) {
  int nn = b.node_count();
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int id = 1; id < nn; ++id) edges.emplace_back(b.parent[id], id);
  for (int li = 0; li < b.leaf_count(); ++li)
    edges.emplace_back(b.leaf_parent[li], nn + li);
  for (const auto& [v, w] : b.pointers) {
    int li = b.leaf_index(v);
    edges.emplace_back(w, nn + li);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return make_graph(nn + b.leaf_count(), edges);
}

VertexOrder quasibush_rep_order(const QuasiBush& b, const VertexOrder& ord) {
  int nn = b.node_count();
  auto ranked = [&](const std::vector<Vertex>& t) {
    std::vector<int> out;
    out.reserve(t.size());
    for (Vertex v : t) out.push_back(ord.rank[v]);
    return out;
  };
  struct Key {
    int rep_rank;
    int is_leaf;
    std::vector<int> tie;
    int id;
  };
  std::vector<Key> ks;
  for (int id = 1; id < nn; ++id)
    ks.push_back({ord.rank[b.tuples[id].back()], 0, ranked(b.tuples[id]), id});
  for (int li = 0; li < b.leaf_count(); ++li)
    ks.push_back({ord.rank[b.leaves[li]], 1, {}, nn + li});
  std::stable_sort(ks.begin(), ks.end(), [](const Key& l, const Key& r2) {
    if (l.rep_rank != r2.rep_rank) return l.rep_rank < r2.rep_rank;
    if (l.is_leaf != r2.is_leaf) return l.is_leaf < r2.is_leaf;
    return l.tie < r2.tie;
  });
  std::vector<int> seq{0};
  for (const Key& k : ks) seq.push_back(k.id);
  return order_from_sequence(std::move(seq));
}

QuasiBushStats quasibush_stats(const QuasiBush& b, const ColoredGraph& g,
                               const VertexOrder& ord, int r) {
  validate_quasibush(b);
  QuasiBushStats st;
  st.depth = b.depth();
  for (int li = 0; li < b.leaf_count(); ++li)
    st.max_m = std::max(st.max_m,
                        static_cast<int>(b.tuples[b.leaf_parent[li]].size()));
  for (const auto& a : b.alpha)
    st.max_alpha = std::max(st.max_alpha, static_cast<int>(a.size()));
  if (b.node_count() == 0) return st;
  ColoredGraph gf = quasibush_gaifman(b);
  VertexOrder rep = quasibush_rep_order(b, ord);
  long long w2r = wcol_of_order(g, ord, 2 * r);
  for (int s : {1, 2}) {
    QuasiBushStats::Row row;
    row.s = s;
    row.lhs = wcol_of_order(gf, rep, s);
    long long w2sr = wcol_of_order(g, ord, 2 * s * r);
    row.rhs = sat_add(1, sat_mul(w2sr, sat_add(sat_pow(w2r, st.max_m), 1)));
    row.holds = row.lhs <= row.rhs;
    st.rows.push_back(row);
  }
  return st;
}

std::string quasibush_to_json(const QuasiBush& b) {
  ordered_json j;
  j["n"] = b.n_universe;
  j["nodes"] = ordered_json::array();
  for (int id = 0; id < b.node_count(); ++id) {
    ordered_json node;
    node["id"] = id;
    node["tuple"] = b.tuples[id];
    node["parent"] = b.parent[id];
    node["alpha"] = b.alpha[id];
    j["nodes"].push_back(node);
  }
  j["leaves"] = ordered_json::array();
  int nn = b.node_count();
  for (int li = 0; li < b.leaf_count(); ++li) {
    ordered_json leaf;
    leaf["id"] = nn + li;
    leaf["vertex"] = b.leaves[li];
    leaf["parent"] = b.leaf_parent[li];
    if (b.labeled) leaf["label"] = b.leaf_label[li];
    j["leaves"].push_back(leaf);
  }
  j["pointers"] = ordered_json::array();
  for (const auto& [v, w] : b.pointers) {
    ordered_json p;
    p["leaf"] = nn + b.leaf_index(v);
    p["node"] = w;
    if (b.labeled) p["label"] = b.pointer_label.at({v, w});
    j["pointers"].push_back(p);
  }
  return j.dump(2) + "\n";
}

QuasiBush quasibush_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid quasi-bush JSON: ") + e.what(), 1);
  }
  QuasiBush b;
  try {
    b.n_universe = j.at("n").get<int>();
    int nn = static_cast<int>(j.at("nodes").size());
    b.tuples.assign(nn, {});
    b.parent.assign(nn, -1);
    b.alpha.assign(nn, {});
    for (const auto& node : j.at("nodes")) {
      int id = node.at("id").get<int>();
      if (id < 0 || id >= nn) throw ValidationError("node id out of range");
      b.tuples[id] = node.at("tuple").get<std::vector<Vertex>>();
      b.parent[id] = node.at("parent").get<int>();
      b.alpha[id] = node.at("alpha").get<std::vector<Vertex>>();
    }
    struct LeafRow {
      int id;
      Vertex vertex;
      int parent;
      int label;
    };
    std::map<int, LeafRow> by_id;
    bool labeled = false;
    for (const auto& leaf : j.at("leaves")) {
      LeafRow row;
      row.id = leaf.at("id").get<int>();
      row.vertex = leaf.at("vertex").get<int>();
      row.parent = leaf.at("parent").get<int>();
      row.label = leaf.count("label") ? leaf.at("label").get<int>() : -1;
      if (row.label >= 0) labeled = true;
      if (!by_id.emplace(row.id, row).second)
        throw ValidationError("duplicate leaf id");
    }
    b.labeled = labeled;
    std::map<Vertex, LeafRow> by_vertex;
    for (const auto& [id, row] : by_id) {
      (void)id;
      if (!by_vertex.emplace(row.vertex, row).second)
        throw ValidationError("duplicate leaf vertex");
    }
    for (const auto& [v, row] : by_vertex) {
      b.leaves.push_back(v);
      b.leaf_parent.push_back(row.parent);
      b.leaf_label.push_back(row.label);
      b.num_labels = std::max(b.num_labels, row.label + 1);
    }
    for (const auto& p : j.at("pointers")) {
      int leaf_id = p.at("leaf").get<int>();
      auto it = by_id.find(leaf_id);
      if (it == by_id.end()) throw ValidationError("pointer leaf id unknown");
      std::pair<Vertex, int> key{it->second.vertex, p.at("node").get<int>()};
      b.pointers.insert(key);
      if (b.labeled) {
        std::vector<int> lab;
        if (p.count("label")) lab = p.at("label").get<std::vector<int>>();
        std::sort(lab.begin(), lab.end());
        lab.erase(std::unique(lab.begin(), lab.end()), lab.end());
        b.pointer_label[key] = std::move(lab);
      }
    }
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("invalid quasi-bush JSON: ") + e.what(), 1);
  }
  validate_quasibush(b);
  return b;
}

std::string quasibush_to_dot(const QuasiBush& b) {
  std::ostringstream out;
  out << "digraph quasibush {\n  rankdir=TB;\n";
  for (int id = 0; id < b.node_count(); ++id) {
    out << "  n" << id << " [label=\"(";
    for (size_t i = 0; i < b.tuples[id].size(); ++i)
      out << (i ? "," : "") << b.tuples[id][i];
    out << ")\"];\n";
  }
  int nn = b.node_count();
  for (int li = 0; li < b.leaf_count(); ++li) {
    out << "  n" << nn + li << " [label=\"v" << b.leaves[li];
    if (b.labeled) out << " L" << b.leaf_label[li];
    out << "\", shape=box];\n";
  }
  for (int id = 1; id < nn; ++id)
    out << "  n" << b.parent[id] << " -> n" << id << ";\n";
  for (int li = 0; li < b.leaf_count(); ++li)
    out << "  n" << b.leaf_parent[li] << " -> n" << nn + li << ";\n";
  for (const auto& [v, w] : b.pointers)
    out << "  n" << nn + b.leaf_index(v) << " -> n" << w
        << " [style=dashed, constraint=false];\n";
  out << "}\n";
  return out.str();
}

}  // namespace shrubkit
