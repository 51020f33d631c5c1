#include "shrubkit/bush.hpp"

#include <set>
#include <sstream>

#include "json.hpp"
#include "shrubkit/qtype.hpp"

namespace shrubkit {

using ordered_json = nlohmann::ordered_json;

std::vector<int> Bush::ancestors(int id) const {
  std::vector<int> out;
  for (int x = id; x != -1; x = parent[x]) out.push_back(x);
  return out;
}

int Bush::leaf_of(Vertex v) const {
  for (int id = 0; id < node_count(); ++id)
    if (leaf_vertex[id] == v) return id;
  return -1;
}

void validate_bush(const Bush& b) {
  int nn = b.node_count();
  if (nn == 0) throw ValidationError("bush has no nodes");
  if (static_cast<int>(b.parent.size()) != nn ||
      static_cast<int>(b.leaf_vertex.size()) != nn ||
      static_cast<int>(b.leaf_label.size()) != nn)
    throw ValidationError("bush field sizes disagree");
  if (b.parent[0] != -1 || !b.tuples[0].empty())
    throw ValidationError("node 0 must be the empty-tuple root");
  std::set<Vertex> seen_vertices;
  for (int id = 0; id < nn; ++id) {
    int len = static_cast<int>(b.tuples[id].size());
    if (len > b.depth) throw ValidationError("node deeper than bush depth");
    if (id > 0) {
      int p = b.parent[id];
      if (p < 0 || p >= nn) throw ValidationError("parent id out of range");
      if (static_cast<int>(b.tuples[p].size()) != len - 1 ||
          !std::equal(b.tuples[p].begin(), b.tuples[p].end(), b.tuples[id].begin()))
        throw ValidationError("parent tuple is not the prefix");
    }
    bool leaf = b.leaf_vertex[id] >= 0;
    if (leaf != (len == b.depth && !(id == 0 && b.depth == 0)))
      throw ValidationError("leaves must sit exactly at the bush depth");
    if (leaf) {
      if (b.leaf_vertex[id] >= b.n_universe)
        throw ValidationError("leaf vertex out of universe");
      if (!seen_vertices.insert(b.leaf_vertex[id]).second)
        throw ValidationError("duplicate leaf vertex");
      if (b.leaf_label[id] < 0 || b.leaf_label[id] >= b.num_labels)
        throw ValidationError("leaf label out of range");
    }
  }
  for (int id = 0; id < nn; ++id)
    if (!b.arcs.count({id, id}))
      throw ValidationError("missing info loop on node " + std::to_string(id));
  for (const auto& [key, label] : b.arcs) {
    auto [x, y] = key;
    if (x < 0 || y < 0 || x >= nn || y >= nn)
      throw ValidationError("info arc endpoint out of range");
    if (b.tuples[x].size() != b.tuples[y].size())
      throw ValidationError("info arc endpoints at different depths");
    if (!b.arcs.count({y, x}))
      throw ValidationError("info arc relation is not symmetric");
    for (auto [a, c] : label)
      if (a < 0 || c < 0 || a >= b.num_labels || c >= b.num_labels)
        throw ValidationError("info arc label out of range");
    if (!std::is_sorted(label.begin(), label.end()) ||
        std::adjacent_find(label.begin(), label.end()) != label.end())
      throw ValidationError("info arc label not sorted unique");
  }
}

namespace {

// tuples are ordered by rank, not id, so membership is a linear scan
bool tuple_contains(const std::vector<int>& tuple, int v) {
  return std::find(tuple.begin(), tuple.end(), v) != tuple.end();
}

// per-leaf ancestor node ids indexed by depth 0..depth
std::vector<std::vector<int>> ancestor_rows(const Bush& b, const std::vector<int>& leaves) {
  std::vector<std::vector<int>> rows;
  rows.reserve(leaves.size());
  for (int leaf : leaves) {
    std::vector<int> chain = b.ancestors(leaf);
    std::reverse(chain.begin(), chain.end());
    rows.push_back(std::move(chain));
  }
  return rows;
}

}  // namespace

Bush build_bush(const ColoredGraph& g, const VertexOrder& ord, int r, int q,
                const Formula& phi) {
  if (phi.free_vars.size() != 2)
    throw ArityError("bush construction needs a formula with 2 free variables");
  auto wr = wreach_sets(g, ord, r);
  int d = 0;
  for (const auto& s : wr) d = std::max(d, static_cast<int>(s.size()));

  // first_i(v): the i smallest wreach members by ord, padded by repeating v;
  // v is always the ord-maximum of its own wreach set, so the padded tuple
  // stays non-decreasing and its last entry is v exactly when i = d
  auto first_i = [&](Vertex v, int i) {
    std::vector<int> t;
    t.reserve(i);
    int have = static_cast<int>(wr[v].size());
    for (int j = 0; j < std::min(i, have); ++j) t.push_back(wr[v][j]);
    while (static_cast<int>(t.size()) < i) t.push_back(v);
    return t;
  };

  std::set<std::vector<int>> tuple_set;
  tuple_set.insert(std::vector<int>{});
  for (Vertex v = 0; v < g.n; ++v)
    for (int i = 1; i <= d; ++i) tuple_set.insert(first_i(v, i));

  Bush b;
  b.depth = d;
  b.n_universe = g.n;
  std::map<std::vector<int>, int> id_of;
  {
    std::vector<std::vector<int>> all(tuple_set.begin(), tuple_set.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const std::vector<int>& x, const std::vector<int>& y) {
                       if (x.size() != y.size()) return x.size() < y.size();
                       return x < y;
                     });
    for (auto& t : all) {
      id_of[t] = b.node_count();
      b.tuples.push_back(t);
    }
  }
  int nn = b.node_count();
  b.parent.assign(nn, -1);
  b.leaf_vertex.assign(nn, -1);
  b.leaf_label.assign(nn, -1);
  for (int id = 1; id < nn; ++id) {
    std::vector<int> pre(b.tuples[id].begin(), b.tuples[id].end() - 1);
    b.parent[id] = id_of.at(pre);
  }
  std::vector<int> leaf_ids(g.n, -1);
  for (Vertex v = 0; v < g.n; ++v) {
    int id = id_of.at(first_i(v, d));
    leaf_ids[v] = id;
    b.leaf_vertex[id] = v;
  }

  // same-depth info arcs: loops everywhere plus pairs with a max-element
  // containment in either direction
  std::vector<std::vector<int>> by_depth(d + 1);
  for (int id = 0; id < nn; ++id)
    by_depth[b.tuples[id].size()].push_back(id);
  for (int id = 0; id < nn; ++id) b.arcs[{id, id}];
  for (int i = 1; i <= d; ++i) {
    const auto& level = by_depth[i];
    for (size_t a = 0; a < level.size(); ++a) {
      for (size_t c = a + 1; c < level.size(); ++c) {
        int x = level[a], y = level[c];
        if (tuple_contains(b.tuples[y], b.tuples[x].back()) ||
            tuple_contains(b.tuples[x], b.tuples[y].back())) {
          b.arcs[{x, y}];
          b.arcs[{y, x}];
        }
      }
    }
  }

  // leaf labels: rank-q types of v prefixed to its own depth-d tuple,
  // compressed to dense indices by first occurrence
  {
    TypeTable tt;
    std::map<int, int> dense;
    for (Vertex v = 0; v < g.n; ++v) {
      std::vector<int> t;
      t.push_back(v);
      const auto& ft = b.tuples[leaf_ids[v]];
      t.insert(t.end(), ft.begin(), ft.end());
      int raw = tt.qtype(g, q, t);
      auto [it, fresh] = dense.emplace(raw, static_cast<int>(dense.size()));
      (void)fresh;
      b.leaf_label[leaf_ids[v]] = it->second;
    }
    b.num_labels = static_cast<int>(dense.size());
  }

  DirectedGraph target = interpret(g, phi);
  auto rows = ancestor_rows(b, leaf_ids);

  // empirical arc labels: for each ordered leaf pair, its lowest info arc
  // receives the leaf-label pair when the formula holds; a pair witnessed
  // both ways at one arc proves the (r,q) labels cannot define the relation
  std::map<std::pair<int, int>, std::map<std::pair<int, int>, std::pair<bool, std::pair<Vertex, Vertex>>>> seen;
  for (Vertex u = 0; u < g.n; ++u) {
    for (Vertex v = 0; v < g.n; ++v) {
      if (u == v) continue;
      std::pair<int, int> arc{-1, -1};
      for (int i = d; i >= 0; --i) {
        std::pair<int, int> key{rows[u][i], rows[v][i]};
        if (b.arcs.count(key)) {
          arc = key;
          break;
        }
      }
      std::pair<int, int> lp{b.leaf_label[leaf_ids[u]], b.leaf_label[leaf_ids[v]]};
      bool val = target.has_arc(u, v);
      auto& slot = seen[arc];
      auto it = slot.find(lp);
      if (it == slot.end()) {
        slot.emplace(lp, std::make_pair(val, std::make_pair(u, v)));
        if (val) b.arcs[arc].push_back(lp);
      } else if (it->second.first != val) {
        auto [pu, pv] = it->second.second;
        std::array<Vertex, 4> w = val ? std::array<Vertex, 4>{u, v, pu, pv}
                                      : std::array<Vertex, 4>{pu, pv, u, v};
        throw AdequacyError(
            "label pair carries both an edge and a non-edge at the same info arc; "
            "radius/rank insufficient for this formula",
            w);
      }
    }
  }
  for (auto& [key, label] : b.arcs) {
    std::sort(label.begin(), label.end());
    label.erase(std::unique(label.begin(), label.end()), label.end());
  }

  validate_bush(b);
  if (decode_bush(b) != target)
    throw ValidationError("bush decode mismatch after construction");
  return b;
}

DirectedGraph decode_bush(const Bush& b) {
  validate_bush(b);
  std::vector<int> leaves;
  for (int id = 0; id < b.node_count(); ++id)
    if (b.is_leaf(id)) leaves.push_back(id);
  auto rows = ancestor_rows(b, leaves);
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (size_t i = 0; i < leaves.size(); ++i) {
    for (size_t j = 0; j < leaves.size(); ++j) {
      if (i == j) continue;
      bool edge = false;
      bool found = false;
      for (int dep = b.depth; dep >= 0; --dep) {
        auto it = b.arcs.find({rows[i][dep], rows[j][dep]});
        if (it == b.arcs.end()) continue;
        found = true;
        std::pair<int, int> lp{b.leaf_label[leaves[i]], b.leaf_label[leaves[j]]};
        edge = std::binary_search(it->second.begin(), it->second.end(), lp);
        break;
      }
      if (!found) throw ValidationError("no lowest info arc; root loop missing");
      if (edge)
        arcs.emplace_back(b.leaf_vertex[leaves[i]], b.leaf_vertex[leaves[j]]);
    }
  }
  return make_digraph(b.n_universe, std::move(arcs));
}

namespace {

// renumbers kept node ids canonically by (depth, tuple); keep must be
// ancestor-closed and contain the root
Bush rebuild_subset(const Bush& b, const std::vector<char>& keep) {
  std::vector<int> kept;
  for (int id = 0; id < b.node_count(); ++id)
    if (keep[id]) kept.push_back(id);
  std::stable_sort(kept.begin(), kept.end(), [&](int x, int y) {
    if (b.tuples[x].size() != b.tuples[y].size())
      return b.tuples[x].size() < b.tuples[y].size();
    return b.tuples[x] < b.tuples[y];
  });
  std::vector<int> newid(b.node_count(), -1);
  for (size_t i = 0; i < kept.size(); ++i) newid[kept[i]] = static_cast<int>(i);
  Bush out;
  out.depth = b.depth;
  out.n_universe = b.n_universe;
  out.num_labels = b.num_labels;
  for (int id : kept) {
    out.tuples.push_back(b.tuples[id]);
    out.parent.push_back(b.parent[id] == -1 ? -1 : newid[b.parent[id]]);
    out.leaf_vertex.push_back(b.leaf_vertex[id]);
    out.leaf_label.push_back(b.leaf_label[id]);
  }
  for (const auto& [key, label] : b.arcs) {
    auto [x, y] = key;
    if (keep[x] && keep[y]) out.arcs[{newid[x], newid[y]}] = label;
  }
  return out;
}

}  // namespace

Bush restrict_bush(const Bush& b, const std::vector<Vertex>& w) {
  std::vector<char> keep(b.node_count(), 0);
  keep[b.root()] = 1;
  for (Vertex v : w) {
    int leaf = b.leaf_of(v);
    if (leaf == -1)
      throw ValidationError("restriction vertex " + std::to_string(v) +
                            " is not a leaf");
    for (int x : b.ancestors(leaf)) keep[x] = 1;
  }
  Bush out = rebuild_subset(b, keep);
  validate_bush(out);
  return out;
}

OneLabelResult one_label(const Bush& b, const std::vector<int>& s_list) {
  validate_bush(b);
  // realized labels and, per label, the set of ancestors of its leaves
  std::vector<int> labels;
  std::map<int, std::set<int>> subtree;
  for (int id = 0; id < b.node_count(); ++id) {
    if (!b.is_leaf(id)) continue;
    int a = b.leaf_label[id];
    if (!subtree.count(a)) labels.push_back(a);
    for (int x : b.ancestors(id)) subtree[a].insert(x);
  }
  std::sort(labels.begin(), labels.end());

  Bush out;
  out.depth = b.depth + 1;
  out.n_universe = b.n_universe;
  out.num_labels = 1;
  // node (X,a) encoded as tuple [a] ++ tuple(X); the fresh apex is []
  std::map<std::pair<int, int>, int> newid;  // (label, old id) -> new id
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
    out.tuples.push_back({});
    out.parent.push_back(-1);
    out.leaf_vertex.push_back(-1);
    out.leaf_label.push_back(-1);
    for (const Row& row : rowsv) {
      newid[{row.a, row.old}] = out.node_count();
      std::vector<int> t;
      t.push_back(row.a);
      t.insert(t.end(), b.tuples[row.old].begin(), b.tuples[row.old].end());
      out.tuples.push_back(std::move(t));
      int op = b.parent[row.old];
      out.parent.push_back(op == -1 ? 0 : newid.at({row.a, op}));
      if (b.is_leaf(row.old)) {
        out.leaf_vertex.push_back(b.leaf_vertex[row.old]);
        out.leaf_label.push_back(0);
      } else {
        out.leaf_vertex.push_back(-1);
        out.leaf_label.push_back(-1);
      }
    }
  }
  out.arcs[{0, 0}];
  for (const auto& [key, label] : b.arcs) {
    auto [x, y] = key;
    for (int a : labels) {
      if (!subtree[a].count(x)) continue;
      for (int c : labels) {
        if (!subtree[c].count(y)) continue;
        auto& slot = out.arcs[{newid.at({a, x}), newid.at({c, y})}];
        if (std::binary_search(label.begin(), label.end(), std::make_pair(a, c)))
          slot = {{0, 0}};
      }
    }
  }
  validate_bush(out);

  OneLabelResult res;
  res.input_labels = static_cast<int>(labels.size());

  ColoredGraph hin = bush_gaifman(b);
  ColoredGraph hout = bush_gaifman(out);
  bool exact = hin.n <= 10 && hout.n <= 10;
  VertexOrder base = heuristic_order(hin, "degeneracy");
  // derived order on the output: apex first, then by (input position, label)
  std::vector<int> outseq{0};
  {
    struct Key {
      int pos, a, id;
    };
    std::vector<Key> ks;
    for (const auto& [la, nid] : newid)
      ks.push_back({base.rank[la.second], la.first, nid});
    std::sort(ks.begin(), ks.end(), [](const Key& l, const Key& r2) {
      if (l.pos != r2.pos) return l.pos < r2.pos;
      if (l.a != r2.a) return l.a < r2.a;
      return l.id < r2.id;
    });
    for (const Key& k : ks) outseq.push_back(k.id);
  }
  VertexOrder derived = order_from_sequence(std::move(outseq));
  for (int s : s_list) {
    OneLabelCheck chk;
    chk.s = s;
    chk.exact = exact;
    int in_w;
    if (exact) {
      in_w = exact_wcol(hin, s).value;
      chk.lhs = exact_wcol(hout, s).value;
    } else {
      in_w = wcol_of_order(hin, base, s);
      chk.lhs = wcol_of_order(hout, derived, s);
    }
    chk.rhs = res.input_labels * in_w + 1;
    chk.holds = chk.lhs <= chk.rhs;
    res.checks.push_back(chk);
  }
  res.bush = std::move(out);
  return res;
}

AppendixDigraph appendix_digraph(const Bush& b, const ColoredGraph& g,
                                 const VertexOrder& ord, int r) {
  validate_bush(b);
  int nn = b.node_count();
  std::vector<std::pair<int, int>> arcs;
  std::vector<int> outdeg(nn, 0);
  for (int x = 0; x < nn; ++x) {
    for (int y = 0; y < nn; ++y) {
      if (x == y) continue;
      // edge (Y,X) when X is the root or max(X) = last tuple entry lies in Y
      bool hit = b.tuples[x].empty() ||
                 tuple_contains(b.tuples[y], b.tuples[x].back());
      if (hit) {
        arcs.emplace_back(y, x);
        ++outdeg[y];
      }
    }
  }
  AppendixDigraph res;
  res.d = make_digraph(nn, std::move(arcs));
  for (int y = 0; y < nn; ++y) res.max_outdeg = std::max(res.max_outdeg, outdeg[y]);
  long long d2 = wcol_of_order(g, ord, 2 * r);
  res.bound = sat_add(1, sat_mul(sat_mul(d2, d2), sat_pow(2, d2)));
  if (res.max_outdeg > res.bound)
    throw ValidationError("pointer digraph out-degree exceeds its bound");
  ColoredGraph gf = bush_gaifman(b);
  for (auto [u, v] : gf.edges)
    if (!res.d.has_arc(u, v) && !res.d.has_arc(v, u))
      throw ValidationError("bush Gaifman edge missing from pointer digraph");
  return res;
}

ColoredGraph bush_gaifman(const Bush& b) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int id = 1; id < b.node_count(); ++id) edges.emplace_back(b.parent[id], id);
  for (const auto& [key, label] : b.arcs) {
    (void)label;
    if (key.first != key.second) edges.emplace_back(key.first, key.second);
  }
  return make_graph(b.node_count(), edges);
}

VertexOrder bush_extended_order(const Bush& b, const VertexOrder& ord) {
  std::vector<int> ids;
  for (int id = 1; id < b.node_count(); ++id) ids.push_back(id);
  auto ranked = [&](const std::vector<int>& t) {
    std::vector<int> out;
    out.reserve(t.size());
    for (int v : t) out.push_back(ord.rank[v]);
    return out;
  };
  std::stable_sort(ids.begin(), ids.end(), [&](int x, int y) {
    int rx = ord.rank[b.tuples[x].back()], ry = ord.rank[b.tuples[y].back()];
    if (rx != ry) return rx < ry;
    auto tx = ranked(b.tuples[x]), ty = ranked(b.tuples[y]);
    if (tx != ty) return tx < ty;
    return b.is_leaf(x) < b.is_leaf(y);
  });
  std::vector<int> seq{b.root()};
  seq.insert(seq.end(), ids.begin(), ids.end());
  return order_from_sequence(std::move(seq));
}

std::string bush_to_json(const Bush& b) {
  ordered_json j;
  j["depth"] = b.depth;
  j["nodes"] = ordered_json::array();
  for (int id = 0; id < b.node_count(); ++id) {
    ordered_json n;
    n["id"] = id;
    n["tuple"] = b.tuples[id];
    n["depth"] = b.tuples[id].size();
    n["parent"] = b.parent[id];
    j["nodes"].push_back(n);
  }
  j["leaves"] = ordered_json::array();
  for (int id = 0; id < b.node_count(); ++id) {
    if (!b.is_leaf(id)) continue;
    ordered_json l;
    l["id"] = id;
    l["vertex"] = b.leaf_vertex[id];
    l["label"] = b.leaf_label[id];
    j["leaves"].push_back(l);
  }
  j["info_arcs"] = ordered_json::array();
  for (const auto& [key, label] : b.arcs) {
    ordered_json a;
    a["from"] = key.first;
    a["to"] = key.second;
    a["label"] = ordered_json::array();
    for (auto [x, y] : label) a["label"].push_back(ordered_json::array({x, y}));
    j["info_arcs"].push_back(a);
  }
  return j.dump(2) + "\n";
}

Bush bush_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid bush JSON: ") + e.what(), 1);
  }
  Bush b;
  try {
    b.depth = j.at("depth").get<int>();
    int nn = static_cast<int>(j.at("nodes").size());
    b.tuples.assign(nn, {});
    b.parent.assign(nn, -1);
    b.leaf_vertex.assign(nn, -1);
    b.leaf_label.assign(nn, -1);
    for (const auto& n : j.at("nodes")) {
      int id = n.at("id").get<int>();
      if (id < 0 || id >= nn) throw ValidationError("node id out of range");
      b.tuples[id] = n.at("tuple").get<std::vector<int>>();
      b.parent[id] = n.at("parent").get<int>();
    }
    int maxv = -1;
    for (const auto& l : j.at("leaves")) {
      int id = l.at("id").get<int>();
      if (id < 0 || id >= nn) throw ValidationError("leaf id out of range");
      b.leaf_vertex[id] = l.at("vertex").get<int>();
      b.leaf_label[id] = l.at("label").get<int>();
      maxv = std::max(maxv, b.leaf_vertex[id]);
      b.num_labels = std::max(b.num_labels, b.leaf_label[id] + 1);
    }
    b.n_universe = maxv + 1;
    for (const auto& a : j.at("info_arcs")) {
      std::vector<std::pair<int, int>> label;
      for (const auto& pr : a.at("label"))
        label.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
      std::sort(label.begin(), label.end());
      label.erase(std::unique(label.begin(), label.end()), label.end());
      b.arcs[{a.at("from").get<int>(), a.at("to").get<int>()}] = std::move(label);
    }
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("invalid bush JSON: ") + e.what(), 1);
  }
  validate_bush(b);
  return b;
}

std::string bush_to_dot(const Bush& b) {
  std::ostringstream out;
  out << "digraph bush {\n  rankdir=TB;\n";
  for (int id = 0; id < b.node_count(); ++id) {
    out << "  n" << id << " [label=\"(";
    for (size_t i = 0; i < b.tuples[id].size(); ++i)
      out << (i ? "," : "") << b.tuples[id][i];
    out << ")";
    if (b.is_leaf(id))
      out << "\\nv" << b.leaf_vertex[id] << " L" << b.leaf_label[id];
    out << "\"" << (b.is_leaf(id) ? ", shape=box" : "") << "];\n";
  }
  for (int id = 1; id < b.node_count(); ++id)
    out << "  n" << b.parent[id] << " -> n" << id << ";\n";
  for (const auto& [key, label] : b.arcs) {
    if (key.first >= key.second) continue;  // one line per undirected pair
    out << "  n" << key.first << " -> n" << key.second
        << " [dir=none, style=dashed, constraint=false];\n";
    (void)label;
  }
  out << "}\n";
  return out.str();
}

}  // namespace shrubkit
