#include "shrubkit/qtype.hpp"

namespace shrubkit {

namespace {
inline size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

size_t TypeTable::AtomHash::operator()(const AtomKey& k) const {
  size_t h = std::hash<int>()(k.parent);
  h = mix(h, std::hash<uint64_t>()(k.eq));
  h = mix(h, std::hash<uint64_t>()(k.adj));
  h = mix(h, std::hash<uint64_t>()(k.col));
  return h;
}

size_t TypeTable::TypeHash::operator()(const TypeKey& k) const {
  size_t h = mix(std::hash<int>()(k.rank), std::hash<int>()(k.atom));
  for (int kid : k.kids) h = mix(h, std::hash<int>()(kid));
  return h;
}

int TypeTable::intern_atom(int parent, uint64_t eq, uint64_t adj, uint64_t col) {
  AtomKey key{parent, eq, adj, col};
  auto [it, fresh] = atoms_.emplace(key, static_cast<int>(atoms_.size()) + 1);
  (void)fresh;
  return it->second;
}

// appends b to a tuple of length len whose atomic signature is atom_id; the
// delta records equality against earlier positions, adjacency bits, and
// color membership of b
int TypeTable::atom_extend(const ColoredGraph& g, const std::vector<Vertex>& tuple,
                           size_t len, int atom_id, Vertex b) {
  if (len >= 63) throw ResourceError("tuple too long for type computation");
  uint64_t eq = 0;
  for (size_t j = 0; j < len; ++j)
    if (tuple[j] == b) {
      eq = j + 1;
      break;
    }
  uint64_t adjbits = 0;
  for (size_t j = 0; j < len; ++j)
    if (g.has_edge(tuple[j], b)) adjbits |= 1ULL << j;
  uint64_t colbits = 0;
  size_t ci = 0;
  if (g.colors.size() > 64) throw ResourceError("too many colors for type computation");
  for (const auto& [name, vs] : g.colors) {
    if (contains_sorted(vs, b)) colbits |= 1ULL << ci;
    ++ci;
  }
  return intern_atom(atom_id, eq, adjbits, colbits);
}

int TypeTable::intern_type(int rank, int atom, std::vector<int> kids) {
  TypeKey key{rank, atom, std::move(kids)};
  auto [it, fresh] = types_.emplace(std::move(key), static_cast<int>(types_.size()) + 1);
  (void)fresh;
  return it->second;
}

int TypeTable::rec(const ColoredGraph& g, int q, std::vector<Vertex>& tuple,
                   int atom_id) {
  if (++visits_ > budget_)
    throw ResourceError("type-tree node budget exceeded (" +
                        std::to_string(budget_) + ")");
  if (q == 0) return intern_type(0, atom_id, {});
  std::vector<int> kids;
  kids.reserve(g.n);
  size_t len = tuple.size();
  for (Vertex b = 0; b < g.n; ++b) {
    int a2 = atom_extend(g, tuple, len, atom_id, b);
    tuple.push_back(b);
    kids.push_back(rec(g, q - 1, tuple, a2));
    tuple.pop_back();
  }
  std::sort(kids.begin(), kids.end());
  kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  return intern_type(q, atom_id, std::move(kids));
}

int TypeTable::qtype(const ColoredGraph& g, int q, const std::vector<Vertex>& tuple) {
  for (Vertex v : tuple)
    if (v < 0 || v >= g.n) throw ValidationError("tuple vertex out of range");
  std::vector<Vertex> scratch;
  scratch.reserve(tuple.size() + static_cast<size_t>(std::max(q, 0)));
  int atom = 0;  // empty tuple
  for (Vertex v : tuple) {
    atom = atom_extend(g, scratch, scratch.size(), atom, v);
    scratch.push_back(v);
  }
  return rec(g, q, scratch, atom);
}

}  // namespace shrubkit
