#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "shrubkit/graph.hpp"

namespace shrubkit {

// interns rank-q type trees of vertex tuples; two tuples receive the same id
// iff they satisfy the same formulas of quantifier rank <= q over {E, colors,
// =}; ids are only comparable within one table instance
class TypeTable {
 public:
  explicit TypeTable(long long budget = 10'000'000) : budget_(budget) {}

  int qtype(const ColoredGraph& g, int q, const std::vector<Vertex>& tuple);

  long long nodes_visited() const { return visits_; }

 private:
  struct AtomKey {
    int parent;
    uint64_t eq, adj, col;
    bool operator==(const AtomKey&) const = default;
  };
  struct AtomHash {
    size_t operator()(const AtomKey& k) const;
  };
  struct TypeKey {
    int rank;
    int atom;
    std::vector<int> kids;
    bool operator==(const TypeKey&) const = default;
  };
  struct TypeHash {
    size_t operator()(const TypeKey& k) const;
  };

  int intern_atom(int parent, uint64_t eq, uint64_t adj, uint64_t col);
  int atom_extend(const ColoredGraph& g, const std::vector<Vertex>& tuple,
                  size_t len, int atom_id, Vertex b);
  int intern_type(int rank, int atom, std::vector<int> kids);
  int rec(const ColoredGraph& g, int q, std::vector<Vertex>& tuple, int atom_id);

  std::unordered_map<AtomKey, int, AtomHash> atoms_;
  std::unordered_map<TypeKey, int, TypeHash> types_;
  long long budget_;
  long long visits_ = 0;
};

}  // namespace shrubkit
