#include "doctest.h"
#include "shrubkit/wcol.hpp"
#include "support/oracles.hpp"

using namespace shrubkit;

TEST_CASE("order parsing and serialization") {
  VertexOrder ord = parse_order("order 2 0 1\n", 3);
  CHECK(ord.seq == std::vector<Vertex>{2, 0, 1});
  CHECK(ord.rank == std::vector<int>{1, 2, 0});
  CHECK(serialize_order(ord) == "order 2 0 1\n");
  CHECK_THROWS_AS(parse_order("order 0 0 1\n", 3), ParseError);
  CHECK_THROWS_AS(parse_order("order 0 1\n", 3), ParseError);
  CHECK_THROWS_AS(order_from_sequence({0, 0}), ValidationError);
}

TEST_CASE("weak reachability on a path") {
  ColoredGraph p3 = oracles::path_graph(3);
  VertexOrder ord = identity_order(3);
  CHECK(wreach(p3, ord, 1, 0) == std::vector<Vertex>{0});
  CHECK(wreach(p3, ord, 1, 1) == std::vector<Vertex>{0, 1});
  CHECK(wreach(p3, ord, 1, 2) == std::vector<Vertex>{1, 2});
  CHECK(wcol_of_order(p3, ord, 1) == 2);
  CHECK(wcol_of_order(p3, ord, 2) == 3);
  CHECK(wcol_of_order(make_graph(1, {}), identity_order(1), 5) == 1);
}

TEST_CASE("weak reachability matches path enumeration") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    ColoredGraph g = t % 2 ? oracles::gnp(10, 3.0, rng) : oracles::random_tree(11, rng);
    for (const char* s : {"degeneracy", "bfs", "sorted-degree"}) {
      VertexOrder ord = heuristic_order(g, s);
      for (int r = 1; r <= 3; ++r) {
        auto ws = wreach_sets(g, ord, r);
        for (Vertex v = 0; v < g.n; ++v)
          CHECK(ws[v] == oracles::wreach_paths(g, ord, r, v));
      }
    }
  }
}

TEST_CASE("heuristic orders are permutations") {
  std::mt19937_64 rng(5);
  ColoredGraph g = oracles::gnp(9, 2.5, rng);
  for (const char* s : {"degeneracy", "bfs", "sorted-degree"}) {
    VertexOrder ord = heuristic_order(g, s);
    std::vector<Vertex> sorted = ord.seq;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < g.n; ++i) {
      CHECK(sorted[i] == i);
      CHECK(ord.rank[ord.seq[i]] == i);
    }
  }
  CHECK_THROWS_AS(heuristic_order(g, "nope"), ValidationError);
}

TEST_CASE("degeneracy order keeps tree weak coloring small") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    ColoredGraph g = oracles::random_tree(14, rng);
    CHECK(wcol_of_order(g, heuristic_order(g, "degeneracy"), 1) <= 2);
  }
}

TEST_CASE("exact search minimizes over all orders") {
  ColoredGraph p3 = oracles::path_graph(3);
  ExactWcol e = exact_wcol(p3, 1, 10);
  CHECK(e.value == 2);
  CHECK(wcol_of_order(p3, e.order, 1) == 2);

  std::mt19937_64 rng(13);
  for (int t = 0; t < 6; ++t) {
    ColoredGraph g = oracles::gnp(6, 2.5, rng);
    for (int r = 1; r <= 2; ++r)
      CHECK(exact_wcol(g, r, 10).value == oracles::exact_wcol_paths(g, r));
  }
  CHECK_THROWS_AS(exact_wcol(oracles::path_graph(11), 1, 10), CapError);
}

TEST_CASE("universal inequality report on small graphs") {
  ColoredGraph c4 = oracles::cycle_graph(4);
  VertexOrder ord = heuristic_order(c4, "degeneracy");
  UniversalReport rep = check_universal_inequality(c4, ord, 1, 10);
  CHECK(rep.lhs == wcol_of_order(c4, ord, 1));
  CHECK(rep.wcol_2r_exact == exact_wcol(c4, 2, 10).value);
  CHECK(rep.holds);
  CHECK_THROWS_AS(check_universal_inequality(oracles::path_graph(11), identity_order(11), 1, 10),
                  CapError);
}
