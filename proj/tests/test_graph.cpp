#include <sstream>

#include "doctest.h"
#include "shrubkit/graph.hpp"
#include "support/oracles.hpp"

using namespace shrubkit;

TEST_CASE("graph text round trip") {
  std::string text = "graph 4\nedge 0 1\nedge 1 2\ncolor red 0 3\n";
  ColoredGraph g = load_graph(text);
  CHECK(g.n == 4);
  CHECK(g.edges == std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}});
  CHECK(g.colors.at("red") == std::vector<Vertex>{0, 3});
  CHECK(serialize_graph(g) == text);
}

TEST_CASE("graph parser accepts comments and reports bad lines") {
  ColoredGraph g = load_graph("# intro\ngraph 2 # two\nedge 0 1\n");
  CHECK(g.n == 2);
  CHECK_THROWS_AS(load_graph("graph 2\nedge 1 0\n"), ParseError);
  CHECK_THROWS_AS(load_graph("edge 0 1\n"), ParseError);
  CHECK_THROWS_AS(load_graph("graph 2\nedge 0 5\n"), ParseError);
  CHECK_THROWS_AS(load_graph("graph 2\nedge 0 1\nedge 0 1\n"), ParseError);
  try {
    load_graph("graph 2\nweird\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("induced subgraph remaps ids and colors") {
  ColoredGraph g = load_graph("graph 5\nedge 0 1\nedge 1 2\nedge 3 4\ncolor red 1 3\n");
  ColoredGraph h = induced_subgraph(g, {1, 2, 3});
  CHECK(h.n == 3);
  CHECK(h.edges == std::vector<std::pair<Vertex, Vertex>>{{0, 1}});
  CHECK(h.colors.at("red") == std::vector<Vertex>{0, 2});
}

TEST_CASE("balls and distance separation") {
  ColoredGraph p5 = oracles::path_graph(5);
  CHECK(ball(p5, 1, 2) == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(ball(p5, 0, 0) == std::vector<Vertex>{0});
  CHECK(ball(p5, 0, 9) == std::vector<Vertex>{0, 1, 2, 3, 4});

  // endpoints inside the separator count as separated, even from themselves
  CHECK(is_r_separated(p5, 0, 2, 2, {1}));
  CHECK(is_r_separated(p5, 0, 2, 2, {0}));
  CHECK_FALSE(is_r_separated(p5, 0, 2, 2, {}));
  CHECK(is_r_separated(p5, 0, 4, 2, {}));
  CHECK_FALSE(is_r_separated(p5, 3, 3, 1, {}));
  CHECK(is_r_separated(p5, 3, 3, 1, {3}));
}

TEST_CASE("degeneracy of standard graphs") {
  CHECK(degeneracy(oracles::path_graph(6)) == 1);
  CHECK(degeneracy(oracles::cycle_graph(6)) == 2);
  CHECK(degeneracy(oracles::star_graph(5)) == 1);
  CHECK(degeneracy(make_graph(1, {})) == 0);
}

TEST_CASE("treedepth solver on standard graphs") {
  CHECK(treedepth(make_graph(0, {}), 25).depth == 0);
  CHECK(treedepth(make_graph(1, {}), 25).depth == 1);
  CHECK(treedepth(oracles::path_graph(2), 25).depth == 2);
  CHECK(treedepth(oracles::path_graph(3), 25).depth == 2);
  CHECK(treedepth(oracles::path_graph(4), 25).depth == 3);
  CHECK(treedepth(oracles::path_graph(8), 25).depth == 4);
  CHECK(treedepth(oracles::cycle_graph(4), 25).depth == 3);
  CHECK(treedepth(oracles::star_graph(7), 25).depth == 2);
  ColoredGraph k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(treedepth(k4, 25).depth == 4);
}

TEST_CASE("treedepth forests validate against their graphs") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    ColoredGraph g = oracles::gnp(9, 2.5, rng);
    TreedepthForest f = treedepth(g, 25);
    CHECK(validate_treedepth_forest(g, f, f.depth));
    TreedepthForest h = heuristic_treedepth_forest(g);
    CHECK(validate_treedepth_forest(g, h, h.depth));
    CHECK(h.depth >= f.depth);
  }
}

TEST_CASE("treedepth solver matches the recursive oracle") {
  for (int n = 1; n <= 5; ++n)
    for (const ColoredGraph& g : oracles::all_graphs_up_to_iso(n))
      CHECK(treedepth(g, 25).depth == oracles::treedepth_recursive(g));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    ColoredGraph g = oracles::gnp(6 + static_cast<int>(t % 3), 2.8, rng);
    CHECK(treedepth(g, 25).depth == oracles::treedepth_recursive(g));
  }
}

TEST_CASE("treedepth cap rejects oversized components") {
  CHECK_THROWS_AS(treedepth(oracles::path_graph(30), 25), CapError);
  // disconnected pieces under the cap are fine even when n exceeds it
  ColoredGraph g = make_graph(30, {{0, 1}, {28, 29}});
  CHECK(treedepth(g, 25).depth == 2);
}

TEST_CASE("star coloring is valid and small on sparse graphs") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    ColoredGraph g = oracles::random_tree(12, rng);
    auto c = star_coloring(g);
    CHECK(is_star_coloring(g, c));
  }
  ColoredGraph p3 = oracles::path_graph(3);
  CHECK(is_star_coloring(p3, star_coloring(p3)));
  // a 2-colored path on four vertices is bipartite but not star-free
  ColoredGraph p4 = oracles::path_graph(4);
  CHECK_FALSE(is_star_coloring(p4, {0, 1, 0, 1}));
  CHECK_FALSE(is_star_coloring(p3, {0, 0, 1}));
}

TEST_CASE("directed graph arc lookup") {
  DirectedGraph d = make_digraph(3, {{0, 1}, {2, 0}, {0, 1}});
  CHECK(d.arcs == std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 0}});
  CHECK(d.has_arc(0, 1));
  CHECK_FALSE(d.has_arc(1, 0));
}
