#include <algorithm>

#include "doctest.h"
#include "shrubkit/kernel.hpp"
#include "support/oracles.hpp"

using namespace shrubkit;

TEST_CASE("type representatives pick the smallest witness per realized type") {
  ColoredGraph p3 = oracles::path_graph(3);
  Formula edge = parse_formula("E(x,y)");
  TypeReps tr = type_representatives(p3, edge, "y", {0});
  CHECK(tr.reps == std::vector<Vertex>{0, 1});
  CHECK(tr.types == 2);

  ColoredGraph star = oracles::star_graph(5);
  TypeReps ts = type_representatives(star, edge, "y", {1});
  CHECK(ts.reps == std::vector<Vertex>{0, 1});
  CHECK(ts.types == 2);

  ColoredGraph edgeless = make_graph(4, {});
  TypeReps te = type_representatives(edgeless, edge, "y", {0, 1});
  CHECK(te.reps == std::vector<Vertex>{0});
  CHECK(te.types == 1);

  // parameter variable absent from the formula: one shared type
  ColoredGraph colored = oracles::path_graph(3);
  colored.colors["red"] = {0};
  TypeReps tc = type_representatives(colored, parse_formula("red(x)"), "y", {0, 1});
  CHECK(tc.types == 1);
  CHECK(tc.reps == std::vector<Vertex>{0});
}

TEST_CASE("a large star collapses to a constant-size kernel") {
  ColoredGraph star = oracles::star_graph(50);
  Formula phi = parse_formula("exists y. E(x,y)");
  Kernel k = kernelize(star, {7}, phi);
  CHECK(static_cast<int>(k.kept.size()) <= 4);
  CHECK(k.ghat.n == static_cast<int>(k.kept.size()));
  CHECK(std::binary_search(k.kept.begin(), k.kept.end(), 7));
  CHECK(k.rank == 1);
  CHECK(verify_kernel(star, k, {7}, phi).ok);
}

TEST_CASE("two-variable queries agree on every pair including the diagonal") {
  ColoredGraph p3 = oracles::path_graph(3);
  Formula phi = parse_formula("exists z. E(x,z) & E(z,y)");
  Kernel k = kernelize(p3, {0, 2}, phi);
  CHECK(verify_kernel(p3, k, {0, 2}, phi).ok);
  // the diagonal itself differs between the endpoints and the middle vertex
  CHECK(evaluate(p3, phi, {{"x", 0}, {"y", 0}}));
}

TEST_CASE("quantifier-free formulas keep the target set verbatim") {
  ColoredGraph p4 = oracles::path_graph(4);
  p4.colors["red"] = {1, 3};
  Formula phi = parse_formula("E(x,y) & red(x)");
  Kernel k = kernelize(p4, {1, 2}, phi);
  CHECK(k.kept == std::vector<Vertex>{1, 2});
  CHECK(k.rank == 0);
  ColoredGraph want = induced_subgraph(p4, {1, 2});
  CHECK(k.ghat.edges == want.edges);
  CHECK(k.ghat.colors == want.colors);
  CHECK(formula_to_string(k.phi_hat) == formula_to_string(phi));
  CHECK(verify_kernel(p4, k, {1, 2}, phi).ok);
}

TEST_CASE("whole-universe targets and empty targets are handled") {
  ColoredGraph p4 = oracles::path_graph(4);
  Formula phi = parse_formula("exists y. E(x,y)");
  Kernel all = kernelize(p4, {0, 1, 2, 3}, phi);
  CHECK(verify_kernel(p4, all, {0, 1, 2, 3}, phi).ok);

  Kernel none = kernelize(p4, {}, phi);
  CHECK(verify_kernel(p4, none, {}, phi).ok);

  CHECK_THROWS_AS(kernelize(p4, {9}, phi), ValidationError);
}

TEST_CASE("kernel size is monotone under growing targets") {
  ColoredGraph star = oracles::star_graph(8);
  Formula phi = parse_formula("exists y. E(x,y)");
  size_t prev = 0;
  for (std::vector<Vertex> a : {std::vector<Vertex>{1}, {1, 2}, {1, 2, 3}}) {
    Kernel k = kernelize(star, a, phi);
    CHECK(verify_kernel(star, k, a, phi).ok);
    CHECK(k.kept.size() >= prev);
    prev = k.kept.size();
  }
}

TEST_CASE("dropping a kept witness is detected by verification") {
  ColoredGraph star = oracles::star_graph(5);
  Formula phi = parse_formula("exists y. E(x,y)");
  std::vector<Vertex> a{1};
  Kernel k = kernelize(star, a, phi);
  REQUIRE(k.kept.size() >= 2);

  Kernel bad = k;
  int drop = -1;
  for (size_t i = 0; i < bad.kept.size(); ++i)
    if (bad.kept[i] != 1) drop = static_cast<int>(i);
  REQUIRE(drop >= 0);
  std::vector<Vertex> remain;
  for (int i = 0; i < static_cast<int>(bad.kept.size()); ++i)
    if (i != drop) remain.push_back(i);
  bad.ghat = induced_subgraph(k.ghat, remain);
  bad.kept.erase(bad.kept.begin() + drop);

  KernelCheck chk = verify_kernel(star, bad, a, phi);
  CHECK_FALSE(chk.ok);
  CHECK(chk.witness == std::vector<Vertex>{1});
}

TEST_CASE("fresh marker colors avoid names already in the graph") {
  ColoredGraph star = oracles::star_graph(5);
  star.colors["P0"] = {0, 2};
  star.colors["Q0"] = {3};
  Formula phi = parse_formula("exists y. E(x,y) & !P0(y)");
  Kernel k = kernelize(star, {1, 2}, phi);
  CHECK(verify_kernel(star, k, {1, 2}, phi).ok);
}

TEST_CASE("random graphs verify across ranks and report sane ledgers") {
  std::mt19937_64 rng(61);
  const char* formulas[] = {
      "E(x,y) | red(x)",
      "exists y. E(x,y) & red(y)",
      "exists y. exists z. E(x,z) & E(z,y) & x != y",
  };
  for (int t = 0; t < 12; ++t) {
    ColoredGraph g = t % 2 ? oracles::random_tree(11, rng) : oracles::gnp(10, 2.2, rng);
    oracles::add_random_colors(g, rng);
    Formula phi = parse_formula(formulas[t % 3]);
    std::vector<Vertex> a;
    for (int i = 0; i < 3 + t % 3; ++i) a.push_back((i * 2) % g.n);
    a = sorted_unique(a);
    Kernel k = kernelize(g, a, phi);
    CHECK(verify_kernel(g, k, a, phi).ok);
    CHECK(std::includes(k.kept.begin(), k.kept.end(), a.begin(), a.end()));
    CHECK(k.c_value >= 0.0);
    CHECK(k.bound >= 0.0);
    CHECK(k.formula_len >= 1);
    if (k.rank >= 1) {
      CHECK(!k.levels.empty());
      for (const auto& lvl : k.levels) {
        CHECK(lvl.types >= 1);
        CHECK(lvl.a_psi_size <= lvl.types);
        CHECK(!lvl.psi.empty());
      }
    }
  }
}
