#include <doctest.h>

#include <random>
#include <set>

#include "bnmap/benchgen.hpp"
#include "bnmap/decomposition.hpp"
#include "helpers.hpp"

using namespace bnmap;

TEST_CASE("moralization keeps edges and marries co-parents") {
  UndirectedGraph chain = moralize(testutil::chain_abc());
  CHECK(chain.has_edge(0, 1));
  CHECK(chain.has_edge(1, 2));
  CHECK(!chain.has_edge(0, 2));

  Network collider = parse_network(
      "bnm 1\nvar A 2\nvar B 2\nvar C 2\n"
      "parents C A B\n"
      "cpt A\n0.5 0.5\ncpt B\n0.5 0.5\n"
      "cpt C\n1 0\n0 1\n0 1\n1 0\n");
  UndirectedGraph g = moralize(collider);
  CHECK(g.has_edge(0, 1));  // married co-parents
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(1, 2));
}

TEST_CASE("chain decomposes into two-variable clusters of width 1") {
  Network net = testutil::chain_abc();
  Decomposition d = build_decomposition(moralize(net), Heuristic::MinFill);
  CHECK(treewidth(d) == 1);
  std::multiset<std::vector<int>> got(d.clusters.begin(), d.clusters.end());
  CHECK(got.count({0, 1}) == 1);
  CHECK(got.count({1, 2}) == 1);
  CHECK(check_decomposition(d, moralize(net)).empty());
}

TEST_CASE("triangle becomes a single cluster of width 2") {
  UndirectedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  Decomposition d = build_decomposition(g, Heuristic::MinFill);
  CHECK(treewidth(d) == 2);
  CHECK(check_decomposition(d, g).empty());
}

TEST_CASE("binarize caps children at two and preserves width") {
  // star: root cluster with three children
  Decomposition star;
  star.clusters = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  star.parent = {-1, 0, 0, 0};
  star.order = {0, 1, 2, 3};
  Decomposition b = binarize(star);
  CHECK(treewidth(b) == treewidth(star));
  CHECK(b.num_clusters() == 5);  // one replica of the root
  for (const auto& kids : b.children()) CHECK(kids.size() <= 2);

  Decomposition chain;
  chain.clusters = {{0, 1}, {1, 2}};
  chain.parent = {-1, 0};
  chain.order = {0, 1};
  Decomposition same = binarize(chain);
  CHECK(same.clusters == chain.clusters);
}

TEST_CASE("binarize properties hold on random decompositions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    SuiteSpec spec;
    spec.family = trial % 2 == 0 ? Family::Rand : Family::Poly;
    spec.base_size = 5 + static_cast<int>(rng() % 20);
    spec.max_card = 2;
    spec.seed = rng();
    auto [net, query] = gen_random_instance(spec, 0);
    UndirectedGraph g = moralize(net);
    Decomposition d = build_decomposition(g, Heuristic::MinFill);
    Decomposition b = binarize(d);
    CHECK(treewidth(b) == treewidth(d));
    CHECK(b.num_clusters() < 2 * net.num_vars());
    CHECK(check_decomposition(b, g).empty());
    for (const auto& kids : b.children()) CHECK(kids.size() <= 2);
  }
}

TEST_CASE("min-degree heuristic also yields valid decompositions") {
  Network net = testutil::chain_abc();
  UndirectedGraph g = moralize(net);
  Decomposition d = build_decomposition(g, Heuristic::MinDegree);
  CHECK(check_decomposition(d, g).empty());
  CHECK(treewidth(d) == 1);
}

TEST_CASE("annotation of the rooted two-node chain") {
  Network net = testutil::chain_ab();
  AnnotatedDecomposition ad = testutil::decompose(net);
  std::vector<int> seen(net.num_vars(), 0);
  for (const auto& xl : ad.x_last)
    for (int v : xl) seen[v] += 1;
  for (int v = 0; v < net.num_vars(); ++v) CHECK(seen[v] == 1);
  int proc_total = 0;
  for (const auto& xp : ad.x_proc) proc_total += static_cast<int>(xp.size());
  CHECK(proc_total == net.num_vars());
}

TEST_CASE("annotation of the three-node chain leaf") {
  Network net = testutil::chain_abc();
  AnnotatedDecomposition ad = testutil::decompose(net);
  for (int j = 0; j < ad.base.num_clusters(); ++j) {
    if (j == ad.base.order.front()) continue;
    // u and v live inside the separator with the parent
    const auto& par = ad.base.clusters[ad.base.parent[j]];
    for (int v : ad.u_set[j])
      CHECK(std::binary_search(par.begin(), par.end(), v));
    for (int v : ad.v_set[j])
      CHECK(std::binary_search(par.begin(), par.end(), v));
  }
}

TEST_CASE("x_last partitions the variables on random networks") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    SuiteSpec spec;
    spec.family = Family::Rand;
    spec.base_size = 4 + static_cast<int>(rng() % 10);
    spec.max_card = 3;
    spec.seed = rng();
    auto [net, query] = gen_random_instance(spec, 0);
    AnnotatedDecomposition ad = decompose_for(net, query, Heuristic::MinFill);
    std::vector<int> seen(net.num_vars(), 0);
    for (const auto& xl : ad.x_last)
      for (int v : xl) seen[v] += 1;
    for (int v = 0; v < net.num_vars(); ++v) CHECK(seen[v] == 1);
    int proc = 0;
    for (const auto& xp : ad.x_proc) proc += static_cast<int>(xp.size());
    CHECK(proc == net.num_vars());
    for (int j = 0; j < ad.base.num_clusters(); ++j) {
      int p = ad.base.parent[j];
      if (p < 0) continue;
      const auto& par = ad.base.clusters[p];
      for (int v : ad.u_set[j])
        CHECK(std::binary_search(par.begin(), par.end(), v));
      for (int v : ad.v_set[j])
        CHECK(std::binary_search(par.begin(), par.end(), v));
    }
  }
}

TEST_CASE("polytrees decompose to small width, trees to width 1") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    SuiteSpec spec;
    spec.family = Family::Poly;
    spec.base_size = 6 + static_cast<int>(rng() % 10);
    spec.max_card = 2;
    spec.seed = rng();
    auto [net, query] = gen_random_instance(spec, 0);
    int max_parents = 0;
    for (const auto& p : net.parents)
      max_parents = std::max(max_parents, static_cast<int>(p.size()));
    Decomposition d = build_decomposition(moralize(net), Heuristic::MinFill);
    CHECK(treewidth(d) <= std::max(1, max_parents));
  }
}
