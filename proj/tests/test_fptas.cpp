#include <doctest.h>

#include <random>
#include <set>

#include "bnmap/benchgen.hpp"
#include "bnmap/lattice.hpp"
#include "bnmap/map_solver.hpp"
#include "bnmap/oracle.hpp"
#include "helpers.hpp"

using namespace bnmap;

TEST_CASE("lattice floor examples") {
  // min nonzero entry 1/2, three variables
  Network net = parse_network(
      "bnm 1\nvar A 2\nvar B 2\nvar C 2\n"
      "cpt A\n0.5 0.5\ncpt B\n0.5 0.5\ncpt C\n0.5 0.5\n");
  CHECK(lattice_floor(net) == Rational(1, 8));

  // deterministic network: min nonzero entry is 1
  Network det = parse_network(
      "bnm 1\nvar A 2\nvar B 2\nparents B A\n"
      "cpt A\n1 0\ncpt B\n0 1\n1 0\n");
  CHECK(lattice_floor(det) == Rational(1));

  Network chain = testutil::chain_ab();  // min entry 0.2, two vars
  CHECK(lattice_floor(chain) == Rational(1, 25));
}

TEST_CASE("bucketing separates scales and isolates zero") {
  Network net = testutil::chain_ab();
  Query q;
  q.map_vars = {0};
  AnnotatedDecomposition ad = decompose_for(net, q);

  for (auto mode : {Lattice::Mode::Multiplicative, Lattice::Mode::Additive}) {
    Lattice lat = Lattice::make(net, ad, Rational(1, 10), mode);
    CHECK(bucket_coords({0.0}, lat) == std::vector<long long>{-1});
    CHECK(bucket_coords({0.5}, lat) == bucket_coords({0.5}, lat));
    // zero never shares a bin with a positive value
    CHECK(bucket_coords({0.0}, lat)[0] != bucket_coords({1e-9}, lat)[0]);
    // monotone in each coordinate
    auto lo = bucket_coords({0.25, 0.5}, lat);
    auto hi = bucket_coords({0.5, 0.75}, lat);
    CHECK(lo[0] <= hi[0]);
    CHECK(lo[1] <= hi[1]);
    // well-separated values land in different buckets
    CHECK(bucket_coords({0.01}, lat)[0] != bucket_coords({0.9}, lat)[0]);
  }
}

TEST_CASE("reduction keeps one candidate per bucket and never empties") {
  Network net = testutil::chain_ab();
  Query q;
  q.map_vars = {0};
  AnnotatedDecomposition ad = decompose_for(net, q);
  Lattice lat = Lattice::make(net, ad, Rational(1, 2),
                              Lattice::Mode::Multiplicative);

  std::mt19937_64 rng(3);
  ParetoSet<double> set;
  for (int i = 0; i < 300; ++i) {
    Candidate<double> c;
    c.processed_map.set(0, static_cast<int>(rng() % 4));
    c.group_key.set(1, static_cast<int>(rng() % 2));
    for (int k = 0; k < 2; ++k)
      c.vec.push_back((rng() % 10) / 10.0);
    set.insert(std::move(c), false);
  }
  std::size_t before_groups = set.groups().size();
  reduce_pareto(set, lat);
  CHECK(set.groups().size() == before_groups);
  for (const auto& [key, group] : set.groups()) {
    CHECK(!group.empty());
    std::set<std::vector<long long>> seen;
    for (const auto& c : group)
      CHECK(seen.insert(bucket_coords(c.vec, lat)).second);
  }
}

TEST_CASE("approximation guarantees hold against the exact optimum") {
  std::mt19937_64 rng(41);
  int done = 0;
  for (int trial = 0; done < 40; ++trial) {
    SuiteSpec spec;
    spec.family = trial % 2 == 0 ? Family::Rand : Family::Poly;
    spec.base_size = 3 + static_cast<int>(rng() % 6);
    spec.max_card = 2 + static_cast<int>(rng() % 2);
    spec.seed = rng();
    auto [net, query] = gen_random_instance(spec, 0);
    AnnotatedDecomposition ad = decompose_for(net, query);
    double opt;
    try {
      opt = from_rational<double>(brute_force_map(net, query).value);
    } catch (const OracleGuardError&) {
      continue;
    }
    ++done;

    for (double eps : {0.01, 0.1, 0.5}) {
      for (auto mode :
           {Lattice::Mode::Multiplicative, Lattice::Mode::Additive}) {
        ApproxSolution ap = solve_map_approx(net, ad, query, eps, mode);
        // reported value is achievable, so never above the optimum
        CHECK(ap.solution.value <= opt * (1 + 1e-9) + 1e-12);
        // claimed lower bound really is a lower bound on the optimum
        CHECK(ap.guarantee.lower_bound_claimed <= opt * (1 + 1e-9) + 1e-12);
        // and the solution meets the advertised quality
        if (mode == Lattice::Mode::Multiplicative)
          CHECK(ap.solution.value * (1 + eps) >= opt * (1 - 1e-9));
        else
          CHECK(ap.solution.value + eps >= opt * (1 - 1e-9));
        // the value is the exact probability of the returned assignment
        Instantiation full = ap.solution.assignment;
        full.merge(query.evidence);
        CHECK(ap.solution.value ==
              doctest::Approx(from_rational<double>(
                                  brute_force_joint(net, full)))
                  .epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("loose lattices shrink pareto sets") {
  SuiteSpec spec;
  spec.family = Family::RandTw4;
  spec.base_size = 10;
  spec.max_card = 2;
  spec.seed = 77;
  auto [net, query] = gen_random_instance(spec, 0);
  AnnotatedDecomposition ad = decompose_for(net, query);
  auto exact = solve_map<double>(net, ad, query);
  ApproxSolution loose = solve_map_approx(net, ad, query, 0.5,
                                          Lattice::Mode::Multiplicative);
  CHECK(loose.solution.stats.avg_pareto() <=
        exact.stats.avg_pareto() + 1e-12);
}
