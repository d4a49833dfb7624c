#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnmap/network.hpp"

namespace bnmap {

enum class Family { Poly, Rand, RandTw4, RandTw8, AlarmLike, InsuranceLike };

Family parse_family(const std::string& name);
std::string family_name(Family f);

struct SuiteSpec {
  Family family = Family::Poly;
  int base_size = 10;   // node count before MAP augmentation
  int max_card = 2;     // 2..5
  std::uint64_t seed = 0;
  int query_count = 1;  // instances generated from this spec

  std::string label() const;  // e.g. "poly.10.c2"
};

// Deterministic instance: a base network of base_size nodes plus
// base_size fresh uniform-prior MAP roots, each attached to a random
// base root or leaf. instance_index selects one of query_count draws.
std::pair<Network, Query> gen_random_instance(const SuiteSpec& spec,
                                              int instance_index);

// log2 of the MAP search space (product of MAP cardinalities)
double search_space_log2(const Network& net, const Query& query);
// bucket label for a log2 size: "0-10", "10-20", "20-40", ">40";
// a value equal to an edge falls in the higher bucket
std::string ss_bucket(double log2_size);

struct SolverChoice {
  enum class Kind { Exact, Approx, Oracle } kind = Kind::Exact;
  double epsilon = 0.01;
  bool additive = true;

  std::string name() const;
};

struct RunRecord {
  std::string suite;
  int instance = 0;
  double ss_log2 = 0;
  std::string solver;
  std::string status;  // ok | timeout | skipped | error
  double ms = 0;
  double value = 0;
  double avg_pareto = 0;  // pareto solvers only
  double avg_dim = 0;

  std::string csv_row() const;
};

// Runs every (instance, solver) pair, optionally across worker threads.
// Records come back sorted by (suite, instance, solver). The oracle is
// skipped (status "skipped") when its guards would trip.
std::vector<RunRecord> run_suite(const std::vector<SuiteSpec>& specs,
                                 const std::vector<SolverChoice>& solvers,
                                 double timeout_seconds, int threads = 1);

std::string emit_csv(const std::vector<RunRecord>& records);
// Aggregates per (suite, bucket, solver): query count, mean time over ok
// runs, ok count, mean pareto / dim.
std::string emit_markdown(const std::vector<RunRecord>& records);

}  // namespace bnmap
