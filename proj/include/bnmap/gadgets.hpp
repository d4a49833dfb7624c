#pragma once

#include <string>
#include <vector>

#include "bnmap/dyadic.hpp"
#include "bnmap/network.hpp"

namespace bnmap {

struct PartitionInstance {
  std::vector<long long> s;  // positive integers

  int m() const { return static_cast<int>(s.size()); }
  // exact encoding bit-length: sum of ceil(log2(s_i + 1))
  int b() const;
  long long total() const;
  // half-sum; throws if the total is odd where an integer S is required
  Rational half_sum() const;
};

// 2CNF clause: two literals over distinct variables. Variables are
// 0-based; polarity true = positive literal.
struct Literal {
  int var = 0;
  bool positive = true;
};

struct Max2SatInstance {
  int m = 0;  // variable count
  std::vector<std::pair<Literal, Literal>> clauses;

  int m_prime() const { return static_cast<int>(clauses.size()); }
  void validate() const;  // distinct variables per clause, indices in range
};

struct GadgetArtifact {
  Network network;
  Query query;                // threshold embedded when the kind has one
  std::string certificate;    // machine-readable one-liner
};

// Binary polytree reduction from the even-partition decision problem.
// MAP over the X block, evidence all E_i true and Y_m false;
// MAP value > threshold iff an even partition exists.
GadgetArtifact partition_to_polytree(const PartitionInstance& inst);

// Naive Bayes reduction from MAX-2-SAT. MAP over Y_0..Y_m, no evidence;
// optimal value is k / (2^m * m') where k = max satisfiable clauses.
GadgetArtifact max2sat_to_naivebayes(const Max2SatInstance& inst);

// q independent copies of a Naive Bayes artifact under a common binary
// parent D with p(d true) = 1; optimal value is the base value to the
// power q.
GadgetArtifact amplify(const Max2SatInstance& inst, int q);

// Hidden-Markov-style tree reduction from even partition, cardinalities
// (5, 2, 3) for (X_i, Y_i, D_i). MAP over Y, evidence D_m at its third
// state; value > threshold iff an even partition exists.
// Requires integer S >= 2.
GadgetArtifact partition_to_hmm(const PartitionInstance& inst);

// Reference answers for certificates.
bool even_partition_exists(const PartitionInstance& inst);
int max_sat_count(const Max2SatInstance& inst);  // brute force, m <= 24
Rational naivebayes_optimum(const Max2SatInstance& inst);  // k/(2^m m')

}  // namespace bnmap
