#pragma once

#include <cmath>
#include <map>
#include <numeric>

#include "bnmap/pareto.hpp"

namespace bnmap {

// Hypercube bucketing scheme for reduced pareto sets. Buckets are
// hash/map-addressed and never enumerated.
struct Lattice {
  enum class Mode { Multiplicative, Additive };

  Rational epsilon;
  Mode mode = Mode::Multiplicative;
  int w_prime = 1;          // max cluster size (w+1)
  int n_prime = 1;          // cluster count
  Rational floor_value = 1; // smallest nonzero representable intermediate

  double log_rho = 0;       // log(1 + eps/(2 w' n')), multiplicative
  long long floor_bucket = 0;
  double step = 1;          // eps/(2 w' n'), additive

  static Lattice make(const Network& net, const AnnotatedDecomposition& ad,
                      const Rational& epsilon, Mode mode);
};

// (min nonzero CPT entry)^n: every nonzero intermediate of a solve is a
// sum of products of at most n CPT entries, hence at least this.
Rational lattice_floor(const Network& net);

// Bucket tuple of a vector; -1 is the dedicated zero bin.
std::vector<long long> bucket_coords(const std::vector<double>& vec,
                                     const Lattice& lat);

// Keeps at most one candidate per hypercube within each group: the one
// with the largest entry-sum, ties by lexicographic processed_map.
void reduce_pareto(ParetoSet<double>& set, const Lattice& lat);

struct GuaranteeRecord {
  Lattice::Mode mode;
  Rational epsilon;
  double value = 0;
  double lower_bound_claimed = 0;
};

}  // namespace bnmap
