#pragma once

#include <stdexcept>

#include "bnmap/network.hpp"
#include "bnmap/rational.hpp"

namespace bnmap {

// Raised when an exhaustive computation would exceed its state-space guard.
struct OracleGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact p(inst) by summing the joint over all free variables.
// Guard: at most 2^24 free assignments.
Rational brute_force_joint(const Network& net, const Instantiation& inst);

struct OracleMapResult {
  Instantiation assignment;  // MAP variables only
  Rational value;            // p(assignment, evidence)
};

// Exact MAP by a single sweep over every non-evidence assignment,
// accumulating one total per MAP-variable assignment. Ties resolve to the
// lexicographically smallest assignment (by variable id, then state).
// Guards: at most 2^20 MAP assignments and 2^24 swept assignments.
OracleMapResult brute_force_map(const Network& net, const Query& query);

}  // namespace bnmap
