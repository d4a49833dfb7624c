#pragma once

#include <string>

#include "bnmap/decomposition.hpp"
#include "bnmap/io.hpp"
#include "bnmap/network.hpp"

namespace bnmap::testutil {

// A->B chain used across the suites: p(a0)=0.3, p(b0|a0)=0.2, p(b0|a1)=0.5.
inline Network chain_ab() {
  return parse_network(
      "bnm 1\n"
      "var A 2\n"
      "var B 2\n"
      "parents B A\n"
      "cpt A\n0.3 0.7\n"
      "cpt B\n0.2 0.8\n0.5 0.5\n");
}

inline Network chain_abc() {
  return parse_network(
      "bnm 1\n"
      "var A 2\nvar B 2\nvar C 2\n"
      "parents B A\nparents C B\n"
      "cpt A\n0.3 0.7\n"
      "cpt B\n0.2 0.8\n0.5 0.5\n"
      "cpt C\n0.6 0.4\n0.1 0.9\n");
}

inline AnnotatedDecomposition decompose(const Network& net,
                                        const Query& query = {}) {
  return decompose_for(net, query, Heuristic::MinFill);
}

}  // namespace bnmap::testutil
