#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bnmap/decomposition.hpp"
#include "bnmap/network.hpp"

namespace bnmap {

struct ZeroEvidenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeoutError : std::runtime_error {
  TimeoutError() : std::runtime_error("solver deadline exceeded") {}
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

inline void check_deadline(const Deadline& deadline) {
  if (deadline && std::chrono::steady_clock::now() > *deadline)
    throw TimeoutError();
}

// CPTs converted once into the engine's working type.
template <class Num>
std::vector<std::vector<Num>> convert_cpts(const Network& net) {
  std::vector<std::vector<Num>> out(net.cpts.size());
  for (std::size_t i = 0; i < net.cpts.size(); ++i) {
    out[i].reserve(net.cpts[i].size());
    for (const Rational& q : net.cpts[i]) out[i].push_back(from_rational<Num>(q));
  }
  return out;
}

// Row-major indexing over a sorted scope: variables by ascending id,
// states ascending.
inline long long scope_size(const Network& net, const std::vector<int>& scope) {
  long long z = 1;
  for (int v : scope) z *= net.cardinality(v);
  return z;
}

inline void decode_scope(const Network& net, const std::vector<int>& scope,
                         long long index, std::vector<int>& states) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    const int card = net.cardinality(*it);
    states[*it] = static_cast<int>(index % card);
    index /= card;
  }
}

inline long long encode_scope(const Network& net, const std::vector<int>& scope,
                              const std::vector<int>& states) {
  long long index = 0;
  for (int v : scope) index = index * net.cardinality(v) + states[v];
  return index;
}

// Product of the CPTs placed at cluster j, evaluated on a dense state
// vector covering the cluster and the instantiated variables.
template <class Num>
Num cluster_cpt_product(const Network& net,
                        const std::vector<std::vector<Num>>& cpts,
                        const std::vector<int>& x_proc,
                        const std::vector<int>& states) {
  Num prod = Num(1);
  for (int v : x_proc) {
    const long long row = net.row_index(v, states);
    prod *= cpts[v][row * net.cardinality(v) + states[v]];
  }
  return prod;
}

}  // namespace bnmap
