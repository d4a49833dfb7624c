#pragma once

#include <algorithm>

#include "bnmap/engine.hpp"

namespace bnmap {

// p(x') by the separator-message recursion over the annotated
// decomposition. Target (and evidence, folded into the target) variables
// are instantiated from the start, so separators shrink accordingly.
template <class Num>
Num marginal(const Network& net, const AnnotatedDecomposition& ad,
             const Instantiation& target, const Deadline& deadline = {}) {
  const int n = net.num_vars();
  std::vector<int> states(n, -1);
  std::vector<bool> fixed(n, false);
  for (const auto& [var, state] : target.items()) {
    if (var < 0 || var >= n || state < 0 || state >= net.cardinality(var))
      throw std::invalid_argument("target instantiation out of range");
    states[var] = state;
    fixed[var] = true;
  }
  const auto cpts = convert_cpts<Num>(net);
  const Decomposition& d = ad.base;

  auto drop_fixed = [&fixed](const std::vector<int>& vars) {
    std::vector<int> out;
    for (int v : vars)
      if (!fixed[v]) out.push_back(v);
    return out;
  };

  std::vector<std::vector<Num>> messages(d.num_clusters());
  std::vector<std::vector<int>> msg_scope(d.num_clusters());
  for (auto it = d.order.rbegin(); it != d.order.rend(); ++it) {
    const int j = *it;
    check_deadline(deadline);
    std::vector<int> sep = drop_fixed(ad.u_set[j]);
    for (int v : drop_fixed(ad.v_set[j])) sep.push_back(v);
    std::sort(sep.begin(), sep.end());
    const std::vector<int> sum_vars = drop_fixed(ad.x_last[j]);
    const long long sep_z = scope_size(net, sep);
    const long long sum_z = scope_size(net, sum_vars);

    std::vector<Num> msg(sep_z, Num(0));
    for (long long si = 0; si < sep_z; ++si) {
      decode_scope(net, sep, si, states);
      Num acc = Num(0);
      for (long long ki = 0; ki < sum_z; ++ki) {
        decode_scope(net, sum_vars, ki, states);
        Num term = cluster_cpt_product(net, cpts, ad.x_proc[j], states);
        for (int c : ad.children[j])
          term *= messages[c][encode_scope(net, msg_scope[c], states)];
        acc += term;
      }
      msg[si] = acc;
    }
    for (int c : ad.children[j]) {
      messages[c].clear();
      messages[c].shrink_to_fit();
    }
    messages[j] = std::move(msg);
    msg_scope[j] = std::move(sep);
  }
  return messages[d.order.front()][0];
}

// p(x|e) = p(x,e)/p(e); throws ZeroEvidenceError when p(e) = 0.
template <class Num>
Num conditional(const Network& net, const AnnotatedDecomposition& ad,
                const Instantiation& x, const Instantiation& e,
                const Deadline& deadline = {}) {
  if (!x.consistent_with(e))
    throw std::invalid_argument("target and evidence overlap inconsistently");
  for (const auto& [var, state] : x.items())
    if (e.contains(var))
      throw std::invalid_argument("target and evidence must be disjoint");
  Num pe = marginal<Num>(net, ad, e, deadline);
  if (pe == Num(0)) throw ZeroEvidenceError("zero-probability evidence");
  Instantiation xe = x;
  xe.merge(e);
  return marginal<Num>(net, ad, xe, deadline) / pe;
}

// Operation-count upper bound: sum_j (1+|children|) * z(C_j).
inline long long cost_estimate(const AnnotatedDecomposition& ad,
                               const Network& net) {
  long long total = 0;
  for (int j = 0; j < ad.base.num_clusters(); ++j)
    total += (1 + static_cast<long long>(ad.children[j].size())) *
             scope_size(net, ad.base.clusters[j]);
  return total;
}

}  // namespace bnmap
