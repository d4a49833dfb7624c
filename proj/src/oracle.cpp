#include "bnmap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bnmap {

namespace {

double log2_states(const Network& net, const std::vector<int>& vars) {
  double total = 0;
  for (int v : vars) total += std::log2(static_cast<double>(net.cardinality(v)));
  return total;
}

// Enumerates all assignments of sweep_vars (ascending states, last var
// fastest) carrying the joint probability along a DFS prefix stack. To
// avoid per-step rational gcds, every CPT is rescaled to integers over a
// per-variable common denominator; the joint times the product of those
// denominators is then an integer, and one exact division at the end
// recovers the rational value. Zero-probability subtrees are skipped.
struct Sweep {
  const Network& net;
  std::vector<int>& states;
  const std::vector<int>& vars;
  std::vector<std::vector<mpz_class>> scaled;  // per var, scaled cpt entries
  mpz_class denom = 1;                         // product of per-var lcms
  std::vector<std::vector<int>> factors_at;    // per depth
  std::vector<mpz_class> prefix;               // per depth, product so far

  Sweep(const Network& net_, std::vector<int>& states_,
        const std::vector<int>& vars_)
      : net(net_), states(states_), vars(vars_) {
    const int n = net.num_vars();
    scaled.resize(n);
    for (int v = 0; v < n; ++v) {
      mpz_class l = 1;
      for (const Rational& e : net.cpts[v])
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.get_den().get_mpz_t());
      scaled[v].reserve(net.cpts[v].size());
      for (const Rational& e : net.cpts[v])
        scaled[v].push_back(e.get_num() * (l / e.get_den()));
      denom *= l;
    }

    std::vector<int> pos(n, -1);
    for (std::size_t i = 0; i < vars.size(); ++i)
      pos[vars[i]] = static_cast<int>(i);
    factors_at.resize(vars.size());
    mpz_class base = 1;
    for (int f = 0; f < n; ++f) {
      int last = pos[f];
      for (int par : net.parents[f]) last = std::max(last, pos[par]);
      if (last < 0)
        base *= factor(f);  // family fully fixed by evidence
      else
        factors_at[last].push_back(f);
    }
    prefix.assign(vars.size() + 1, mpz_class(0));
    prefix[0] = base;
  }

  const mpz_class& factor(int f) const {
    std::size_t row = 0;
    for (int par : net.parents[f])
      row = row * net.cardinality(par) + states[par];
    return scaled[f][row * net.cardinality(f) + states[f]];
  }

  // turns an accumulated integer back into the probability it scales
  Rational value_of(const mpz_class& total) const {
    Rational r(total, denom);
    r.canonicalize();
    return r;
  }

  template <class Fn>
  void run(std::size_t depth, Fn&& fn) {
    if (prefix[depth] == 0) return;
    if (depth == vars.size()) {
      fn(prefix[depth]);
      return;
    }
    const int v = vars[depth];
    for (int s = 0; s < net.cardinality(v); ++s) {
      states[v] = s;
      prefix[depth + 1] = prefix[depth];
      for (int f : factors_at[depth]) {
        prefix[depth + 1] *= factor(f);
        if (prefix[depth + 1] == 0) break;
      }
      run(depth + 1, fn);
    }
  }
};

}  // namespace

Rational brute_force_joint(const Network& net, const Instantiation& inst) {
  const int n = net.num_vars();
  std::vector<int> states(n, -1);
  std::vector<int> free_vars;
  for (int v = 0; v < n; ++v) {
    int s = inst.get(v).value_or(-1);
    if (s >= 0) states[v] = s;
    else free_vars.push_back(v);
  }
  if (log2_states(net, free_vars) > 24.0)
    throw OracleGuardError("joint sum exceeds 2^24 assignments");
  mpz_class total = 0;
  Sweep sweep(net, states, free_vars);
  sweep.run(0, [&](const mpz_class& p) { total += p; });
  return sweep.value_of(total);
}

OracleMapResult brute_force_map(const Network& net, const Query& query) {
  const int n = net.num_vars();
  std::vector<int> states(n, -1);
  std::vector<int> sweep_vars;  // all non-evidence vars, ascending
  for (int v = 0; v < n; ++v) {
    int s = query.evidence.get(v).value_or(-1);
    if (s >= 0) states[v] = s;
    else sweep_vars.push_back(v);
  }
  const std::vector<int>& map_vars = query.map_vars;
  if (log2_states(net, map_vars) > 20.0)
    throw OracleGuardError("MAP space exceeds 2^20 assignments");
  if (log2_states(net, sweep_vars) > 24.0)
    throw OracleGuardError("sweep exceeds 2^24 assignments");

  std::size_t map_size = 1;
  for (int v : map_vars) map_size *= net.cardinality(v);
  std::vector<mpz_class> totals(map_size, mpz_class(0));

  Sweep sweep(net, states, sweep_vars);
  sweep.run(0, [&](const mpz_class& p) {
    std::size_t idx = 0;
    for (int v : map_vars) idx = idx * net.cardinality(v) + states[v];
    totals[idx] += p;
  });

  // ascending index order is lexicographic in (id, state), so the first
  // maximum is the smallest tie
  std::size_t best = 0;
  for (std::size_t i = 1; i < map_size; ++i)
    if (totals[i] > totals[best]) best = i;

  OracleMapResult res;
  res.value = sweep.value_of(totals[best]);
  std::size_t rem = best;
  for (std::size_t k = map_vars.size(); k-- > 0;) {
    int v = map_vars[k];
    res.assignment.set(v, static_cast<int>(rem % net.cardinality(v)));
    rem /= net.cardinality(v);
  }
  return res;
}

}  // namespace bnmap
