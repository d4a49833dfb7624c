#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bnmap/decomposition.hpp"
#include "bnmap/engine.hpp"
#include "bnmap/lattice.hpp"
#include "bnmap/network.hpp"
#include "bnmap/pareto.hpp"

namespace bnmap {

struct SolveStats {
  // one entry per cluster, recorded after pruning/reduction
  std::vector<std::size_t> pareto_sizes;
  std::vector<std::size_t> dims;

  double avg_pareto() const {
    if (pareto_sizes.empty()) return 0.0;
    double s = std::accumulate(pareto_sizes.begin(), pareto_sizes.end(), 0.0);
    return s / static_cast<double>(pareto_sizes.size());
  }
  double avg_dim() const {
    if (dims.empty()) return 0.0;
    double s = std::accumulate(dims.begin(), dims.end(), 0.0);
    return s / static_cast<double>(dims.size());
  }
};

template <class Num>
struct MapSolution {
  Instantiation assignment;  // the MAP variables only
  Num value;                 // p(assignment, evidence), exact for this assignment
  SolveStats stats;
};

struct SolveOptions {
  bool prune = true;
  const Lattice* lattice = nullptr;  // non-null enables lattice reduction
  Deadline deadline;
};

// Exact (or lattice-approximate when opts.lattice is set) MAP inference by
// message passing over the annotated decomposition. Messages are sets of
// candidates: (partial MAP assignment, vector of values indexed by the
// separator states of the still-free non-MAP non-evidence vars).
template <class Num>
MapSolution<Num> solve_map(const Network& net, const AnnotatedDecomposition& ad,
                           const Query& query, const SolveOptions& opts = {}) {
  const int n = net.num_vars();
  const auto cpts = convert_cpts<Num>(net);

  // fixed[v]: state forced for v from the start (evidence); MAP vars are
  // enumerated, not fixed.
  std::vector<int> fixed(n, -1);
  std::vector<char> is_map(n, 0);
  for (const auto& [v, s] : query.evidence.items()) fixed[v] = s;
  for (int v : query.map_vars) is_map[v] = 1;

  const auto& order = ad.base.order;  // root first
  const int nc = static_cast<int>(order.size());
  auto kids_of = ad.base.children();

  // message[j]: candidate set emitted by cluster j toward its parent
  std::vector<std::vector<Candidate<Num>>> message(ad.base.clusters.size());

  SolveStats stats;
  stats.pareto_sizes.reserve(nc);
  stats.dims.reserve(nc);

  for (int oi = nc - 1; oi >= 0; --oi) {
    check_deadline(opts.deadline);
    const int j = order[oi];
    const auto& cluster = ad.base.clusters[j];
    const auto& xl = ad.x_last[j];

    // separator vars (scope of the outgoing message), split by role
    std::vector<int> sep;  // cluster minus x_last
    for (int v : cluster)
      if (!std::binary_search(xl.begin(), xl.end(), v)) sep.push_back(v);
    std::vector<int> sep_num;  // free numeric coordinates of the message
    std::vector<int> sep_map;  // MAP vars in the separator (group key scope)
    for (int v : sep) {
      if (is_map[v]) sep_map.push_back(v);
      else if (fixed[v] < 0) sep_num.push_back(v);
    }

    // local vars to enumerate inside this cluster: everything in the
    // cluster not fixed by evidence. MAP vars among them are enumerated
    // and recorded; eliminated non-MAP vars are summed out.
    std::vector<int> elim_num;  // x_last, non-MAP, non-evidence: summed
    std::vector<int> elim_map;  // x_last MAP vars: maximized (kept in sets)
    for (int v : xl) {
      if (is_map[v]) elim_map.push_back(v);
      else if (fixed[v] < 0) elim_num.push_back(v);
    }

    std::vector<int> states(n, -1);
    for (int v = 0; v < n; ++v)
      if (fixed[v] >= 0) states[v] = fixed[v];

    const auto& kids = kids_of[j];
    // free numeric scope of each child's message, fixed per cluster
    std::vector<std::vector<int>> child_num(kids.size());
    for (std::size_t ci = 0; ci < kids.size(); ++ci) {
      const int child = kids[ci];
      const auto& cu = ad.u_set[child];
      const auto& cv = ad.v_set[child];
      std::vector<int> csep;
      csep.reserve(cu.size() + cv.size());
      std::merge(cu.begin(), cu.end(), cv.begin(), cv.end(),
                 std::back_inserter(csep));
      for (int v : csep)
        if (!is_map[v] && fixed[v] < 0) child_num[ci].push_back(v);
    }
    // child candidate pairs, filtered for MAP consistency
    struct ChildPick {
      Instantiation pmap;
      std::vector<const Candidate<Num>*> parts;
    };
    std::vector<ChildPick> picks;
    if (kids.empty()) {
      picks.push_back({Instantiation{}, {}});
    } else if (kids.size() == 1) {
      for (const auto& c : message[kids[0]])
        picks.push_back({c.processed_map, {&c}});
    } else if (kids.size() == 2) {
      for (const auto& a : message[kids[0]]) {
        for (const auto& b : message[kids[1]]) {
          if (!a.processed_map.consistent_with(b.processed_map)) continue;
          Instantiation m = a.processed_map;
          m.merge(b.processed_map);
          picks.push_back({std::move(m), {&a, &b}});
        }
      }
    } else {
      throw std::logic_error("solve_map requires a binary decomposition");
    }

    const long long out_size = scope_size(net, sep_num);
    ParetoSet<Num> pset;

    // enumeration over the free MAP states in this cluster: MAP vars in
    // the separator whose value is not yet pinned by a child, plus the
    // MAP vars eliminated here.
    for (auto& pick : picks) {
      std::vector<int> free_map;
      for (int v : sep_map)
        if (!pick.pmap.contains(v)) free_map.push_back(v);
      for (int v : elim_map)
        if (!pick.pmap.contains(v)) free_map.push_back(v);
      std::sort(free_map.begin(), free_map.end());

      const long long fm_size = scope_size(net, free_map);
      std::vector<int> fm_states(n, -1);
      for (long long fm = 0; fm < fm_size; ++fm) {
        check_deadline(opts.deadline);
        decode_scope(net, free_map, fm, fm_states);

        Candidate<Num> cand;
        cand.processed_map = pick.pmap;
        for (int v : free_map) cand.processed_map.set(v, fm_states[v]);
        // everything outside the separator scope is final for this branch
        Instantiation emitted;
        for (const auto& [v, s] : cand.processed_map.items())
          if (std::binary_search(sep_map.begin(), sep_map.end(), v))
            emitted.set(v, s);
        cand.group_key = emitted;

        cand.vec.assign(out_size, Num(0));
        for (int v = 0; v < n; ++v) states[v] = fixed[v] >= 0 ? fixed[v] : -1;
        for (const auto& [v, s] : cand.processed_map.items()) states[v] = s;
        // pinned MAP states from children that live in this cluster
        for (const auto& [v, s] : pick.pmap.items()) states[v] = s;

        const long long el_size = scope_size(net, elim_num);
        for (long long os = 0; os < out_size; ++os) {
          decode_scope(net, sep_num, os, states);
          Num acc(0);
          for (long long es = 0; es < el_size; ++es) {
            decode_scope(net, elim_num, es, states);
            Num term = cluster_cpt_product<Num>(net, cpts, ad.x_proc[j], states);
            // child message entries at the matching child-separator state
            for (std::size_t ci = 0; ci < kids.size(); ++ci)
              term *= pick.parts[ci]->vec[encode_scope(net, child_num[ci], states)];
            acc += term;
          }
          cand.vec[os] = acc;
        }

        // drop assignments recorded for vars that leave scope entirely:
        // keep the full processed map, it is needed to reconstruct the
        // final assignment at the root.
        pset.insert(std::move(cand), opts.prune);
      }
    }

    if (opts.lattice != nullptr) {
      if constexpr (std::is_same_v<Num, double>) {
        reduce_pareto(pset, *opts.lattice);
      } else {
        throw std::logic_error("lattice reduction requires the f64 backend");
      }
    }

    message[j].clear();
    for (auto& [key, group] : pset.groups())
      for (auto& c : group) message[j].push_back(std::move(c));
    stats.pareto_sizes.push_back(message[j].size());
    stats.dims.push_back(static_cast<std::size_t>(out_size));
    for (int c : kids) {
      message[c].clear();
      message[c].shrink_to_fit();
    }
  }

  // root candidates are scalars (empty separator)
  const int root = order[0];
  const auto& final_set = message[root];
  if (final_set.empty()) throw std::logic_error("empty root candidate set");
  const Candidate<Num>* best = nullptr;
  for (const auto& c : final_set) {
    if (c.vec.size() != 1)
      throw std::logic_error("root candidates must be scalar");
    if (best == nullptr || c.vec[0] > best->vec[0] ||
        (c.vec[0] == best->vec[0] && c.processed_map < best->processed_map)) {
      best = &c;
    }
  }
  if (best->vec[0] == Num(0))
    throw ZeroEvidenceError("zero-probability evidence");

  MapSolution<Num> sol;
  sol.value = best->vec[0];
  for (int v : query.map_vars) {
    int s = best->processed_map.get(v).value_or(-1);
    if (s < 0) throw std::logic_error("MAP variable missing from solution");
    sol.assignment.set(v, s);
  }
  sol.stats = std::move(stats);
  return sol;
}

struct ApproxSolution {
  MapSolution<double> solution;
  GuaranteeRecord guarantee;
};

inline ApproxSolution solve_map_approx(const Network& net,
                                       const AnnotatedDecomposition& ad,
                                       const Query& query, double epsilon,
                                       Lattice::Mode mode,
                                       const Deadline& deadline = {}) {
  Lattice lat = Lattice::make(net, ad, epsilon, mode);
  SolveOptions opts;
  opts.prune = true;
  opts.lattice = &lat;
  opts.deadline = deadline;
  ApproxSolution out;
  out.solution = solve_map<double>(net, ad, query, opts);
  out.guarantee.mode = mode;
  out.guarantee.epsilon = epsilon;
  out.guarantee.value = out.solution.value;
  out.guarantee.lower_bound_claimed =
      mode == Lattice::Mode::Multiplicative
          ? out.solution.value / (1.0 + epsilon)
          : out.solution.value - epsilon;
  return out;
}

}  // namespace bnmap
