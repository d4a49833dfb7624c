#pragma once

#include <map>
#include <vector>

#include "bnmap/engine.hpp"

namespace bnmap {

// One propagated MAP message: a numeric vector over the separator
// instantiations plus the partial MAP assignment that produced it.
// group_key carries not-yet-processed MAP variables visible in the
// separator; candidates are only compared within a group.
template <class Num>
struct Candidate {
  Instantiation group_key;
  Instantiation processed_map;
  std::vector<Num> vec;

  std::size_t dim() const { return vec.size(); }
};

// a dominates b iff a >= b entrywise with at least one strict coordinate.
template <class Num>
bool dominates(const Candidate<Num>& a, const Candidate<Num>& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("dominance requires equal dimensions");
  if (!(a.group_key == b.group_key))
    throw std::invalid_argument("dominance requires equal group keys");
  bool strict = false;
  for (std::size_t i = 0; i < a.vec.size(); ++i) {
    if (a.vec[i] < b.vec[i]) return false;
    if (a.vec[i] > b.vec[i]) strict = true;
  }
  return strict;
}

template <class Num>
class ParetoSet {
 public:
  using Group = std::vector<Candidate<Num>>;

  // Incremental insert with a pairwise dominance scan of the group's
  // frontier. With pruning off, everything is kept. Identical vectors keep
  // the lexicographically smallest processed_map.
  void insert(Candidate<Num> cand, bool prune = true) {
    Group& group = groups_[cand.group_key];
    if (!prune) {
      group.push_back(std::move(cand));
      return;
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (group[i].vec == cand.vec) {
        if (cand.processed_map < group[i].processed_map)
          group[i].processed_map = std::move(cand.processed_map);
        return;
      }
      if (dominates(group[i], cand)) return;
    }
    std::erase_if(group, [&cand](const Candidate<Num>& c) {
      return dominates(cand, c);
    });
    group.push_back(std::move(cand));
  }

  std::map<Instantiation, Group>& groups() { return groups_; }
  const std::map<Instantiation, Group>& groups() const { return groups_; }

  std::size_t total_size() const {
    std::size_t total = 0;
    for (const auto& [key, group] : groups_) total += group.size();
    return total;
  }

 private:
  std::map<Instantiation, Group> groups_;
};

// Batch form: prune a candidate list into a pareto set.
template <class Num>
ParetoSet<Num> prune(std::vector<Candidate<Num>> candidates) {
  ParetoSet<Num> out;
  for (auto& c : candidates) out.insert(std::move(c), true);
  return out;
}

}  // namespace bnmap
