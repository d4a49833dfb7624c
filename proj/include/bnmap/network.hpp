#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bnmap/rational.hpp"

namespace bnmap {

struct Variable {
  int id = 0;
  std::string name;
  int cardinality = 2;
};

// Partial assignment of state indices, kept sorted by variable id.
class Instantiation {
 public:
  Instantiation() = default;

  void set(int var, int state);
  std::optional<int> get(int var) const;
  bool contains(int var) const { return get(var).has_value(); }
  void erase(int var);

  const std::vector<std::pair<int, int>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  // Merges other into *this; conflicting states throw.
  void merge(const Instantiation& other);
  // True if the two agree on every shared variable.
  bool consistent_with(const Instantiation& other) const;
  Instantiation restricted_to(const std::vector<int>& vars) const;

  bool operator==(const Instantiation& o) const { return items_ == o.items_; }
  // Lexicographic by (variable id, state); used for deterministic
  // tie-breaking and as map key.
  bool operator<(const Instantiation& o) const { return items_ < o.items_; }

 private:
  std::vector<std::pair<int, int>> items_;
};

struct Network {
  std::vector<Variable> variables;
  // Ordered parent lists, one per variable (declaration order matters for
  // CPT row indexing).
  std::vector<std::vector<int>> parents;
  // cpts[i] has row_count(i) rows of length cardinality(i), flattened
  // row-major. Rows are indexed by parent states in declared parent order,
  // each parent's states ascending.
  std::vector<std::vector<Rational>> cpts;

  int num_vars() const { return static_cast<int>(variables.size()); }
  int cardinality(int var) const { return variables[var].cardinality; }
  long long row_count(int var) const;
  // Row index for the parent configuration found in `states` (dense array,
  // one state per variable; parents of `var` must be assigned).
  long long row_index(int var, const std::vector<int>& states) const;
  const Rational& cpt_entry(int var, long long row, int state) const {
    return cpts[var][row * cardinality(var) + state];
  }
};

struct Query {
  std::vector<int> map_vars;  // sorted ascending
  Instantiation evidence;
  std::optional<Rational> threshold;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate_network(const Network& net);

// p(x) of a full instantiation; throws std::invalid_argument if any
// variable is unassigned.
Rational joint_probability(const Network& net, const Instantiation& full);

// sum_i z(X_i  u  Pi_{X_i}) plus the edge count.
long long network_size(const Network& net);

// Topological order of the DAG; nullopt if it contains a cycle.
std::optional<std::vector<int>> topological_order(const Network& net);

int variable_id(const Network& net, const std::string& name);

}  // namespace bnmap
