#include "bnmap/network.hpp"

#include <algorithm>

namespace bnmap {

void Instantiation::set(int var, int state) {
  auto it = std::lower_bound(items_.begin(), items_.end(),
                             std::make_pair(var, 0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it != items_.end() && it->first == var)
    it->second = state;
  else
    items_.insert(it, {var, state});
}

std::optional<int> Instantiation::get(int var) const {
  auto it = std::lower_bound(items_.begin(), items_.end(),
                             std::make_pair(var, 0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it != items_.end() && it->first == var) return it->second;
  return std::nullopt;
}

void Instantiation::erase(int var) {
  auto it = std::lower_bound(items_.begin(), items_.end(),
                             std::make_pair(var, 0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it != items_.end() && it->first == var) items_.erase(it);
}

void Instantiation::merge(const Instantiation& other) {
  for (const auto& [var, state] : other.items_) {
    auto cur = get(var);
    if (cur && *cur != state)
      throw std::invalid_argument("instantiation merge conflict on variable " +
                                  std::to_string(var));
    set(var, state);
  }
}

bool Instantiation::consistent_with(const Instantiation& other) const {
  for (const auto& [var, state] : other.items_) {
    auto cur = get(var);
    if (cur && *cur != state) return false;
  }
  return true;
}

Instantiation Instantiation::restricted_to(const std::vector<int>& vars) const {
  Instantiation out;
  for (int v : vars) {
    auto s = get(v);
    if (s) out.set(v, *s);
  }
  return out;
}

long long Network::row_count(int var) const {
  long long rows = 1;
  for (int p : parents[var]) rows *= cardinality(p);
  return rows;
}

long long Network::row_index(int var, const std::vector<int>& states) const {
  long long row = 0;
  for (int p : parents[var]) row = row * cardinality(p) + states[p];
  return row;
}

ValidationReport validate_network(const Network& net) {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };

  const int n = net.num_vars();
  if (static_cast<int>(net.parents.size()) != n ||
      static_cast<int>(net.cpts.size()) != n) {
    fail("parents/cpts arrays do not match variable count");
    return rep;
  }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    const Variable& v = net.variables[i];
    if (v.id != i) fail("variable ids are not dense 0..n-1 at index " + std::to_string(i));
    if (v.cardinality < 1) fail("variable " + v.name + " has cardinality < 1");
    names.push_back(v.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    fail("variable names are not unique");

  for (int i = 0; i < n; ++i) {
    for (int p : net.parents[i]) {
      if (p < 0 || p >= n) {
        fail("variable " + net.variables[i].name + " has out-of-range parent");
        return rep;
      }
      if (p == i) fail("variable " + net.variables[i].name + " is its own parent");
    }
  }
  if (!topological_order(net)) fail("cycle in the parent graph");

  for (int i = 0; i < n; ++i) {
    const long long rows = net.row_count(i);
    const int card = net.cardinality(i);
    if (static_cast<long long>(net.cpts[i].size()) != rows * card) {
      fail("cpt of " + net.variables[i].name + " has wrong length");
      continue;
    }
    for (long long r = 0; r < rows; ++r) {
      Rational sum = 0;
      bool range_ok = true;
      for (int s = 0; s < card; ++s) {
        const Rational& e = net.cpt_entry(i, r, s);
        if (e < 0 || e > 1) range_ok = false;
        sum += e;
      }
      if (!range_ok)
        fail("cpt of " + net.variables[i].name + " row " + std::to_string(r) +
             " has entry outside [0,1]");
      if (sum != 1)
        fail("cpt of " + net.variables[i].name + " row " + std::to_string(r) +
             " does not normalize");
    }
  }
  return rep;
}

Rational joint_probability(const Network& net, const Instantiation& full) {
  const int n = net.num_vars();
  std::vector<int> states(n, -1);
  for (const auto& [var, state] : full.items()) {
    if (var < 0 || var >= n) throw std::invalid_argument("unknown variable id");
    if (state < 0 || state >= net.cardinality(var))
      throw std::invalid_argument("state out of range for variable " +
                                  net.variables[var].name);
    states[var] = state;
  }
  for (int i = 0; i < n; ++i)
    if (states[i] < 0)
      throw std::invalid_argument("joint_probability requires a full instantiation");

  Rational prob = 1;
  for (int i = 0; i < n; ++i)
    prob *= net.cpt_entry(i, net.row_index(i, states), states[i]);
  return prob;
}

long long network_size(const Network& net) {
  long long size = 0;
  long long edges = 0;
  for (int i = 0; i < net.num_vars(); ++i) {
    size += net.row_count(i) * net.cardinality(i);
    edges += static_cast<long long>(net.parents[i].size());
  }
  return size + edges;
}

std::optional<std::vector<int>> topological_order(const Network& net) {
  const int n = net.num_vars();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i)
    for (int p : net.parents[i]) {
      ++indeg[i];
      children[p].push_back(i);
    }
  std::vector<int> order;
  std::vector<int> stack;
  for (int i = n - 1; i >= 0; --i)
    if (indeg[i] == 0) stack.push_back(i);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : children[v])
      if (--indeg[c] == 0) stack.push_back(c);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

int variable_id(const Network& net, const std::string& name) {
  for (const Variable& v : net.variables)
    if (v.name == name) return v.id;
  return -1;
}

}  // namespace bnmap
