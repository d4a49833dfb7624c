#include "bnmap/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bnmap {
namespace {

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> sorted_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool sorted_contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

std::vector<int> order_from_root(const std::vector<int>& parent,
                                 const std::vector<std::vector<int>>& children,
                                 int root) {
  std::vector<int> order;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int j = stack.back();
    stack.pop_back();
    order.push_back(j);
    for (auto it = children[j].rbegin(); it != children[j].rend(); ++it)
      stack.push_back(*it);
  }
  (void)parent;
  return order;
}

}  // namespace

std::vector<std::vector<int>> Decomposition::children() const {
  std::vector<std::vector<int>> ch(clusters.size());
  // Children in cluster-index order, for deterministic traversal.
  for (int j = 0; j < num_clusters(); ++j)
    if (parent[j] >= 0) ch[parent[j]].push_back(j);
  return ch;
}

UndirectedGraph moralize(const Network& net) {
  UndirectedGraph g(net.num_vars());
  for (int i = 0; i < net.num_vars(); ++i) {
    const auto& par = net.parents[i];
    for (int p : par) g.add_edge(i, p);
    for (std::size_t a = 0; a < par.size(); ++a)
      for (std::size_t b = a + 1; b < par.size(); ++b)
        g.add_edge(par[a], par[b]);
  }
  return g;
}

Decomposition build_decomposition(const UndirectedGraph& g, Heuristic heuristic) {
  const int n = g.n;
  Decomposition d;
  if (n == 0) {
    d.clusters.push_back({});
    d.parent.push_back(-1);
    d.order.push_back(0);
    return d;
  }

  std::vector<std::vector<bool>> adj = g.adj;
  std::vector<bool> removed(n, false);

  auto degree = [&](int v) {
    int deg = 0;
    for (int u = 0; u < n; ++u)
      if (!removed[u] && adj[v][u]) ++deg;
    return deg;
  };
  auto fill_count = [&](int v) {
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u)
      if (!removed[u] && adj[v][u]) nbrs.push_back(u);
    int fill = 0;
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        if (!adj[nbrs[a]][nbrs[b]]) ++fill;
    return fill;
  };

  std::vector<int> elim_step(n, -1);
  std::vector<std::vector<int>> cluster_of(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    long long best_score = 0;
    for (int v = 0; v < n; ++v) {
      if (removed[v]) continue;
      long long score =
          heuristic == Heuristic::MinFill ? fill_count(v) : degree(v);
      if (best < 0 || score < best_score) {
        best = v;
        best_score = score;
      }
    }
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u)
      if (!removed[u] && adj[best][u]) nbrs.push_back(u);
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        adj[nbrs[a]][nbrs[b]] = adj[nbrs[b]][nbrs[a]] = true;
    removed[best] = true;
    elim_step[best] = step;
    cluster_of[step] = nbrs;
    cluster_of[step].push_back(best);
    std::sort(cluster_of[step].begin(), cluster_of[step].end());
  }

  d.clusters = cluster_of;
  d.parent.assign(n, -1);
  std::vector<int> by_step(n);  // variable eliminated at each step
  for (int v = 0; v < n; ++v) by_step[elim_step[v]] = v;
  std::vector<int> component_roots;
  for (int step = 0; step < n; ++step) {
    // Parent: cluster of the first-eliminated remaining neighbor.
    int best_next = -1;
    for (int u : d.clusters[step])
      if (u != by_step[step] && elim_step[u] > step &&
          (best_next < 0 || elim_step[u] < best_next))
        best_next = elim_step[u];
    if (best_next >= 0)
      d.parent[step] = best_next;
    else
      component_roots.push_back(step);
  }
  // Chain component roots (empty separators); the last one becomes the root.
  for (std::size_t k = 0; k + 1 < component_roots.size(); ++k)
    d.parent[component_roots[k]] = component_roots[k + 1];

  auto ch = d.children();
  d.order = order_from_root(d.parent, ch, component_roots.back());
  return d;
}

Decomposition reroot(const Decomposition& d, int new_root) {
  Decomposition out = d;
  // Flip parent pointers along the path from new_root to the old root.
  std::vector<int> path;
  for (int j = new_root; j >= 0; j = d.parent[j]) path.push_back(j);
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    out.parent[path[k + 1]] = path[k];
  out.parent[new_root] = -1;
  out.order = order_from_root(out.parent, out.children(), new_root);
  return out;
}

int default_root(const Decomposition& d, const Query& query) {
  if (query.map_vars.empty()) return d.order.empty() ? 0 : d.order.front();
  int target = query.map_vars.front();
  for (int j = 0; j < d.num_clusters(); ++j)
    if (sorted_contains(d.clusters[j], target)) return j;
  return d.order.front();
}

Decomposition binarize(const Decomposition& d) {
  auto ch = d.children();
  Decomposition out;
  // (old cluster, parent index in the new tree)
  std::vector<std::pair<int, int>> stack;
  int root = d.order.front();
  stack.push_back({root, -1});
  while (!stack.empty()) {
    auto [j, new_parent] = stack.back();
    stack.pop_back();
    int cur = out.num_clusters();
    out.clusters.push_back(d.clusters[j]);
    out.parent.push_back(new_parent);
    const auto& kids = ch[j];
    if (kids.size() <= 2) {
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        stack.push_back({*it, cur});
    } else {
      // Chain of replicas: each link carries one original child, the last
      // replica carries the final two.
      for (std::size_t t = 0; t + 2 < kids.size(); ++t) {
        stack.push_back({kids[t], cur});
        int replica = out.num_clusters();
        out.clusters.push_back(d.clusters[j]);
        out.parent.push_back(cur);
        cur = replica;
      }
      stack.push_back({kids[kids.size() - 2], cur});
      stack.push_back({kids[kids.size() - 1], cur});
    }
  }
  out.order = order_from_root(out.parent, out.children(), 0);
  return out;
}

int treewidth(const Decomposition& d) {
  std::size_t w = 0;
  for (const auto& c : d.clusters) w = std::max(w, c.size());
  return static_cast<int>(w) - 1;
}

std::vector<std::string> check_decomposition(const Decomposition& d,
                                             const UndirectedGraph& g) {
  std::vector<std::string> violations;
  const int m = d.num_clusters();
  if (static_cast<int>(d.parent.size()) != m ||
      static_cast<int>(d.order.size()) != m) {
    violations.push_back("parent/order size mismatch");
    return violations;
  }
  std::vector<int> pos(m, -1);
  for (int k = 0; k < m; ++k) pos[d.order[k]] = k;
  for (int j = 0; j < m; ++j) {
    if (pos[j] < 0) violations.push_back("order is not a permutation");
    if (d.parent[j] < 0 && j != d.order.front())
      violations.push_back("non-root cluster without parent");
    if (d.parent[j] >= 0 && pos[d.parent[j]] > pos[j])
      violations.push_back("order is not topological");
  }

  std::vector<bool> covered(g.n, false);
  for (const auto& c : d.clusters)
    for (int v : c) {
      if (v < 0 || v >= g.n) {
        violations.push_back("cluster variable out of range");
        return violations;
      }
      covered[v] = true;
    }
  for (int v = 0; v < g.n; ++v)
    if (!covered[v]) violations.push_back("variable " + std::to_string(v) + " not covered");

  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b) {
      if (!g.has_edge(a, b)) continue;
      bool found = false;
      for (const auto& c : d.clusters)
        if (sorted_contains(c, a) && sorted_contains(c, b)) {
          found = true;
          break;
        }
      if (!found)
        violations.push_back("edge " + std::to_string(a) + "-" +
                             std::to_string(b) + " not inside any cluster");
    }

  // Running intersection: the clusters holding v must form one connected
  // subtree, i.e. #clusters - #tree-edges-among-them == 1.
  for (int v = 0; v < g.n; ++v) {
    int count = 0, edges = 0;
    for (int j = 0; j < m; ++j) {
      if (!sorted_contains(d.clusters[j], v)) continue;
      ++count;
      if (d.parent[j] >= 0 && sorted_contains(d.clusters[d.parent[j]], v)) ++edges;
    }
    if (count > 0 && count - edges != 1)
      violations.push_back("running intersection fails for variable " +
                           std::to_string(v));
  }
  return violations;
}

AnnotatedDecomposition annotate(const Decomposition& d, const Network& net) {
  AnnotatedDecomposition ad;
  ad.base = d;
  ad.children = d.children();
  const int m = d.num_clusters();
  for (int j = 0; j < m; ++j)
    if (ad.children[j].size() > 2)
      throw std::invalid_argument("annotate requires a binary decomposition");

  ad.x_last.resize(m);
  for (int j = 0; j < m; ++j)
    ad.x_last[j] = d.parent[j] < 0
                       ? d.clusters[j]
                       : sorted_difference(d.clusters[j], d.clusters[d.parent[j]]);

  std::vector<int> elim_cluster(net.num_vars(), -1);
  for (int j = 0; j < m; ++j)
    for (int v : ad.x_last[j]) {
      if (elim_cluster[v] >= 0)
        throw std::invalid_argument("x_last sets do not partition the variables");
      elim_cluster[v] = j;
    }
  for (int v = 0; v < net.num_vars(); ++v)
    if (elim_cluster[v] < 0)
      throw std::invalid_argument("variable missing from the decomposition");

  // CPT placement: deepest cluster (reverse topological order) containing
  // the whole family. Any such cluster sits below every family member's
  // elimination cluster, so bottom-up sweeps stay sound.
  ad.x_proc.resize(m);
  std::vector<bool> assigned(net.num_vars(), false);
  for (auto it = d.order.rbegin(); it != d.order.rend(); ++it) {
    int j = *it;
    for (int v : d.clusters[j]) {
      if (assigned[v]) continue;
      bool fits = true;
      for (int p : net.parents[v])
        if (!sorted_contains(d.clusters[j], p)) {
          fits = false;
          break;
        }
      if (fits) {
        assigned[v] = true;
        ad.x_proc[j].push_back(v);
      }
    }
    std::sort(ad.x_proc[j].begin(), ad.x_proc[j].end());
  }
  for (int v = 0; v < net.num_vars(); ++v)
    if (!assigned[v])
      throw std::invalid_argument(
          "no cluster contains the family of variable " + net.variables[v].name +
          "; decomposition does not match the network");

  ad.u_set.resize(m);
  ad.v_set.resize(m);
  for (auto it = d.order.rbegin(); it != d.order.rend(); ++it) {
    int j = *it;
    std::vector<int> u = ad.x_proc[j];
    for (int c : ad.children[j]) u = sorted_union(u, ad.u_set[c]);
    ad.u_set[j] = sorted_difference(u, ad.x_last[j]);
    ad.v_set[j] = sorted_difference(
        sorted_difference(d.clusters[j], ad.u_set[j]), ad.x_last[j]);
  }
  ad.width = treewidth(d);
  return ad;
}

AnnotatedDecomposition decompose_for(const Network& net, const Query& query,
                                     Heuristic heuristic, int root_override) {
  UndirectedGraph g = moralize(net);
  Decomposition d = build_decomposition(g, heuristic);
  int root = root_override >= 0 ? root_override : default_root(d, query);
  d = reroot(d, root);
  d = binarize(d);
  return annotate(d, net);
}

std::string dump_decomposition(const Decomposition& d, const Network& net) {
  std::ostringstream out;
  for (int j = 0; j < d.num_clusters(); ++j) {
    out << "cluster " << j << ":";
    for (int v : d.clusters[j]) out << " " << net.variables[v].name;
    out << " parent=" << d.parent[j] << "\n";
  }
  return out.str();
}

}  // namespace bnmap
