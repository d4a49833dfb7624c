#pragma once

#include <string>
#include <vector>

#include "bnmap/network.hpp"

namespace bnmap {

struct UndirectedGraph {
  int n = 0;
  std::vector<std::vector<bool>> adj;  // symmetric, no self-loops

  explicit UndirectedGraph(int n_ = 0)
      : n(n_), adj(n_, std::vector<bool>(n_, false)) {}
  void add_edge(int a, int b) {
    if (a == b) return;
    adj[a][b] = adj[b][a] = true;
  }
  bool has_edge(int a, int b) const { return adj[a][b]; }
};

// Rooted tree decomposition: parent[j] == -1 for the root, `order` is a
// topological order with the root first.
struct Decomposition {
  std::vector<std::vector<int>> clusters;  // sorted variable ids
  std::vector<int> parent;
  std::vector<int> order;

  int num_clusters() const { return static_cast<int>(clusters.size()); }
  std::vector<std::vector<int>> children() const;
};

enum class Heuristic { MinFill, MinDegree };

struct AnnotatedDecomposition {
  Decomposition base;
  std::vector<std::vector<int>> children;
  std::vector<std::vector<int>> x_last;  // eliminated at this cluster
  std::vector<std::vector<int>> x_proc;  // CPTs multiplied in here
  std::vector<std::vector<int>> u_set;
  std::vector<std::vector<int>> v_set;
  int width = 0;
};

UndirectedGraph moralize(const Network& net);

// Elimination-based decomposition (one cluster per eliminated vertex),
// ties broken by lowest variable id. Disconnected components are chained
// with empty separators. The returned root is the cluster of the last
// eliminated vertex.
Decomposition build_decomposition(const UndirectedGraph& g,
                                  Heuristic heuristic = Heuristic::MinFill);

// Re-roots the tree at the given cluster.
Decomposition reroot(const Decomposition& d, int new_root);

// Chooses the default root for a query: the lowest-index cluster
// containing the lowest-id MAP variable (cluster 0 when the query has no
// MAP variables).
int default_root(const Decomposition& d, const Query& query);

// Replicates clusters with more than two children into chains.
Decomposition binarize(const Decomposition& d);

int treewidth(const Decomposition& d);

// Checks the three tree-decomposition properties plus order/parent
// consistency; returns a list of violations (empty when valid).
std::vector<std::string> check_decomposition(const Decomposition& d,
                                             const UndirectedGraph& g);

// Computes the per-cluster bookkeeping sets for a binary decomposition of
// net's moral graph. Throws std::invalid_argument if the decomposition
// does not fit the network.
AnnotatedDecomposition annotate(const Decomposition& d, const Network& net);

// Convenience pipeline: moralize, decompose, root for the query, binarize,
// annotate.
AnnotatedDecomposition decompose_for(const Network& net, const Query& query,
                                     Heuristic heuristic = Heuristic::MinFill,
                                     int root_override = -1);

std::string dump_decomposition(const Decomposition& d, const Network& net);

}  // namespace bnmap
