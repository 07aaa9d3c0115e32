#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tnd/instance.hpp"

namespace tnd {

/// A spanning tree on stations 0..n-1: exactly n-1 undirected edges,
/// connected and acyclic. The constructor validates all three invariants.
/// Immutable after construction; all surgery returns new trees.
class SpanningTree {
 public:
  SpanningTree(int node_count, std::vector<Edge> edges);

  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }  // sorted ascending
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  bool has_edge(Edge e) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

/// One side of a tree split; members sorted ascending.
struct Component {
  std::vector<int> members;

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int v) const;
};

/// Removes edge `removed` and returns the two resulting components.
/// The smaller component comes first; equal sizes tie-break on the
/// smallest member.
std::pair<Component, Component> split_tree(const SpanningTree& tree,
                                           Edge removed);

/// All edges with one endpoint in each component, normalized and sorted
/// lexicographically. The count equals |c1| * |c2|.
std::vector<Edge> reconnect_candidates(const Component& c1,
                                       const Component& c2);

/// Removes `removed`, inserts `inserted` across the resulting cut, and
/// returns the new tree. `inserted == removed` yields an identical tree.
SpanningTree apply_swap(const SpanningTree& tree, Edge removed, Edge inserted);

/// Distance along the unique tree path for every station pair, computed by
/// one traversal per source. Result is symmetric with zero diagonal.
Eigen::MatrixXd tree_pair_distances(const SpanningTree& tree,
                                    const Eigen::MatrixXd& link_distances);

/// Total number of (remove, reinsert) link pairs over all tree edges:
/// sum over edges of the product of the two split-component sizes.
/// Includes the identity reinsertion for each removed edge.
std::int64_t count_swap_pairs(const SpanningTree& tree);

/// Prufer codec: a bijection between trees on n labeled nodes and integer
/// sequences of length n-2 over [0, n). decode({}) is the 2-node tree.
SpanningTree prufer_decode(const std::vector<int>& sequence);
std::vector<int> prufer_encode(const SpanningTree& tree);

/// Minimum-total-weight spanning tree over the complete graph (or over
/// `universe` when non-empty), deterministic: edges sorted by
/// (weight, i, j) ascending. Throws if node_count < 2 or the candidate
/// set cannot span.
SpanningTree kruskal(int node_count, const Eigen::MatrixXd& weights,
                     const std::vector<Edge>& universe = {});

}  // namespace tnd
