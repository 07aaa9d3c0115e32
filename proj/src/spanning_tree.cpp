#include "tnd/spanning_tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace tnd {

namespace {

std::string edge_str(Edge e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

}  // namespace

SpanningTree::SpanningTree(int node_count, std::vector<Edge> edges)
    : n_(node_count), edges_(std::move(edges)) {
  if (n_ < 2) {
    throw std::invalid_argument("spanning tree needs at least 2 nodes");
  }
  if (static_cast<int>(edges_.size()) != n_ - 1) {
    throw std::invalid_argument("spanning tree on " + std::to_string(n_) +
                                " nodes needs exactly " + std::to_string(n_ - 1) +
                                " edges, got " + std::to_string(edges_.size()));
  }
  for (auto& e : edges_) {
    if (e.first == e.second) {
      throw std::invalid_argument("self-loop edge " + edge_str(e));
    }
    if (e.first < 0 || e.second < 0 || e.first >= n_ || e.second >= n_) {
      throw std::invalid_argument("edge endpoint out of range " + edge_str(e));
    }
    e = make_edge(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge in spanning tree");
  }
  adj_.assign(n_, {});
  for (const auto& [i, j] : edges_) {
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }
  // Connectivity with n-1 edges implies acyclicity.
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  if (visited != n_) {
    throw std::invalid_argument("edge set does not connect all nodes");
  }
}

bool SpanningTree::has_edge(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(),
                            make_edge(e.first, e.second));
}

bool Component::contains(int v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

std::pair<Component, Component> split_tree(const SpanningTree& tree,
                                           Edge removed) {
  removed = make_edge(removed.first, removed.second);
  if (!tree.has_edge(removed)) {
    throw std::invalid_argument("edge " + edge_str(removed) +
                                " is not in the tree");
  }
  const auto& adj = tree.adjacency();
  std::vector<char> mark(tree.node_count(), 0);
  std::vector<int> stack{removed.first};
  mark[removed.first] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (u == removed.first && v == removed.second) continue;
      if (!mark[v]) {
        mark[v] = 1;
        stack.push_back(v);
      }
    }
  }
  Component a, b;
  for (int v = 0; v < tree.node_count(); ++v) {
    (mark[v] ? a : b).members.push_back(v);
  }
  // Smaller component first; ties by smallest member.
  if (b.size() < a.size() ||
      (b.size() == a.size() && b.members.front() < a.members.front())) {
    std::swap(a, b);
  }
  return {std::move(a), std::move(b)};
}

std::vector<Edge> reconnect_candidates(const Component& c1,
                                       const Component& c2) {
  if (c1.members.empty() || c2.members.empty()) {
    throw std::invalid_argument("components must be non-empty");
  }
  for (int v : c1.members) {
    if (c2.contains(v)) {
      throw std::invalid_argument("components overlap at node " +
                                  std::to_string(v));
    }
  }
  std::vector<Edge> out;
  out.reserve(c1.members.size() * c2.members.size());
  for (int u : c1.members) {
    for (int v : c2.members) {
      out.push_back(make_edge(u, v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpanningTree apply_swap(const SpanningTree& tree, Edge removed, Edge inserted) {
  removed = make_edge(removed.first, removed.second);
  inserted = make_edge(inserted.first, inserted.second);
  const auto [c1, c2] = split_tree(tree, removed);
  const bool crosses = c1.contains(inserted.first) != c1.contains(inserted.second);
  if (!crosses) {
    throw std::invalid_argument("edge " + edge_str(inserted) +
                                " does not cross the cut of " +
                                edge_str(removed));
  }
  std::vector<Edge> edges;
  edges.reserve(tree.edges().size());
  for (const auto& e : tree.edges()) {
    if (e != removed) edges.push_back(e);
  }
  edges.push_back(inserted);
  return SpanningTree(tree.node_count(), std::move(edges));
}

Eigen::MatrixXd tree_pair_distances(const SpanningTree& tree,
                                    const Eigen::MatrixXd& link_distances) {
  const int n = tree.node_count();
  if (link_distances.rows() < n || link_distances.cols() < n) {
    throw std::invalid_argument("distance matrix smaller than the tree");
  }
  const auto& adj = tree.adjacency();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    stack.assign(1, s);
    std::vector<char> seen(n, 0);
    seen[s] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          c(s, v) = c(s, u) + link_distances(u, v);
          stack.push_back(v);
        }
      }
    }
  }
  return c;
}

std::int64_t count_swap_pairs(const SpanningTree& tree) {
  const int n = tree.node_count();
  const auto& adj = tree.adjacency();
  // Subtree sizes from a DFS rooted at 0; edge (parent, child) splits the
  // tree into size(child) and n - size(child).
  std::vector<int> parent(n, -1), order, size(n, 1);
  order.reserve(n);
  std::vector<int> stack{0};
  parent[0] = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (int v : adj[u]) {
      if (parent[v] == -1) {
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  std::int64_t total = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v != 0) {
      size[parent[v]] += size[v];
      total += static_cast<std::int64_t>(size[v]) * (n - size[v]);
    }
  }
  return total;
}

SpanningTree prufer_decode(const std::vector<int>& sequence) {
  const int n = static_cast<int>(sequence.size()) + 2;
  std::vector<int> degree(n, 1);
  for (int s : sequence) {
    if (s < 0 || s >= n) {
      throw std::invalid_argument("sequence label " + std::to_string(s) +
                                  " out of range [0," + std::to_string(n) + ")");
    }
    ++degree[s];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (int s : sequence) {
    const int leaf = leaves.top();
    leaves.pop();
    edges.push_back(make_edge(leaf, s));
    if (--degree[s] == 1) leaves.push(s);
  }
  const int u = leaves.top();
  leaves.pop();
  const int v = leaves.top();
  edges.push_back(make_edge(u, v));
  return SpanningTree(n, std::move(edges));
}

std::vector<int> prufer_encode(const SpanningTree& tree) {
  const int n = tree.node_count();
  std::vector<int> degree(n, 0);
  std::vector<std::vector<int>> adj = tree.adjacency();
  for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(adj[v].size());
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  std::vector<char> removed(n, 0);
  std::vector<int> seq;
  seq.reserve(n - 2);
  for (int step = 0; step < n - 2; ++step) {
    const int leaf = leaves.top();
    leaves.pop();
    removed[leaf] = 1;
    int neighbor = -1;
    for (int w : adj[leaf]) {
      if (!removed[w]) {
        neighbor = w;
        break;
      }
    }
    seq.push_back(neighbor);
    if (--degree[neighbor] == 1) leaves.push(neighbor);
  }
  return seq;
}

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the smaller label as root
    parent[b] = a;
    return true;
  }
};

}  // namespace

SpanningTree kruskal(int node_count, const Eigen::MatrixXd& weights,
                     const std::vector<Edge>& universe) {
  if (node_count < 2) {
    throw std::invalid_argument("kruskal needs at least 2 nodes");
  }
  if (weights.rows() < node_count || weights.cols() < node_count) {
    throw std::invalid_argument("weight matrix smaller than node count");
  }
  if (!weights.allFinite()) {
    throw std::invalid_argument("weight matrix has non-finite entries");
  }
  struct Cand {
    double w;
    Edge e;
  };
  std::vector<Cand> cands;
  if (universe.empty()) {
    cands.reserve(static_cast<std::size_t>(node_count) * (node_count - 1) / 2);
    for (int i = 0; i < node_count; ++i) {
      for (int j = i + 1; j < node_count; ++j) {
        cands.push_back({weights(i, j), {i, j}});
      }
    }
  } else {
    for (const auto& e : universe) {
      const Edge norm = make_edge(e.first, e.second);
      cands.push_back({weights(norm.first, norm.second), norm});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.w != b.w ? a.w < b.w : a.e < b.e;
  });
  UnionFind uf(node_count);
  std::vector<Edge> edges;
  edges.reserve(node_count - 1);
  for (const auto& c : cands) {
    if (uf.unite(c.e.first, c.e.second)) {
      edges.push_back(c.e);
      if (static_cast<int>(edges.size()) == node_count - 1) break;
    }
  }
  if (static_cast<int>(edges.size()) != node_count - 1) {
    throw std::invalid_argument("candidate edges do not span all nodes");
  }
  return SpanningTree(node_count, std::move(edges));
}

}  // namespace tnd
