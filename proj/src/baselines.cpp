#include "tnd/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <stdexcept>

#include "tnd/objective.hpp"

namespace tnd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Edges on the unique tree path between a and b.
std::vector<Edge> tree_path_edges(const SpanningTree& tree, int a, int b) {
  const auto& adj = tree.adjacency();
  std::vector<int> parent(tree.node_count(), -1);
  std::vector<int> stack{a};
  parent[a] = a;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == b) break;
    for (int v : adj[u]) {
      if (parent[v] == -1) {
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  std::vector<Edge> path;
  for (int v = b; v != a; v = parent[v]) {
    path.push_back(make_edge(v, parent[v]));
  }
  return path;
}

/// All-pairs shortest distances of a weighted undirected graph by
/// Floyd-Warshall; infinity marks unreachable pairs.
Eigen::MatrixXd graph_distances(int n, const std::vector<Edge>& edges,
                                const Eigen::MatrixXd& t) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, kInf);
  dist.diagonal().setZero();
  for (const auto& [i, j] : edges) {
    dist(i, j) = std::min(dist(i, j), t(i, j));
    dist(j, i) = dist(i, j);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const double dik = dist(i, k);
      if (dik == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = dik + dist(k, j);
        if (via < dist(i, j)) dist(i, j) = via;
      }
    }
  }
  return dist;
}

/// Indices into `edges` of all bridges (Tarjan low-link).
std::vector<char> bridge_flags(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
  for (std::size_t id = 0; id < edges.size(); ++id) {
    adj[edges[id].first].push_back({edges[id].second, static_cast<int>(id)});
    adj[edges[id].second].push_back({edges[id].first, static_cast<int>(id)});
  }
  std::vector<char> is_bridge(edges.size(), 0);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int u, int through_edge) {
    disc[u] = low[u] = timer++;
    for (auto [v, id] : adj[u]) {
      if (id == through_edge) continue;
      if (disc[v] == -1) {
        dfs(v, id);
        low[u] = std::min(low[u], low[v]);
        if (low[v] > disc[u]) is_bridge[id] = 1;
      } else {
        low[u] = std::min(low[u], disc[v]);
      }
    }
  };
  for (int v = 0; v < n; ++v) {
    if (disc[v] == -1) dfs(v, -1);
  }
  return is_bridge;
}

}  // namespace

SpanningTree mst(const Instance& instance) {
  return kruskal(instance.n(), instance.link_distances(),
                 instance.allowed_edges());
}

SpanningTree mdst(const Instance& instance) {
  const Eigen::MatrixXd negated =
      -(instance.demand() + instance.demand().transpose());
  return kruskal(instance.n(), negated, instance.allowed_edges());
}

BruteForceResult brute_force_optimum(const Instance& instance,
                                     bool allow_large) {
  const int n = instance.n();
  if (n > 8 && !allow_large) {
    throw std::invalid_argument(
        "brute force refuses n > 8 (" + std::to_string(n) +
        " stations would enumerate " + std::to_string(n) + "^" +
        std::to_string(n - 2) + " trees); pass the override to proceed");
  }
  const Eigen::MatrixXd& t = instance.link_distances();
  const Eigen::MatrixXd& d = instance.demand();

  std::optional<SpanningTree> best;
  double best_z = std::numeric_limits<double>::infinity();
  std::int64_t enumerated = 0;

  std::vector<int> seq(std::max(0, n - 2), 0);
  for (;;) {
    SpanningTree tree = prufer_decode(seq);
    const double z = objective(tree_pair_distances(tree, t), d);
    ++enumerated;
    if (z < best_z || (z == best_z && best && tree.edges() < best->edges())) {
      best_z = z;
      best = std::move(tree);
    }
    // Odometer over all n^(n-2) sequences.
    int pos = static_cast<int>(seq.size()) - 1;
    while (pos >= 0 && seq[pos] == n - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
  return {std::move(*best), best_z, enumerated};
}

SolveReport heuristic_link_swapping(const Instance& instance,
                                    std::int64_t max_iterations,
                                    std::optional<SpanningTree> initial) {
  const auto start = Clock::now();
  const int n = instance.n();
  const Eigen::MatrixXd& t = instance.link_distances();
  const Eigen::MatrixXd& d = instance.demand();

  SpanningTree tree = initial.has_value() ? std::move(*initial) : mst(instance);
  if (tree.node_count() != n) {
    throw std::invalid_argument("initial tree does not match the instance");
  }
  Eigen::MatrixXd dists = tree_pair_distances(tree, t);
  double z = objective(dists, d);
  const double initial_z = z;

  const std::int64_t pair_count = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const std::int64_t limit =
      max_iterations <= 0 ? pair_count : std::min(max_iterations, pair_count);

  std::vector<IterationRecord> trace;
  std::int64_t iteration = 0;
  for (int i = 0; i < n && iteration < limit; ++i) {
    for (int j = i + 1; j < n && iteration < limit; ++j) {
      ++iteration;
      SwapMove applied{{0, 0}, {0, 0}};
      std::int64_t evaluated = 0;
      const Edge insert{i, j};
      if (!tree.has_edge(insert) && instance.edge_allowed(i, j)) {
        double cand_z = std::numeric_limits<double>::infinity();
        Edge cand_removed{0, 0};
        for (const Edge& e : tree_path_edges(tree, i, j)) {
          const double zz = incremental_swap_objective(tree, e, insert, dists, t, d);
          ++evaluated;
          if (zz < cand_z || (zz == cand_z && e < cand_removed)) {
            cand_z = zz;
            cand_removed = e;
          }
        }
        if (cand_z < z) {  // strictly improving exchanges only
          tree = apply_swap(tree, cand_removed, insert);
          dists = tree_pair_distances(tree, t);
          z = cand_z;
          applied = {cand_removed, insert};
        }
      }
      trace.push_back({iteration, z, z, applied, false, false, evaluated,
                       seconds_since(start)});
    }
  }

  z = objective(dists, d);  // exact value of the final tree, not the
                            // incrementally tracked one
  SolveReport report{.method = "link-swapping (reimplemented)",
                     .best_tree = std::move(tree),
                     .best_z = z,
                     .initial_z = initial_z,
                     .trace = std::move(trace),
                     .wall_time_s = 0.0,
                     .iterations = iteration,
                     .config = {},
                     .warnings = {}};
  report.wall_time_s = seconds_since(start);
  return report;
}

SolveReport heuristic_link_deletion(const Instance& instance) {
  const auto start = Clock::now();
  const int n = instance.n();
  const Eigen::MatrixXd& t = instance.link_distances();
  const Eigen::MatrixXd& d = instance.demand();

  std::vector<Edge> edges = instance.allowed_edges();
  if (edges.empty()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    }
  }
  Eigen::MatrixXd dist0 = graph_distances(n, edges, t);
  if (!dist0.allFinite()) {
    throw std::invalid_argument("starting graph is not connected");
  }
  double z = objective(dist0, d);
  const double initial_z = z;

  std::vector<IterationRecord> trace;
  std::int64_t iteration = 0;
  while (static_cast<int>(edges.size()) > n - 1) {
    const std::vector<char> bridges = bridge_flags(n, edges);
    double best_z = std::numeric_limits<double>::infinity();
    int best_idx = -1;
    std::vector<Edge> remaining;
    remaining.reserve(edges.size() - 1);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (bridges[k]) continue;  // deleting a bridge would disconnect
      remaining.clear();
      for (std::size_t m = 0; m < edges.size(); ++m) {
        if (m != k) remaining.push_back(edges[m]);
      }
      const Eigen::MatrixXd dist = graph_distances(n, remaining, t);
      const double zz = objective(dist, d);
      if (zz < best_z || (zz == best_z && best_idx >= 0 &&
                          edges[k] < edges[best_idx])) {
        best_z = zz;
        best_idx = static_cast<int>(k);
      }
    }
    if (best_idx < 0) {
      throw std::logic_error("no deletable edge although graph is not a tree");
    }
    const Edge deleted = edges[best_idx];
    edges.erase(edges.begin() + best_idx);
    z = best_z;
    ++iteration;
    trace.push_back({iteration, z, z, SwapMove{deleted, deleted}, false, false,
                     static_cast<std::int64_t>(edges.size() + 1),
                     seconds_since(start)});
  }

  SpanningTree tree(n, edges);
  SolveReport report{.method = "link-deletion (reimplemented)",
                     .best_tree = std::move(tree),
                     .best_z = z,
                     .initial_z = initial_z,
                     .trace = std::move(trace),
                     .wall_time_s = 0.0,
                     .iterations = iteration,
                     .config = {},
                     .warnings = {}};
  report.wall_time_s = seconds_since(start);
  return report;
}

CompareReport compare(const Instance& instance,
                      const std::vector<std::string>& methods,
                      const SolverConfig& tabu_config) {
  CompareReport report;
  const Eigen::MatrixXd& t = instance.link_distances();
  const Eigen::MatrixXd& d = instance.demand();

  for (const std::string& method : methods) {
    const auto start = Clock::now();
    CompareReport::Row row;
    if (method == "mst" || method == "mdst") {
      const SpanningTree tree = method == "mst" ? mst(instance) : mdst(instance);
      row = {method, objective(tree_pair_distances(tree, t), d),
             seconds_since(start), 0, tree.edges()};
    } else if (method == "tabu") {
      SolveReport r = solve(instance, tabu_config);
      row = {"tabu", r.best_z, r.wall_time_s, r.iterations,
             r.best_tree.edges()};
    } else if (method == "swap") {
      SolveReport r = heuristic_link_swapping(instance);
      row = {r.method, r.best_z, r.wall_time_s, r.iterations,
             r.best_tree.edges()};
    } else if (method == "delete") {
      SolveReport r = heuristic_link_deletion(instance);
      row = {r.method, r.best_z, r.wall_time_s, r.iterations,
             r.best_tree.edges()};
    } else if (method == "brute") {
      BruteForceResult r = brute_force_optimum(instance);
      row = {"brute", r.z, seconds_since(start), r.trees_enumerated,
             r.tree.edges()};
    } else {
      throw std::invalid_argument("unknown method '" + method + "'");
    }
    report.rows.push_back(std::move(row));
  }

  const int m = static_cast<int>(report.rows.size());
  report.delta_pct = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a == b || report.rows[a].z == 0.0) continue;
      report.delta_pct(a, b) =
          100.0 * (report.rows[b].z - report.rows[a].z) / report.rows[a].z;
    }
  }
  return report;
}

}  // namespace tnd
