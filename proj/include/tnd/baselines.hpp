#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tnd/instance.hpp"
#include "tnd/spanning_tree.hpp"
#include "tnd/tabu_search.hpp"

namespace tnd {

/// Minimum distance spanning tree: Kruskal on the link distances.
SpanningTree mst(const Instance& instance);

/// Maximum demand spanning tree: Kruskal on -(d + d^T), i.e. the tree
/// maximizing total undirected demand on its edges.
SpanningTree mdst(const Instance& instance);

struct BruteForceResult {
  SpanningTree tree;
  double z = 0.0;
  std::int64_t trees_enumerated = 0;
};

/// Exact optimum by enumerating all n^(n-2) labeled trees through the
/// Prufer codec. Ties broken by lexicographically smallest sorted edge
/// list. Refuses n > 8 unless allow_large is set.
BruteForceResult brute_force_optimum(const Instance& instance,
                                     bool allow_large = false);

/// Reimplemented link-swapping baseline: starting from the MST (or the
/// given tree), visit every station pair once in lexicographic order
/// (n(n-1)/2 iterations); when the pair is not a tree edge, try inserting
/// it against removing each edge on its tree path and apply the best
/// strictly improving exchange. The pair is permanently tabooed afterwards.
/// max_iterations = 0 runs the full sweep; smaller values truncate it.
SolveReport heuristic_link_swapping(const Instance& instance,
                                    std::int64_t max_iterations = 0,
                                    std::optional<SpanningTree> initial = {});

/// Reimplemented link-deletion baseline: starting from the complete graph,
/// repeatedly delete the non-bridge edge whose removal minimizes the
/// general-graph objective (ties by lexicographic edge) until n-1 edges
/// remain.
SolveReport heuristic_link_deletion(const Instance& instance);

/// Side-by-side run of the selected methods with pairwise objective deltas,
/// delta_pct(a, b) = 100 * (z_b - z_a) / z_a.
struct CompareReport {
  struct Row {
    std::string method;
    double z = 0.0;
    double wall_time_s = 0.0;
    std::int64_t iterations = 0;
    std::vector<Edge> edges;
  };
  std::vector<Row> rows;
  Eigen::MatrixXd delta_pct;
};

/// Known methods: "mst", "mdst", "tabu", "swap", "delete", "brute".
CompareReport compare(const Instance& instance,
                      const std::vector<std::string>& methods,
                      const SolverConfig& tabu_config);

}  // namespace tnd
