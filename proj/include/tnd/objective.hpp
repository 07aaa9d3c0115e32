#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tnd/spanning_tree.hpp"

namespace tnd {

/// Total passenger-kilometers: sum over ordered pairs of demand(i,j) *
/// pair_distances(i,j).
double objective(const Eigen::MatrixXd& pair_distances,
                 const Eigen::MatrixXd& demand);

/// Demand-weighted sum of direct link distances. Lower bound on the
/// objective of any network when distances are metric.
double demand_weighted_lower_bound(const Eigen::MatrixXd& demand,
                                   const Eigen::MatrixXd& link_distances);

/// True iff no budget is set or z <= budget (boundary feasible).
bool budget_feasible(double z, std::optional<double> budget);

/// Numerically stable log(sum(exp(x))) used by the entropy objective.
double log_sum_exp(std::span<const double> xs);

/// Entropy-form objective: sum over pairs of d * log sum_paths exp(-lambda *
/// path length). On a tree each pair has a single path, so the value equals
/// -lambda * objective; the log-sum-exp form keeps a multi-path extension a
/// drop-in. Requires lambda > 0.
double entropy_objective(const Eigen::MatrixXd& pair_distances,
                         const Eigen::MatrixXd& demand, double lambda);

/// Per-removed-edge evaluation of swap candidates without recomputing any
/// tree paths. Within-component path distances are unchanged by the swap;
/// the cross-cut distance for (i, j) is dist(i, b1) + t(b1, b2) + dist(b2, j)
/// since every cross path must traverse the inserted link. Aggregating
/// demand over the cut makes each candidate an O(1) lookup.
class SwapEvaluator {
 public:
  SwapEvaluator(const SpanningTree& tree, Edge removed,
                const Eigen::MatrixXd& cached_distances,
                const Eigen::MatrixXd& link_distances,
                const Eigen::MatrixXd& demand);

  const Component& side_one() const { return side_one_; }
  const Component& side_two() const { return side_two_; }

  /// Objective of the tree after removing `removed` and inserting `edge`.
  /// Throws if `edge` does not cross the cut.
  double objective_for(Edge edge) const;

 private:
  Edge removed_;
  Component side_one_;
  Component side_two_;
  double within_ = 0.0;        // path-km within both components, demand-weighted
  double cut_demand_ = 0.0;    // total demand crossing the cut, both directions
  Eigen::VectorXd gather_;     // node u -> sum_i dist(i,u) * cut demand at i
  const Eigen::MatrixXd* link_distances_;
};

/// Objective of apply_swap(tree, removed, inserted) computed from the cached
/// distance matrix of `tree`; exactly equals the full recomputation.
double incremental_swap_objective(const SpanningTree& tree, Edge removed,
                                  Edge inserted,
                                  const Eigen::MatrixXd& cached_distances,
                                  const Eigen::MatrixXd& link_distances,
                                  const Eigen::MatrixXd& demand);

/// Directed passengers per day on each tree link.
using LinkFlows = std::map<std::pair<int, int>, double>;

/// Flow on link i->j = total demand from the i-side of the split to the
/// j-side. Flows exist only on tree links; sum of t * x equals the objective.
LinkFlows link_flows(const SpanningTree& tree, const Eigen::MatrixXd& demand);

/// Detour statistics: ratio of tree-path distance to direct link distance
/// per OD pair, summarized as cumulative curves over a threshold grid.
struct DetourProfile {
  std::vector<double> thresholds;
  std::vector<double> cum_demand_frac;  // fraction of total demand at ratio <= threshold
  std::vector<double> cum_pair_frac;    // fraction of ordered OD pairs at ratio <= threshold
  double max_ratio = 1.0;
  std::int64_t excluded_pairs = 0;      // i != j with zero direct distance
  std::int64_t pair_count = 0;          // ordered pairs with a defined ratio
  double total_demand = 0.0;
};

DetourProfile detour_profile(const Eigen::MatrixXd& pair_distances,
                             const Eigen::MatrixXd& link_distances,
                             const Eigen::MatrixXd& demand,
                             std::vector<double> thresholds);

/// Grid 1.0, 1.1, ... extended to cover max_ratio so the curves reach 1.0.
std::vector<double> default_ratio_grid(double max_ratio);

}  // namespace tnd
