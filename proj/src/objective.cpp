#include "tnd/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tnd {

namespace {

void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix dimensions differ");
  }
}

}  // namespace

double objective(const Eigen::MatrixXd& pair_distances,
                 const Eigen::MatrixXd& demand) {
  check_same_shape(pair_distances, demand);
  return (pair_distances.array() * demand.array()).sum();
}

double demand_weighted_lower_bound(const Eigen::MatrixXd& demand,
                                   const Eigen::MatrixXd& link_distances) {
  check_same_shape(demand, link_distances);
  return (link_distances.array() * demand.array()).sum();
}

bool budget_feasible(double z, std::optional<double> budget) {
  return !budget.has_value() || z <= *budget;
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("log_sum_exp of an empty set");
  }
  const double m = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

double entropy_objective(const Eigen::MatrixXd& pair_distances,
                         const Eigen::MatrixXd& demand, double lambda) {
  check_same_shape(pair_distances, demand);
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  const Eigen::Index n = pair_distances.rows();
  double value = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      // Trees admit a single path per pair; the log-sum-exp collapses to
      // its one term but keeps the multi-path form ready.
      const double path_utilities[] = {-lambda * pair_distances(i, j)};
      value += demand(i, j) * log_sum_exp(path_utilities);
    }
  }
  return value;
}

SwapEvaluator::SwapEvaluator(const SpanningTree& tree, Edge removed,
                             const Eigen::MatrixXd& cached_distances,
                             const Eigen::MatrixXd& link_distances,
                             const Eigen::MatrixXd& demand)
    : removed_(make_edge(removed.first, removed.second)),
      link_distances_(&link_distances) {
  check_same_shape(cached_distances, demand);
  check_same_shape(cached_distances, link_distances);
  auto [c1, c2] = split_tree(tree, removed_);
  side_one_ = std::move(c1);
  side_two_ = std::move(c2);
  const auto& m1 = side_one_.members;
  const auto& m2 = side_two_.members;

  within_ = (cached_distances(m1, m1).array() * demand(m1, m1).array()).sum() +
            (cached_distances(m2, m2).array() * demand(m2, m2).array()).sum();

  // Demand crossing the cut, folded to undirected weights per node.
  const Eigen::MatrixXd cut =
      demand(m1, m2) + demand(m2, m1).transpose().eval();
  const Eigen::VectorXd cut_at_one = cut.rowwise().sum();
  const Eigen::VectorXd cut_at_two = cut.colwise().sum().transpose();
  cut_demand_ = cut_at_one.sum();

  // gather_(u) folds the within-side legs of every cross pair ending at u,
  // so a candidate (b1, b2) costs gather_(b1) + gather_(b2) + t_b * cut.
  gather_ = Eigen::VectorXd::Zero(tree.node_count());
  const Eigen::VectorXd g1 = cached_distances(m1, m1) * cut_at_one;
  const Eigen::VectorXd g2 = cached_distances(m2, m2) * cut_at_two;
  for (std::size_t k = 0; k < m1.size(); ++k) gather_(m1[k]) = g1(k);
  for (std::size_t k = 0; k < m2.size(); ++k) gather_(m2[k]) = g2(k);
}

double SwapEvaluator::objective_for(Edge edge) const {
  edge = make_edge(edge.first, edge.second);
  const bool first_in_one = side_one_.contains(edge.first);
  const bool second_in_one = side_one_.contains(edge.second);
  if (first_in_one == second_in_one) {
    throw std::invalid_argument("inserted edge does not cross the cut");
  }
  return within_ + gather_(edge.first) + gather_(edge.second) +
         (*link_distances_)(edge.first, edge.second) * cut_demand_;
}

double incremental_swap_objective(const SpanningTree& tree, Edge removed,
                                  Edge inserted,
                                  const Eigen::MatrixXd& cached_distances,
                                  const Eigen::MatrixXd& link_distances,
                                  const Eigen::MatrixXd& demand) {
  return SwapEvaluator(tree, removed, cached_distances, link_distances, demand)
      .objective_for(inserted);
}

LinkFlows link_flows(const SpanningTree& tree, const Eigen::MatrixXd& demand) {
  if (demand.rows() != tree.node_count()) {
    throw std::invalid_argument("demand matrix does not match the tree");
  }
  LinkFlows flows;
  for (const auto& e : tree.edges()) {
    const auto [c1, c2] = split_tree(tree, e);
    const auto& side_i = c1.contains(e.first) ? c1 : c2;
    const auto& side_j = c1.contains(e.first) ? c2 : c1;
    flows[{e.first, e.second}] =
        demand(side_i.members, side_j.members).sum();
    flows[{e.second, e.first}] =
        demand(side_j.members, side_i.members).sum();
  }
  return flows;
}

DetourProfile detour_profile(const Eigen::MatrixXd& pair_distances,
                             const Eigen::MatrixXd& link_distances,
                             const Eigen::MatrixXd& demand,
                             std::vector<double> thresholds) {
  check_same_shape(pair_distances, link_distances);
  check_same_shape(pair_distances, demand);
  std::sort(thresholds.begin(), thresholds.end());

  struct Entry {
    double ratio;
    double demand;
  };
  std::vector<Entry> entries;
  const Eigen::Index n = pair_distances.rows();
  entries.reserve(static_cast<std::size_t>(n) * (n - 1));
  DetourProfile profile;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double direct = link_distances(i, j);
      if (direct == 0.0) {
        ++profile.excluded_pairs;
        continue;
      }
      const double ratio = pair_distances(i, j) / direct;
      entries.push_back({ratio, demand(i, j)});
      profile.max_ratio = std::max(profile.max_ratio, ratio);
      profile.total_demand += demand(i, j);
    }
  }
  profile.pair_count = static_cast<std::int64_t>(entries.size());
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.ratio < b.ratio; });

  profile.thresholds = std::move(thresholds);
  profile.cum_demand_frac.reserve(profile.thresholds.size());
  profile.cum_pair_frac.reserve(profile.thresholds.size());
  std::size_t pos = 0;
  double demand_below = 0.0;
  for (double threshold : profile.thresholds) {
    while (pos < entries.size() && entries[pos].ratio <= threshold) {
      demand_below += entries[pos].demand;
      ++pos;
    }
    profile.cum_demand_frac.push_back(
        profile.total_demand > 0.0 ? demand_below / profile.total_demand : 1.0);
    profile.cum_pair_frac.push_back(
        profile.pair_count > 0
            ? static_cast<double>(pos) / static_cast<double>(profile.pair_count)
            : 1.0);
  }
  return profile;
}

std::vector<double> default_ratio_grid(double max_ratio) {
  std::vector<double> grid;
  for (int k = 10; k <= 30; ++k) grid.push_back(k / 10.0);
  // Extend with coarser steps until the grid covers the largest ratio.
  double step = 0.5;
  while (grid.back() < max_ratio) {
    grid.push_back(grid.back() + step);
    if (grid.back() >= 10.0) step = 2.0;
  }
  return grid;
}

}  // namespace tnd
