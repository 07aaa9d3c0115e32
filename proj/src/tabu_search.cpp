#include "tnd/tabu_search.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "tnd/baselines.hpp"
#include "tnd/random.hpp"

namespace tnd {

int SolverConfig::effective_tabu_capacity(int node_count) const {
  if (tabu_capacity.has_value()) return *tabu_capacity;
  return std::max(1, node_count / 4);
}

TabuList::TabuList(int capacity) : capacity_(capacity) {
  if (capacity < 0) {
    throw std::invalid_argument("tabu capacity must be non-negative");
  }
}

void TabuList::push(const SwapMove& move) {
  if (capacity_ == 0) return;
  if (static_cast<int>(entries_.size()) == capacity_) {
    entries_.pop_front();
  }
  entries_.push_back(move);
}

bool TabuList::contains(const SwapMove& move) const {
  return std::find(entries_.begin(), entries_.end(), move) != entries_.end();
}

Selection select_best_non_tabu(std::span<const CandidateSwap> candidates,
                               const TabuList& tabu, double best_z) {
  if (candidates.empty()) {
    throw std::invalid_argument("no candidates to select from");
  }
  const auto better = [&](std::size_t a, std::size_t b) {
    if (candidates[a].z != candidates[b].z) {
      return candidates[a].z < candidates[b].z;
    }
    return candidates[a].move < candidates[b].move;
  };
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (better(i, argmin)) argmin = i;
  }
  if (candidates[argmin].z < best_z) {
    // Aspiration: an improving move executes even when tabu.
    return {argmin, tabu.contains(candidates[argmin].move), false};
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), better);
  for (std::size_t i : order) {
    if (!tabu.contains(candidates[i].move)) {
      return {i, false, false};
    }
  }
  // Every candidate tabu and none improving: move anyway to keep searching.
  return {argmin, true, true};
}

SolveReport solve(const Instance& instance, const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const int n = instance.n();
  if (config.phi < 1) {
    throw std::invalid_argument("phi must be at least 1");
  }
  if (config.psi < 1) {
    throw std::invalid_argument("psi must be at least 1");
  }
  if (config.tabu_capacity.has_value() && *config.tabu_capacity < 0) {
    throw std::invalid_argument("tabu capacity must be non-negative");
  }

  std::vector<std::string> warnings;
  int psi = config.psi;
  if (psi > n - 1) {
    warnings.push_back("psi " + std::to_string(psi) + " exceeds tree size; clamped to " +
                       std::to_string(n - 1));
    psi = n - 1;
  }

  Rng rng(config.seed);
  auto initial = [&]() -> SpanningTree {
    switch (config.init) {
      case InitMode::Mst:
        return mst(instance);
      case InitMode::RandomTree:
        return random_tree(rng, n);
      case InitMode::GivenTree:
        if (!config.initial_tree.has_value()) {
          throw std::invalid_argument("GivenTree init requires an initial tree");
        }
        if (config.initial_tree->node_count() != n) {
          throw std::invalid_argument("initial tree does not match the instance");
        }
        return *config.initial_tree;
    }
    throw std::invalid_argument("unknown init mode");
  }();

  const Eigen::MatrixXd& t = instance.link_distances();
  const Eigen::MatrixXd& d = instance.demand();

  SpanningTree current = initial;
  Eigen::MatrixXd dists = tree_pair_distances(current, t);
  double current_z = objective(dists, d);
  SpanningTree best_tree = current;
  double best_z = current_z;
  const double initial_z = current_z;

  TabuList tabu(config.effective_tabu_capacity(n));
  std::vector<IterationRecord> trace;
  trace.reserve(static_cast<std::size_t>(config.phi));
  std::vector<CandidateSwap> candidates;

  std::int64_t iterations = 0;
  for (std::int64_t it = 0; it < config.phi; ++it) {
    const std::vector<int> picks =
        sample_indices(rng, static_cast<int>(current.edges().size()), psi);
    candidates.clear();
    for (int pick : picks) {
      const Edge removed = current.edges()[pick];
      const SwapEvaluator eval(current, removed, dists, t, d);
      for (const Edge& inserted :
           reconnect_candidates(eval.side_one(), eval.side_two())) {
        if (inserted == removed) continue;  // identity move
        if (!instance.edge_allowed(inserted.first, inserted.second)) continue;
        candidates.push_back({{removed, inserted}, eval.objective_for(inserted)});
      }
    }
    if (candidates.empty()) {
      // n = 2 or a fully restricted whitelist: nothing to explore.
      break;
    }
    const Selection pick = select_best_non_tabu(candidates, tabu, best_z);
    const CandidateSwap& chosen = candidates[pick.index];
    const bool improving = chosen.z < best_z;

    current = apply_swap(current, chosen.move.removed, chosen.move.inserted);
    dists = tree_pair_distances(current, t);
    current_z = chosen.z;
    if (improving) {
      best_z = chosen.z;
      best_tree = current;
    } else {
      tabu.push(chosen.move);
    }
    ++iterations;

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    trace.push_back({it + 1, current_z, best_z, chosen.move, pick.tabu_hit,
                     pick.all_tabu_fallback,
                     static_cast<std::int64_t>(candidates.size()), elapsed});
  }

  // Report the exact objective of the final tree; the incremental values
  // steering the search can drift from it by ulps on float inputs.
  best_z = objective(tree_pair_distances(best_tree, t), d);
  SolveReport report{.method = "tabu",
                     .best_tree = std::move(best_tree),
                     .best_z = best_z,
                     .initial_z = initial_z,
                     .trace = std::move(trace),
                     .wall_time_s = 0.0,
                     .iterations = iterations,
                     .config = config,
                     .warnings = std::move(warnings)};
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace tnd
