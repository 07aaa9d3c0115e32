#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tnd/instance.hpp"
#include "tnd/objective.hpp"
#include "tnd/spanning_tree.hpp"

namespace tnd {

enum class InitMode { Mst, RandomTree, GivenTree };

/// Link Swapping with Tabu Search configuration. Defaults follow the
/// reference hyperparameters: phi = 3000 iterations, psi = 7 removal links
/// per iteration, tabu capacity floor(n/4) (at least 1) unless overridden.
struct SolverConfig {
  std::int64_t phi = 3000;
  int psi = 7;
  std::optional<int> tabu_capacity;  // unset -> max(1, n/4)
  std::uint64_t seed = 0;
  std::optional<double> budget;      // checked post-hoc on the best tree
  InitMode init = InitMode::Mst;
  std::optional<SpanningTree> initial_tree;  // required for GivenTree

  int effective_tabu_capacity(int node_count) const;
};

/// A swapping link pair: the removed tree edge and the inserted edge, both
/// normalized undirected pairs.
struct SwapMove {
  Edge removed;
  Edge inserted;

  friend bool operator==(const SwapMove&, const SwapMove&) = default;
  friend auto operator<=>(const SwapMove&, const SwapMove&) = default;
};

/// Bounded FIFO of recently executed swap pairs. Pushing at capacity evicts
/// the oldest entry; capacity 0 keeps the list permanently empty.
class TabuList {
 public:
  explicit TabuList(int capacity);

  void push(const SwapMove& move);
  bool contains(const SwapMove& move) const;

  int capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  const std::deque<SwapMove>& entries() const { return entries_; }

 private:
  int capacity_;
  std::deque<SwapMove> entries_;
};

struct CandidateSwap {
  SwapMove move;
  double z = 0.0;
};

struct Selection {
  std::size_t index = 0;          // into the candidate list
  bool tabu_hit = false;          // executed move was in the tabu list
  bool all_tabu_fallback = false; // every candidate tabu, none improving
};

/// Selection rule per iteration: the global argmin (ties by lexicographic
/// move) wins outright when it improves best_z, tabu or not (aspiration).
/// Otherwise candidates are scanned in ascending (z, move) order for the
/// first non-tabu one; if all are tabu the overall argmin is executed
/// anyway and flagged. Throws on an empty candidate list.
Selection select_best_non_tabu(std::span<const CandidateSwap> candidates,
                               const TabuList& tabu, double best_z);

struct IterationRecord {
  std::int64_t iteration = 0;  // 1-based
  double current_z = 0.0;
  double best_z = 0.0;
  SwapMove chosen;
  bool tabu_hit = false;
  bool all_tabu_fallback = false;
  std::int64_t candidates_evaluated = 0;
  double elapsed_s = 0.0;
};

struct SolveReport {
  std::string method;
  SpanningTree best_tree;
  double best_z = 0.0;
  double initial_z = 0.0;
  std::vector<IterationRecord> trace;
  double wall_time_s = 0.0;
  std::int64_t iterations = 0;
  SolverConfig config;
  std::vector<std::string> warnings;
};

/// Runs Link Swapping with Tabu Search. Each iteration samples psi distinct
/// tree edges without replacement, evaluates every reconnecting candidate
/// through the cached-distance swap evaluator (identity reinsertions are
/// skipped), moves per select_best_non_tabu, and records the trace.
/// Deterministic for a fixed config including seed.
SolveReport solve(const Instance& instance, const SolverConfig& config);

}  // namespace tnd
