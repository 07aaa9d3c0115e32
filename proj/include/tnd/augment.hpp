#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tnd/instance.hpp"
#include "tnd/spanning_tree.hpp"

namespace tnd {

/// A tree plus greedily added links. z_trace[0] is the objective of the
/// base network; z_trace[k] the objective after the k-th addition.
struct AugmentedNetwork {
  SpanningTree base;
  std::vector<Edge> added;          // in addition order
  std::vector<double> z_trace;
  Eigen::MatrixXd distances;        // all-pairs shortest distances of the current graph
  std::vector<std::string> warnings;

  int alpha() const { return static_cast<int>(added.size()); }
  std::vector<Edge> all_edges() const;
};

/// Objective after adding `candidate` with length `length` to a graph whose
/// exact all-pairs distances are `distances`: each pair improves to the
/// better of routing through either endpoint of the new link. Exact for a
/// single added edge.
double candidate_z(const Eigen::MatrixXd& distances, Edge candidate,
                   double length, const Eigen::MatrixXd& demand);

/// Greedy augmentation: alpha times, add the non-edge minimizing the
/// resulting objective (ties lexicographic) and refresh the distance
/// matrix. alpha larger than the remaining non-edges is clamped with a
/// warning.
AugmentedNetwork augment(const SpanningTree& start, const Instance& instance,
                         int alpha);
AugmentedNetwork augment(AugmentedNetwork start, const Instance& instance,
                         int alpha);

/// td / z per augmentation step; rises toward 1 as links are added.
/// Defined as 1 when both are zero.
std::vector<double> lower_bound_gap_trace(const AugmentedNetwork& network,
                                          double lower_bound);

}  // namespace tnd
