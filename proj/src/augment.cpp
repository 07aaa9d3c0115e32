#include "tnd/augment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tnd/objective.hpp"

namespace tnd {

namespace {

/// In-place distance refresh after committing edge (i, j) with length `len`:
/// the single-edge min-update is exact when `dist` was exact before.
void commit_edge(Eigen::MatrixXd& dist, Edge e, double len) {
  const Eigen::Index n = dist.rows();
  const int i = e.first, j = e.second;
  for (Eigen::Index v = 0; v < n; ++v) {
    for (Eigen::Index u = 0; u < n; ++u) {
      const double through = std::min(dist(u, i) + len + dist(j, v),
                                      dist(u, j) + len + dist(i, v));
      if (through < dist(u, v)) dist(u, v) = through;
    }
  }
}

/// Fresh all-pairs recomputation over the current edge set.
Eigen::MatrixXd full_distances(int n, const std::vector<Edge>& edges,
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

}  // namespace

std::vector<Edge> AugmentedNetwork::all_edges() const {
  std::vector<Edge> out = base.edges();
  out.insert(out.end(), added.begin(), added.end());
  std::sort(out.begin(), out.end());
  return out;
}

double candidate_z(const Eigen::MatrixXd& distances, Edge candidate,
                   double length, const Eigen::MatrixXd& demand) {
  if (length < 0.0) {
    throw std::invalid_argument("candidate edge length must be non-negative");
  }
  if (distances.rows() != demand.rows() || distances.cols() != demand.cols()) {
    throw std::invalid_argument("matrix dimensions differ");
  }
  const Eigen::Index n = distances.rows();
  const int i = make_edge(candidate.first, candidate.second).first;
  const int j = make_edge(candidate.first, candidate.second).second;
  double z = 0.0;
  for (Eigen::Index v = 0; v < n; ++v) {
    for (Eigen::Index u = 0; u < n; ++u) {
      const double through = std::min(distances(u, i) + length + distances(j, v),
                                      distances(u, j) + length + distances(i, v));
      z += demand(u, v) * std::min(distances(u, v), through);
    }
  }
  return z;
}

AugmentedNetwork augment(const SpanningTree& start, const Instance& instance,
                         int alpha) {
  AugmentedNetwork network{start,
                           {},
                           {},
                           tree_pair_distances(start, instance.link_distances()),
                           {}};
  network.z_trace.push_back(objective(network.distances, instance.demand()));
  return augment(std::move(network), instance, alpha);
}

AugmentedNetwork augment(AugmentedNetwork network, const Instance& instance,
                         int alpha) {
  if (alpha < 0) {
    throw std::invalid_argument("alpha must be non-negative");
  }
  const int n = instance.n();
  const Eigen::MatrixXd& t = instance.link_distances();
  const Eigen::MatrixXd& d = instance.demand();
  if (network.z_trace.empty()) {
    network.z_trace.push_back(objective(network.distances, d));
  }

  std::vector<Edge> current = network.all_edges();
  int committed_since_refresh = 0;
  for (int step = 0; step < alpha; ++step) {
    double best_z = std::numeric_limits<double>::infinity();
    Edge best_edge{-1, -1};
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Edge e{i, j};
        if (std::binary_search(current.begin(), current.end(), e)) continue;
        if (!instance.edge_allowed(i, j)) continue;
        const double z = candidate_z(network.distances, e, t(i, j), d);
        if (z < best_z) {  // lexicographic scan order settles ties
          best_z = z;
          best_edge = e;
        }
      }
    }
    if (best_edge.first < 0) {
      network.warnings.push_back("no addable links remain after " +
                                 std::to_string(step) +
                                 " additions; alpha clamped");
      break;
    }
    commit_edge(network.distances, best_edge, t(best_edge.first, best_edge.second));
    if (++committed_since_refresh == 25) {
      // Exact for integer inputs; guards accumulated float drift otherwise.
      committed_since_refresh = 0;
      std::vector<Edge> refreshed = current;
      refreshed.push_back(best_edge);
      std::sort(refreshed.begin(), refreshed.end());
      network.distances = full_distances(n, refreshed, t);
    }
    network.added.push_back(best_edge);
    network.z_trace.push_back(best_z);
    current.insert(std::upper_bound(current.begin(), current.end(), best_edge),
                   best_edge);
  }
  return network;
}

std::vector<double> lower_bound_gap_trace(const AugmentedNetwork& network,
                                          double lower_bound) {
  std::vector<double> ratios;
  ratios.reserve(network.z_trace.size());
  for (double z : network.z_trace) {
    ratios.push_back(z == 0.0 && lower_bound == 0.0 ? 1.0 : lower_bound / z);
  }
  return ratios;
}

}  // namespace tnd
