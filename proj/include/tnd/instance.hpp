#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tnd {

/// Undirected station pair, normalized so that first < second.
using Edge = std::pair<int, int>;

inline Edge make_edge(int i, int j) {
  return i < j ? Edge{i, j} : Edge{j, i};
}

enum class CoordMode { Planar, Geographic };

struct Station {
  int id = 0;          // external id as found in the input files
  std::string name;
  double x = 0.0;      // planar: km east / geographic: latitude (degrees)
  double y = 0.0;      // planar: km north / geographic: longitude (degrees)
};

/// A network design instance: stations, symmetric link distances t (km),
/// directed daily OD demand d, and an optional passenger-km budget.
/// Stations are indexed densely 0..n-1 everywhere in the library; the
/// Station::id field keeps the external id for reports.
class Instance {
 public:
  Instance(std::vector<Station> stations, Eigen::MatrixXd link_distances,
           Eigen::MatrixXd demand, std::optional<double> budget = {},
           CoordMode coord_mode = CoordMode::Planar,
           std::vector<Edge> allowed_edges = {});

  int n() const { return static_cast<int>(stations_.size()); }
  const std::vector<Station>& stations() const { return stations_; }
  const Eigen::MatrixXd& link_distances() const { return link_distances_; }
  const Eigen::MatrixXd& demand() const { return demand_; }
  std::optional<double> budget() const { return budget_; }
  CoordMode coord_mode() const { return coord_mode_; }

  /// Optional candidate-edge whitelist; empty means the complete graph.
  const std::vector<Edge>& allowed_edges() const { return allowed_edges_; }
  bool edge_allowed(int i, int j) const;

  double total_demand() const { return demand_.sum(); }

 private:
  std::vector<Station> stations_;
  Eigen::MatrixXd link_distances_;
  Eigen::MatrixXd demand_;
  std::optional<double> budget_;
  CoordMode coord_mode_;
  std::vector<Edge> allowed_edges_;  // sorted, normalized
};

/// Great-circle distance in km on the mean-radius sphere (R = 6371.0088 km).
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

/// Distance matrix derived from station coordinates: Euclidean for planar,
/// great-circle for geographic.
Eigen::MatrixXd derive_distances(const std::vector<Station>& stations,
                                 CoordMode mode);

}  // namespace tnd
