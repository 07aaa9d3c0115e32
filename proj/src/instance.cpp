#include "tnd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tnd {

namespace {

void check_matrix(const Eigen::MatrixXd& m, int n, const char* label,
                  bool require_symmetric) {
  if (m.rows() != n || m.cols() != n) {
    throw std::invalid_argument(std::string(label) + " matrix must be " +
                                std::to_string(n) + "x" + std::to_string(n));
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(label) + " matrix has non-finite entries");
  }
  if ((m.array() < 0.0).any()) {
    throw std::invalid_argument(std::string(label) + " matrix has negative entries");
  }
  if ((m.diagonal().array() != 0.0).any()) {
    throw std::invalid_argument(std::string(label) + " matrix has a nonzero diagonal");
  }
  if (require_symmetric && m != m.transpose().eval()) {
    throw std::invalid_argument(std::string(label) + " matrix is not symmetric");
  }
}

}  // namespace

Instance::Instance(std::vector<Station> stations, Eigen::MatrixXd link_distances,
                   Eigen::MatrixXd demand, std::optional<double> budget,
                   CoordMode coord_mode, std::vector<Edge> allowed_edges)
    : stations_(std::move(stations)),
      link_distances_(std::move(link_distances)),
      demand_(std::move(demand)),
      budget_(budget),
      coord_mode_(coord_mode),
      allowed_edges_(std::move(allowed_edges)) {
  const int n = static_cast<int>(stations_.size());
  if (n < 2) {
    throw std::invalid_argument("instance needs at least 2 stations");
  }
  check_matrix(link_distances_, n, "link distance", /*require_symmetric=*/true);
  check_matrix(demand_, n, "demand", /*require_symmetric=*/false);
  for (auto& e : allowed_edges_) {
    if (e.first == e.second || e.first < 0 || e.second >= n || e.second < 0 ||
        e.first >= n) {
      throw std::invalid_argument("whitelist edge out of range");
    }
    e = make_edge(e.first, e.second);
  }
  std::sort(allowed_edges_.begin(), allowed_edges_.end());
  allowed_edges_.erase(std::unique(allowed_edges_.begin(), allowed_edges_.end()),
                       allowed_edges_.end());
}

bool Instance::edge_allowed(int i, int j) const {
  if (allowed_edges_.empty()) return true;
  return std::binary_search(allowed_edges_.begin(), allowed_edges_.end(),
                            make_edge(i, j));
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double deg = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * deg;
  const double dlon = (lon2 - lon1) * deg;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * deg) * std::cos(lat2 * deg) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

Eigen::MatrixXd derive_distances(const std::vector<Station>& stations,
                                 CoordMode mode) {
  const int n = static_cast<int>(stations.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double km = 0.0;
      if (mode == CoordMode::Planar) {
        km = std::hypot(stations[i].x - stations[j].x,
                        stations[i].y - stations[j].y);
      } else {
        km = great_circle_km(stations[i].x, stations[i].y, stations[j].x,
                             stations[j].y);
      }
      t(i, j) = km;
      t(j, i) = km;
    }
  }
  return t;
}

}  // namespace tnd
