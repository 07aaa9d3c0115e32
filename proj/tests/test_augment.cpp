#include <doctest.h>

#include <algorithm>

#include "test_support.hpp"
#include "tnd/augment.hpp"
#include "tnd/objective.hpp"

using namespace tnd;
using namespace tnd::testing;

TEST_CASE("candidate_z evaluates a single added edge exactly") {
  const Instance inst = inst3();
  const SpanningTree tree(3, {{1, 2}, {0, 2}});
  const Eigen::MatrixXd c = tree_pair_distances(tree, inst.link_distances());

  CHECK(candidate_z(c, {0, 1}, 1.0, inst.demand()) == 50.0);

  // A dominated edge (not shorter than the existing path) changes nothing.
  CHECK(candidate_z(c, {0, 1}, 5.0, inst.demand()) ==
        objective(c, inst.demand()));
  CHECK(candidate_z(c, {0, 1}, 7.0, inst.demand()) ==
        objective(c, inst.demand()));

  CHECK_THROWS_AS(candidate_z(c, {0, 1}, -1.0, inst.demand()),
                  std::invalid_argument);
}

TEST_CASE("candidate_z matches a fresh all-pairs recomputation") {
  Rng rng(179);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + static_cast<int>(uniform_below(rng, 12));
    const Eigen::MatrixXd t = random_integer_distances(rng, n, 60);
    const Eigen::MatrixXd d = random_integer_demand(rng, n, 40);
    // Random connected graph: a tree plus a few extra edges.
    const SpanningTree tree = random_tree(rng, n);
    std::vector<Edge> edges = tree.edges();
    for (int extra = 0; extra < 3; ++extra) {
      const int i = static_cast<int>(uniform_below(rng, n));
      const int j = static_cast<int>(uniform_below(rng, n));
      if (i == j) continue;
      const Edge e = make_edge(i, j);
      if (std::find(edges.begin(), edges.end(), e) == edges.end()) {
        edges.push_back(e);
      }
    }
    const Eigen::MatrixXd dist = fw_distances(n, edges, t);
    // Pick a non-edge candidate.
    Edge cand{-1, -1};
    for (int i = 0; i < n && cand.first < 0; ++i) {
      for (int j = i + 1; j < n && cand.first < 0; ++j) {
        if (std::find(edges.begin(), edges.end(), Edge{i, j}) == edges.end()) {
          cand = {i, j};
        }
      }
    }
    if (cand.first < 0) continue;  // dense instance, nothing to add

    const double fast = candidate_z(dist, cand, t(cand.first, cand.second), d);
    std::vector<Edge> with = edges;
    with.push_back(cand);
    const double full = objective(fw_distances(n, with, t), d);
    CHECK(fast == full);  // exact on integer inputs
  }
}

TEST_CASE("greedy augmentation: INST3 reaches the lower bound in one step") {
  const Instance inst = inst3();
  const SpanningTree start(3, {{1, 2}, {0, 2}});
  const AugmentedNetwork net = augment(start, inst, 1);
  CHECK(net.added == std::vector<Edge>{{0, 1}});
  CHECK(net.z_trace == std::vector<double>{130.0, 50.0});
  const double td =
      demand_weighted_lower_bound(inst.demand(), inst.link_distances());
  CHECK(net.z_trace.back() == td);

  SUBCASE("alpha = 0 returns the input unchanged") {
    const AugmentedNetwork none = augment(start, inst, 0);
    CHECK(none.added.empty());
    CHECK(none.z_trace == std::vector<double>{130.0});
  }
  SUBCASE("gap trace ratios") {
    const auto gaps = lower_bound_gap_trace(net, td);
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0] == doctest::Approx(50.0 / 130.0));
    CHECK(gaps[1] == 1.0);
  }
  SUBCASE("a tree already at td starts the trace at 1.0") {
    const AugmentedNetwork at_bound =
        augment(SpanningTree(3, {{0, 1}, {1, 2}}), inst, 0);
    CHECK(lower_bound_gap_trace(at_bound, td).front() == 1.0);
  }
  SUBCASE("zero demand defines the ratio as 1") {
    const Instance empty = make_instance(inst.link_distances(),
                                         Eigen::MatrixXd::Zero(3, 3));
    const AugmentedNetwork none =
        augment(SpanningTree(3, {{0, 1}, {1, 2}}), empty, 0);
    CHECK(lower_bound_gap_trace(none, 0.0).front() == 1.0);
  }
}

TEST_CASE("augmenting to the complete metric graph meets td exactly") {
  Rng rng(181);
  const int n = 8;
  const Eigen::MatrixXd t = random_l1_metric(rng, n);
  const Eigen::MatrixXd d = random_integer_demand(rng, n, 30);
  const Instance inst = make_instance(t, d);
  const SpanningTree start = random_tree(rng, n);

  const int non_edges = n * (n - 1) / 2 - (n - 1);
  const AugmentedNetwork net = augment(start, inst, non_edges);
  CHECK(net.alpha() == non_edges);
  CHECK(net.z_trace.back() == demand_weighted_lower_bound(d, t));

  // Monotone: adding an edge never lengthens any shortest path.
  for (std::size_t k = 1; k < net.z_trace.size(); ++k) {
    CHECK(net.z_trace[k] <= net.z_trace[k - 1]);
  }
  const auto gaps =
      lower_bound_gap_trace(net, demand_weighted_lower_bound(d, t));
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    CHECK(gaps[k] > 0.0);
    CHECK(gaps[k] <= 1.0);
    if (k > 0) CHECK(gaps[k] >= gaps[k - 1]);
  }
  CHECK(gaps.back() == 1.0);

  SUBCASE("alpha beyond the remaining non-edges clamps with a warning") {
    const AugmentedNetwork over = augment(start, inst, non_edges + 5);
    CHECK(over.alpha() == non_edges);
    REQUIRE(!over.warnings.empty());
    CHECK(over.warnings[0].find("clamped") != std::string::npos);
  }
}

TEST_CASE("each augmentation step dominates the previous detour curve") {
  Rng rng(191);
  const int n = 10;
  const Eigen::MatrixXd t = random_l1_metric(rng, n);
  const Eigen::MatrixXd d = random_integer_demand(rng, n, 50);
  const Instance inst = make_instance(t, d);

  AugmentedNetwork net = augment(random_tree(rng, n), inst, 0);
  const std::vector<double> grid = default_ratio_grid(50.0);
  DetourProfile prev = detour_profile(net.distances, t, d, grid);
  for (int step = 0; step < 6; ++step) {
    net = augment(std::move(net), inst, 1);
    const DetourProfile cur = detour_profile(net.distances, t, d, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(cur.cum_demand_frac[k] >= prev.cum_demand_frac[k]);
    }
    prev = cur;
  }
}

TEST_CASE("distance refresh after 25 commits stays consistent") {
  Rng rng(193);
  const int n = 10;  // 45 pairs, so a full augmentation crosses the refresh
  const Eigen::MatrixXd t = random_integer_distances(rng, n, 40);
  const Eigen::MatrixXd d = random_integer_demand(rng, n, 20);
  const Instance inst = make_instance(t, d);
  const SpanningTree start = random_tree(rng, n);
  const int non_edges = n * (n - 1) / 2 - (n - 1);

  const AugmentedNetwork net = augment(start, inst, non_edges);
  const Eigen::MatrixXd ref = fw_distances(n, net.all_edges(), t);
  CHECK(net.distances == ref);
  CHECK(net.z_trace.back() == objective(ref, d));
}

TEST_CASE("whitelisted instances only augment allowed links") {
  Eigen::MatrixXd t(4, 4);
  t << 0, 1, 2, 3,
       1, 0, 1, 2,
       2, 1, 0, 1,
       3, 2, 1, 0;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(4, 4, 5.0);
  d.diagonal().setZero();
  std::vector<Station> stations;
  for (int i = 0; i < 4; ++i) stations.push_back({i, "s", 0, 0});
  const Instance inst(stations, t, d, {}, CoordMode::Planar,
                      {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
  const SpanningTree start(4, {{0, 1}, {1, 2}, {2, 3}});
  const AugmentedNetwork net = augment(start, inst, 3);
  CHECK(net.alpha() == 1);  // only (0,2) was addable
  CHECK(net.added == std::vector<Edge>{{0, 2}});
}
