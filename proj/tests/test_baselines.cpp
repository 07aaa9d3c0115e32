#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "tnd/baselines.hpp"
#include "tnd/objective.hpp"

using namespace tnd;
using namespace tnd::testing;

TEST_CASE("mst and mdst on INST3") {
  const Instance inst = inst3();
  const SpanningTree min_dist = mst(inst);
  CHECK(min_dist.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  double length = 0.0;
  for (const auto& [i, j] : min_dist.edges()) {
    length += inst.link_distances()(i, j);
  }
  CHECK(length == 3.0);
  CHECK(objective(tree_pair_distances(min_dist, inst.link_distances()),
                  inst.demand()) == 50.0);

  const SpanningTree max_dem = mdst(inst);
  CHECK(max_dem.edges() == std::vector<Edge>{{0, 1}, {0, 2}});
  CHECK(objective(tree_pair_distances(max_dem, inst.link_distances()),
                  inst.demand()) == 50.0);
}

TEST_CASE("mdst equals kruskal on negated undirected demand") {
  Rng rng(131);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(uniform_below(rng, 10));
    const Instance inst = make_instance(random_integer_distances(rng, n, 30),
                                        random_integer_demand(rng, n, 30));
    const Eigen::MatrixXd neg =
        (-(inst.demand() + inst.demand().transpose())).eval();
    CHECK(mdst(inst).edges() == kruskal(n, neg).edges());
  }
}

TEST_CASE("mdst with zero demand falls back to the lexicographic tie tree") {
  const Instance inst =
      make_instance(inst3().link_distances(), Eigen::MatrixXd::Zero(3, 3));
  CHECK(mdst(inst).edges() == std::vector<Edge>{{0, 1}, {0, 2}});
}

TEST_CASE("two-station instances are trivial for every method") {
  Eigen::MatrixXd t(2, 2), d(2, 2);
  t << 0, 5, 5, 0;
  d << 0, 3, 4, 0;
  const Instance inst = make_instance(t, d);
  CHECK(mst(inst).edges() == std::vector<Edge>{{0, 1}});
  const BruteForceResult exact = brute_force_optimum(inst);
  CHECK(exact.tree.edges() == std::vector<Edge>{{0, 1}});
  CHECK(exact.z == 35.0);  // (3 + 4) * 5
  CHECK(exact.trees_enumerated == 1);
  const SolveReport deletion = heuristic_link_deletion(inst);
  CHECK(deletion.iterations == 0);
  CHECK(deletion.best_z == 35.0);
}

TEST_CASE("brute force enumerates, guards size, and breaks ties") {
  const Instance inst = inst3();
  const BruteForceResult result = brute_force_optimum(inst);
  CHECK(result.z == 50.0);
  CHECK(result.trees_enumerated == 3);
  // Both {(0,1),(0,2)} and {(0,1),(1,2)} reach 50; smaller edge list wins.
  CHECK(result.tree.edges() == std::vector<Edge>{{0, 1}, {0, 2}});

  SUBCASE("n = 4 with unit distances matches direct enumeration") {
    Rng rng(139);
    Eigen::MatrixXd t = Eigen::MatrixXd::Constant(4, 4, 1.0);
    t.diagonal().setZero();
    const Eigen::MatrixXd d = random_integer_demand(rng, 4, 20);
    const Instance unit = make_instance(t, d);
    double best = 1e18;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const SpanningTree tree = prufer_decode({a, b});
        best = std::min(best, objective(tree_pair_distances(tree, t), d));
      }
    }
    const BruteForceResult r = brute_force_optimum(unit);
    CHECK(r.z == best);
    CHECK(r.trees_enumerated == 16);
  }
  SUBCASE("size guard") {
    Rng rng(149);
    const int n = 9;
    const Instance big = make_instance(random_integer_distances(rng, n, 10),
                                       random_integer_demand(rng, n, 10));
    CHECK_THROWS_AS(brute_force_optimum(big), std::invalid_argument);
  }
}

TEST_CASE("brute force is never beaten by the other methods") {
  Rng rng(151);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 5 + static_cast<int>(uniform_below(rng, 3));
    const Instance inst = make_instance(random_l1_metric(rng, n),
                                        random_integer_demand(rng, n, 40));
    const double exact = brute_force_optimum(inst).z;
    const auto z_of = [&](const SpanningTree& tree) {
      return objective(tree_pair_distances(tree, inst.link_distances()),
                       inst.demand());
    };
    CHECK(exact <= z_of(mst(inst)));
    CHECK(exact <= z_of(mdst(inst)));
    CHECK(exact <= heuristic_link_swapping(inst).best_z);
    CHECK(exact <= heuristic_link_deletion(inst).best_z);
  }
}

TEST_CASE("link swapping baseline visits each pair once") {
  const Instance inst = inst3();
  SUBCASE("already optimal MST is left unchanged") {
    const SolveReport report = heuristic_link_swapping(inst);
    CHECK(report.best_z == 50.0);
    CHECK(report.iterations == 3);  // n(n-1)/2
    CHECK(report.best_tree.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  }
  SUBCASE("a poor start is repaired on the first visited pair") {
    const SolveReport report = heuristic_link_swapping(
        inst, 0, SpanningTree(3, {{1, 2}, {0, 2}}));
    CHECK(report.initial_z == 130.0);
    CHECK(report.best_z == 50.0);
    REQUIRE(!report.trace.empty());
    CHECK(report.trace[0].current_z == 50.0);  // pair (0,1) fixes it
    CHECK(report.trace[0].chosen.inserted == Edge{0, 1});
  }
  SUBCASE("iteration cap truncates the sweep") {
    const SolveReport report = heuristic_link_swapping(inst, 2);
    CHECK(report.iterations == 2);
    const SolveReport full = heuristic_link_swapping(inst, 3000);
    CHECK(full.iterations == 3);  // forced down to n(n-1)/2
  }
}

TEST_CASE("link swapping trace never increases") {
  Rng rng(163);
  const int n = 9;
  const Instance inst = make_instance(random_l1_metric(rng, n),
                                      random_integer_demand(rng, n, 50));
  const SolveReport report = heuristic_link_swapping(inst);
  CHECK(report.iterations == n * (n - 1) / 2);
  for (std::size_t k = 1; k < report.trace.size(); ++k) {
    CHECK(report.trace[k].current_z <= report.trace[k - 1].current_z);
  }
  CHECK(report.best_z <= report.initial_z);
}

TEST_CASE("link deletion reduces the complete graph to a tree") {
  const Instance inst = inst3();
  const SolveReport report = heuristic_link_deletion(inst);
  // Deleting (0,2) or (1,2) both leave z = 50; the tie picks (0,2).
  CHECK(report.best_tree.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(report.best_z == 50.0);
  CHECK(report.iterations == 1);
  REQUIRE(report.trace.size() == 1);
  CHECK(report.trace[0].chosen.removed == Edge{0, 2});

  Rng rng(167);
  const int n = 6;
  const Instance bigger = make_instance(random_l1_metric(rng, n),
                                        random_integer_demand(rng, n, 30));
  const SolveReport r = heuristic_link_deletion(bigger);
  CHECK(r.iterations == n * (n - 1) / 2 - (n - 1));
  CHECK(r.best_tree.node_count() == n);  // constructor re-validated the tree
  CHECK(r.best_z ==
        objective(tree_pair_distances(r.best_tree, bigger.link_distances()),
                  bigger.demand()));
}

TEST_CASE("compare assembles rows and percentage deltas") {
  const Instance inst = inst3();
  SUBCASE("mst vs mdst tie on INST3") {
    const CompareReport report = compare(inst, {"mst", "mdst"}, {});
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].z == 50.0);
    CHECK(report.rows[1].z == 50.0);
    CHECK(report.delta_pct(0, 1) == 0.0);
  }
  SUBCASE("single method has no deltas") {
    const CompareReport report = compare(inst, {"mst"}, {});
    CHECK(report.rows.size() == 1);
    CHECK(report.delta_pct.rows() == 1);
    CHECK(report.delta_pct(0, 0) == 0.0);
  }
  SUBCASE("all methods agree on INST3") {
    SolverConfig config;
    config.phi = 40;
    config.psi = 2;
    const CompareReport report =
        compare(inst, {"mst", "mdst", "tabu", "swap", "delete", "brute"},
                config);
    for (const auto& row : report.rows) CHECK(row.z == 50.0);
    CHECK(report.rows[3].method.find("reimplemented") != std::string::npos);
    CHECK(report.rows[4].method.find("reimplemented") != std::string::npos);
  }
  SUBCASE("unknown method is rejected") {
    CHECK_THROWS_AS(compare(inst, {"annealing"}, {}), std::invalid_argument);
  }
}

TEST_CASE("deltas follow (z_b - z_a) / z_a") {
  Rng rng(173);
  const int n = 7;
  const Instance inst = make_instance(random_l1_metric(rng, n),
                                      random_integer_demand(rng, n, 60));
  SolverConfig config;
  config.phi = 150;
  config.psi = 3;
  const CompareReport report = compare(inst, {"mst", "tabu"}, config);
  const double za = report.rows[0].z, zb = report.rows[1].z;
  CHECK(report.delta_pct(0, 1) == doctest::Approx(100.0 * (zb - za) / za));
  CHECK(report.delta_pct(1, 0) == doctest::Approx(100.0 * (za - zb) / zb));
}
