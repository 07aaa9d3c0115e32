#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_support.hpp"
#include "tnd/spanning_tree.hpp"

using namespace tnd;
using namespace tnd::testing;

TEST_CASE("spanning tree constructor validates the invariants") {
  CHECK_NOTHROW(SpanningTree(3, {{0, 1}, {1, 2}}));
  CHECK_THROWS_AS(SpanningTree(3, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SpanningTree(4, {{0, 1}, {0, 1}, {2, 3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpanningTree(4, {{0, 1}, {1, 2}, {0, 2}}),  // cycle + isolated
                  std::invalid_argument);
  CHECK_THROWS_AS(SpanningTree(3, {{0, 1}, {1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(SpanningTree(3, {{0, 1}, {2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(SpanningTree(1, {}), std::invalid_argument);

  const SpanningTree t(3, {{2, 1}, {1, 0}});  // normalization + sorting
  CHECK(t.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(t.has_edge({2, 1}));
  CHECK_FALSE(t.has_edge({0, 2}));
}

TEST_CASE("kruskal picks the minimum-weight tree deterministically") {
  const Instance inst = inst3();

  // Oracle: evaluate all three labeled trees on 3 nodes by hand.
  double best = 1e18;
  std::vector<Edge> best_edges;
  for (const auto& edges : all_trees_3()) {
    double w = 0;
    for (const auto& [i, j] : edges) w += inst.link_distances()(i, j);
    if (w < best) {
      best = w;
      best_edges = edges;
    }
  }
  CHECK(best == 3.0);
  CHECK(best_edges == std::vector<Edge>{{0, 1}, {1, 2}});

  const SpanningTree tree = kruskal(3, inst.link_distances());
  CHECK(tree.edges() == best_edges);

  SUBCASE("two nodes") {
    Eigen::MatrixXd w(2, 2);
    w << 0, 5, 5, 0;
    CHECK(kruskal(2, w).edges() == std::vector<Edge>{{0, 1}});
  }
  SUBCASE("negated demand weights maximize demand") {
    const Eigen::MatrixXd neg =
        (-(inst.demand() + inst.demand().transpose())).eval();
    CHECK(kruskal(3, neg).edges() == std::vector<Edge>{{0, 1}, {0, 2}});
  }
  SUBCASE("n below 2 is rejected") {
    Eigen::MatrixXd w(1, 1);
    w << 0;
    CHECK_THROWS_AS(kruskal(1, w), std::invalid_argument);
  }
  SUBCASE("restricted edge universe") {
    const SpanningTree t =
        kruskal(3, inst.link_distances(), {{0, 2}, {1, 2}});
    CHECK(t.edges() == std::vector<Edge>{{0, 2}, {1, 2}});
    CHECK_THROWS_AS(kruskal(3, inst.link_distances(), {{0, 1}}),
                    std::invalid_argument);
  }
}

TEST_CASE("split_tree partitions with the documented ordering") {
  const SpanningTree path(4, {{0, 1}, {1, 2}, {2, 3}});
  auto [a, b] = split_tree(path, {1, 2});
  CHECK(a.members == std::vector<int>{0, 1});
  CHECK(b.members == std::vector<int>{2, 3});

  const SpanningTree star(4, {{0, 1}, {0, 2}, {0, 3}});
  auto [sa, sb] = split_tree(star, {0, 1});
  CHECK(sa.members == std::vector<int>{1});  // smaller side first
  CHECK(sb.members == std::vector<int>{0, 2, 3});

  const SpanningTree t3(3, {{0, 1}, {1, 2}});
  auto [ca, cb] = split_tree(t3, {0, 1});
  CHECK(ca.members == std::vector<int>{0});
  CHECK(cb.members == std::vector<int>{1, 2});

  CHECK_THROWS_AS(split_tree(t3, {0, 2}), std::invalid_argument);
}

TEST_CASE("split components cover the tree and induce subtrees") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 20));
    const SpanningTree tree = random_tree(rng, n);
    for (const Edge& e : tree.edges()) {
      const auto [c1, c2] = split_tree(tree, e);
      CHECK(c1.size() + c2.size() == n);
      CHECK(c1.size() <= c2.size());
      for (const Component* comp : {&c1, &c2}) {
        int within = 0;
        for (const Edge& f : tree.edges()) {
          if (comp->contains(f.first) && comp->contains(f.second)) ++within;
        }
        CHECK(within == comp->size() - 1);  // each side is itself a tree
      }
      for (int v : c1.members) CHECK_FALSE(c2.contains(v));
    }
  }
}

TEST_CASE("reconnect_candidates enumerates the full cut") {
  const Component c1{{0, 1}}, c2{{2, 3}};
  CHECK(reconnect_candidates(c1, c2) ==
        std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK(reconnect_candidates({{1}}, {{0, 2, 3}}) ==
        std::vector<Edge>{{0, 1}, {1, 2}, {1, 3}});
  CHECK_THROWS_AS(reconnect_candidates({{0, 1}}, {{1, 2}}),
                  std::invalid_argument);

  // A balanced cut of n=4 attains the maximum floor(n/2)*ceil(n/2).
  const SpanningTree path(4, {{0, 1}, {1, 2}, {2, 3}});
  std::size_t max_k = 0;
  for (const Edge& e : path.edges()) {
    const auto [a, b] = split_tree(path, e);
    max_k = std::max(max_k, reconnect_candidates(a, b).size());
  }
  CHECK(max_k == 4);
}

TEST_CASE("apply_swap rebuilds a valid tree and keeps the input intact") {
  const SpanningTree path(4, {{0, 1}, {1, 2}, {2, 3}});
  const SpanningTree swapped = apply_swap(path, {1, 2}, {0, 3});
  CHECK(swapped.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {2, 3}});
  CHECK(path.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});

  CHECK(apply_swap(path, {1, 2}, {1, 2}).edges() == path.edges());
  CHECK_THROWS_AS(apply_swap(path, {1, 2}, {0, 1}), std::invalid_argument);
}

TEST_CASE("random swaps always produce valid spanning trees") {
  Rng rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 30));
    const SpanningTree tree = random_tree(rng, n);
    const Edge removed =
        tree.edges()[uniform_below(rng, tree.edges().size())];
    const auto [c1, c2] = split_tree(tree, removed);
    const auto candidates = reconnect_candidates(c1, c2);
    const Edge inserted = candidates[uniform_below(rng, candidates.size())];
    // The SpanningTree constructor re-validates count, range, connectivity.
    const SpanningTree next = apply_swap(tree, removed, inserted);
    CHECK(next.node_count() == n);
    CHECK(next.has_edge(inserted));
  }
}

TEST_CASE("tree_pair_distances sums the unique path") {
  const Instance inst = inst3();
  const SpanningTree chain(3, {{0, 1}, {1, 2}});
  const Eigen::MatrixXd c = tree_pair_distances(chain, inst.link_distances());
  CHECK(c(0, 1) == 1.0);
  CHECK(c(1, 2) == 2.0);
  CHECK(c(0, 2) == 3.0);
  CHECK(c(2, 0) == 3.0);
  CHECK(c.diagonal().isZero());

  const SpanningTree other(3, {{1, 2}, {0, 2}});
  CHECK(tree_pair_distances(other, inst.link_distances())(0, 1) == 5.0);
}

TEST_CASE("tree_pair_distances agrees with a shortest-path oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 15));
    const Eigen::MatrixXd t = random_integer_distances(rng, n, 50);
    const SpanningTree tree = random_tree(rng, n);
    const Eigen::MatrixXd c = tree_pair_distances(tree, t);
    const Eigen::MatrixXd ref = fw_distances(n, tree.edges(), t);
    CHECK(c == ref);
    for (const auto& [i, j] : tree.edges()) CHECK(c(i, j) == t(i, j));
  }
}

TEST_CASE("count_swap_pairs matches the split-size formula") {
  CHECK(count_swap_pairs(SpanningTree(4, {{0, 1}, {1, 2}, {2, 3}})) == 10);
  CHECK(count_swap_pairs(SpanningTree(3, {{0, 1}, {1, 2}})) == 4);
  CHECK(count_swap_pairs(SpanningTree(4, {{0, 1}, {0, 2}, {0, 3}})) == 9);

  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 28));
    const SpanningTree tree = random_tree(rng, n);
    std::int64_t total = 0;
    for (const Edge& e : tree.edges()) {
      const auto [a, b] = split_tree(tree, e);
      total += static_cast<std::int64_t>(a.size()) * b.size();
    }
    CHECK(total == count_swap_pairs(tree));
  }
}

TEST_CASE("prufer codec is a bijection") {
  CHECK(prufer_decode({0, 0}).edges() ==
        std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(prufer_decode({}).edges() == std::vector<Edge>{{0, 1}});
  CHECK_THROWS_AS(prufer_decode({0, 4}), std::invalid_argument);
  CHECK_THROWS_AS(prufer_decode({-1, 0}), std::invalid_argument);

  SUBCASE("n=4: all 16 sequences give 16 distinct trees") {
    std::set<std::vector<Edge>> seen;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        seen.insert(prufer_decode({a, b}).edges());
      }
    }
    CHECK(seen.size() == 16);
  }
  SUBCASE("n=5 exhaustive round trip") {
    std::set<std::vector<Edge>> seen;
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) {
        for (int c = 0; c < 5; ++c) {
          const std::vector<int> seq{a, b, c};
          const SpanningTree tree = prufer_decode(seq);
          CHECK(prufer_encode(tree) == seq);
          seen.insert(tree.edges());
        }
      }
    }
    CHECK(seen.size() == 125);  // 5^3 labeled trees
  }
}
