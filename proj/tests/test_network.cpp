#include <aclag/network.hpp>
#include <aclag/synthetic.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

using namespace aclag;

namespace {

std::vector<std::string> names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back("S" + std::to_string(k));
    return out;
}

DistanceMatrix from_grid(const oracle::Grid& g) {
    DistanceMatrix m(names(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) m.set(i, j, g[i][j]);
    }
    return m;
}

oracle::Grid random_grid(std::size_t n, std::mt19937_64& rng, bool integer_weights) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::uniform_int_distribution<int> k(1, 4);
    oracle::Grid g(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) g[i][j] = g[j][i] = integer_weights ? k(rng) : u(rng);
    }
    return g;
}

MSTree tree_from(std::size_t n, std::vector<Edge> edges) { return MSTree{n, std::move(edges)}; }

}  // namespace

TEST(Mst, ThreeNodeExample) {
    DistanceMatrix m(names(3));
    m.set(0, 1, 1.0);
    m.set(0, 2, 2.0);
    m.set(1, 2, 3.0);
    const auto t = minimum_spanning_tree(m);
    ASSERT_EQ(t.edges.size(), 2u);
    EXPECT_EQ(t.edges[0], (Edge{0, 1, 1.0}));
    EXPECT_EQ(t.edges[1], (Edge{0, 2, 2.0}));
    EXPECT_DOUBLE_EQ(t.total_weight(), 3.0);
}

TEST(Mst, EqualWeightsPickSmallestEdges) {
    DistanceMatrix m(names(4));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) m.set(i, j, 1.0);
    }
    const auto t = minimum_spanning_tree(m);
    EXPECT_EQ(t.edges, (std::vector<Edge>{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}));
}

TEST(Mst, MatchesExhaustiveOracle) {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
        const auto g = random_grid(n, rng, rep % 2 == 0);
        const auto t = minimum_spanning_tree(from_grid(g));
        EXPECT_EQ(t.edges.size(), n - 1);
        EXPECT_NEAR(t.total_weight(), oracle::min_spanning_weight(g), 1e-12);
    }
}

TEST(Mst, ShiftInvariantEdgeSet) {
    std::mt19937_64 rng(4);
    const auto g = random_grid(7, rng, false);
    auto shifted = g;
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            if (i != j) shifted[i][j] += 0.5;
        }
    }
    const auto a = from_grid(g), b = from_grid(shifted);
    const auto ta = minimum_spanning_tree(a), tb = minimum_spanning_tree(b);
    ASSERT_EQ(ta.edges.size(), tb.edges.size());
    for (std::size_t k = 0; k < ta.edges.size(); ++k) {
        EXPECT_EQ(ta.edges[k].i, tb.edges[k].i);
        EXPECT_EQ(ta.edges[k].j, tb.edges[k].j);
    }
    EXPECT_NEAR(network_metrics(b, tb).mean_dissimilarity, network_metrics(a, ta).mean_dissimilarity + 0.5, 1e-12);
}

TEST(Mst, RelabelingPermutesEdges) {
    std::mt19937_64 rng(6);
    const auto g = random_grid(6, rng, false);
    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    oracle::Grid h(6, std::vector<double>(6));
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) h[perm[i]][perm[j]] = g[i][j];
    }
    std::set<std::pair<std::size_t, std::size_t>> mapped, direct;
    for (const auto& e : minimum_spanning_tree(from_grid(g)).edges) {
        mapped.emplace(std::min(perm[e.i], perm[e.j]), std::max(perm[e.i], perm[e.j]));
    }
    for (const auto& e : minimum_spanning_tree(from_grid(h)).edges) direct.emplace(e.i, e.j);
    EXPECT_EQ(mapped, direct);
}

TEST(Metrics, TwoNodes) {
    DistanceMatrix m(names(2));
    m.set(0, 1, 0.7);
    const auto met = network_metrics(m, minimum_spanning_tree(m));
    EXPECT_DOUBLE_EQ(met.mean_dissimilarity, 0.7);
    EXPECT_DOUBLE_EQ(met.normalized_tree_length, 0.7);
    EXPECT_DOUBLE_EQ(met.characterized_path_length, 0.7);
    EXPECT_EQ(met.non_leaf_nodes, 0u);
}

TEST(Metrics, StarAndPathNonLeafCounts) {
    DistanceMatrix m(names(5));
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) m.set(i, j, 1.0);
    }
    const auto star = tree_from(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}});
    const auto path = tree_from(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
    EXPECT_EQ(network_metrics(m, star).non_leaf_nodes, 1u);
    EXPECT_EQ(network_metrics(m, path).non_leaf_nodes, 3u);
    // path tree: ordered distances sum to 2 * (4*1 + 3*2 + 2*3 + 1*4) over 20 pairs
    EXPECT_DOUBLE_EQ(network_metrics(m, path).characterized_path_length, 40.0 / 20.0);
    EXPECT_DOUBLE_EQ(network_metrics(m, path, PathLengthMode::FullGraph).characterized_path_length, 1.0);
}

TEST(Metrics, PathLengthMatchesOracle) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        const auto g = random_grid(n, rng, false);
        const auto m = from_grid(g);
        const auto t = minimum_spanning_tree(m);
        oracle::Edges edges;
        for (const auto& e : t.edges) edges.emplace_back(e.i, e.j);
        const auto met = network_metrics(m, t);
        const double pairs = static_cast<double>(n * (n - 1));
        EXPECT_NEAR(met.characterized_path_length, oracle::ordered_tree_path_sum(edges, g) / pairs, 1e-9);
        EXPECT_NEAR(met.normalized_tree_length * static_cast<double>(n - 1), t.total_weight(), 1e-12);
        if (n >= 3) {
            EXPECT_GE(met.non_leaf_nodes, 1u);
            EXPECT_LE(met.non_leaf_nodes, n - 2);
        }
    }
}

TEST(TriangleAudit, CountsViolatingTriples) {
    DistanceMatrix eq(names(4));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) eq.set(i, j, 1.0);
    }
    const auto ok = triangle_audit(eq);
    EXPECT_EQ(ok.triples_checked, 4u);
    EXPECT_EQ(ok.violations, 0u);
    EXPECT_FALSE(ok.worst.has_value());

    DistanceMatrix bad(names(3));
    bad.set(0, 1, 1.0);
    bad.set(0, 2, 3.0);
    bad.set(1, 2, 1.0);
    const auto a = triangle_audit(bad);
    EXPECT_EQ(a.violations, 1u);
    ASSERT_TRUE(a.worst.has_value());
    EXPECT_EQ(*a.worst, (std::array<std::size_t, 3>{0, 1, 2}));
    EXPECT_DOUBLE_EQ(a.worst_excess, 1.0);
}

TEST(DistanceMatrix, IdenticalSeriesAndSymmetry) {
    const auto x = normalize(gen_ar1(120, 0.6, 1.0, 1));
    const auto m = build_distance_matrix({x, x, x});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), 0.0);
    }
    const auto y = normalize(gen_ar1(120, 0.6, 1.0, 2));
    const auto two = build_distance_matrix({x, y});
    EXPECT_EQ(two(0, 1), two(1, 0));
    EXPECT_EQ(two.pair_stats.size(), 1u);
    EXPECT_THROW((void)build_distance_matrix({x}), Error);
}

TEST(DistanceMatrix, ThreadCountDoesNotChangeResult) {
    std::vector<TimeSeries> panel;
    for (std::uint64_t s = 1; s <= 6; ++s) panel.push_back(normalize(gen_ar1(110, 0.6, 1.0, s)));
    const auto one = build_distance_matrix(panel, {}, 1);
    const auto four = build_distance_matrix(panel, {}, 4);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(one(i, j), four(i, j));
    }
}

TEST(DistanceMatrix, FailingPairIsNamed) {
    const auto x = normalize(gen_ar1(30, 0.6, 1.0, 1));
    const auto y = normalize(gen_ar1(30, 0.6, 1.0, 2));
    try {
        (void)build_distance_matrix({x, y}, ACConfig{{101}, std::nullopt, true});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
        EXPECT_NE(std::string(e.what()).find("pair AR1/AR1"), std::string::npos);
    }
}
