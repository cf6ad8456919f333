/**
 * @file network.hpp
 * @brief Pairwise aligned-correlation distance matrices, triangle-inequality
 *        audit, minimum spanning tree, and tree evaluation metrics.
 */
#pragma once

#include <aclag/alignment.hpp>
#include <aclag/error.hpp>
#include <aclag/series.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace aclag {

/// Per-pair diagnostics, one row per unordered pair (i < j).
struct PairStats {
    std::size_t i = 0;
    std::size_t j = 0;
    double ac_distance = 0.0;
    double aligned_correlation = 0.0;
    double zero_lag_correlation = 0.0;  ///< Pearson correlation of the two return series at lag 0
    double average_lag = 0.0;
    double nonzero_ratio = 0.0;
    std::optional<std::size_t> chosen_window;
};

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<std::string> labels)
        : labels_(std::move(labels)), d_(labels_.size() * labels_.size(), 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * size() + j]; }

    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double v) {
        if (i == j) throw Error(ErrorKind::InvalidArgument, "diagonal entries are fixed at 0");
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "distances must be finite and >= 0");
        d_[i * size() + j] = v;
        d_[j * size() + i] = v;
    }

    std::vector<PairStats> pair_stats;

private:
    std::vector<std::string> labels_;
    std::vector<double> d_;
};

/// Stats for a pair of equal-length normalized series.
[[nodiscard]] inline PairStats compare_pair(const TimeSeries& a, const TimeSeries& b, const ACConfig& cfg) {
    const ACResult r = aligned_correlation(a, b, cfg);
    PairStats s;
    s.ac_distance = r.ac_distance;
    s.aligned_correlation = r.aligned_correlation;
    s.zero_lag_correlation = pearson(returns(a).values(), returns(b).values());
    s.average_lag = r.profile.average_lag;
    s.nonzero_ratio = r.profile.nonzero_ratio;
    s.chosen_window = r.chosen_window;
    return s;
}

/**
 * Pairwise aligned-correlation distances. Pairs are evaluated on up to
 * `threads` workers (0 = hardware concurrency); the result does not depend
 * on the thread count. Any failing pair fails the whole build, reporting the
 * first failing pair in (i, j) order.
 */
[[nodiscard]] inline DistanceMatrix build_distance_matrix(const std::vector<TimeSeries>& panel, const ACConfig& cfg = {},
                                                          unsigned threads = 0) {
    if (panel.size() < 2) throw Error(ErrorKind::InsufficientData, "distance matrix needs at least 2 series");
    for (const auto& s : panel) {
        if (s.size() != panel.front().size()) throw Error(ErrorKind::InvalidArgument, "panel series lengths differ");
    }
    std::vector<std::string> labels;
    for (const auto& s : panel) labels.push_back(s.label());
    DistanceMatrix m(std::move(labels));

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < panel.size(); ++i) {
        for (std::size_t j = i + 1; j < panel.size(); ++j) pairs.emplace_back(i, j);
    }
    std::vector<PairStats> stats(pairs.size());
    std::vector<std::exception_ptr> errors(pairs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < pairs.size(); k = next++) {
            try {
                stats[k] = compare_pair(panel[pairs[k].first], panel[pairs[k].second], cfg);
                stats[k].i = pairs[k].first;
                stats[k].j = pairs[k].second;
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, pairs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (!errors[k]) continue;
        const std::string which = m.labels()[pairs[k].first] + "/" + m.labels()[pairs[k].second];
        try {
            std::rethrow_exception(errors[k]);
        } catch (const Error& e) {
            throw Error(e.kind(), "pair " + which + ": " + e.message());
        }
    }
    for (const auto& s : stats) m.set(s.i, s.j, s.ac_distance);
    m.pair_stats = std::move(stats);
    return m;
}

struct TriangleAudit {
    std::size_t triples_checked = 0;
    std::size_t violations = 0;  ///< unordered triples breaking at least one inequality
    std::optional<std::array<std::size_t, 3>> worst;  ///< (i, j, k) with d(i,k) > d(i,j) + d(j,k) by the most
    double worst_excess = 0.0;
};

[[nodiscard]] inline TriangleAudit triangle_audit(const DistanceMatrix& m, double tolerance = 1e-12) {
    TriangleAudit audit;
    const std::size_t n = m.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                ++audit.triples_checked;
                // each side against the path through the remaining vertex
                const std::array<std::array<std::size_t, 3>, 3> arrangements{{{a, b, c}, {b, a, c}, {a, c, b}}};
                bool violated = false;
                for (const auto& [i, j, k] : arrangements) {
                    const double excess = m(i, k) - (m(i, j) + m(j, k));
                    if (excess > tolerance) {
                        violated = true;
                        if (excess > audit.worst_excess) {
                            audit.worst_excess = excess;
                            audit.worst = std::array<std::size_t, 3>{i, j, k};
                        }
                    }
                }
                if (violated) ++audit.violations;
            }
        }
    }
    return audit;
}

struct Edge {
    std::size_t i = 0;  ///< i < j
    std::size_t j = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct MSTree {
    std::size_t nodes = 0;
    std::vector<Edge> edges;

    [[nodiscard]] double total_weight() const {
        return std::accumulate(edges.begin(), edges.end(), 0.0,
                               [](double acc, const Edge& e) { return acc + e.weight; });
    }
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

}  // namespace detail

/// Kruskal's algorithm; edges are considered in (weight, i, j) order, so
/// equal weights resolve to the lexicographically smallest edge set.
[[nodiscard]] inline MSTree minimum_spanning_tree(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    std::vector<Edge> candidates;
    candidates.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!std::isfinite(m(i, j))) throw Error(ErrorKind::InvalidArgument, "MST needs finite distances");
            candidates.push_back({i, j, m(i, j)});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.weight, a.i, a.j) < std::tie(b.weight, b.i, b.j);
    });
    MSTree tree;
    tree.nodes = n;
    detail::DisjointSets sets(n);
    for (const auto& e : candidates) {
        if (sets.unite(e.i, e.j)) tree.edges.push_back(e);
        if (tree.edges.size() + 1 == n) break;
    }
    return tree;
}

enum class PathLengthMode {
    Tree,       ///< shortest paths inside the spanning tree
    FullGraph,  ///< shortest paths over the complete distance graph
};

struct NetworkMetrics {
    double mean_dissimilarity = 0.0;
    double normalized_tree_length = 0.0;
    double characterized_path_length = 0.0;
    std::size_t non_leaf_nodes = 0;
};

/// All-pairs path lengths inside a tree: one traversal per source.
[[nodiscard]] inline std::vector<std::vector<double>> tree_path_lengths(const MSTree& t) {
    const std::size_t n = t.nodes;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    for (const auto& e : t.edges) {
        adj[e.i].emplace_back(e.j, e.weight);
        adj[e.j].emplace_back(e.i, e.weight);
    }
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
    for (std::size_t s = 0; s < n; ++s) {
        dist[s][s] = 0.0;
        std::queue<std::size_t> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (const auto& [v, w] : adj[u]) {
                if (std::isinf(dist[s][v])) {
                    dist[s][v] = dist[s][u] + w;
                    frontier.push(v);
                }
            }
        }
    }
    return dist;
}

/// Floyd-Warshall over the complete graph.
[[nodiscard]] inline std::vector<std::vector<double>> graph_path_lengths(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dist[i][j] = m(i, j);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
        }
    }
    return dist;
}

[[nodiscard]] inline NetworkMetrics network_metrics(const DistanceMatrix& m, const MSTree& t,
                                                    PathLengthMode mode = PathLengthMode::Tree) {
    const std::size_t n = m.size();
    if (t.nodes != n || t.edges.size() + 1 != n) {
        throw Error(ErrorKind::InvalidArgument, "tree does not span the distance matrix");
    }
    NetworkMetrics out;
    if (n < 2) return out;
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);

    double upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) upper += m(i, j);
    }
    out.mean_dissimilarity = 2.0 * upper / pairs;
    out.normalized_tree_length = t.total_weight() / static_cast<double>(n - 1);

    const auto dist = mode == PathLengthMode::Tree ? tree_path_lengths(t) : graph_path_lengths(m);
    double ordered = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) ordered += dist[i][j];
        }
    }
    out.characterized_path_length = ordered / pairs;

    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : t.edges) {
        ++degree[e.i];
        ++degree[e.j];
    }
    out.non_leaf_nodes = static_cast<std::size_t>(std::count_if(degree.begin(), degree.end(),
                                                                [](std::size_t d) { return d >= 2; }));
    return out;
}

}  // namespace aclag
