// Brute-force reference computations used by the tests. Nothing here includes
// the library; inputs and outputs are plain vectors.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline std::vector<double> diffs(const std::vector<double>& x) {
    std::vector<double> r;
    for (std::size_t t = 1; t < x.size(); ++t) r.push_back(x[t] - x[t - 1]);
    return r;
}

// window of length p centred at i, zeros outside the series
inline std::vector<double> centred_window(const std::vector<double>& r, long i, long p) {
    std::vector<double> w;
    for (long k = i - p / 2; k <= i + p / 2; ++k) {
        w.push_back(k >= 0 && k < static_cast<long>(r.size()) ? r[static_cast<std::size_t>(k)] : 0.0);
    }
    return w;
}

inline double cosine_cost(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ab += a[k] * b[k];
        aa += a[k] * a[k];
        bb += b[k] * b[k];
    }
    if (aa == 0 || bb == 0) return 2.0;
    return 2.0 * (1.0 - ab / std::sqrt(aa * bb));
}

inline Grid cr_grid(const std::vector<double>& rx, const std::vector<double>& ry, long p) {
    Grid g(rx.size(), std::vector<double>(ry.size()));
    for (std::size_t i = 0; i < rx.size(); ++i) {
        for (std::size_t j = 0; j < ry.size(); ++j) {
            g[i][j] = cosine_cost(centred_window(rx, static_cast<long>(i), p), centred_window(ry, static_cast<long>(j), p));
        }
    }
    return g;
}

inline Grid squared_grid(const std::vector<double>& x, const std::vector<double>& y) {
    Grid g(x.size(), std::vector<double>(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) g[i][j] = (x[i] - y[j]) * (x[i] - y[j]);
    }
    return g;
}

struct Enumeration {
    double best = std::numeric_limits<double>::infinity();
    std::size_t paths = 0;
};

// Walks every monotone unit-step path from every start cell with both
// indices <= psi, scoring each time it reaches a cell with i >= R-1-psi and
// j >= C-1-psi. A path may continue past a terminal cell, and each stopping
// point counts as a distinct path.
inline Enumeration enumerate_paths(const Grid& g, std::size_t psi) {
    const long R = static_cast<long>(g.size());
    const long C = static_cast<long>(g[0].size());
    const long P = static_cast<long>(psi);
    Enumeration out;
    std::function<void(long, long, double)> walk = [&](long i, long j, double acc) {
        acc += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (i >= R - 1 - P && j >= C - 1 - P) {
            ++out.paths;
            out.best = std::min(out.best, acc);
        }
        if (i + 1 < R) walk(i + 1, j, acc);
        if (j + 1 < C) walk(i, j + 1, acc);
        if (i + 1 < R && j + 1 < C) walk(i + 1, j + 1, acc);
    };
    for (long i = 0; i <= std::min(P, R - 1); ++i) {
        for (long j = 0; j <= std::min(P, C - 1); ++j) walk(i, j, 0.0);
    }
    return out;
}

// Central Delannoy number D(m, n): corner-to-corner paths on an (m+1) x (n+1) grid.
inline unsigned long long delannoy(unsigned m, unsigned n) {
    if (m == 0 || n == 0) return 1;
    return delannoy(m - 1, n) + delannoy(m, n - 1) + delannoy(m - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Spanning trees

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

// Tree for a Pruefer sequence over nodes 0..N-1.
inline Edges pruefer_tree(const std::vector<std::size_t>& seq, std::size_t n) {
    std::vector<std::size_t> degree(n, 1);
    for (auto v : seq) ++degree[v];
    Edges edges;
    for (auto v : seq) {
        for (std::size_t leaf = 0; leaf < n; ++leaf) {
            if (degree[leaf] == 1) {
                edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
                --degree[leaf];
                --degree[v];
                break;
            }
        }
    }
    std::size_t u = n, w = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (degree[k] == 1) (u == n ? u : w) = k;
    }
    edges.emplace_back(u, w);
    return edges;
}

// Minimum total weight over all N^(N-2) labelled spanning trees.
inline double min_spanning_weight(const Grid& d) {
    const std::size_t n = d.size();
    if (n < 2) return 0.0;
    if (n == 2) return d[0][1];
    std::vector<std::size_t> seq(n - 2, 0);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        double w = 0;
        for (auto [a, b] : pruefer_tree(seq, n)) w += d[a][b];
        best = std::min(best, w);
        std::size_t k = 0;
        while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
        if (k == seq.size()) break;
    }
    return best;
}

// Sum over ordered pairs (i != j) of the path weight between i and j inside
// the tree, found by depth-first search from every node.
inline double ordered_tree_path_sum(const Edges& edges, const Grid& d) {
    const std::size_t n = edges.size() + 1;
    double total = 0;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<double> dist(n, -1);
        std::vector<std::size_t> stack{s};
        dist[s] = 0;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (auto [a, b] : edges) {
                const std::size_t v = a == u ? b : (b == u ? a : n);
                if (v != n && dist[v] < 0) {
                    dist[v] = dist[u] + d[a][b];
                    stack.push_back(v);
                }
            }
        }
        for (std::size_t t = 0; t < n; ++t) total += t == s ? 0 : dist[t];
    }
    return total;
}

}  // namespace oracle
