/**
 * @file alignment.hpp
 * @brief Aligned correlation: windowed-correlation cost, per-window optimal
 *        warping, candidate selection by correlation along the path, and the
 *        resulting correlation distance.
 *
 * Grid cells index the return series (0-based). For a window size p (odd) the
 * local cost at (i, j) is 2 * (1 - c), where c is the cosine between the
 * length-p windows of the two return series centred at i and j, with
 * floor(p / 2) zeros of padding at both ends. A window with zero norm gets
 * c = 0 (cost 2).
 */
#pragma once

#include <aclag/error.hpp>
#include <aclag/series.hpp>
#include <aclag/warping.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace aclag {

struct ACConfig {
    std::vector<std::size_t> windows{25, 51, 101};
    /// Endpoint relaxation. Unset means psi = p for each window.
    std::optional<std::size_t> psi;
    bool include_identity_candidate = true;

    [[nodiscard]] std::size_t psi_for(std::size_t window) const noexcept { return psi.value_or(window); }
};

/// Checks `cfg` against a price series of length n (returns length n - 1).
inline void validate(const ACConfig& cfg, std::size_t n) {
    if (cfg.windows.empty() && !cfg.include_identity_candidate) {
        throw Error(ErrorKind::InvalidArgument, "no candidate paths: empty window list and identity disabled");
    }
    for (std::size_t p : cfg.windows) {
        if (p < 3 || p % 2 == 0) {
            throw Error(ErrorKind::InvalidArgument, "window " + std::to_string(p) + " must be odd and >= 3");
        }
        if (p + 1 > n) {
            throw Error(ErrorKind::TooShort, "window " + std::to_string(p) + " exceeds return length " +
                                                 std::to_string(n == 0 ? 0 : n - 1));
        }
        if (cfg.psi_for(p) >= n) {
            throw Error(ErrorKind::InvalidArgument, "psi must be below the series length");
        }
    }
}

/// Local cost at return indices (i, j) for window size p, computed directly.
[[nodiscard]] inline double cr_cost(const PaddedReturnSeries& rx, const PaddedReturnSeries& ry, std::size_t i,
                                    std::size_t j, std::size_t p) {
    if (p % 2 == 0) throw Error(ErrorKind::InvalidArgument, "cr_cost: window must be odd");
    const auto h = static_cast<std::ptrdiff_t>(p / 2);
    if (rx.pad() < p / 2 || ry.pad() < p / 2) throw Error(ErrorKind::InvalidArgument, "cr_cost: padding too small");
    if (i >= rx.inner_size() || j >= ry.inner_size()) throw Error(ErrorKind::InvalidArgument, "cr_cost: index out of range");
    const auto si = static_cast<std::ptrdiff_t>(i);
    const auto sj = static_cast<std::ptrdiff_t>(j);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::ptrdiff_t k = -h; k <= h; ++k) {
        const double a = rx.at(si + k);
        const double b = ry.at(sj + k);
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if (sxx == 0.0 || syy == 0.0) return 2.0;
    const double c = std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
    return 2.0 * (1.0 - c);
}

/**
 * Full local-cost grid for window p. Window cross products are slid along
 * each diagonal, so the grid costs O(rows * cols) instead of O(rows * cols * p).
 * The computation is symmetric in its arguments: swapping rx and ry yields the
 * bitwise transpose.
 */
[[nodiscard]] inline CostMatrix cr_cost_matrix(std::span<const double> rx, std::span<const double> ry, std::size_t p) {
    if (p % 2 == 0) throw Error(ErrorKind::InvalidArgument, "cr_cost_matrix: window must be odd");
    const std::size_t rows = rx.size();
    const std::size_t cols = ry.size();
    const auto h = static_cast<std::ptrdiff_t>(p / 2);
    auto read = [](std::span<const double> s, std::ptrdiff_t k) {
        return (k < 0 || k >= static_cast<std::ptrdiff_t>(s.size())) ? 0.0 : s[static_cast<std::size_t>(k)];
    };
    auto window_norms = [&](std::span<const double> s) {
        std::vector<double> out(s.size());
        for (std::size_t t = 0; t < s.size(); ++t) {
            double acc = 0.0;
            for (std::ptrdiff_t k = -h; k <= h; ++k) {
                const double v = read(s, static_cast<std::ptrdiff_t>(t) + k);
                acc += v * v;
            }
            out[t] = std::sqrt(acc);
        }
        return out;
    };
    const auto nx = window_norms(rx);
    const auto ny = window_norms(ry);

    CostMatrix cost(rows, cols);
    auto fill = [&](std::size_t i, std::size_t j, double cross) {
        if (nx[i] == 0.0 || ny[j] == 0.0) {
            cost(i, j) = 2.0;
            return;
        }
        const double c = std::clamp(cross / (nx[i] * ny[j]), -1.0, 1.0);
        cost(i, j) = 2.0 * (1.0 - c);
    };
    // one pass per diagonal j - i = d, starting from its upper-left cell
    const auto srows = static_cast<std::ptrdiff_t>(rows);
    const auto scols = static_cast<std::ptrdiff_t>(cols);
    for (std::ptrdiff_t d = -(srows - 1); d <= scols - 1; ++d) {
        std::ptrdiff_t i = d >= 0 ? 0 : -d;
        std::ptrdiff_t j = i + d;
        double cross = 0.0;
        for (std::ptrdiff_t k = -h; k <= h; ++k) cross += read(rx, i + k) * read(ry, j + k);
        fill(static_cast<std::size_t>(i), static_cast<std::size_t>(j), cross);
        for (++i, ++j; i < srows && j < scols; ++i, ++j) {
            cross += read(rx, i + h) * read(ry, j + h);
            cross -= read(rx, i - h - 1) * read(ry, j - h - 1);
            fill(static_cast<std::size_t>(i), static_cast<std::size_t>(j), cross);
        }
    }
    return cost;
}

/// Optimal path for one window size: minimum cumulative local cost over all
/// feasible paths.
[[nodiscard]] inline WarpResult optimal_path_for_window(const ReturnSeries& rx, const ReturnSeries& ry, std::size_t p,
                                                        std::size_t psi) {
    if (p < 3 || p % 2 == 0) throw Error(ErrorKind::InvalidArgument, "window must be odd and >= 3");
    if (rx.size() < p || ry.size() < p) throw Error(ErrorKind::TooShort, "return series shorter than window");
    return relaxed_warp(cr_cost_matrix(rx.values(), ry.values(), p), psi);
}

/// Returns the two return vectors read along `path`.
[[nodiscard]] inline std::pair<std::vector<double>, std::vector<double>> read_along(const ReturnSeries& rx,
                                                                                   const ReturnSeries& ry,
                                                                                   const AlignmentPath& path) {
    std::vector<double> a, b;
    a.reserve(path.size());
    b.reserve(path.size());
    for (const auto& c : path.pairs) {
        if (c.p >= rx.size() || c.q >= ry.size()) throw Error(ErrorKind::InvalidArgument, "path leaves the grid");
        a.push_back(rx[c.p]);
        b.push_back(ry[c.q]);
    }
    return {std::move(a), std::move(b)};
}

/// 2 * (1 - cosine of the return vectors read along `path`); in [0, 4].
[[nodiscard]] inline double global_path_score(const ReturnSeries& rx, const ReturnSeries& ry, const AlignmentPath& path) {
    if (path.empty()) throw Error(ErrorKind::InvalidArgument, "global_path_score: empty path");
    const auto [a, b] = read_along(rx, ry, path);
    const double c = std::clamp(uncentered_corr(a, b), -1.0, 1.0);
    return 2.0 * (1.0 - c);
}

struct CandidateScore {
    std::optional<std::size_t> window;  ///< unset for the identity path
    double score = 0.0;
    double cumulative_cost = 0.0;        ///< DP objective; only meaningful within one window
};

struct ACResult {
    AlignmentPath path;
    double aligned_correlation = 0.0;
    double ac_distance = 0.0;
    std::optional<std::size_t> chosen_window;  ///< unset when the identity path won
    LeadLagProfile profile;
    std::vector<CandidateScore> candidates;
};

[[nodiscard]] inline std::string window_label(const std::optional<std::size_t>& w) {
    return w ? std::to_string(*w) : std::string("identity");
}

/**
 * Aligned correlation between two equal-length, normalized price series.
 *
 * Candidates are the identity path (when enabled) followed by one optimal
 * path per configured window. The winner minimises global_path_score; an
 * earlier candidate is kept on exact ties. Cumulative costs of different
 * windows are never compared.
 */
[[nodiscard]] inline ACResult aligned_correlation(const TimeSeries& x, const TimeSeries& y, const ACConfig& cfg = {}) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "aligned_correlation: series lengths differ");
    validate(cfg, x.size());
    const ReturnSeries rx = returns(x);
    const ReturnSeries ry = returns(y);

    ACResult result;
    std::vector<AlignmentPath> paths;
    if (cfg.include_identity_candidate) {
        AlignmentPath diag = diagonal_path(rx.size());
        result.candidates.push_back({std::nullopt, global_path_score(rx, ry, diag), 0.0});
        paths.push_back(std::move(diag));
    }
    for (std::size_t p : cfg.windows) {
        WarpResult w = optimal_path_for_window(rx, ry, p, cfg.psi_for(p));
        result.candidates.push_back({p, global_path_score(rx, ry, w.path), w.cumulative_cost});
        paths.push_back(std::move(w.path));
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < result.candidates.size(); ++k) {
        if (result.candidates[k].score < result.candidates[best].score) best = k;
    }
    const double score = std::max(0.0, result.candidates[best].score);
    result.path = std::move(paths[best]);
    result.chosen_window = result.candidates[best].window;
    result.aligned_correlation = 1.0 - score / 2.0;
    result.ac_distance = std::sqrt(score);
    result.profile = lead_lag_profile(result.path);
    return result;
}

}  // namespace aclag
