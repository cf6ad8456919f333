/**
 * @file warping.hpp
 * @brief Alignment paths and the endpoint-relaxed dynamic-programming warp
 *        shared by the aligned-correlation engine and the DTW baseline.
 *
 * Grid cells are 0-based (i, j) with i indexing the first series and j the
 * second. With relaxation psi, a path may start at any cell with i <= psi and
 * j <= psi, and must end at a cell with i >= rows - 1 - psi and
 * j >= cols - 1 - psi. psi = 0 pins both endpoints to the grid corners.
 */
#pragma once

#include <aclag/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <vector>

namespace aclag {

struct IndexPair {
    std::size_t p = 0;
    std::size_t q = 0;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Monotone sequence of grid cells with unit steps (1,0), (0,1) or (1,1).
struct AlignmentPath {
    std::vector<IndexPair> pairs;

    [[nodiscard]] std::size_t size() const noexcept { return pairs.size(); }
    [[nodiscard]] bool empty() const noexcept { return pairs.empty(); }

    friend bool operator==(const AlignmentPath&, const AlignmentPath&) = default;
};

[[nodiscard]] inline AlignmentPath diagonal_path(std::size_t n) {
    AlignmentPath path;
    path.pairs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) path.pairs.push_back({k, k});
    return path;
}

/// True when `path` satisfies the boundary, monotonicity and step conditions
/// on a rows x cols grid with relaxation psi.
[[nodiscard]] inline bool is_feasible(const AlignmentPath& path, std::size_t rows, std::size_t cols,
                                      std::size_t psi) {
    if (path.empty() || rows == 0 || cols == 0) return false;
    const auto& first = path.pairs.front();
    const auto& last = path.pairs.back();
    const std::size_t end_i = rows - 1 > psi ? rows - 1 - psi : 0;
    const std::size_t end_j = cols - 1 > psi ? cols - 1 - psi : 0;
    if (first.p > psi || first.q > psi) return false;
    if (last.p < end_i || last.q < end_j) return false;
    for (std::size_t l = 0; l < path.size(); ++l) {
        const auto& c = path.pairs[l];
        if (c.p >= rows || c.q >= cols) return false;
        if (l == 0) continue;
        const auto& prev = path.pairs[l - 1];
        if (c.p < prev.p || c.q < prev.q) return false;
        const std::size_t dp = c.p - prev.p;
        const std::size_t dq = c.q - prev.q;
        if (dp > 1 || dq > 1 || dp + dq == 0) return false;
    }
    return true;
}

/// Dense row-major cost grid.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

[[nodiscard]] inline double path_cost(const CostMatrix& cost, const AlignmentPath& path) {
    double total = 0.0;
    for (const auto& c : path.pairs) total += cost(c.p, c.q);
    return total;
}

struct WarpResult {
    AlignmentPath path;
    double cumulative_cost = 0.0;
};

/**
 * Minimum-cumulative-cost feasible path through `cost`.
 *
 * Ties at a cell prefer the (1,1) predecessor, then (1,0), then (0,1), and
 * continuing an existing path over starting a new one. Among equal-cost
 * terminal cells the smallest i + j wins, then the smallest |i - j|, then the
 * smallest i.
 */
[[nodiscard]] inline WarpResult relaxed_warp(const CostMatrix& cost, std::size_t psi) {
    const std::size_t rows = cost.rows();
    const std::size_t cols = cost.cols();
    if (rows == 0 || cols == 0) throw Error(ErrorKind::TooShort, "relaxed_warp: empty cost grid");

    enum class Step : std::uint8_t { Start, Diagonal, FromUp, FromLeft };
    constexpr double inf = std::numeric_limits<double>::infinity();

    CostMatrix acc(rows, cols, inf);
    std::vector<Step> back(rows * cols, Step::Start);

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double best = inf;
            Step step = Step::Start;
            if (i > 0 && j > 0 && acc(i - 1, j - 1) < best) {
                best = acc(i - 1, j - 1);
                step = Step::Diagonal;
            }
            if (i > 0 && acc(i - 1, j) < best) {
                best = acc(i - 1, j);
                step = Step::FromUp;
            }
            if (j > 0 && acc(i, j - 1) < best) {
                best = acc(i, j - 1);
                step = Step::FromLeft;
            }
            if (i <= psi && j <= psi && 0.0 < best) {
                best = 0.0;
                step = Step::Start;
            }
            if (best == inf) continue;
            acc(i, j) = best + cost(i, j);
            back[i * cols + j] = step;
        }
    }

    const std::size_t end_i = rows - 1 > psi ? rows - 1 - psi : 0;
    const std::size_t end_j = cols - 1 > psi ? cols - 1 - psi : 0;
    std::size_t bi = rows, bj = cols;
    double best = inf;
    auto better_tie = [](std::size_t i, std::size_t j, std::size_t oi, std::size_t oj) {
        if (i + j != oi + oj) return i + j < oi + oj;
        const std::size_t d = i > j ? i - j : j - i;
        const std::size_t od = oi > oj ? oi - oj : oj - oi;
        if (d != od) return d < od;
        return i < oi;
    };
    for (std::size_t i = end_i; i < rows; ++i) {
        for (std::size_t j = end_j; j < cols; ++j) {
            const double v = acc(i, j);
            if (v < best || (v == best && v != inf && better_tie(i, j, bi, bj))) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    if (best == inf) throw Error(ErrorKind::InvalidArgument, "relaxed_warp: no feasible path");

    WarpResult out;
    out.cumulative_cost = best;
    std::size_t i = bi, j = bj;
    for (;;) {
        out.path.pairs.push_back({i, j});
        const Step s = back[i * cols + j];
        if (s == Step::Start) break;
        if (s == Step::Diagonal) {
            --i;
            --j;
        } else if (s == Step::FromUp) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(out.path.pairs.begin(), out.path.pairs.end());
    return out;
}

/// Lag statistics of a path; lag = q - p, so a positive lag means the second
/// series' index runs ahead of the first's.
struct LeadLagProfile {
    std::vector<long> lags;
    double average_lag = 0.0;
    double nonzero_ratio = 0.0;
};

[[nodiscard]] inline LeadLagProfile lead_lag_profile(const AlignmentPath& path) {
    LeadLagProfile prof;
    prof.lags.reserve(path.size());
    std::size_t nonzero = 0;
    for (const auto& c : path.pairs) {
        const long lag = static_cast<long>(c.q) - static_cast<long>(c.p);
        prof.lags.push_back(lag);
        if (lag != 0) ++nonzero;
    }
    if (!prof.lags.empty()) {
        const double total = std::accumulate(prof.lags.begin(), prof.lags.end(), 0.0);
        prof.average_lag = total / static_cast<double>(prof.lags.size());
        prof.nonzero_ratio = static_cast<double>(nonzero) / static_cast<double>(prof.lags.size());
    }
    return prof;
}

/// Which series' index a per-time lag estimate is keyed on. Keying on the
/// second series matches y(t) = a x(t - lag(t)), where the lag schedule is a
/// function of the second series' time.
enum class LagAxis {
    First,   ///< t = p
    Second,  ///< t = q
};

/**
 * Per-time lag estimate of length n. Each covered index t gets the mean of
 * q - p over the path cells whose `axis` index equals t; indices before or
 * after the path carry the nearest covered value.
 */
[[nodiscard]] inline std::vector<double> lead_lag_series(const AlignmentPath& path, std::size_t n,
                                                         LagAxis axis = LagAxis::Second) {
    std::vector<double> out(n, 0.0);
    if (path.empty() || n == 0) return out;
    std::vector<double> sum(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    for (const auto& c : path.pairs) {
        const std::size_t t = axis == LagAxis::First ? c.p : c.q;
        if (t >= n) continue;
        sum[t] += static_cast<double>(c.q) - static_cast<double>(c.p);
        ++count[t];
    }
    // covered indices form one contiguous run because both indices advance by at most 1
    std::size_t first = n, last = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (count[t] == 0) continue;
        out[t] = sum[t] / static_cast<double>(count[t]);
        first = std::min(first, t);
        last = t;
    }
    if (first == n) return out;
    for (std::size_t t = 0; t < first; ++t) out[t] = out[first];
    for (std::size_t t = last + 1; t < n; ++t) out[t] = out[last];
    return out;
}

}  // namespace aclag
