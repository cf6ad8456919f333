/**
 * @file baselines.hpp
 * @brief Comparison lead-lag estimators: classic DTW on price levels and the
 *        thermal optimal path (TOP).
 */
#pragma once

#include <aclag/error.hpp>
#include <aclag/series.hpp>
#include <aclag/warping.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace aclag {

/// Squared pointwise difference grid.
[[nodiscard]] inline CostMatrix squared_difference_matrix(std::span<const double> x, std::span<const double> y) {
    CostMatrix cost(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double d = x[i] - y[j];
            cost(i, j) = d * d;
        }
    }
    return cost;
}

/// DTW under the same step, monotonicity and psi-boundary rules as the
/// aligned-correlation paths, with squared difference of price levels as cost.
[[nodiscard]] inline WarpResult dtw_path(const TimeSeries& x, const TimeSeries& y, std::size_t psi) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "dtw_path: series lengths differ");
    if (x.size() < 2) throw Error(ErrorKind::TooShort, "dtw_path: series too short");
    return relaxed_warp(squared_difference_matrix(x.values(), y.values()), psi);
}

enum class Renormalization {
    Sum,   ///< divide each anti-diagonal by its total weight
    Max,   ///< divide each anti-diagonal by its largest weight
    None,  ///< raw partition function; throws NumericalUnderflow when it leaves double range
};

struct TOPConfig {
    double temperature = 2.0;
    /// Paths may start at any cell with both indices <= psi.
    std::size_t psi = 25;
    Renormalization renormalization = Renormalization::Sum;
};

/**
 * Thermally averaged lag profile <x(t)> of length n.
 *
 * Cell (t1, t2) carries energy |x[t1] - y[t2]|. The partition function obeys
 * W(t1, t2) = exp(-e / T) * (source + W(t1-1, t2) + W(t1, t2-1) + W(t1-1, t2-1)),
 * with source = 1 inside the start box and 0 elsewhere, and is swept one
 * anti-diagonal s = t1 + t2 at a time. The profile at time k is the
 * weight-averaged t2 - t1 over anti-diagonal 2k. Weights on each
 * anti-diagonal are kept relative to a running log-scale, which cancels in
 * the average.
 */
[[nodiscard]] inline std::vector<double> top_lead_lag(const TimeSeries& x, const TimeSeries& y, const TOPConfig& cfg) {
    if (!(cfg.temperature > 0.0)) throw Error(ErrorKind::InvalidArgument, "TOP temperature must be positive");
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "top_lead_lag: series lengths differ");
    const std::size_t n = x.size();
    const auto xs = x.values();
    const auto ys = y.values();

    // weights of anti-diagonal s are stored by t1; prev1 is s - 1, prev2 is s - 2
    std::vector<double> prev2(n, 0.0), prev1(n, 0.0), cur(n, 0.0);
    double log_scale_prev1 = 0.0;  // log of the absolute scale of prev1
    double log_scale_prev2 = 0.0;
    std::vector<double> profile(n, 0.0);

    for (std::size_t s = 0; s + 1 < 2 * n; ++s) {
        const std::size_t lo = s >= n ? s - (n - 1) : 0;
        const std::size_t hi = std::min(s, n - 1);
        const bool has_source = lo <= cfg.psi && s <= 2 * cfg.psi;
        const bool renorm = cfg.renormalization != Renormalization::None;

        // express everything relative to exp(shift) in absolute units
        double shift = log_scale_prev1;
        if (renorm && has_source) shift = std::max(shift, 0.0);
        const double w1 = renorm ? std::exp(log_scale_prev1 - shift) : 1.0;
        const double w2 = renorm ? std::exp(log_scale_prev2 - shift) : 1.0;
        const double src = renorm ? std::exp(-shift) : 1.0;

        std::fill(cur.begin(), cur.end(), 0.0);
        for (std::size_t t1 = lo; t1 <= hi; ++t1) {
            const std::size_t t2 = s - t1;
            double acc = 0.0;
            if (t1 <= cfg.psi && t2 <= cfg.psi) acc += src;
            if (t1 > 0) acc += w1 * prev1[t1 - 1];       // (t1 - 1, t2)
            if (t2 > 0) acc += w1 * prev1[t1];           // (t1, t2 - 1)
            if (t1 > 0 && t2 > 0) acc += w2 * prev2[t1 - 1];  // (t1 - 1, t2 - 1)
            cur[t1] = acc * std::exp(-std::abs(xs[t1] - ys[t2]) / cfg.temperature);
        }

        double norm = 0.0;
        for (std::size_t t1 = lo; t1 <= hi; ++t1) {
            norm = cfg.renormalization == Renormalization::Max ? std::max(norm, cur[t1]) : norm + cur[t1];
        }
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw Error(ErrorKind::NumericalUnderflow,
                        "partition function left double range at anti-diagonal " + std::to_string(s));
        }
        double log_scale = 0.0;
        if (renorm) {
            for (std::size_t t1 = lo; t1 <= hi; ++t1) cur[t1] /= norm;
            log_scale = shift + std::log(norm);
        }

        if (s % 2 == 0) {
            double num = 0.0, den = 0.0;
            for (std::size_t t1 = lo; t1 <= hi; ++t1) {
                const double lag = static_cast<double>(s - t1) - static_cast<double>(t1);
                num += lag * cur[t1];
                den += cur[t1];
            }
            profile[s / 2] = num / den;
        }

        std::swap(prev2, prev1);
        std::swap(prev1, cur);
        log_scale_prev2 = log_scale_prev1;
        log_scale_prev1 = log_scale;
    }
    return profile;
}

}  // namespace aclag
