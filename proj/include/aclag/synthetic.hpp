/**
 * @file synthetic.hpp
 * @brief AR(1) driver and the four synthetic lead-lag benchmarks.
 *
 * Random numbers come from std::mt19937_64 seeded with the user seed, with
 * Gaussian draws from std::normal_distribution. Output is bit-identical for
 * a given seed on a given standard library.
 */
#pragma once

#include <aclag/error.hpp>
#include <aclag/series.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <span>
#include <vector>

namespace aclag {

using Rng = std::mt19937_64;

/// X(0) ~ N(0, sigma^2 / (1 - b^2)), X(t) = b X(t-1) + xi, xi ~ N(0, sigma).
[[nodiscard]] inline std::vector<double> ar1_values(std::size_t n, double b, double sigma_xi, Rng& rng) {
    if (!(std::abs(b) < 1.0)) throw Error(ErrorKind::InvalidArgument, "AR coefficient must satisfy |b| < 1");
    if (!(sigma_xi >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma_xi must be non-negative");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    if (n == 0) return x;
    x[0] = gauss(rng) * sigma_xi / std::sqrt(1.0 - b * b);
    for (std::size_t t = 1; t < n; ++t) x[t] = b * x[t - 1] + sigma_xi * gauss(rng);
    return x;
}

[[nodiscard]] inline TimeSeries gen_ar1(std::size_t n, double b, double sigma_xi, std::uint64_t seed) {
    Rng rng(seed);
    return TimeSeries(ar1_values(n, b, sigma_xi, rng), "AR1");
}

namespace detail {

struct ScheduleShape {
    std::array<std::size_t, 12> starts;  // 1-based first index of each segment at n = 300
    std::array<long, 12> lags;
    std::size_t segments;
};

inline const ScheduleShape& schedule_shape(int id) {
    // A segment boundary listed twice (e.g. 1..50 then 50..100) belongs to the later segment.
    static const ScheduleShape sts1{{1, 50, 101, 151, 201, 251}, {0, 5, 10, -10, -5, 0}, 6};
    static const ScheduleShape sts2{{1, 26, 51, 76, 101, 126, 151, 176, 201, 226, 251, 276},
                                    {0, 5, 10, 15, 10, 5, -5, -10, -15, -10, -5, 0},
                                    12};
    static const ScheduleShape sts3{{1, 50, 101, 151, 201, 251}, {0, 5, 10, 15, 10, 5}, 6};
    static const ScheduleShape sts4{{1, 26, 51, 76, 101, 126, 151, 176, 201, 226, 251, 276},
                                    {0, 5, 10, 15, 20, 25, 30, 25, 20, 15, 10, 5},
                                    12};
    switch (id) {
    case 1: return sts1;
    case 2: return sts2;
    case 3: return sts3;
    case 4: return sts4;
    default: throw Error(ErrorKind::UnknownSchedule, "schedule id must be 1..4, got " + std::to_string(id));
    }
}

}  // namespace detail

/**
 * Piecewise-constant true lag x(t) for t = 0..n-1 (position t is the 1-based
 * index t + 1 of the 1-based schedule). For n != 300 the segment
 * boundaries are scaled proportionally: a start s becomes
 * 1 + floor((s - 1) * n / 300).
 */
[[nodiscard]] inline std::vector<long> lag_schedule(int schedule_id, std::size_t n) {
    const auto& shape = detail::schedule_shape(schedule_id);
    std::vector<long> out(n, 0);
    for (std::size_t k = 0; k < shape.segments; ++k) {
        const std::size_t begin = (shape.starts[k] - 1) * n / 300;
        const std::size_t end = k + 1 < shape.segments ? (shape.starts[k + 1] - 1) * n / 300 : n;
        for (std::size_t t = begin; t < end && t < n; ++t) out[t] = shape.lags[k];
    }
    return out;
}

struct STSConfig {
    double a = 0.8;
    double b = 0.7;
    double f = 0.5;  ///< sigma_eta / sigma_xi
    double sigma_xi = 1.0;
    std::size_t n = 300;
    int schedule_id = 1;
    std::uint64_t seed = 1;
};

struct STSInstance {
    TimeSeries X;
    TimeSeries Y;
    std::vector<long> true_lags;
    STSConfig config;
};

/**
 * Y(i) = a X(i - x(i)) + eta(i), eta ~ N(0, f * sigma_xi).
 *
 * X is simulated with max|lag| extra points before and after the kept range,
 * so every shifted read is a genuine process value. All of X is drawn before
 * any eta.
 */
[[nodiscard]] inline STSInstance gen_sts(const STSConfig& cfg) {
    if (cfg.n < 2) throw Error(ErrorKind::TooShort, "STS length must be >= 2");
    if (!(cfg.f >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise ratio f must be non-negative");
    auto lags = lag_schedule(cfg.schedule_id, cfg.n);
    long max_abs = 0;
    for (long l : lags) max_abs = std::max(max_abs, std::abs(l));
    const auto pre = static_cast<std::size_t>(max_abs);

    Rng rng(cfg.seed);
    const auto ext = ar1_values(cfg.n + 2 * pre, cfg.b, cfg.sigma_xi, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma_eta = cfg.f * cfg.sigma_xi;

    std::vector<double> x(ext.begin() + static_cast<std::ptrdiff_t>(pre),
                          ext.begin() + static_cast<std::ptrdiff_t>(pre + cfg.n));
    std::vector<double> y(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const auto src = static_cast<std::ptrdiff_t>(i + pre) - lags[i];
        y[i] = cfg.a * ext[static_cast<std::size_t>(src)] + sigma_eta * gauss(rng);
    }
    return STSInstance{TimeSeries(std::move(x), "X"), TimeSeries(std::move(y), "Y"), std::move(lags), cfg};
}

/// CSV with columns t, X, Y, true_lag (t is 1-based).
inline void write_sts_csv(std::ostream& os, const STSInstance& inst) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::fixed << std::setprecision(6) << "t,X,Y,true_lag\n";
    for (std::size_t i = 0; i < inst.X.size(); ++i) {
        os << (i + 1) << ',' << inst.X[i] << ',' << inst.Y[i] << ',' << inst.true_lags[i] << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace aclag
