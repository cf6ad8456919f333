/**
 * @file series.hpp
 * @brief Price and return series, z-score normalization, and correlation helpers.
 *
 * Normalization uses the sample standard deviation (n - 1 denominator)
 * everywhere in the library, so [1, 2, 3] maps to [-1, 0, 1].
 */
#pragma once

#include <aclag/error.hpp>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aclag {

/// Ordered real-valued observations with a label. Length >= 2, all finite.
class TimeSeries {
public:
    TimeSeries() = default;

    explicit TimeSeries(std::vector<double> values, std::string label = {})
        : values_(std::move(values)), label_(std::move(label)) {
        if (values_.size() < 2) {
            throw Error(ErrorKind::TooShort, "series '" + label_ + "' needs at least 2 values");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::InvalidArgument, "series '" + label_ + "' has a non-finite value");
            }
        }
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
    std::string label_;
};

/// First differences of a TimeSeries: values[j] = source[j + 1] - source[j].
class ReturnSeries {
public:
    ReturnSeries() = default;
    explicit ReturnSeries(std::vector<double> values) : values_(std::move(values)) {}

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

/// A return series viewed with `pad` zeros on each side. Reads outside the
/// inner range return exactly 0.
class PaddedReturnSeries {
public:
    PaddedReturnSeries(ReturnSeries inner, std::size_t pad) : inner_(std::move(inner)), pad_(pad) {}

    [[nodiscard]] std::size_t pad() const noexcept { return pad_; }
    [[nodiscard]] std::size_t inner_size() const noexcept { return inner_.size(); }
    [[nodiscard]] std::size_t padded_size() const noexcept { return inner_.size() + 2 * pad_; }
    [[nodiscard]] const ReturnSeries& inner() const noexcept { return inner_; }

    /// Value at inner-relative index `i`, which may lie in [-pad, inner_size + pad).
    [[nodiscard]] double at(std::ptrdiff_t i) const noexcept {
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(inner_.size())) return 0.0;
        return inner_[static_cast<std::size_t>(i)];
    }

private:
    ReturnSeries inner_;
    std::size_t pad_;
};

[[nodiscard]] inline double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator).
[[nodiscard]] inline double sample_sd(std::span<const double> v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Z-score: subtract the mean, divide by the sample standard deviation.
[[nodiscard]] inline TimeSeries normalize(const TimeSeries& raw) {
    const auto v = raw.values();
    const double m = mean(v);
    const double sd = sample_sd(v);
    if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "cannot normalize constant series '" + raw.label() + "'");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - m) / sd;
    return TimeSeries(std::move(out), raw.label());
}

[[nodiscard]] inline ReturnSeries returns(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorKind::TooShort, "returns need at least 2 values");
    std::vector<double> r(x.size() - 1);
    for (std::size_t j = 0; j + 1 < x.size(); ++j) r[j] = x[j + 1] - x[j];
    return ReturnSeries(std::move(r));
}

[[nodiscard]] inline ReturnSeries returns(const TimeSeries& x) { return returns(x.values()); }

/// Centered Pearson correlation.
[[nodiscard]] inline double pearson(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "pearson: length mismatch");
    if (u.size() < 2) throw Error(ErrorKind::TooShort, "pearson: need at least 2 values");
    const double mu = mean(u);
    const double mv = mean(v);
    double suv = 0.0, suu = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double du = u[i] - mu;
        const double dv = v[i] - mv;
        suv += du * dv;
        suu += du * du;
        svv += dv * dv;
    }
    if (!(suu > 0.0) || !(svv > 0.0)) throw Error(ErrorKind::ZeroVariance, "pearson: constant input");
    return suv / std::sqrt(suu * svv);
}

/// Cosine similarity, i.e. correlation without mean removal.
[[nodiscard]] inline double uncentered_corr(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "uncentered_corr: length mismatch");
    if (u.empty()) throw Error(ErrorKind::TooShort, "uncentered_corr: empty input");
    double suv = 0.0, suu = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suv += u[i] * v[i];
        suu += u[i] * u[i];
        svv += v[i] * v[i];
    }
    if (!(suu > 0.0) || !(svv > 0.0)) throw Error(ErrorKind::ZeroNorm, "uncentered_corr: zero-norm input");
    return suv / std::sqrt(suu * svv);
}

}  // namespace aclag
