/**
 * @file evaluation.hpp
 * @brief Self-consistency (moving-window regression significance) and
 *        one-step forecastability tests for estimated lag profiles.
 */
#pragma once

#include <aclag/alignment.hpp>
#include <aclag/baselines.hpp>
#include <aclag/error.hpp>
#include <aclag/series.hpp>
#include <aclag/synthetic.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace aclag {

struct PairedSamples {
    std::vector<double> x;
    std::vector<double> y;
};

/// Round half away from zero.
[[nodiscard]] inline long round_lag(double lag) { return std::lround(lag); }

/**
 * Pairs (X(t - round(lag(t))), Y(t)) for t in [begin, end). Pairs whose
 * shifted index falls outside X are dropped.
 */
[[nodiscard]] inline PairedSamples synchronize(std::span<const double> x, std::span<const double> y,
                                               std::span<const double> lag_profile, std::size_t begin,
                                               std::size_t end) {
    if (x.size() != y.size() || lag_profile.size() != y.size()) {
        throw Error(ErrorKind::InvalidArgument, "synchronize: lag profile and series lengths must match");
    }
    PairedSamples out;
    const auto n = static_cast<long>(x.size());
    for (std::size_t t = begin; t < end && t < y.size(); ++t) {
        const long src = static_cast<long>(t) - round_lag(lag_profile[t]);
        if (src < 0 || src >= n) continue;
        out.x.push_back(x[static_cast<std::size_t>(src)]);
        out.y.push_back(y[t]);
    }
    if (out.x.empty()) throw Error(ErrorKind::EmptyOverlap, "synchronize: no pair has an in-range shifted index");
    return out;
}

[[nodiscard]] inline PairedSamples synchronize(std::span<const double> x, std::span<const double> y,
                                               std::span<const double> lag_profile) {
    return synchronize(x, y, lag_profile, 0, y.size());
}

enum class Alternative { TwoSided, Greater };

struct SlopeTest {
    double slope = 0.0;
    double intercept = 0.0;
    double t_statistic = 0.0;
    bool significant = false;
};

/**
 * OLS of y on x with intercept and a Student-t test of slope != 0 with
 * m - 2 degrees of freedom. alpha = 1 - confidence; the two-sided test
 * rejects when |t| exceeds the 1 - alpha / 2 quantile.
 */
[[nodiscard]] inline SlopeTest ols_slope_test(std::span<const double> x, std::span<const double> y,
                                              double confidence = 0.975,
                                              Alternative alternative = Alternative::TwoSided) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "ols_slope_test: length mismatch");
    if (x.size() < 3) throw Error(ErrorKind::TooShort, "ols_slope_test: need at least 3 pairs");
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorKind::InvalidArgument, "confidence must lie in (0, 1)");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateRegressor, "ols_slope_test: constant regressor");

    SlopeTest out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - out.intercept - out.slope * x[i];
        rss += r * r;
    }
    const double dof = static_cast<double>(x.size() - 2);
    const double se = std::sqrt(rss / dof / sxx);
    if (se > 0.0) {
        out.t_statistic = out.slope / se;
    } else {
        out.t_statistic = out.slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), out.slope);
    }
    const double alpha = 1.0 - confidence;
    const boost::math::students_t dist(dof);
    if (alternative == Alternative::TwoSided) {
        const double crit = boost::math::quantile(dist, 1.0 - alpha / 2.0);
        out.significant = std::abs(out.t_statistic) > crit;
    } else {
        const double crit = boost::math::quantile(dist, 1.0 - alpha);
        out.significant = out.t_statistic > crit;
    }
    return out;
}

enum class SyncMode {
    PerTime,        ///< each t uses its own rounded lag
    WindowAverage,  ///< every t in a window uses the rounded window-mean lag
};

struct NamedProfile {
    std::string model;
    std::vector<double> lags;
};

struct SignificanceReport {
    std::string model;
    std::size_t windows_total = 0;
    std::size_t windows_significant = 0;
    double mean_a = 0.0;  ///< over significant windows only
    double std_a = 0.0;   ///< sample standard deviation over significant windows
};

struct SelfConsistencyOptions {
    std::size_t window = 100;
    double confidence = 0.975;
    Alternative alternative = Alternative::TwoSided;
    SyncMode sync = SyncMode::PerTime;
};

/// Moving-window regression significance for one profile over z-scored x, y.
[[nodiscard]] inline SignificanceReport self_consistency(std::span<const double> x, std::span<const double> y,
                                                         const NamedProfile& profile,
                                                         const SelfConsistencyOptions& opts = {}) {
    const std::size_t n = y.size();
    if (opts.window < 3 || opts.window > n) throw Error(ErrorKind::InvalidArgument, "significance window must lie in [3, n]");
    SignificanceReport rep;
    rep.model = profile.model;
    rep.windows_total = n - opts.window + 1;
    std::vector<double> slopes;
    std::vector<double> window_lags;
    for (std::size_t start = 0; start + opts.window <= n; ++start) {
        std::span<const double> lags = profile.lags;
        if (opts.sync == SyncMode::WindowAverage) {
            const double avg = mean(lags.subspan(start, opts.window));
            window_lags.assign(n, avg);
            lags = window_lags;
        }
        const auto pairs = synchronize(x, y, lags, start, start + opts.window);
        const auto test = ols_slope_test(pairs.x, pairs.y, opts.confidence, opts.alternative);
        if (test.significant) slopes.push_back(test.slope);
    }
    rep.windows_significant = slopes.size();
    if (!slopes.empty()) rep.mean_a = mean(slopes);
    if (slopes.size() >= 2) rep.std_a = sample_sd(slopes);
    return rep;
}

/// Runs self_consistency for each profile on the z-scored instance series.
[[nodiscard]] inline std::vector<SignificanceReport> self_consistency(const STSInstance& inst,
                                                                      const std::vector<NamedProfile>& profiles,
                                                                      const SelfConsistencyOptions& opts = {}) {
    const TimeSeries xz = normalize(inst.X);
    const TimeSeries yz = normalize(inst.Y);
    std::vector<SignificanceReport> out;
    out.reserve(profiles.size());
    for (const auto& p : profiles) out.push_back(self_consistency(xz.values(), yz.values(), p, opts));
    return out;
}

struct ForecastReport {
    std::string model;
    double mad = 0.0;
};

/**
 * One-step forecast MAD in the raw units of x and y:
 * tau(i) = max(trunc(lag(i)), 0), prediction a * x(i + 1 - tau(i)) for y(i + 1).
 * tau(i) reads only the profile at i.
 */
[[nodiscard]] inline double forecast_mad(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> lag_profile, double a) {
    if (x.size() != y.size() || lag_profile.size() != y.size()) {
        throw Error(ErrorKind::InvalidArgument, "forecast_mad: lag profile and series lengths must match");
    }
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const long tau = std::max(static_cast<long>(std::trunc(lag_profile[i])), 0L);
        const long src = static_cast<long>(i) + 1 - tau;
        if (src < 0) continue;
        total += std::abs(a * x[static_cast<std::size_t>(src)] - y[i + 1]);
        ++count;
    }
    if (count == 0) throw Error(ErrorKind::EmptyOverlap, "forecast_mad: no forecastable index");
    return total / static_cast<double>(count);
}

[[nodiscard]] inline ForecastReport forecast_mad(const STSInstance& inst, const NamedProfile& profile) {
    return {profile.model, forecast_mad(inst.X.values(), inst.Y.values(), profile.lags, inst.config.a)};
}

// ---------------------------------------------------------------------------
// Model set

enum class ModelKind { AC, TOP, DTW, Actual, Unsynced };

struct ModelSpec {
    ModelKind kind = ModelKind::AC;
    double temperature = 0.0;  ///< TOP only
};

[[nodiscard]] inline std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

[[nodiscard]] inline std::string model_label(const ModelSpec& m) {
    switch (m.kind) {
    case ModelKind::AC: return "AC";
    case ModelKind::TOP: return "TOP, T=" + format_number(m.temperature);
    case ModelKind::DTW: return "DTW";
    case ModelKind::Actual: return "Actual path";
    case ModelKind::Unsynced: return "Unsynced Path";
    }
    return "?";
}

/// Parses "ac", "dtw", "actual", "unsynced" or "top:<T>".
[[nodiscard]] inline ModelSpec parse_model(const std::string& token) {
    if (token == "ac") return {ModelKind::AC};
    if (token == "dtw") return {ModelKind::DTW};
    if (token == "actual") return {ModelKind::Actual};
    if (token == "unsynced") return {ModelKind::Unsynced};
    if (token.rfind("top:", 0) == 0) {
        const std::string num = token.substr(4);
        std::size_t used = 0;
        double t = 0.0;
        try {
            t = std::stod(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != num.size() || num.empty() || !(t > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "bad TOP temperature in model '" + token + "'");
        }
        return {ModelKind::TOP, t};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown model '" + token + "'");
}

[[nodiscard]] inline std::vector<ModelSpec> parse_models(const std::string& list) {
    std::vector<ModelSpec> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(parse_model(tok));
    }
    if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty model list");
    return out;
}

/// All eight models, in report row order.
[[nodiscard]] inline std::vector<ModelSpec> default_models() {
    return parse_models("ac,top:2,top:1,top:0.5,top:0.2,dtw,actual,unsynced");
}

struct EstimatorConfig {
    ACConfig ac;
    std::size_t dtw_psi = 25;
    std::size_t top_psi = 25;
    LagAxis axis = LagAxis::Second;
};

/// Lag profiles (length n) for each requested model. Estimators run on the
/// z-scored series.
[[nodiscard]] inline std::vector<NamedProfile> estimate_profiles(const STSInstance& inst,
                                                                 const std::vector<ModelSpec>& models,
                                                                 const EstimatorConfig& cfg = {}) {
    const std::size_t n = inst.X.size();
    const TimeSeries xz = normalize(inst.X);
    const TimeSeries yz = normalize(inst.Y);
    std::vector<NamedProfile> out;
    for (const auto& m : models) {
        NamedProfile prof{model_label(m), {}};
        switch (m.kind) {
        case ModelKind::AC:
            prof.lags = lead_lag_series(aligned_correlation(xz, yz, cfg.ac).path, n, cfg.axis);
            break;
        case ModelKind::DTW:
            prof.lags = lead_lag_series(dtw_path(xz, yz, cfg.dtw_psi).path, n, cfg.axis);
            break;
        case ModelKind::TOP:
            prof.lags = top_lead_lag(xz, yz, TOPConfig{m.temperature, cfg.top_psi, Renormalization::Sum});
            break;
        case ModelKind::Actual:
            prof.lags.assign(inst.true_lags.begin(), inst.true_lags.end());
            break;
        case ModelKind::Unsynced:
            prof.lags.assign(n, 0.0);
            break;
        }
        out.push_back(std::move(prof));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Table output, six decimals

[[nodiscard]] inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline void write_significance_csv(std::ostream& os, const std::vector<SignificanceReport>& rows) {
    os << "Model,No. of Windows Significant,Mean a value,Standard Deviation of a values\n";
    os << std::fixed << std::setprecision(6);
    for (const auto& r : rows) {
        os << csv_field(r.model) << ',' << r.windows_significant << ',' << r.mean_a << ',' << r.std_a << '\n';
    }
    os << std::defaultfloat;
}

inline void write_forecast_csv(std::ostream& os, const std::vector<ForecastReport>& rows) {
    os << "Model,MAD\n";
    os << std::fixed << std::setprecision(6);
    for (const auto& r : rows) os << csv_field(r.model) << ',' << r.mad << '\n';
    os << std::defaultfloat;
}

/// Plot data: t, true_lag, then one column per model.
inline void write_lag_paths_csv(std::ostream& os, const std::vector<long>& true_lags,
                                const std::vector<NamedProfile>& profiles) {
    os << "t,true_lag";
    for (const auto& p : profiles) os << ',' << csv_field(p.model);
    os << '\n' << std::fixed << std::setprecision(6);
    for (std::size_t t = 0; t < true_lags.size(); ++t) {
        os << (t + 1) << ',' << true_lags[t];
        for (const auto& p : profiles) os << ',' << p.lags[t];
        os << '\n';
    }
    os << std::defaultfloat;
}

}  // namespace aclag
