/**
 * @file panel_io.hpp
 * @brief Price-panel CSV ingestion and the CSV/JSON report formats.
 *
 * A panel file has a header row (timestamp column, then one column per
 * series) and one observation per row. Rows with a missing or unparseable
 * value in any series column are dropped; timestamps must be strictly
 * increasing. Timestamps are ISO-8601 (YYYY-MM-DD, optionally followed by
 * 'T' or ' ' and HH:MM[:SS], optionally 'Z') or, with
 * TimestampFormat::DayMonthYear, DD-MM-YYYY [HH:MM[:SS]].
 */
#pragma once

#include <aclag/alignment.hpp>
#include <aclag/error.hpp>
#include <aclag/evaluation.hpp>
#include <aclag/network.hpp>
#include <aclag/series.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace aclag {

enum class TimestampFormat { Iso, DayMonthYear };

/// Seconds since 1970-01-01 UTC.
using Timestamp = std::int64_t;

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<int> parse_fixed(std::string_view s, std::size_t pos, std::size_t len) {
    if (pos + len > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t k = pos; k < pos + len; ++k) {
        if (s[k] < '0' || s[k] > '9') return std::nullopt;
        v = v * 10 + (s[k] - '0');
    }
    return v;
}

/// Splits one CSV record; double quotes group fields and "" escapes a quote.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                fields.back() += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw Error(ErrorKind::ParseError, "unterminated quote in CSV line");
    for (auto& f : fields) f = std::string(trim(f));
    return fields;
}

inline std::optional<double> parse_value(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace detail

/// Parses a timestamp; returns nullopt when `text` does not match `fmt`.
/// `date_only` is set when no time of day was given.
[[nodiscard]] inline std::optional<Timestamp> parse_timestamp(std::string_view text, TimestampFormat fmt,
                                                              bool* date_only = nullptr) {
    using namespace std::chrono;
    std::string_view s = detail::trim(text);
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    std::optional<int> y, mo, d;
    if (fmt == TimestampFormat::Iso) {
        if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        y = detail::parse_fixed(s, 0, 4);
        mo = detail::parse_fixed(s, 5, 2);
        d = detail::parse_fixed(s, 8, 2);
    } else {
        if (s.size() < 10 || s[2] != '-' || s[5] != '-') return std::nullopt;
        d = detail::parse_fixed(s, 0, 2);
        mo = detail::parse_fixed(s, 3, 2);
        y = detail::parse_fixed(s, 6, 4);
    }
    if (!y || !mo || !d) return std::nullopt;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;

    int hh = 0, mm = 0, ss = 0;
    std::string_view rest = s.substr(10);
    if (date_only) *date_only = rest.empty();
    if (!rest.empty()) {
        if (rest[0] != 'T' && rest[0] != ' ') return std::nullopt;
        rest.remove_prefix(1);
        const auto h = detail::parse_fixed(rest, 0, 2);
        const auto m = detail::parse_fixed(rest, 3, 2);
        if (!h || !m || rest.size() < 5 || rest[2] != ':') return std::nullopt;
        hh = *h;
        mm = *m;
        if (rest.size() == 8 && rest[5] == ':') {
            const auto sec = detail::parse_fixed(rest, 6, 2);
            if (!sec) return std::nullopt;
            ss = *sec;
        } else if (rest.size() != 5) {
            return std::nullopt;
        }
        if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<Timestamp>(days) * 86400 + hh * 3600 + mm * 60 + ss;
}

/// Inclusive timestamp range; either end may be open. A date-only end
/// covers the whole day.
struct DateRange {
    std::optional<Timestamp> start;
    std::optional<Timestamp> end;
    std::string text;

    [[nodiscard]] bool contains(Timestamp t) const noexcept {
        return (!start || t >= *start) && (!end || t <= *end);
    }
};

/// Parses "START..END" where either side may be empty.
[[nodiscard]] inline DateRange parse_range(const std::string& text, TimestampFormat fmt) {
    const auto sep = text.find("..");
    if (sep == std::string::npos) throw Error(ErrorKind::InvalidArgument, "range '" + text + "' must look like START..END");
    DateRange r;
    r.text = text;
    const std::string a = text.substr(0, sep);
    const std::string b = text.substr(sep + 2);
    if (!detail::trim(a).empty()) {
        r.start = parse_timestamp(a, fmt);
        if (!r.start) throw Error(ErrorKind::InvalidArgument, "bad range start '" + a + "'");
    }
    if (!detail::trim(b).empty()) {
        bool date_only = false;
        r.end = parse_timestamp(b, fmt, &date_only);
        if (!r.end) throw Error(ErrorKind::InvalidArgument, "bad range end '" + b + "'");
        if (date_only) *r.end += 86399;
    }
    if (r.start && r.end && *r.start > *r.end) throw Error(ErrorKind::InvalidArgument, "range '" + text + "' is empty");
    return r;
}

/// Complete rows of a panel in file order, before normalization.
struct RawPanel {
    std::vector<std::string> labels;
    std::vector<Timestamp> timestamps;
    std::vector<std::vector<double>> columns;  ///< one vector per label
    std::size_t rows_total = 0;
    std::size_t rows_incomplete = 0;
};

[[nodiscard]] inline RawPanel read_panel(std::istream& in, TimestampFormat fmt = TimestampFormat::Iso) {
    RawPanel panel;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty panel file");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2) throw Error(ErrorKind::ParseError, "panel needs a timestamp column and at least one series");
    panel.labels.assign(header.begin() + 1, header.end());
    panel.columns.resize(panel.labels.size());

    std::optional<Timestamp> previous;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                                   " fields, expected " + std::to_string(header.size()));
        }
        const auto ts = parse_timestamp(fields[0], fmt);
        if (!ts) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad timestamp '" + fields[0] + "'");
        if (previous && *ts <= *previous) {
            throw Error(ErrorKind::NonMonotoneTimestamps, "line " + std::to_string(line_no) + ": timestamp not after previous row");
        }
        previous = ts;
        ++panel.rows_total;

        std::vector<double> row;
        row.reserve(panel.labels.size());
        for (std::size_t k = 1; k < fields.size(); ++k) {
            const auto v = detail::parse_value(fields[k]);
            if (!v) break;
            row.push_back(*v);
        }
        if (row.size() != panel.labels.size()) {
            ++panel.rows_incomplete;
            continue;
        }
        panel.timestamps.push_back(*ts);
        for (std::size_t k = 0; k < row.size(); ++k) panel.columns[k].push_back(row[k]);
    }
    return panel;
}

[[nodiscard]] inline RawPanel read_panel_file(const std::string& path, TimestampFormat fmt = TimestampFormat::Iso) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    return read_panel(in, fmt);
}

/// Rows of `raw` within `range`, each column z-scored.
[[nodiscard]] inline std::vector<TimeSeries> select_range(const RawPanel& raw, const std::optional<DateRange>& range) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < raw.timestamps.size(); ++r) {
        if (!range || range->contains(raw.timestamps[r])) keep.push_back(r);
    }
    if (keep.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "fewer than 2 complete rows" +
                                                     (range ? " in range '" + range->text + "'" : std::string()));
    }
    std::vector<TimeSeries> out;
    for (std::size_t k = 0; k < raw.labels.size(); ++k) {
        std::vector<double> v;
        v.reserve(keep.size());
        for (std::size_t r : keep) v.push_back(raw.columns[k][r]);
        out.push_back(normalize(TimeSeries(std::move(v), raw.labels[k])));
    }
    return out;
}

[[nodiscard]] inline std::vector<TimeSeries> ingest_panel(const std::string& path, const std::optional<DateRange>& range = {},
                                                          TimestampFormat fmt = TimestampFormat::Iso) {
    return select_range(read_panel_file(path, fmt), range);
}

/// Rows present in both panels (matched on timestamp), labels concatenated.
[[nodiscard]] inline RawPanel inner_join(const RawPanel& a, const RawPanel& b) {
    RawPanel out;
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    out.columns.resize(out.labels.size());
    std::size_t i = 0, j = 0;
    while (i < a.timestamps.size() && j < b.timestamps.size()) {
        if (a.timestamps[i] < b.timestamps[j]) {
            ++i;
        } else if (b.timestamps[j] < a.timestamps[i]) {
            ++j;
        } else {
            out.timestamps.push_back(a.timestamps[i]);
            for (std::size_t k = 0; k < a.labels.size(); ++k) out.columns[k].push_back(a.columns[k][i]);
            for (std::size_t k = 0; k < b.labels.size(); ++k) out.columns[a.labels.size() + k].push_back(b.columns[k][j]);
            ++i;
            ++j;
        }
    }
    out.rows_total = out.timestamps.size();
    return out;
}

// ---------------------------------------------------------------------------
// Outputs

/// Columns l, p_l, q_l, lag; indices are 1-based.
inline void write_path_csv(std::ostream& os, const AlignmentPath& path) {
    os << "l,p_l,q_l,lag\n";
    for (std::size_t l = 0; l < path.size(); ++l) {
        const auto& c = path.pairs[l];
        os << (l + 1) << ',' << (c.p + 1) << ',' << (c.q + 1) << ','
           << (static_cast<long>(c.q) - static_cast<long>(c.p)) << '\n';
    }
}

[[nodiscard]] inline nlohmann::json window_json(const std::optional<std::size_t>& w) {
    return w ? nlohmann::json(*w) : nlohmann::json("identity");
}

[[nodiscard]] inline nlohmann::json align_summary_json(const ACResult& r, double zero_lag_correlation) {
    nlohmann::json j;
    j["ac_distance"] = r.ac_distance;
    j["aligned_correlation"] = r.aligned_correlation;
    j["chosen_window"] = window_json(r.chosen_window);
    j["average_lag"] = r.profile.average_lag;
    j["nonzero_ratio"] = r.profile.nonzero_ratio;
    j["zero_lag_correlation"] = zero_lag_correlation;
    j["path_length"] = r.path.size();
    nlohmann::json cands = nlohmann::json::array();
    for (const auto& c : r.candidates) cands.push_back({{"window", window_json(c.window)}, {"score", c.score}});
    j["candidates"] = cands;
    return j;
}

[[nodiscard]] inline nlohmann::json pair_stats_json(const DistanceMatrix& m, const PairStats& s) {
    return {{"x", m.labels()[s.i]},
            {"y", m.labels()[s.j]},
            {"ac_distance", s.ac_distance},
            {"aligned_correlation", s.aligned_correlation},
            {"zero_lag_correlation", s.zero_lag_correlation},
            {"average_lag", s.average_lag},
            {"nonzero_ratio", s.nonzero_ratio},
            {"chosen_window", window_json(s.chosen_window)}};
}

[[nodiscard]] inline nlohmann::json metrics_json(const NetworkMetrics& m) {
    return {{"mean_dissimilarity", m.mean_dissimilarity},
            {"normalized_tree_length", m.normalized_tree_length},
            {"characterized_path_length", m.characterized_path_length},
            {"non_leaf_nodes", m.non_leaf_nodes}};
}

/// Network document. pair_stats covers MST edges unless `all_pairs`.
[[nodiscard]] inline nlohmann::json network_json(const DistanceMatrix& m, const MSTree& t, const NetworkMetrics& metrics,
                                                 const TriangleAudit& audit, bool all_pairs) {
    nlohmann::json j;
    j["labels"] = m.labels();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<double> row(m.size());
        for (std::size_t k = 0; k < m.size(); ++k) row[k] = m(i, k);
        rows.push_back(row);
    }
    j["distance_matrix"] = rows;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : t.edges) {
        edges.push_back({{"source", m.labels()[e.i]}, {"target", m.labels()[e.j]}, {"weight", e.weight}});
    }
    j["mst_edges"] = edges;
    j["metrics"] = metrics_json(metrics);
    nlohmann::json tri{{"triples_checked", audit.triples_checked}, {"violations", audit.violations}};
    if (audit.worst) {
        tri["worst_triple"] = {m.labels()[(*audit.worst)[0]], m.labels()[(*audit.worst)[1]], m.labels()[(*audit.worst)[2]]};
        tri["worst_excess"] = audit.worst_excess;
    }
    j["triangle_audit"] = tri;
    nlohmann::json stats = nlohmann::json::array();
    if (all_pairs) {
        for (const auto& s : m.pair_stats) stats.push_back(pair_stats_json(m, s));
    } else {
        for (const auto& e : t.edges) {
            const auto it = std::find_if(m.pair_stats.begin(), m.pair_stats.end(),
                                         [&](const PairStats& s) { return s.i == e.i && s.j == e.j; });
            if (it != m.pair_stats.end()) stats.push_back(pair_stats_json(m, *it));
        }
    }
    j["pair_stats"] = stats;
    return j;
}

inline void write_edges_csv(std::ostream& os, const DistanceMatrix& m, const MSTree& t) {
    os << "source,target,weight\n" << std::fixed << std::setprecision(6);
    for (const auto& e : t.edges) {
        os << csv_field(m.labels()[e.i]) << ',' << csv_field(m.labels()[e.j]) << ',' << e.weight << '\n';
    }
    os << std::defaultfloat;
}

struct NamedMetrics {
    std::string range;
    NetworkMetrics metrics;
};

inline void write_metrics_csv(std::ostream& os, const std::vector<NamedMetrics>& rows) {
    os << "range,mean_dissimilarity,normalized_tree_length,characterized_path_length,non_leaf_nodes\n";
    os << std::fixed << std::setprecision(6);
    for (const auto& r : rows) {
        os << csv_field(r.range) << ',' << r.metrics.mean_dissimilarity << ',' << r.metrics.normalized_tree_length << ','
           << r.metrics.characterized_path_length << ',' << r.metrics.non_leaf_nodes << '\n';
    }
    os << std::defaultfloat;
}

}  // namespace aclag
