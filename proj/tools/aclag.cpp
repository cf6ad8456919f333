// aclag: command-line front end for the aligned-correlation library.
//
//   aclag align PANEL.csv [OTHER.csv] [--x COL] [--y COL] ...
//   aclag synth-eval --schedule 1 --seed 7 ...
//   aclag network PANEL.csv --range 2008-01-01..2008-06-30 ...
//
// Exit status: 0 success, 1 usage, 2 data, 3 numerical.

#include <aclag/alignment.hpp>
#include <aclag/baselines.hpp>
#include <aclag/error.hpp>
#include <aclag/evaluation.hpp>
#include <aclag/network.hpp>
#include <aclag/panel_io.hpp>
#include <aclag/synthetic.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using aclag::Error;
using aclag::ErrorKind;

namespace {

struct CommonOptions {
    std::string windows = "25,51,101";
    std::string psi = "auto";
    bool no_identity = false;
    std::string format = "iso";
    std::string output_dir = ".";
};

std::vector<std::size_t> parse_windows(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw Error(ErrorKind::InvalidArgument, "bad window size '" + tok + "'");
        }
        out.push_back(v);
    }
    return out;
}

aclag::ACConfig make_ac_config(const CommonOptions& o) {
    aclag::ACConfig cfg;
    cfg.windows = parse_windows(o.windows);
    cfg.include_identity_candidate = !o.no_identity;
    if (o.psi != "auto") {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(o.psi.data(), o.psi.data() + o.psi.size(), v);
        if (o.psi.empty() || ec != std::errc() || ptr != o.psi.data() + o.psi.size()) {
            throw Error(ErrorKind::InvalidArgument, "--psi takes a non-negative integer or 'auto'");
        }
        cfg.psi = v;
    }
    return cfg;
}

aclag::TimestampFormat make_format(const std::string& f) {
    if (f == "iso") return aclag::TimestampFormat::Iso;
    if (f == "dmy") return aclag::TimestampFormat::DayMonthYear;
    throw Error(ErrorKind::InvalidArgument, "--format must be 'iso' or 'dmy'");
}

std::ofstream open_output(const CommonOptions& o, const std::string& name) {
    const fs::path path = fs::path(o.output_dir) / name;
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
    return out;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--windows", o.windows, "Comma-separated odd window sizes")->capture_default_str();
    cmd->add_option("--psi", o.psi, "Endpoint relaxation: integer, or 'auto' for psi = window")->capture_default_str();
    cmd->add_flag("--no-identity-candidate", o.no_identity, "Drop the zero-lag path from the candidates");
    cmd->add_option("-o,--output-dir", o.output_dir, "Directory for output files")->capture_default_str();
}

// ---------------------------------------------------------------------------
// align

struct AlignOptions {
    std::vector<std::string> files;
    std::string x_column;
    std::string y_column;
    std::vector<std::string> ranges;
    std::string baselines;
    std::size_t dtw_psi = 25;
    std::size_t top_psi = 25;
};

std::size_t column_index(const aclag::RawPanel& p, const std::string& label, std::size_t fallback) {
    if (label.empty()) {
        if (fallback >= p.labels.size()) throw Error(ErrorKind::InsufficientData, "panel has too few series columns");
        return fallback;
    }
    for (std::size_t k = 0; k < p.labels.size(); ++k) {
        if (p.labels[k] == label) return k;
    }
    throw Error(ErrorKind::InvalidArgument, "no column named '" + label + "'");
}

int run_align(const CommonOptions& co, const AlignOptions& ao) {
    const auto cfg = make_ac_config(co);
    const auto fmt = make_format(co.format);
    if (ao.ranges.size() > 1) throw Error(ErrorKind::InvalidArgument, "align takes at most one --range");
    std::optional<aclag::DateRange> range;
    if (!ao.ranges.empty()) range = aclag::parse_range(ao.ranges.front(), fmt);

    aclag::RawPanel joined;
    std::size_t xi = 0, yi = 0;
    if (ao.files.size() == 1) {
        joined = aclag::read_panel_file(ao.files[0], fmt);
        xi = column_index(joined, ao.x_column, 0);
        yi = column_index(joined, ao.y_column, 1);
    } else {
        const auto a = aclag::read_panel_file(ao.files[0], fmt);
        const auto b = aclag::read_panel_file(ao.files[1], fmt);
        xi = column_index(a, ao.x_column, 0);
        yi = a.labels.size() + column_index(b, ao.y_column, 0);
        joined = aclag::inner_join(a, b);
        if (joined.timestamps.empty()) throw Error(ErrorKind::EmptyOverlap, "the two files share no timestamps");
    }
    const auto panel = aclag::select_range(joined, range);
    const auto& x = panel[xi];
    const auto& y = panel[yi];

    const auto result = aclag::aligned_correlation(x, y, cfg);
    const double zero_lag = aclag::pearson(aclag::returns(x).values(), aclag::returns(y).values());
    auto summary = aclag::align_summary_json(result, zero_lag);
    summary["x"] = x.label();
    summary["y"] = y.label();
    summary["rows"] = x.size();

    auto path_out = open_output(co, "path.csv");
    aclag::write_path_csv(path_out, result.path);

    if (!ao.baselines.empty()) {
        nlohmann::json extra = nlohmann::json::array();
        for (const auto& m : aclag::parse_models(ao.baselines)) {
            if (m.kind == aclag::ModelKind::DTW) {
                const auto w = aclag::dtw_path(x, y, ao.dtw_psi);
                const auto prof = aclag::lead_lag_profile(w.path);
                auto dtw_out = open_output(co, "dtw_path.csv");
                aclag::write_path_csv(dtw_out, w.path);
                extra.push_back({{"model", aclag::model_label(m)},
                                 {"cumulative_cost", w.cumulative_cost},
                                 {"average_lag", prof.average_lag},
                                 {"nonzero_ratio", prof.nonzero_ratio}});
            } else if (m.kind == aclag::ModelKind::TOP) {
                const auto lags = aclag::top_lead_lag(x, y, {m.temperature, ao.top_psi, aclag::Renormalization::Sum});
                extra.push_back({{"model", aclag::model_label(m)}, {"average_lag", aclag::mean(lags)}});
            } else {
                throw Error(ErrorKind::InvalidArgument, "align baselines are 'dtw' and 'top:<T>'");
            }
        }
        summary["baselines"] = extra;
    }

    auto summary_out = open_output(co, "summary.json");
    summary_out << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// synth-eval

struct SynthOptions {
    int schedule = 1;
    std::uint64_t seed = 1;
    std::size_t n = 300;
    double a = 0.8;
    double b = 0.7;
    double f = 0.5;
    std::string models = "ac,top:2,top:1,top:0.5,top:0.2,dtw,actual,unsynced";
    std::size_t window_size = 100;
    double confidence = 0.975;
    bool one_sided = false;
    std::string sync = "per-time";
    std::size_t dtw_psi = 25;
    std::size_t top_psi = 25;
    std::string lag_axis = "second";
};

int run_synth(const CommonOptions& co, const SynthOptions& so) {
    aclag::STSConfig sts;
    sts.schedule_id = so.schedule;
    sts.seed = so.seed;
    sts.n = so.n;
    sts.a = so.a;
    sts.b = so.b;
    sts.f = so.f;

    aclag::EstimatorConfig est;
    est.ac = make_ac_config(co);
    est.dtw_psi = so.dtw_psi;
    est.top_psi = so.top_psi;
    if (so.lag_axis == "first") {
        est.axis = aclag::LagAxis::First;
    } else if (so.lag_axis != "second") {
        throw Error(ErrorKind::InvalidArgument, "--lag-axis must be 'first' or 'second'");
    }

    aclag::SelfConsistencyOptions sc;
    sc.window = so.window_size;
    sc.confidence = so.confidence;
    sc.alternative = so.one_sided ? aclag::Alternative::Greater : aclag::Alternative::TwoSided;
    if (so.sync == "window-average") {
        sc.sync = aclag::SyncMode::WindowAverage;
    } else if (so.sync != "per-time") {
        throw Error(ErrorKind::InvalidArgument, "--sync must be 'per-time' or 'window-average'");
    }
    if (!(so.confidence > 0.0 && so.confidence < 1.0)) throw Error(ErrorKind::InvalidArgument, "--confidence must lie in (0, 1)");

    const auto models = aclag::parse_models(so.models);
    const auto inst = aclag::gen_sts(sts);
    const auto profiles = aclag::estimate_profiles(inst, models, est);
    const auto significance = aclag::self_consistency(inst, profiles, sc);
    std::vector<aclag::ForecastReport> forecast;
    for (const auto& p : profiles) forecast.push_back(aclag::forecast_mad(inst, p));

    auto sts_out = open_output(co, "sts.csv");
    aclag::write_sts_csv(sts_out, inst);
    auto sig_out = open_output(co, "significance.csv");
    aclag::write_significance_csv(sig_out, significance);
    auto mad_out = open_output(co, "forecast.csv");
    aclag::write_forecast_csv(mad_out, forecast);
    auto lag_out = open_output(co, "lag_paths.csv");
    aclag::write_lag_paths_csv(lag_out, inst.true_lags, profiles);

    aclag::write_significance_csv(std::cout, significance);
    std::cout << '\n';
    aclag::write_forecast_csv(std::cout, forecast);
    return 0;
}

// ---------------------------------------------------------------------------
// network

struct NetworkOptions {
    std::string file;
    std::vector<std::string> ranges;
    bool all_pairs = false;
    bool full_graph = false;
    unsigned threads = 0;
};

int run_network(const CommonOptions& co, const NetworkOptions& no) {
    const auto cfg = make_ac_config(co);
    const auto fmt = make_format(co.format);
    std::vector<std::optional<aclag::DateRange>> ranges;
    for (const auto& r : no.ranges) ranges.emplace_back(aclag::parse_range(r, fmt));
    if (ranges.empty()) ranges.emplace_back(std::nullopt);
    const auto raw = aclag::read_panel_file(no.file, fmt);

    std::vector<aclag::NamedMetrics> rows;
    for (std::size_t k = 0; k < ranges.size(); ++k) {
        const auto panel = aclag::select_range(raw, ranges[k]);
        const auto matrix = aclag::build_distance_matrix(panel, cfg, no.threads);
        const auto audit = aclag::triangle_audit(matrix);
        const auto tree = aclag::minimum_spanning_tree(matrix);
        const auto metrics = aclag::network_metrics(
            matrix, tree, no.full_graph ? aclag::PathLengthMode::FullGraph : aclag::PathLengthMode::Tree);

        auto doc = aclag::network_json(matrix, tree, metrics, audit, no.all_pairs);
        doc["range"] = ranges[k] ? ranges[k]->text : std::string("all");
        doc["rows"] = panel.front().size();
        const std::string suffix = "_" + std::to_string(k + 1);
        auto json_out = open_output(co, "network" + suffix + ".json");
        json_out << doc.dump(2) << '\n';
        auto edge_out = open_output(co, "edges" + suffix + ".csv");
        aclag::write_edges_csv(edge_out, matrix, tree);
        rows.push_back({ranges[k] ? ranges[k]->text : std::string("all"), metrics});
        if (audit.violations > 0) {
            std::cerr << "warning: " << audit.violations << " of " << audit.triples_checked
                      << " triples violate the triangle inequality in range " << rows.back().range << '\n';
        }
    }
    auto metrics_out = open_output(co, "metrics.csv");
    aclag::write_metrics_csv(metrics_out, rows);
    aclag::write_metrics_csv(std::cout, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lead-lag detection and correlation networks with aligned correlation"};
    app.require_subcommand(1);

    CommonOptions common;

    AlignOptions align_opts;
    auto* align = app.add_subcommand("align", "Align two series; writes path.csv and summary.json");
    align->add_option("files", align_opts.files, "One panel, or two files joined on timestamp")->required()->expected(1, 2);
    align->add_option("--x", align_opts.x_column, "Column for the first series (default: first)");
    align->add_option("--y", align_opts.y_column, "Column for the second series (default: second, or first of the second file)");
    align->add_option("--range", align_opts.ranges, "Inclusive START..END filter");
    align->add_option("--baselines", align_opts.baselines, "Also run 'dtw' and/or 'top:<T>' (comma list)");
    align->add_option("--dtw-psi", align_opts.dtw_psi, "DTW endpoint relaxation")->capture_default_str();
    align->add_option("--top-psi", align_opts.top_psi, "TOP start box size")->capture_default_str();
    align->add_option("--format", common.format, "Timestamp format: iso or dmy")->capture_default_str();
    add_common(align, common);

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth-eval", "Generate a synthetic lead-lag instance and score the estimators");
    synth->add_option("--schedule", synth_opts.schedule, "Lag schedule 1-4")->capture_default_str();
    synth->add_option("--seed", synth_opts.seed, "Random seed")->capture_default_str();
    synth->add_option("--n", synth_opts.n, "Series length")->capture_default_str();
    synth->add_option("--a", synth_opts.a, "Coupling coefficient")->capture_default_str();
    synth->add_option("--b", synth_opts.b, "AR(1) coefficient")->capture_default_str();
    synth->add_option("--f", synth_opts.f, "Noise ratio sigma_eta / sigma_xi")->capture_default_str();
    synth->add_option("--models", synth_opts.models, "Comma list of ac, dtw, actual, unsynced, top:<T>")->capture_default_str();
    synth->add_option("--window-size", synth_opts.window_size, "Significance window")->capture_default_str();
    synth->add_option("--confidence", synth_opts.confidence, "Slope test confidence")->capture_default_str();
    synth->add_flag("--one-sided", synth_opts.one_sided, "Test slope > 0 instead of slope != 0");
    synth->add_option("--sync", synth_opts.sync, "per-time or window-average")->capture_default_str();
    synth->add_option("--dtw-psi", synth_opts.dtw_psi, "DTW endpoint relaxation")->capture_default_str();
    synth->add_option("--top-psi", synth_opts.top_psi, "TOP start box size")->capture_default_str();
    synth->add_option("--lag-axis", synth_opts.lag_axis, "Key path lags on the 'second' or 'first' series' time")
        ->capture_default_str();
    add_common(synth, common);

    NetworkOptions net_opts;
    auto* net = app.add_subcommand("network", "MST network and metrics per date range");
    net->add_option("panel", net_opts.file, "Panel CSV")->required();
    net->add_option("--range", net_opts.ranges, "Inclusive START..END, repeatable");
    net->add_flag("--all-pairs", net_opts.all_pairs, "Write pair_stats for every pair, not only MST edges");
    net->add_flag("--full-graph-paths", net_opts.full_graph, "Path-length metric over the full graph");
    net->add_option("--threads", net_opts.threads, "Worker threads (0 = all cores)")->capture_default_str();
    net->add_option("--format", common.format, "Timestamp format: iso or dmy")->capture_default_str();
    add_common(net, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*align) return run_align(common, align_opts);
        if (*synth) return run_synth(common, synth_opts);
        if (*net) return run_network(common, net_opts);
    } catch (const Error& e) {
        std::cerr << "aclag: " << e.what() << '\n';
        return aclag::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "aclag: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
