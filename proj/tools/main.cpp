// triadyn: signed temporal network analysis pipeline.
//
// Builds per-period signed networks from event logs, classifies node triples
// into the 138 sparse triad types, estimates empirical and smoothly
// time-varying Markov transition matrices, and evaluates forecasts and
// stability statistics. Every subcommand writes deterministic CSV/JSON
// artifacts plus a run_report.json into the output directory.

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "triadyn/error.hpp"
#include "triadyn/forecast.hpp"
#include "triadyn/ingest.hpp"
#include "triadyn/io.hpp"
#include "triadyn/markov.hpp"
#include "triadyn/netbuild.hpp"
#include "triadyn/stats.hpp"
#include "triadyn/triads.hpp"
#include "triadyn/tvsolver.hpp"
#include "triadyn/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace triadyn;

namespace {

constexpr int kExitAnalysis = 1;
constexpr int kExitInput = 2;

// ---------------------------------------------------------------------------
// Effective settings: defaults overridden by the config file, overridden by
// explicitly passed flags.

struct Settings {
    std::string events;
    std::string exogenous;
    std::string out = "out";
    std::string delimiter = "auto";
    std::string date_format = "%Y-%m-%d";
    ColumnMapping columns;
    std::string period_start = "auto";
    int period_days = 84;
    std::string period_count = "auto";
    bool keep_tail = false;
    std::string core_mode = "union";
    std::string balance_model = "all";
    std::string zero_row_policy = "identity";
    SolverConfig solver;
    std::string penalty_mode = "matrix";
    int holdout_steps = 5;
    bool tune = false;
    int validation_steps = 5;
    bool restrict_operative = false;
    std::vector<double> grid_lambda1 = {0.05, 0.1, 0.5, 1.0, 5.0};
    std::vector<double> grid_lambda2 = {0.005, 0.05, 0.5};
    std::string alignment = "annualize";
    bool invert_exo = false;
    int lags = 1;
    std::uint64_t seed = 1;  // reserved for synthetic/test utilities, echoed
    int threads = 0;
};

struct FlagValues {
    std::string config;
    Settings s;  // flag storage; merged by precedence below
    bool drop_tail = false;
    bool keep_tail = false;
};

template <typename T>
void take(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

Settings merge_settings(const CLI::App& sub, const FlagValues& flags) {
    Settings s;  // defaults

    json cfg = json::object();
    if (!flags.config.empty()) {
        std::ifstream in(flags.config);
        if (!in) throw InputError("cannot open config file: " + flags.config);
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw InputError("config file is not valid JSON: " + std::string(e.what()));
        }
    }

    take(cfg, "events", s.events);
    take(cfg, "exogenous", s.exogenous);
    take(cfg, "out", s.out);
    take(cfg, "delimiter", s.delimiter);
    take(cfg, "date_format", s.date_format);
    if (cfg.contains("columns")) {
        const json& c = cfg["columns"];
        take(c, "date", s.columns.date);
        take(c, "source", s.columns.source);
        take(c, "target", s.columns.target);
        take(c, "weight", s.columns.weight);
    }
    if (cfg.contains("period")) {
        const json& p = cfg["period"];
        take(p, "start", s.period_start);
        take(p, "length_days", s.period_days);
        if (p.contains("count")) {
            if (p["count"].is_string()) {
                s.period_count = p["count"].get<std::string>();
            } else {
                s.period_count = std::to_string(p["count"].get<int>());
            }
        }
        take(p, "keep_tail", s.keep_tail);
    }
    take(cfg, "core_mode", s.core_mode);
    take(cfg, "balance_model", s.balance_model);
    take(cfg, "zero_row_policy", s.zero_row_policy);
    if (cfg.contains("solver")) {
        const json& v = cfg["solver"];
        take(v, "lambda1", s.solver.lambda1);
        take(v, "lambda2", s.solver.lambda2);
        take(v, "epsilon_floor", s.solver.epsilon_floor);
        take(v, "tol", s.solver.tol);
        take(v, "max_iters", s.solver.max_iters);
        take(v, "penalty_mode", s.penalty_mode);
    }
    if (cfg.contains("forecast")) {
        const json& f = cfg["forecast"];
        take(f, "holdout_steps", s.holdout_steps);
        take(f, "tune", s.tune);
        take(f, "validation_steps", s.validation_steps);
        take(f, "restrict_operative", s.restrict_operative);
        take(f, "grid_lambda1", s.grid_lambda1);
        take(f, "grid_lambda2", s.grid_lambda2);
    }
    if (cfg.contains("stats")) {
        const json& t = cfg["stats"];
        take(t, "alignment", s.alignment);
        take(t, "invert_exogenous", s.invert_exo);
        take(t, "lags", s.lags);
    }
    take(cfg, "seed", s.seed);
    take(cfg, "threads", s.threads);

    // Explicit flags win over the config file.
    auto picked = [&](const char* name) { return sub.count(name) > 0; };
    if (picked("--events")) s.events = flags.s.events;
    if (picked("--exogenous")) s.exogenous = flags.s.exogenous;
    if (picked("--out")) s.out = flags.s.out;
    if (picked("--delimiter")) s.delimiter = flags.s.delimiter;
    if (picked("--date-format")) s.date_format = flags.s.date_format;
    if (picked("--period-start")) s.period_start = flags.s.period_start;
    if (picked("--period-days")) s.period_days = flags.s.period_days;
    if (picked("--period-count")) s.period_count = flags.s.period_count;
    if (flags.keep_tail) s.keep_tail = true;
    if (flags.drop_tail) s.keep_tail = false;
    if (picked("--core-mode")) s.core_mode = flags.s.core_mode;
    if (picked("--balance-model")) s.balance_model = flags.s.balance_model;
    if (picked("--zero-row-policy")) s.zero_row_policy = flags.s.zero_row_policy;
    if (picked("--lambda1")) s.solver.lambda1 = flags.s.solver.lambda1;
    if (picked("--lambda2")) s.solver.lambda2 = flags.s.solver.lambda2;
    if (picked("--penalty-mode")) s.penalty_mode = flags.s.penalty_mode;
    if (picked("--holdout-steps")) s.holdout_steps = flags.s.holdout_steps;
    if (picked("--tune")) s.tune = flags.s.tune;
    if (picked("--restrict-operative")) s.restrict_operative = flags.s.restrict_operative;
    if (picked("--alignment")) s.alignment = flags.s.alignment;
    if (picked("--invert-exo")) s.invert_exo = flags.s.invert_exo;
    if (picked("--lags")) s.lags = flags.s.lags;
    if (picked("--threads")) s.threads = flags.s.threads;

    if (s.penalty_mode != "matrix" && s.penalty_mode != "row-groups") {
        throw InputError("penalty-mode must be 'matrix' or 'row-groups'");
    }
    s.solver.penalty_mode =
        s.penalty_mode == "matrix" ? PenaltyMode::Matrix : PenaltyMode::RowGroups;
    if (s.zero_row_policy != "identity" && s.zero_row_policy != "uniform") {
        throw InputError("zero-row-policy must be 'identity' or 'uniform'");
    }
    if (s.balance_model != "all" && s.balance_model != "classical" &&
        s.balance_model != "clustering" && s.balance_model != "transitivity") {
        throw InputError("balance-model must be classical, clustering, transitivity, or all");
    }
    if (s.alignment != "annualize" && s.alignment != "interpolate") {
        throw InputError("alignment must be 'annualize' or 'interpolate'");
    }
    if (s.core_mode != "union" && s.core_mode != "none" && s.core_mode.rfind("fixed:", 0) != 0) {
        throw InputError("core-mode must be 'union', 'none', or 'fixed:FILE'");
    }

#ifdef _OPENMP
    if (s.threads > 0) omp_set_num_threads(s.threads);
#endif
    return s;
}

void add_common_options(CLI::App* sub, FlagValues& flags) {
    sub->add_option("--config", flags.config, "JSON config file; flags override its keys");
    sub->add_option("--events", flags.s.events, "event log (delimited text, header required)");
    sub->add_option("--exogenous", flags.s.exogenous, "exogenous two-column series");
    sub->add_option("--out", flags.s.out, "output directory");
    sub->add_option("--delimiter", flags.s.delimiter, "auto|comma|tab");
    sub->add_option("--date-format", flags.s.date_format, "strftime-style date pattern");
    sub->add_option("--period-start", flags.s.period_start, "ISO date or 'auto' (first event)");
    sub->add_option("--period-days", flags.s.period_days, "period length in days");
    sub->add_option("--period-count", flags.s.period_count, "period count or 'auto'");
    sub->add_flag("--keep-tail", flags.keep_tail, "keep a trailing partial period");
    sub->add_flag("--drop-tail", flags.drop_tail, "drop a trailing partial period (default)");
    sub->add_option("--core-mode", flags.s.core_mode, "union | none | fixed:FILE");
    sub->add_option("--balance-model", flags.s.balance_model,
                    "classical|clustering|transitivity|all");
    sub->add_option("--zero-row-policy", flags.s.zero_row_policy, "identity|uniform");
    sub->add_option("--lambda1", flags.s.solver.lambda1, "l1 fused penalty weight");
    sub->add_option("--lambda2", flags.s.solver.lambda2, "group penalty weight");
    sub->add_option("--penalty-mode", flags.s.penalty_mode, "matrix|row-groups");
    sub->add_option("--holdout-steps", flags.s.holdout_steps, "forecast holdout length");
    sub->add_flag("--tune", flags.s.tune, "grid-search hyperparameters before forecasting");
    sub->add_flag("--restrict-operative", flags.s.restrict_operative,
                  "score RMSE on the 10 most frequent types only");
    sub->add_option("--alignment", flags.s.alignment, "annualize|interpolate");
    sub->add_flag("--invert-exo", flags.s.invert_exo, "use 1/x of the exogenous series");
    sub->add_option("--lags", flags.s.lags, "Granger lag order");
    sub->add_option("--threads", flags.s.threads, "worker threads (0 = library default)");
}

// ---------------------------------------------------------------------------
// Output plumbing.

struct Reporter {
    fs::path dir;
    json counts = json::object();
    json extra = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Reporter(const std::string& out_dir) : dir(out_dir) { fs::create_directories(dir); }

    std::ofstream open(const std::string& name) {
        const fs::path p = dir / name;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw InputError("cannot write output file: " + p.string());
        outputs.push_back(name);
        return f;
    }

    void write_json(const std::string& name, const json& doc) {
        std::ofstream f = open(name);
        f << doc.dump(2) << '\n';
    }

    void finish(const std::string& command, const Settings& s) {
        json echo;
        echo["events"] = s.events;
        echo["exogenous"] = s.exogenous;
        echo["out"] = s.out;
        echo["delimiter"] = s.delimiter;
        echo["date_format"] = s.date_format;
        echo["columns"] = {{"date", s.columns.date},
                           {"source", s.columns.source},
                           {"target", s.columns.target},
                           {"weight", s.columns.weight}};
        echo["period"] = {{"start", s.period_start},
                          {"length_days", s.period_days},
                          {"count", s.period_count},
                          {"keep_tail", s.keep_tail}};
        echo["core_mode"] = s.core_mode;
        echo["balance_model"] = s.balance_model;
        echo["zero_row_policy"] = s.zero_row_policy;
        echo["solver"] = {{"lambda1", s.solver.lambda1},
                          {"lambda2", s.solver.lambda2},
                          {"epsilon_floor", s.solver.epsilon_floor},
                          {"tol", s.solver.tol},
                          {"max_iters", s.solver.max_iters},
                          {"penalty_mode", s.penalty_mode}};
        echo["forecast"] = {{"holdout_steps", s.holdout_steps},
                            {"tune", s.tune},
                            {"validation_steps", s.validation_steps},
                            {"restrict_operative", s.restrict_operative}};
        echo["stats"] = {{"alignment", s.alignment},
                         {"invert_exogenous", s.invert_exo},
                         {"lags", s.lags}};
        echo["seed"] = s.seed;
        echo["threads"] = s.threads;

        std::sort(outputs.begin(), outputs.end());
        json report;
        report["command"] = command;
        report["version"] = kVersion;
        report["config"] = echo;
        report["counts"] = counts;
        if (!extra.empty()) report["notes"] = extra;
        report["outputs"] = outputs;
        report["wall_time_ms"] = static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count());
        write_json("run_report.json", report);
    }
};

// ---------------------------------------------------------------------------
// Pipeline stages shared by the subcommands.

struct Pipeline {
    Settings s;
    EventLog log;
    ParseReport parse_report;
    PeriodBuckets buckets;
    std::vector<SignedNetwork> networks;       // full registry, one per period
    std::vector<std::int32_t> core_ids;        // registry ids of the stable core
    bool core_fallback = false;                // core too small; censusing everything
    std::vector<SignedNetwork> analysis_nets;  // restricted to the core
    TriadTypeTable table;
    std::vector<CensusVector> censuses;
    std::vector<std::vector<double>> proportions;
    std::vector<TransitionCounts> counts;
    std::vector<TransitionMatrix> empirical;

    std::string period_label(int k) const { return format_date(buckets.period_start(k)); }
};

Delimiter parse_delimiter(const std::string& d) {
    if (d == "auto") return Delimiter::Auto;
    if (d == "comma") return Delimiter::Comma;
    if (d == "tab") return Delimiter::Tab;
    throw InputError("delimiter must be auto, comma, or tab");
}

void load_events(Pipeline& p) {
    if (p.s.events.empty()) throw InputError("no events file given (--events or config key)");
    std::ifstream in(p.s.events, std::ios::binary);
    if (!in) throw InputError("cannot open events file: " + p.s.events);
    ParseOptions opts;
    opts.columns = p.s.columns;
    opts.delimiter = parse_delimiter(p.s.delimiter);
    opts.date_format = p.s.date_format;
    p.log = parse_events(in, opts, &p.parse_report);
    std::cerr << "events: kept " << p.parse_report.rows_kept << " of " << p.parse_report.rows_total
              << " rows (" << p.parse_report.self_loops_dropped << " self-loops, "
              << p.parse_report.rows_invalid << " invalid)\n";
}

void bin_events(Pipeline& p) {
    PeriodSpec spec;
    if (p.s.period_start == "auto") {
        std::int32_t min_day = p.log.events.front().day;
        for (const Event& ev : p.log.events) min_day = std::min(min_day, ev.day);
        spec.start = civil_from_days(min_day);
    } else {
        const auto d = parse_date(p.s.period_start);
        if (!d) throw InputError("invalid --period-start date: " + p.s.period_start);
        spec.start = *d;
    }
    spec.length_days = p.s.period_days;
    if (p.s.period_count == "auto") {
        spec.count = kAutoPeriodCount;
    } else {
        try {
            std::size_t pos = 0;
            spec.count = std::stoi(p.s.period_count, &pos);
            if (pos != p.s.period_count.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw InputError("period count must be an integer or 'auto'");
        }
    }
    spec.keep_tail = p.s.keep_tail;
    p.buckets = bin_periods(p.log, spec);
    if (p.buckets.excluded > 0) {
        std::cerr << "periods: excluded " << p.buckets.excluded << " events outside the "
                  << p.buckets.buckets.size() << " covered periods\n";
    }
}

void build_all_networks(Pipeline& p) {
    p.networks.clear();
    p.networks.reserve(p.buckets.buckets.size());
    for (std::size_t k = 0; k < p.buckets.buckets.size(); ++k) {
        p.networks.push_back(build_network(p.log, p.buckets.buckets[k], static_cast<int>(k)));
    }
}

std::vector<std::int32_t> load_fixed_core(const Pipeline& p, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open fixed core list: " + path);
    std::vector<std::int32_t> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto it = std::find(p.log.actor_registry.begin(), p.log.actor_registry.end(), line);
        if (it == p.log.actor_registry.end()) {
            throw InputError("fixed core actor '" + line + "' is absent from the registry");
        }
        ids.push_back(static_cast<std::int32_t>(it - p.log.actor_registry.begin()));
    }
    if (ids.empty()) throw InputError("fixed core list is empty: " + path);
    return ids;
}

void pick_core(Pipeline& p) {
    if (p.s.core_mode == "none") {
        p.core_ids = p.networks.front().node_ids;
    } else if (p.s.core_mode.rfind("fixed:", 0) == 0) {
        const std::vector<std::int32_t> ids = load_fixed_core(p, p.s.core_mode.substr(6));
        p.core_ids = stable_core(p.networks, CoreMode::FixedList, ids);
    } else {
        p.core_ids = stable_core(p.networks, CoreMode::UnionOfCores);
    }
    if (p.core_ids.size() < 3) {
        std::cerr << "core: stable core has " << p.core_ids.size()
                  << " node(s); falling back to the full registry for triad analysis\n";
        p.core_fallback = true;
        p.core_ids = p.networks.front().node_ids;
    }
    p.analysis_nets.clear();
    p.analysis_nets.reserve(p.networks.size());
    for (const SignedNetwork& net : p.networks) {
        p.analysis_nets.push_back(restrict_network(net, p.core_ids));
    }
}

void run_censuses(Pipeline& p) {
    p.table = build_type_table();
    p.censuses.clear();
    p.proportions.clear();
    for (const SignedNetwork& net : p.analysis_nets) {
        p.censuses.push_back(census(net, p.table));
        p.proportions.push_back(proportion(p.censuses.back()));
    }
}

void run_transitions(Pipeline& p) {
    if (p.analysis_nets.size() < 2) {
        throw InputError("need at least 2 periods for transition analysis, have " +
                         std::to_string(p.analysis_nets.size()));
    }
    const ZeroRowPolicy policy =
        p.s.zero_row_policy == "identity" ? ZeroRowPolicy::Identity : ZeroRowPolicy::Uniform;
    p.counts.clear();
    p.empirical.clear();
    for (std::size_t k = 0; k + 1 < p.analysis_nets.size(); ++k) {
        p.counts.push_back(transition_counts(p.analysis_nets[k], p.analysis_nets[k + 1], p.table));
        p.empirical.push_back(normalize_rows(p.counts.back(), policy));
    }
}

std::vector<BalanceModel> selected_models(const Settings& s) {
    if (s.balance_model == "classical") return {BalanceModel::Classical};
    if (s.balance_model == "clustering") return {BalanceModel::Clustering};
    if (s.balance_model == "transitivity") return {BalanceModel::Transitivity};
    return {BalanceModel::Classical, BalanceModel::Clustering, BalanceModel::Transitivity};
}

// Top 10 types by total observed count across all periods.
std::vector<int> operative_types(const Pipeline& p) {
    std::array<std::int64_t, kTriadTypeCount> totals{};
    for (const CensusVector& c : p.censuses) {
        for (int t = 0; t < kTriadTypeCount; ++t) totals[t] += c.counts[t];
    }
    std::vector<int> order(kTriadTypeCount);
    for (int t = 0; t < kTriadTypeCount; ++t) order[t] = t;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return totals[a] > totals[b]; });
    order.resize(10);
    std::sort(order.begin(), order.end());
    return order;
}

void fill_common_counts(Pipeline& p, Reporter& rep) {
    rep.counts["rows_total"] = p.parse_report.rows_total;
    rep.counts["rows_kept"] = p.parse_report.rows_kept;
    rep.counts["rows_invalid"] = p.parse_report.rows_invalid;
    rep.counts["self_loops_dropped"] = p.parse_report.self_loops_dropped;
    rep.counts["actors"] = p.log.actor_registry.size();
    rep.counts["periods"] = p.buckets.buckets.size();
    rep.counts["events_excluded_from_periods"] = p.buckets.excluded;
    rep.counts["core_size"] = p.core_ids.size();
    rep.counts["core_fallback_full_registry"] = p.core_fallback;
}

// ---------------------------------------------------------------------------
// CSV writers.

void write_matrix_csv(std::ofstream f, const TransitionMatrix& m) {
    f << "from_type,to_type,probability\n";
    for (int i = 0; i < kTriadTypeCount; ++i) {
        for (int j = 0; j < kTriadTypeCount; ++j) {
            const double v = m.at(i, j);
            if (v != 0.0) f << i << ',' << j << ',' << fmt_double(v) << '\n';
        }
    }
}

std::string period_file(const char* stem, int k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04d.csv", stem, k);
    return buf;
}

ScalarSeries labeled_frobenius(const Pipeline& p) {
    ScalarSeries series = frobenius_diff_series(p.empirical);
    // Label each difference by the start date of the later matrix's from-period.
    for (std::size_t k = 0; k < series.size(); ++k) {
        series.labels[k] = p.period_label(p.empirical[k + 1].from_period);
    }
    return series;
}

ScalarSeries load_exogenous(const Settings& s) {
    if (s.exogenous.empty()) {
        throw InputError("no exogenous series given (--exogenous or config key)");
    }
    std::ifstream in(s.exogenous, std::ios::binary);
    if (!in) throw InputError("cannot open exogenous series: " + s.exogenous);
    return parse_series(in, parse_delimiter(s.delimiter));
}

json granger_json(const std::optional<GrangerResult>& r, const std::string& error) {
    if (!r) return json{{"error", error}};
    return json{{"direction", r->direction}, {"lags", r->lags},
                {"f_stat", r->f_stat},       {"f_p", r->f_p},
                {"chi2_stat", r->chi2_stat}, {"chi2_p", r->chi2_p},
                {"n_used", r->n_used}};
}

json stability_json(const StabilityReport& r) {
    json out;
    out["alignment"] = align_mode_name(r.alignment);
    out["inverted_exogenous"] = r.inverted_exogenous;
    out["aligned_n"] = r.aligned_n;
    out["pearson"] = {{"r", r.pearson.r}, {"p", r.pearson.p}, {"n", r.pearson.n}};
    out["granger_xy"] = granger_json(r.granger_xy, r.granger_xy_error);
    out["granger_yx"] = granger_json(r.granger_yx, r.granger_yx_error);
    return out;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_build_networks(Pipeline& p) {
    load_events(p);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);

    for (const SignedNetwork& net : p.networks) {
        std::ofstream f = rep.open("networks/" + period_file("period", net.period_index));
        f << "source_id,target_id,sign\n";
        for (int i = 0; i < net.n; ++i) {
            for (int j = 0; j < net.n; ++j) {
                if (net.at(i, j) != 0) {
                    f << p.log.actor_registry[net.node_ids[i]] << ','
                      << p.log.actor_registry[net.node_ids[j]] << ','
                      << static_cast<int>(net.at(i, j)) << '\n';
                }
            }
        }
    }

    {
        std::ofstream f = rep.open("dyad_fractions.csv");
        f << "period,start_date,positive_fraction,negative_fraction\n";
        for (const SignedNetwork& net : p.analysis_nets) {
            const DyadFractions d = dyad_fractions(net);
            f << net.period_index << ',' << p.period_label(net.period_index) << ','
              << fmt_double(d.positive) << ',' << fmt_double(d.negative) << '\n';
        }
    }

    json manifest;
    manifest["registry"] = p.log.actor_registry;
    manifest["period_length_days"] = p.buckets.length_days;
    json periods = json::array();
    for (std::size_t k = 0; k < p.buckets.buckets.size(); ++k) {
        json pj;
        pj["index"] = k;
        pj["start"] = p.period_label(static_cast<int>(k));
        pj["end_exclusive"] = format_date(civil_from_days(
            days_from_civil(p.buckets.period_start(static_cast<int>(k))) + p.buckets.length_days));
        pj["events"] = p.buckets.buckets[k].size();
        const CoreResult core = positive_scc(p.networks[k]);
        json core_names = json::array(), peri_names = json::array();
        for (std::int32_t id : core.core) core_names.push_back(p.log.actor_registry[id]);
        for (std::int32_t id : core.periphery) peri_names.push_back(p.log.actor_registry[id]);
        pj["core"] = core_names;
        pj["periphery"] = peri_names;
        periods.push_back(pj);
    }
    manifest["periods"] = periods;
    json stable = json::array();
    for (std::int32_t id : p.core_ids) stable.push_back(p.log.actor_registry[id]);
    manifest["stable_core"] = stable;
    manifest["stable_core_mode"] = p.s.core_mode;
    rep.write_json("manifest.json", manifest);

    fill_common_counts(p, rep);
    rep.finish("build-networks", p.s);
    return 0;
}

int cmd_census(Pipeline& p) {
    load_events(p);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);
    run_censuses(p);

    {
        std::ofstream f = rep.open("type_table.csv");
        f << "type_id,canonical_code,e_ij,e_ji,e_ik,e_ki,e_jk,e_kj,orbit_size,"
             "classical,clustering,transitivity\n";
        for (int t = 0; t < kTriadTypeCount; ++t) {
            const TriadSigns signs = decode_triad(p.table.canonical_codes[t]);
            f << t << ',' << p.table.canonical_codes[t].value;
            for (int sgn : signs) f << ',' << sgn;
            f << ',' << static_cast<int>(p.table.orbit_sizes[t]);
            for (int m = 0; m < 3; ++m) f << ',' << (p.table.balanced[t][m] ? 1 : 0);
            f << '\n';
        }
    }
    {
        std::ofstream f = rep.open("census.csv");
        f << "period,start_date,type_id,count,proportion\n";
        for (std::size_t k = 0; k < p.censuses.size(); ++k) {
            for (int t = 0; t < kTriadTypeCount; ++t) {
                if (p.censuses[k].counts[t] == 0) continue;
                f << k << ',' << p.period_label(static_cast<int>(k)) << ',' << t << ','
                  << p.censuses[k].counts[t] << ',' << fmt_double(p.proportions[k][t]) << '\n';
            }
        }
    }
    {
        std::ofstream f = rep.open("balanced_share.csv");
        f << "period,start_date,model,share\n";
        for (std::size_t k = 0; k < p.proportions.size(); ++k) {
            for (BalanceModel m : selected_models(p.s)) {
                f << k << ',' << p.period_label(static_cast<int>(k)) << ','
                  << balance_model_name(m) << ','
                  << fmt_double(balanced_share(p.proportions[k], p.table, m)) << '\n';
            }
        }
    }

    // Share of all observed triples carried by the 10 most frequent types,
    // a common headline statistic for concentration of the triple mass.
    const std::vector<int> operative = operative_types(p);
    std::int64_t total = 0, on_operative = 0;
    for (const CensusVector& c : p.censuses) {
        total += c.total();
        for (int t : operative) on_operative += c.counts[t];
    }
    json summary;
    summary["operative_type_ids"] = operative;
    summary["operative_mass_share"] =
        total > 0 ? static_cast<double>(on_operative) / static_cast<double>(total) : 0.0;
    summary["total_observed_triples"] = total;
    rep.write_json("summary.json", summary);

    fill_common_counts(p, rep);
    rep.counts["triples_per_period"] = p.censuses.empty() ? 0 : p.censuses.front().total();
    rep.finish("census", p.s);
    return 0;
}

int cmd_transitions(Pipeline& p) {
    load_events(p);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);
    run_censuses(p);
    run_transitions(p);

    {
        std::ofstream f = rep.open("transition_counts.csv");
        f << "from_period,from_type,to_type,count\n";
        for (const TransitionCounts& c : p.counts) {
            for (int i = 0; i < kTriadTypeCount; ++i) {
                for (int j = 0; j < kTriadTypeCount; ++j) {
                    if (c.at(i, j) != 0) {
                        f << c.from_period << ',' << i << ',' << j << ',' << c.at(i, j) << '\n';
                    }
                }
            }
        }
    }
    for (const TransitionMatrix& m : p.empirical) {
        write_matrix_csv(rep.open("matrices/" + period_file("period", m.from_period)), m);
    }

    const TransitionMatrix avg = average_transition(p.empirical);
    write_matrix_csv(rep.open("average_matrix.csv"), avg);

    const std::vector<double> pi = stationary(avg);
    {
        std::ofstream f = rep.open("stationary.csv");
        f << "type_id,probability\n";
        for (int t = 0; t < kTriadTypeCount; ++t) f << t << ',' << fmt_double(pi[t]) << '\n';
    }

    json quadrants;
    json stationary_mass;
    for (BalanceModel m : selected_models(p.s)) {
        const QuadrantSummary q = quadrant_summary(p.empirical, p.table, m);
        auto five = [](const FiveNumberSummary& s) {
            return json{{"min", s.min}, {"q1", s.q1},   {"median", s.median},
                        {"q3", s.q3},   {"max", s.max}, {"count", s.count}};
        };
        quadrants[balance_model_name(m)] = {{"balanced_to_balanced", five(q.bb)},
                                            {"balanced_to_unbalanced", five(q.bu)},
                                            {"unbalanced_to_balanced", five(q.ub)},
                                            {"unbalanced_to_unbalanced", five(q.uu)}};
        stationary_mass[balance_model_name(m)] = balanced_share(pi, p.table, m);
    }
    rep.write_json("quadrants.json", quadrants);

    json summary;
    summary["stationary_balanced_mass"] = stationary_mass;
    summary["transition_matrices"] = p.empirical.size();
    rep.write_json("summary.json", summary);

    fill_common_counts(p, rep);
    rep.finish("transitions", p.s);
    return 0;
}

int cmd_estimate(Pipeline& p) {
    load_events(p);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);
    run_censuses(p);
    run_transitions(p);

    const SolveResult result = estimate(p.empirical, p.s.solver);

    for (const TransitionMatrix& m : result.matrices) {
        write_matrix_csv(rep.open("estimated/" + period_file("period", m.from_period)), m);
    }
    {
        std::ofstream f = rep.open("objective_trace.csv");
        f << "iteration,objective\n";
        for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
            f << i << ',' << fmt_double(result.objective_trace[i]) << '\n';
        }
    }
    json summary;
    summary["converged"] = result.converged;
    summary["iterations"] = result.iterations;
    summary["final_objective"] = result.final_objective;
    summary["message"] = result.message;
    summary["lambda1"] = p.s.solver.lambda1;
    summary["lambda2"] = p.s.solver.lambda2;
    summary["penalty_mode"] = p.s.penalty_mode;
    if (result.matrices.size() >= 2) {
        summary["estimate_total_variation"] = total_variation(result.matrices);
        summary["empirical_total_variation"] = total_variation(p.empirical);
    }
    rep.write_json("summary.json", summary);

    fill_common_counts(p, rep);
    rep.finish("estimate", p.s);
    if (!result.converged) {
        std::cerr << "estimate: " << result.message << '\n';
        return kExitAnalysis;
    }
    return 0;
}

int cmd_forecast(Pipeline& p) {
    load_events(p);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);
    run_censuses(p);
    run_transitions(p);

    SolverConfig solver = p.s.solver;
    if (p.s.tune) {
        std::vector<std::pair<double, double>> grid;
        for (double l1 : p.s.grid_lambda1) {
            for (double l2 : p.s.grid_lambda2) grid.emplace_back(l1, l2);
        }
        const auto best =
            tune_hyperparams(p.proportions, p.empirical, grid, p.s.validation_steps, solver);
        solver.lambda1 = best.first;
        solver.lambda2 = best.second;
    }

    std::vector<int> support;
    if (p.s.restrict_operative) support = operative_types(p);
    const ForecastReport report =
        evaluate_methods(p.proportions, p.empirical, solver, p.s.holdout_steps, support);

    {
        std::ofstream f = rep.open("rmse.csv");
        f << "step,method,rmse\n";
        for (std::size_t i = 0; i < report.steps.size(); ++i) {
            for (int m = 0; m < kForecastMethodCount; ++m) {
                f << report.steps[i] << ','
                  << forecast_method_name(static_cast<ForecastMethod>(m)) << ','
                  << fmt_double(report.rmse_by_method[m][i]) << '\n';
            }
        }
    }

    json summary;
    for (int m = 0; m < kForecastMethodCount; ++m) {
        std::vector<double> values = report.rmse_by_method[m];
        std::sort(values.begin(), values.end());
        const double median =
            values.empty() ? 0.0
            : values.size() % 2
                ? values[values.size() / 2]
                : 0.5 * (values[values.size() / 2 - 1] + values[values.size() / 2]);
        summary["methods"][forecast_method_name(static_cast<ForecastMethod>(m))] = {
            {"mean", report.mean_rmse(static_cast<ForecastMethod>(m))}, {"median", median}};
    }
    summary["winning_hyperparameters"] = {{"lambda1", solver.lambda1},
                                          {"lambda2", solver.lambda2}};
    summary["tuned"] = p.s.tune;
    summary["holdout_steps"] = p.s.holdout_steps;
    summary["restricted_to_operative"] = p.s.restrict_operative;
    summary["nonconverged_solves"] = report.nonconverged_solves;
    rep.write_json("summary.json", summary);

    fill_common_counts(p, rep);
    rep.finish("forecast", p.s);
    return 0;
}

int cmd_stability(Pipeline& p) {
    load_events(p);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);
    run_censuses(p);
    run_transitions(p);

    const ScalarSeries series = labeled_frobenius(p);
    {
        std::ofstream f = rep.open("frobenius.csv");
        f << "start_date,frobenius_diff\n";
        for (std::size_t k = 0; k < series.size(); ++k) {
            f << series.labels[k] << ',' << fmt_double(*series.values[k]) << '\n';
        }
    }

    fill_common_counts(p, rep);
    rep.counts["series_length"] = series.size();
    rep.finish("stability", p.s);
    return 0;
}

int cmd_correlate(Pipeline& p) {
    load_events(p);
    const ScalarSeries exo = load_exogenous(p.s);
    bin_events(p);
    Reporter rep(p.s.out);
    build_all_networks(p);
    pick_core(p);
    run_censuses(p);
    run_transitions(p);

    const ScalarSeries frob = labeled_frobenius(p);

    // Primary mode per config; the other mode is reported alongside since the
    // right alignment between a fine stability series and a coarse exogenous
    // series is data-dependent.
    json modes;
    for (AlignMode mode : {AlignMode::Annualize, AlignMode::Interpolate}) {
        AlignOptions options;
        options.mode = mode;
        options.invert_b = p.s.invert_exo;
        try {
            modes[align_mode_name(mode)] =
                stability_json(stability_vs_exogenous(frob, exo, options, p.s.lags));
        } catch (const std::exception& e) {
            modes[align_mode_name(mode)] = json{{"error", e.what()}};
        }
    }
    json doc;
    doc["primary_alignment"] = p.s.alignment;
    doc["modes"] = modes;
    rep.write_json("correlate.json", doc);

    fill_common_counts(p, rep);
    rep.finish("correlate", p.s);
    if (modes[p.s.alignment].contains("error")) {
        std::cerr << "correlate: primary alignment failed: "
                  << modes[p.s.alignment]["error"].get<std::string>() << '\n';
        return kExitAnalysis;
    }
    return 0;
}

int cmd_selftest(const std::string& out_dir) {
    // Embedded combinatorial checks; needs no input files. Writes a run
    // report only when an output directory was requested.
    int failures = 0;
    json checks = json::array();
    auto check = [&](bool ok, const std::string& name, const std::string& detail) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
        if (!ok) std::cout << "  (" << detail << ")";
        std::cout << '\n';
        checks.push_back({{"name", name}, {"ok", ok}});
        if (!ok) ++failures;
    };

    auto write_report = [&]() {
        if (out_dir.empty()) return;
        fs::create_directories(out_dir);
        json report;
        report["command"] = "selftest";
        report["version"] = kVersion;
        report["checks"] = checks;
        report["failures"] = failures;
        std::ofstream f(fs::path(out_dir) / "run_report.json", std::ios::binary);
        f << report.dump(2) << '\n';
    };

    TriadTypeTable table;
    try {
        table = build_type_table();
    } catch (const std::exception& e) {
        check(false, "type table construction (138 classes)", e.what());
        write_report();
        return kExitAnalysis;
    }
    check(true, "type table construction (138 classes)", "");

    int complete = 0;
    int orbit_total = 0;
    for (int t = 0; t < kTriadTypeCount; ++t) {
        const TriadSigns signs = decode_triad(table.canonical_codes[t]);
        bool all_nonnull = true;
        for (int sgn : signs) all_nonnull &= (sgn != 0);
        complete += all_nonnull;
        orbit_total += table.orbit_sizes[t];
    }
    check(complete == 16, "16 complete (all-non-null) classes", std::to_string(complete));
    check(orbit_total == 729, "orbit sizes partition the 729 codes", std::to_string(orbit_total));
    check((729 + 3 * 27 + 2 * 9) / 6 == 138, "Burnside count equals 138", "arithmetic");
    const int classical = table.balanced_count(BalanceModel::Classical);
    const int clustering = table.balanced_count(BalanceModel::Clustering);
    const int transitivity = table.balanced_count(BalanceModel::Transitivity);
    check(classical == 24, "24 classical-balanced classes", std::to_string(classical));
    check(clustering == 44, "44 clustering-balanced classes", std::to_string(clustering));
    check(transitivity == 93, "93 transitivity-balanced classes", std::to_string(transitivity));
    bool nested = true;
    for (int t = 0; t < kTriadTypeCount; ++t) {
        if (table.is_balanced(t, BalanceModel::Classical) &&
            !table.is_balanced(t, BalanceModel::Clustering)) {
            nested = false;
        }
        if (table.is_balanced(t, BalanceModel::Clustering) &&
            !table.is_balanced(t, BalanceModel::Transitivity)) {
            nested = false;
        }
    }
    check(nested, "balance definitions nest", "");
    write_report();
    return failures == 0 ? 0 : kExitAnalysis;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"triad-level dynamics of signed temporal networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("triadyn ") + kVersion);

    struct SubSpec {
        const char* name;
        const char* help;
        int (*run)(Pipeline&);
    };
    const std::vector<SubSpec> specs = {
        {"build-networks", "parse events, bin periods, emit signed networks and core membership",
         cmd_build_networks},
        {"census", "per-period triad censuses, proportions, and balanced shares", cmd_census},
        {"transitions", "empirical transition matrices, average, stationary, quadrants",
         cmd_transitions},
        {"estimate", "fit the smoothly time-varying transition matrices", cmd_estimate},
        {"forecast", "walk-forward one-step forecast comparison", cmd_forecast},
        {"stability", "Frobenius differences of consecutive empirical matrices", cmd_stability},
        {"correlate", "stability series vs exogenous series (Pearson + Granger)", cmd_correlate},
    };

    std::vector<std::unique_ptr<FlagValues>> flag_storage;
    struct Chosen {
        int (*run)(Pipeline&) = nullptr;
        CLI::App* sub = nullptr;
        FlagValues* flags = nullptr;
    } chosen;

    for (const SubSpec& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        flag_storage.push_back(std::make_unique<FlagValues>());
        FlagValues* flags = flag_storage.back().get();
        add_common_options(sub, *flags);
        sub->callback([&chosen, sub, flags, run = spec.run]() { chosen = {run, sub, flags}; });
    }
    CLI::App* selftest = app.add_subcommand("selftest", "embedded taxonomy checks, no inputs");
    bool run_selftest = false;
    std::string selftest_out;
    selftest->add_option("--out", selftest_out, "optional directory for a run report");
    selftest->callback([&run_selftest]() { run_selftest = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    if (run_selftest) return cmd_selftest(selftest_out);

    try {
        Pipeline pipeline;
        pipeline.s = merge_settings(*chosen.sub, *chosen.flags);
        return chosen.run(pipeline);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return kExitAnalysis;
    }
}
