#ifndef ONFLOW_APP_HPP
#define ONFLOW_APP_HPP

// Command implementations behind the onflow executable. Each command takes a
// plain argument struct, writes its exports under out_dir and returns a
// process exit code: 0 success, 1 I/O, 2 validation, 3 estimation.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "csv.hpp"
#include "events.hpp"
#include "ingest.hpp"
#include "options.hpp"
#include "regress.hpp"
#include "series.hpp"
#include "synth.hpp"

namespace onflow::app {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Logging (level from ONFLOW_LOG_LEVEL: error, warn, info, debug)

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel log_level() {
    const char* env = std::getenv("ONFLOW_LOG_LEVEL");
    if (!env) return LogLevel::Warn;
    const std::string v = env;
    if (v == "error") return LogLevel::Error;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

inline void log(LogLevel level, const std::string& msg) {
    static constexpr const char* names[] = {"error", "warn", "info", "debug"};
    if (level <= log_level()) std::cerr << "onflow [" << names[static_cast<int>(level)] << "] " << msg << '\n';
}

// ---------------------------------------------------------------------------
// Shared plumbing

struct BarInput {
    Asset asset = Asset::ETH;
    fs::path path;
};

/// Parses "ASSET=path".
inline BarInput parse_bar_input(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw Error(ErrorCode::InvalidArgument, "bars must be given as ASSET=path, got '" + spec + "'");
    auto a = parse_asset(spec.substr(0, eq));
    if (!a) throw Error(ErrorCode::InvalidArgument, "unknown asset in '" + spec + "'");
    return {*a, spec.substr(eq + 1)};
}

/// Parses "PRED:RESP" or "PRED->RESP".
inline Pair parse_pair(const std::string& spec) {
    std::string s = spec;
    std::size_t at = s.find("->");
    std::size_t len = 2;
    if (at == std::string::npos) {
        at = s.find(':');
        len = 1;
    }
    if (at == std::string::npos) throw Error(ErrorCode::InvalidArgument, "pair must look like USDT:ETH");
    auto p = parse_asset(s.substr(0, at));
    auto r = parse_asset(s.substr(at + len));
    if (!p || !r) throw Error(ErrorCode::InvalidArgument, "unknown asset in pair '" + spec + "'");
    return {*p, *r};
}

inline void require_exists(const fs::path& p, const std::string& what) {
    if (p.empty()) throw Error(ErrorCode::InvalidArgument, what + " path is required");
    if (!fs::exists(p)) throw Error(ErrorCode::InvalidArgument, what + " not found: " + p.string());
}

inline void write_output(const fs::path& dir, const std::string& name, const std::string& content) {
    csv::write_file(dir / name, content);
    log(LogLevel::Info, "wrote " + (dir / name).string());
}

/// Runs body and converts failures into exit codes with a one-line diagnostic.
inline int guarded(const std::string& command, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const Error& e) {
        std::cerr << "onflow " << command << ": " << e.what() << '\n';
        return static_cast<int>(category(e.code()));
    } catch (const fs::filesystem_error& e) {
        std::cerr << "onflow " << command << ": " << e.what() << '\n';
        return static_cast<int>(ErrorCategory::Io);
    } catch (const std::exception& e) {
        std::cerr << "onflow " << command << ": " << e.what() << '\n';
        return static_cast<int>(ErrorCategory::Io);
    }
}

inline MarketData load_market(const fs::path& flows, const std::vector<BarInput>& bars,
                              Duration bar_frequency) {
    require_exists(flows, "flows");
    for (const auto& b : bars) require_exists(b.path, std::string(to_string(b.asset)) + " bars");
    MarketData data;
    data.flows = parse_flows(flows);
    for (const auto& b : bars) {
        auto series = parse_bars(b.path, bar_frequency);
        if (!series.gaps.empty())
            log(LogLevel::Warn, std::string(to_string(b.asset)) + " bars: " +
                                    std::to_string(series.gaps.size()) + " missing bars");
        data.bars[b.asset] = std::move(series.bars);
    }
    return data;
}

// ---------------------------------------------------------------------------
// ingest-check

struct IngestCheckArgs {
    fs::path flows;
    std::vector<BarInput> bars;
    fs::path options;
    Duration bar_frequency = kDefaultSubFrequency;
    fs::path out_dir;  // optional; summary also goes to stdout
};

inline int cmd_ingest_check(const IngestCheckArgs& a) {
    return guarded("ingest-check", [&] {
        if (a.flows.empty() && a.bars.empty() && a.options.empty())
            throw Error(ErrorCode::InvalidArgument, "nothing to check: pass --flows, --bars or --options");
        if (!a.flows.empty()) require_exists(a.flows, "flows");
        for (const auto& b : a.bars) require_exists(b.path, std::string(to_string(b.asset)) + " bars");
        if (!a.options.empty()) require_exists(a.options, "options");

        std::string out = "dataset\trows\tfirst\tlast\tgaps\n";
        auto row = [&](const std::string& name, std::size_t n, std::optional<Timestamp> first,
                       std::optional<Timestamp> last, std::size_t gaps) {
            out += name + "\t" + std::to_string(n) + "\t" + (first ? format_timestamp(*first) : "") +
                   "\t" + (last ? format_timestamp(*last) : "") + "\t" + std::to_string(gaps) + "\n";
        };
        if (!a.flows.empty()) {
            auto flows = parse_flows(a.flows);
            for (Asset asset : kAllAssets) {
                auto f = flows_of(flows, asset);
                if (f.empty()) continue;
                std::size_t gaps = 0;
                for (std::size_t i = 1; i < f.size(); ++i)
                    gaps += static_cast<std::size_t>((f[i].timestamp - f[i - 1].timestamp) / kHour) - 1;
                row("flows:" + std::string(to_string(asset)), f.size(), f.front().timestamp,
                    f.back().timestamp, gaps);
            }
        }
        for (const auto& b : a.bars) {
            auto s = parse_bars(b.path, a.bar_frequency);
            row("bars:" + std::string(to_string(b.asset)), s.bars.size(),
                s.bars.empty() ? std::nullopt : std::optional(s.bars.front().timestamp),
                s.bars.empty() ? std::nullopt : std::optional(s.bars.back().timestamp), s.gaps.size());
        }
        if (!a.options.empty()) {
            auto q = parse_option_quotes(a.options);
            row("options", q.size(), q.empty() ? std::nullopt : std::optional(q.front().quote_time),
                q.empty() ? std::nullopt : std::optional(q.back().quote_time), 0);
        }
        std::cout << out;
        if (!a.out_dir.empty()) write_output(a.out_dir, "ingest_summary.tsv", out);
    });
}

// ---------------------------------------------------------------------------
// regress

struct RegressArgs {
    fs::path flows;
    std::vector<BarInput> bars;
    Duration bar_frequency = kDefaultSubFrequency;
    std::vector<int> horizons{1, 2, 3, 4, 6};
    std::vector<Pair> pairs = default_pairs();
    bool newey_west = false;
    bool daily_weekly = false;
    std::size_t min_observations = 30;
    fs::path out_dir = ".";
};

inline int cmd_regress(const RegressArgs& a) {
    return guarded("regress", [&] {
        if (a.bars.empty()) throw Error(ErrorCode::InvalidArgument, "bars path is required (--bars ASSET=path)");
        if (a.horizons.empty()) throw Error(ErrorCode::InvalidArgument, "at least one horizon is required");
        for (int h : a.horizons)
            if (h <= 0) throw Error(ErrorCode::InvalidArgument, "horizons must be positive hours");
        auto data = load_market(a.flows, a.bars, a.bar_frequency);

        GridSpec spec;
        spec.horizons.clear();
        for (int h : a.horizons) spec.horizons.push_back(hours(h));
        spec.pairs = a.pairs;
        spec.sub_frequency = a.bar_frequency;
        spec.min_observations = a.min_observations;
        if (a.newey_west) spec.ols.std_errors = StdErrors::NeweyWest;

        auto emit = [&](const std::vector<HeatmapCell>& cells, const std::string& stem) {
            std::size_t failed = 0;
            for (const auto& c : cells)
                if (!c.ok()) ++failed;
            if (failed) log(LogLevel::Warn, stem + ": " + std::to_string(failed) + " of " +
                                                std::to_string(cells.size()) + " cells failed");
            write_output(a.out_dir, stem + ".json", grid_to_json(cells));
            write_output(a.out_dir, stem + ".tsv", grid_to_tsv(cells));
        };
        emit(run_grid(data, spec), "heatmap");
        if (a.daily_weekly) emit(daily_weekly_grid(data, spec), "heatmap_daily_weekly");
    });
}

// ---------------------------------------------------------------------------
// events

struct EventsArgs {
    fs::path flows;
    Asset asset = Asset::ETH;
    std::size_t k = 10;
    std::vector<int> years;  // empty: every year present in the data
    bool outflows = false;
    std::optional<BarInput> bars;  // enables case-window tracks
    Duration bar_frequency = kDefaultSubFrequency;
    int window_pre_hours = 24;
    int window_post_hours = 24;
    fs::path out_dir = ".";
};

inline int cmd_events(const EventsArgs& a) {
    return guarded("events", [&] {
        require_exists(a.flows, "flows");
        if (a.bars) require_exists(a.bars->path, "bars");
        auto flows = flows_of(parse_flows(a.flows), a.asset);
        auto series = net_inflows(flows, kHour);
        series.asset = a.asset;

        std::set<int> years(a.years.begin(), a.years.end());
        if (years.empty())
            for (const auto& p : series.points) years.insert(utc_year(p.t));
        auto hits = detect_extremes(series, a.k, years, a.outflows ? Extreme::Outflow : Extreme::Inflow);
        write_output(a.out_dir, "events.csv", events_to_csv(hits));

        if (!a.bars) return;
        auto bars = parse_bars(a.bars->path, a.bar_frequency).bars;
        for (const auto& h : hits) {
            if (h.rank_in_year != 1) continue;
            try {
                auto w = extract_window(h, series, bars, hours(a.window_pre_hours),
                                        hours(a.window_post_hours));
                const std::string stem = "window_" + std::to_string(h.year) + "_";
                write_output(a.out_dir, stem + "flow.csv", track_to_csv(w.flow_track, "net_inflow_musd"));
                write_output(a.out_dir, stem + "price.csv", track_to_csv(w.price_track, "close"));
            } catch (const Error& e) {
                log(LogLevel::Warn, "window for " + format_timestamp(h.timestamp) + " skipped: " + e.what());
            }
        }
    });
}

// ---------------------------------------------------------------------------
// backtest

struct BacktestArgs {
    fs::path flows;
    fs::path options;
    Asset asset = Asset::ETH;
    double percentile = 0.10;
    std::vector<Tail> tails{Tail::Top, Tail::Bottom};
    std::vector<Side> sides{Side::SellCall};
    CostParams costs;
    BacktestParams params;
    fs::path out_dir = ".";
};

inline std::string leg_stem(Tail tail, double pct, Side side) {
    std::string p = onflow::detail::pct_text(pct);
    p.pop_back();  // drop '%'
    for (char& c : p)
        if (c == '.') c = 'p';
    return "backtest_" + std::string(to_string(tail)) + p + "_" + std::string(to_string(side));
}

inline std::string trades_to_csv(const std::vector<TradeOutcome>& trades) {
    std::string out =
        "entry_time,exit_time,strike,expiry,index_entry,index_exit,delta,implied_vol,r_option,"
        "r_underlying,r_portfolio,r_portfolio_net,win\n";
    for (const auto& t : trades)
        csv::append_row(out, {format_timestamp(t.entry.quote_time), format_timestamp(t.exit.quote_time),
                              format_number(t.entry.strike), format_timestamp(t.entry.expiry),
                              format_number(t.entry.index_price), format_number(t.exit.index_price),
                              format_number(t.delta_hedge), format_number(t.entry.implied_vol),
                              format_number(t.r_option), format_number(t.r_underlying),
                              format_number(t.r_portfolio), format_number(t.r_portfolio_net),
                              t.win ? "1" : "0"});
    return out;
}

inline int cmd_backtest(const BacktestArgs& a) {
    return guarded("backtest", [&] {
        require_exists(a.flows, "flows");
        require_exists(a.options, "options");
        auto flows = flows_of(parse_flows(a.flows), a.asset);
        auto series = net_inflows(flows, kHour);
        series.asset = a.asset;
        auto quotes = parse_option_quotes(a.options);

        std::string summary = "leg\ttrades\tunmatched_events\tbreakeven_slippage\n";
        for (Tail tail : a.tails) {
            for (Side side : a.sides) {
                auto res = percentile_backtest(series, quotes, a.percentile, tail, side, a.costs,
                                               standard_buckets(), a.params);
                std::vector<ReportRow> rows;
                for (const auto& [key, stats] : res.buckets) rows.push_back({label(key), stats});
                const std::string stem = leg_stem(tail, a.percentile, side);
                write_output(a.out_dir, stem + ".tsv", backtest_report_tsv(rows));
                write_output(a.out_dir, stem + "_trades.csv", trades_to_csv(res.trades));
                summary += leg_label(tail, a.percentile, side) + "\t" + std::to_string(res.trades.size()) +
                           "\t" + std::to_string(res.unmatched_events) + "\t" +
                           format_number(breakeven_slippage(std::span<const TradeOutcome>(res.trades), a.costs)) +
                           "\n";
            }
        }
        write_output(a.out_dir, "backtest_summary.tsv", summary);
    });
}

// ---------------------------------------------------------------------------
// synth

enum class Scenario { Single, Reference, WhiteNoise, Profitability };

inline std::optional<Scenario> parse_scenario(std::string_view s) {
    if (s == "single") return Scenario::Single;
    if (s == "reference") return Scenario::Reference;
    if (s == "white-noise") return Scenario::WhiteNoise;
    if (s == "profitability") return Scenario::Profitability;
    return std::nullopt;
}

struct SynthArgs {
    Scenario scenario = Scenario::Single;
    std::uint64_t seed = 1;
    std::size_t hours = 8760;
    int horizon_hours = 1;  // planting width for the reference scenario
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double noise_sd = 0.01;
    double flow_sd_musd = 1.0;
    double vol_base = 0.005;
    bool options = true;
    fs::path out_dir = ".";
};

inline synth::SynthConfig synth_config(const SynthArgs& a) {
    synth::SynthConfig cfg;
    switch (a.scenario) {
    case Scenario::Single:
        cfg.seed = a.seed;
        cfg.hours = a.hours;
        cfg.beta0 = a.beta0;
        cfg.beta1 = a.beta1;
        cfg.beta2 = a.beta2;
        cfg.noise_sd = a.noise_sd;
        cfg.flow_sd_musd = a.flow_sd_musd;
        cfg.vol_base = a.vol_base;
        break;
    case Scenario::Reference: cfg = synth::reference_scenario(a.seed, a.horizon_hours, a.hours); break;
    case Scenario::WhiteNoise: cfg = synth::white_noise_scenario(a.seed, a.hours); break;
    case Scenario::Profitability: cfg = synth::profitability_scenario(a.seed, a.hours); break;
    }
    return cfg;
}

inline int cmd_synth(const SynthArgs& a) {
    return guarded("synth", [&] {
        const auto cfg = synth_config(a);
        auto data = synth::gen_flows_and_prices(cfg);
        write_output(a.out_dir, "flows.csv", serialize_flows(data.flows));
        for (const auto& [asset, bars] : data.bars)
            write_output(a.out_dir, "bars_" + std::string(to_string(asset)) + ".csv", serialize_bars(bars));
        if (a.options) {
            auto it = data.bars.find(cfg.chain.underlying);
            if (it != data.bars.end())
                write_output(a.out_dir, "options.csv",
                             serialize_option_quotes(synth::gen_option_chain(cfg, it->second)));
        }
    });
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
    fs::path in_dir = ".";
    fs::path out_dir;  // defaults to in_dir
};

namespace detail {

inline std::string tsv_to_markdown(const std::string& tsv) {
    std::string out;
    std::size_t start = 0, line_no = 0;
    while (start < tsv.size()) {
        auto end = tsv.find('\n', start);
        if (end == std::string::npos) end = tsv.size();
        std::string line = tsv.substr(start, end - start);
        std::size_t cols = 1;
        std::string row = "| ";
        for (char c : line) {
            if (c == '\t') {
                row += " | ";
                ++cols;
            } else {
                row += c;
            }
        }
        out += row + " |\n";
        if (line_no++ == 0) {
            out += "|";
            for (std::size_t i = 0; i < cols; ++i) out += "---|";
            out += "\n";
        }
        start = end + 1;
    }
    return out;
}

}  // namespace detail

/// Collates the heatmap and backtest exports found in in_dir into report.md.
inline int cmd_report(const ReportArgs& a) {
    return guarded("report", [&] {
        require_exists(a.in_dir, "report input directory");
        const fs::path out_dir = a.out_dir.empty() ? a.in_dir : a.out_dir;
        std::string md = "# onflow report\n";
        bool any = false;

        for (const std::string stem : {"heatmap", "heatmap_daily_weekly"}) {
            const fs::path json_path = a.in_dir / (stem + ".json");
            if (!fs::exists(json_path)) continue;
            auto cells = nlohmann::json::parse(csv::read_file(json_path));
            std::size_t sig = 0, failed = 0;
            for (const auto& c : cells) {
                if (c.at("beta1").is_null()) ++failed;
                else if (c.at("stars") != "none") ++sig;
            }
            md += "\n## " + stem + "\n\n";
            md += std::to_string(cells.size()) + " cells, " + std::to_string(sig) + " significant at 10%, " +
                  std::to_string(failed) + " failed.\n\n";
            const fs::path tsv_path = a.in_dir / (stem + ".tsv");
            if (fs::exists(tsv_path)) md += detail::tsv_to_markdown(csv::read_file(tsv_path));
            any = true;
        }

        std::vector<fs::path> legs;
        for (const auto& e : fs::directory_iterator(a.in_dir)) {
            const auto name = e.path().filename().string();
            if (name.rfind("backtest_", 0) == 0 && e.path().extension() == ".tsv") legs.push_back(e.path());
        }
        std::sort(legs.begin(), legs.end());
        for (const auto& p : legs) {
            md += "\n## " + p.stem().string() + "\n\n" + detail::tsv_to_markdown(csv::read_file(p));
            any = true;
        }
        if (!any) throw Error(ErrorCode::InvalidArgument, "no heatmap or backtest exports in " + a.in_dir.string());
        write_output(out_dir, "report.md", md);
    });
}

}  // namespace onflow::app

#endif  // ONFLOW_APP_HPP
