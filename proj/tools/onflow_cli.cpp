// onflow: exchange net-inflow analytics from the command line.
//
//   onflow synth --scenario reference --seed 7 --out data/
//   onflow regress --flows data/flows.csv --bars ETH=data/bars_ETH.csv --bars BTC=data/bars_BTC.csv --out out/
//   onflow events --flows data/flows.csv --asset ETH --k 10 --out out/
//   onflow backtest --flows data/flows.csv --options data/options.csv --out out/
//   onflow report --in out/
//
// Options may also come from a TOML/INI file given with --config before the
// subcommand, one [section] per subcommand; flags on the command line win.

#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "onflow/app.hpp"

namespace {

using namespace onflow;
using namespace onflow::app;

std::vector<BarInput> bar_inputs(const std::vector<std::string>& specs) {
    std::vector<BarInput> out;
    for (const auto& s : specs) out.push_back(parse_bar_input(s));
    return out;
}

Asset asset_arg(const std::string& s) {
    auto a = parse_asset(s);
    if (!a) throw Error(ErrorCode::InvalidArgument, "unknown asset '" + s + "'");
    return *a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Exchange net-inflow analytics: regressions, extreme events and option backtests"};
    cli.set_config("--config", "", "Read options from a TOML/INI file (flags win)");
    cli.require_subcommand(1);

    // Raw option storage; converted after parsing so errors map to exit codes.
    std::string flows, options, asset = "ETH", out = ".", in_dir = ".", scenario = "single";
    std::vector<std::string> bars, pairs;
    std::vector<int> horizons{1, 2, 3, 4, 6}, years;
    int bar_seconds = 300;

    IngestCheckArgs ic;
    auto* c_ingest = cli.add_subcommand("ingest-check", "Validate input CSVs and print a summary");
    c_ingest->add_option("--flows", flows, "flows.csv");
    c_ingest->add_option("--bars", bars, "ASSET=bars.csv (repeatable)");
    c_ingest->add_option("--options", options, "options.csv");
    c_ingest->add_option("--bar-seconds", bar_seconds, "Bar frequency in seconds")->capture_default_str();
    c_ingest->add_option("--out", ic.out_dir, "Also write ingest_summary.tsv here");

    RegressArgs rg;
    auto* c_regress = cli.add_subcommand("regress", "Predictive-regression heatmap grid");
    c_regress->add_option("--flows", flows, "flows.csv");
    c_regress->add_option("--bars", bars, "ASSET=bars.csv (repeatable)");
    c_regress->add_option("--bar-seconds", bar_seconds, "Bar frequency in seconds")->capture_default_str();
    c_regress->add_option("--horizons", horizons, "Horizons in hours")->delimiter(',')->capture_default_str();
    c_regress->add_option("--pairs", pairs, "Predictor:response pairs, e.g. USDT:ETH")->delimiter(',');
    c_regress->add_flag("--newey-west", rg.newey_west, "Newey-West standard errors");
    c_regress->add_flag("--daily-weekly", rg.daily_weekly, "Also run the 24h/168h volatility grid");
    c_regress->add_option("--min-obs", rg.min_observations, "Minimum aligned observations per cell")
        ->capture_default_str();
    c_regress->add_option("--out", out, "Output directory")->capture_default_str();

    EventsArgs ev;
    std::string event_bars;
    auto* c_events = cli.add_subcommand("events", "Top-k net-inflow hours per year");
    c_events->add_option("--flows", flows, "flows.csv");
    c_events->add_option("--asset", asset, "Asset")->capture_default_str();
    c_events->add_option("--k", ev.k, "Events per year")->capture_default_str();
    c_events->add_option("--years", years, "Years (default: all present)")->delimiter(',');
    c_events->add_flag("--outflows", ev.outflows, "Rank the most negative hours instead");
    c_events->add_option("--bars", event_bars, "bars.csv of the same asset, enables case windows");
    c_events->add_option("--bar-seconds", bar_seconds, "Bar frequency in seconds")->capture_default_str();
    c_events->add_option("--pre", ev.window_pre_hours, "Hours before the event")->capture_default_str();
    c_events->add_option("--post", ev.window_post_hours, "Hours after the event")->capture_default_str();
    c_events->add_option("--out", out, "Output directory")->capture_default_str();

    BacktestArgs bt;
    std::vector<std::string> tails{"top", "bottom"}, sides{"sell"};
    std::string wtl = "count";
    int holding_minutes = 60;
    auto* c_backtest = cli.add_subcommand("backtest", "Delta-hedged option strategy on inflow percentiles");
    c_backtest->add_option("--flows", flows, "flows.csv");
    c_backtest->add_option("--options", options, "options.csv");
    c_backtest->add_option("--asset", asset, "Asset whose flows drive the signal")->capture_default_str();
    c_backtest->add_option("--percentile", bt.percentile, "Tail fraction, e.g. 0.1")->capture_default_str();
    c_backtest->add_option("--tails", tails, "top,bottom")->delimiter(',')->capture_default_str();
    c_backtest->add_option("--sides", sides, "sell,buy")->delimiter(',')->capture_default_str();
    c_backtest->add_option("--premium-rate", bt.costs.premium_rate)->capture_default_str();
    c_backtest->add_option("--hedge-rate", bt.costs.hedge_rate, "Scaled by delta")->capture_default_str();
    c_backtest->add_option("--half-spread", bt.costs.half_spread)->capture_default_str();
    c_backtest->add_option("--slippage", bt.costs.slippage)->capture_default_str();
    c_backtest->add_option("--holding-minutes", holding_minutes)->capture_default_str();
    c_backtest->add_option("--wtl", wtl, "count or pnl")->capture_default_str();
    c_backtest->add_option("--out", out, "Output directory")->capture_default_str();

    SynthArgs sy;
    auto* c_synth = cli.add_subcommand("synth", "Generate synthetic flows, bars and option quotes");
    c_synth->add_option("--scenario", scenario, "single, reference, white-noise or profitability")
        ->capture_default_str();
    c_synth->add_option("--seed", sy.seed)->capture_default_str();
    c_synth->add_option("--hours", sy.hours)->capture_default_str();
    c_synth->add_option("--horizon", sy.horizon_hours, "Planting width for the reference scenario")
        ->capture_default_str();
    c_synth->add_option("--beta0", sy.beta0)->capture_default_str();
    c_synth->add_option("--beta1", sy.beta1)->capture_default_str();
    c_synth->add_option("--beta2", sy.beta2)->capture_default_str();
    c_synth->add_option("--noise-sd", sy.noise_sd)->capture_default_str();
    c_synth->add_option("--flow-sd", sy.flow_sd_musd, "Hourly net-inflow sd, US$ millions")->capture_default_str();
    c_synth->add_option("--vol-base", sy.vol_base, "Base sub-bar volatility")->capture_default_str();
    bool no_options = false;
    c_synth->add_flag("--no-options", no_options, "Skip the option chain");
    c_synth->add_option("--out", out, "Output directory")->capture_default_str();

    ReportArgs rp;
    auto* c_report = cli.add_subcommand("report", "Collate heatmap and backtest exports into report.md");
    c_report->add_option("--in", in_dir, "Directory holding the exports")->capture_default_str();
    c_report->add_option("--out", rp.out_dir, "Output directory (default: --in)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return static_cast<int>(ErrorCategory::Validation);
    }

    // Argument conversion failures are validation errors too.
    int conversion = guarded("arguments", [&] {
        const Duration bar_frequency{bar_seconds};
        if (*c_ingest) {
            ic.flows = flows;
            ic.bars = bar_inputs(bars);
            ic.options = options;
            ic.bar_frequency = bar_frequency;
        } else if (*c_regress) {
            rg.flows = flows;
            rg.bars = bar_inputs(bars);
            rg.bar_frequency = bar_frequency;
            rg.horizons = horizons;
            if (!pairs.empty()) {
                rg.pairs.clear();
                for (const auto& p : pairs) rg.pairs.push_back(parse_pair(p));
            }
            rg.out_dir = out;
        } else if (*c_events) {
            ev.flows = flows;
            ev.asset = asset_arg(asset);
            ev.years = years;
            if (!event_bars.empty()) ev.bars = BarInput{ev.asset, event_bars};
            ev.bar_frequency = bar_frequency;
            ev.out_dir = out;
        } else if (*c_backtest) {
            bt.flows = flows;
            bt.options = options;
            bt.asset = asset_arg(asset);
            bt.tails.clear();
            for (const auto& t : tails) {
                if (t == "top") bt.tails.push_back(Tail::Top);
                else if (t == "bottom") bt.tails.push_back(Tail::Bottom);
                else throw Error(ErrorCode::InvalidArgument, "unknown tail '" + t + "'");
            }
            bt.sides.clear();
            for (const auto& s : sides) {
                if (s == "sell") bt.sides.push_back(Side::SellCall);
                else if (s == "buy") bt.sides.push_back(Side::BuyCall);
                else throw Error(ErrorCode::InvalidArgument, "unknown side '" + s + "'");
            }
            if (wtl == "count") bt.params.wtl_mode = WtlMode::Count;
            else if (wtl == "pnl") bt.params.wtl_mode = WtlMode::PnlMagnitude;
            else throw Error(ErrorCode::InvalidArgument, "--wtl must be count or pnl");
            bt.params.holding = minutes(holding_minutes);
            bt.out_dir = out;
        } else if (*c_synth) {
            auto s = parse_scenario(scenario);
            if (!s) throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + scenario + "'");
            sy.scenario = *s;
            sy.options = !no_options;
            sy.out_dir = out;
        } else if (*c_report) {
            rp.in_dir = in_dir;
        }
    });
    if (conversion != 0) return conversion;

    if (*c_ingest) return cmd_ingest_check(ic);
    if (*c_regress) return cmd_regress(rg);
    if (*c_events) return cmd_events(ev);
    if (*c_backtest) return cmd_backtest(bt);
    if (*c_synth) return cmd_synth(sy);
    return cmd_report(rp);
}
