#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

#include "onflow/app.hpp"
#include "support.hpp"

using namespace onflow;
using namespace onflow::app;
using testing_support::TempDir;

namespace {

std::string slurp(const fs::path& p) { return csv::read_file(p); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(App, ParsesBarInputsAndPairs) {
    auto b = parse_bar_input("BTC=data/bars.csv");
    EXPECT_EQ(b.asset, Asset::BTC);
    EXPECT_EQ(b.path, fs::path("data/bars.csv"));
    EXPECT_THROW(parse_bar_input("bars.csv"), Error);
    EXPECT_EQ(parse_pair("USDT:ETH"), (Pair{Asset::USDT, Asset::ETH}));
    EXPECT_EQ(parse_pair("BTC->BTC"), (Pair{Asset::BTC, Asset::BTC}));
    EXPECT_THROW(parse_pair("DOGE:ETH"), Error);
}

TEST(App, GuardedMapsErrorCategoriesToExitCodes) {
    EXPECT_EQ(guarded("t", [] {}), 0);
    EXPECT_EQ(guarded("t", [] { throw Error(ErrorCode::Io, "x"); }), 1);
    EXPECT_EQ(guarded("t", [] { throw Error(ErrorCode::InvalidArgument, "x"); }), 2);
    EXPECT_EQ(guarded("t", [] { throw Error(ErrorCode::RankDeficient, "x"); }), 3);
}

TEST(App, SynthThenRegressIsIdempotent) {
    TempDir dir("synth_regress");
    SynthArgs s;
    s.scenario = Scenario::Reference;
    s.seed = 4;
    s.hours = 2400;
    s.out_dir = dir.path();
    ASSERT_EQ(cmd_synth(s), 0);
    const auto first = snapshot(dir.path());
    ASSERT_EQ(cmd_synth(s), 0);
    EXPECT_EQ(snapshot(dir.path()), first);
    for (const char* f : {"flows.csv", "bars_ETH.csv", "bars_BTC.csv", "options.csv"})
        EXPECT_TRUE(first.count(f)) << f;

    TempDir out("regress_out");
    RegressArgs r;
    r.flows = dir / "flows.csv";
    r.bars = {{Asset::ETH, dir / "bars_ETH.csv"}, {Asset::BTC, dir / "bars_BTC.csv"}};
    r.out_dir = out.path();
    ASSERT_EQ(cmd_regress(r), 0);
    auto grid = nlohmann::json::parse(slurp(out / "heatmap.json"));
    EXPECT_EQ(grid.size(), 80u);
    const auto once = snapshot(out.path());
    ASSERT_EQ(cmd_regress(r), 0);
    EXPECT_EQ(snapshot(out.path()), once);
    // inputs untouched
    EXPECT_EQ(snapshot(dir.path()), first);

    r.horizons = {1, 6};
    ASSERT_EQ(cmd_regress(r), 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(out / "heatmap.json")).size(), 32u);
}

TEST(App, MissingBarsPathIsAValidationError) {
    TempDir dir("missing");
    SynthArgs s;
    s.hours = 200;
    s.options = false;
    s.out_dir = dir.path();
    ASSERT_EQ(cmd_synth(s), 0);
    RegressArgs r;
    r.flows = dir / "flows.csv";
    r.bars = {{Asset::ETH, dir / "nope.csv"}};
    r.out_dir = dir.path();
    testing::internal::CaptureStderr();
    EXPECT_EQ(cmd_regress(r), 2);
    const auto err = testing::internal::GetCapturedStderr();
    EXPECT_NE(err.find("nope.csv"), std::string::npos) << err;
}

TEST(App, EventsWritesTopTenRowsAndWindows) {
    TempDir dir("events");
    SynthArgs s;
    s.hours = 8760;
    s.options = false;
    s.out_dir = dir.path();
    ASSERT_EQ(cmd_synth(s), 0);
    EventsArgs e;
    e.flows = dir / "flows.csv";
    e.years = {2021};
    e.bars = BarInput{Asset::ETH, dir / "bars_ETH.csv"};
    e.out_dir = dir.path();
    ASSERT_EQ(cmd_events(e), 0);
    const auto csv = slurp(dir / "events.csv");
    EXPECT_EQ(lines(csv), 11u);
    EXPECT_EQ(csv.rfind("asset,timestamp,net_inflow_musd,year,rank\n", 0), 0u);
    EXPECT_EQ(lines(slurp(dir / "window_2021_flow.csv")), 50u);  // header + 49 hours
    const auto before = snapshot(dir.path());
    ASSERT_EQ(cmd_events(e), 0);
    EXPECT_EQ(snapshot(dir.path()), before);
}

TEST(App, BacktestTopLegBeatsBottomLeg) {
    TempDir dir("backtest");
    SynthArgs s;
    s.scenario = Scenario::Profitability;
    s.seed = 1;
    s.out_dir = dir.path();
    ASSERT_EQ(cmd_synth(s), 0);
    BacktestArgs b;
    b.flows = dir / "flows.csv";
    b.options = dir / "options.csv";
    b.out_dir = dir.path();
    ASSERT_EQ(cmd_backtest(b), 0);
    auto win_rate = [&](const std::string& name) {
        std::istringstream in(slurp(dir / name));
        std::string header, bucket, rate;
        std::getline(in, header);
        std::getline(in, bucket, '\t');
        std::getline(in, rate, '\t');
        EXPECT_EQ(bucket, "Original");
        return std::stod(rate);
    };
    const double top = win_rate("backtest_top10_sell_call.tsv");
    const double bottom = win_rate("backtest_bottom10_sell_call.tsv");
    EXPECT_GT(top, bottom);
    EXPECT_TRUE(fs::exists(dir / "backtest_summary.tsv"));

    const auto before = snapshot(dir.path());
    ASSERT_EQ(cmd_backtest(b), 0);
    EXPECT_EQ(snapshot(dir.path()), before);

    ReportArgs rep;
    rep.in_dir = dir.path();
    ASSERT_EQ(cmd_report(rep), 0);
    const auto md = slurp(dir / "report.md");
    EXPECT_NE(md.find("backtest_top10_sell_call"), std::string::npos);
}

TEST(App, IngestCheckSummarizes) {
    TempDir dir("ingest");
    SynthArgs s;
    s.hours = 240;
    s.out_dir = dir.path();
    ASSERT_EQ(cmd_synth(s), 0);
    IngestCheckArgs a;
    a.flows = dir / "flows.csv";
    a.bars = {{Asset::ETH, dir / "bars_ETH.csv"}};
    a.options = dir / "options.csv";
    a.out_dir = dir.path();
    testing::internal::CaptureStdout();
    ASSERT_EQ(cmd_ingest_check(a), 0);
    const auto out = testing::internal::GetCapturedStdout();
    EXPECT_EQ(out, slurp(dir / "ingest_summary.tsv"));
    EXPECT_NE(out.find("flows:ETH\t240\t"), std::string::npos) << out;

    IngestCheckArgs bad = a;
    bad.flows = dir / "absent.csv";
    testing::internal::CaptureStderr();
    EXPECT_EQ(cmd_ingest_check(bad), 2);
    testing::internal::GetCapturedStderr();
}
