#include <gtest/gtest.h>

#include <json.hpp>

#include "onflow/regress.hpp"
#include "onflow/synth.hpp"

using namespace onflow;

namespace {

const HeatmapCell& find(const std::vector<HeatmapCell>& cells, Pair pair, Target target, int h,
                        Model model) {
    for (const auto& c : cells)
        if (c.pair == pair && c.target == target && c.horizon == hours(h) && c.model == model) return c;
    throw std::runtime_error("cell not found");
}

const MarketData& white_noise() {
    static const MarketData data = synth::gen_flows_and_prices(synth::white_noise_scenario(3));
    return data;
}

}  // namespace

TEST(Grid, FullGridHasEightyCells) {
    auto cells = run_grid(white_noise());
    ASSERT_EQ(cells.size(), 80u);
    for (const auto& c : cells) EXPECT_TRUE(c.ok()) << to_string(c.pair) << " " << c.horizon.count();
    // nesting order: horizon, model, pair, target
    EXPECT_EQ(cells[0].horizon, hours(1));
    EXPECT_EQ(cells[0].model, Model::Single);
    EXPECT_EQ(cells[1].target, Target::Volatility);
    EXPECT_EQ(cells[8].model, Model::Double);
    EXPECT_EQ(cells[79].horizon, hours(6));
}

TEST(Grid, TwoHorizonsGiveThirtyTwoCells) {
    GridSpec spec;
    spec.horizons = {hours(1), hours(6)};
    EXPECT_EQ(run_grid(white_noise(), spec).size(), 32u);
}

TEST(Grid, SignFollowsBetaAndStars) {
    for (const auto& c : run_grid(white_noise())) {
        if (!c.ok()) continue;
        EXPECT_EQ(c.sign == Sign::Positive, c.beta1 > 0 && c.stars != Stars::None);
        EXPECT_EQ(c.sign == Sign::Negative, c.beta1 < 0 && c.stars != Stars::None);
        EXPECT_EQ(c.stars, significance(c.fit->t_stat[1], c.fit->n, c.fit->regressors()));
    }
}

TEST(Grid, ConstantFlowsAreRankDeficient) {
    auto cfg = synth::white_noise_scenario(5);
    for (auto& f : cfg.flows)
        if (f.asset == Asset::USDT) f.sd_musd = 0.0;
    auto cells = run_grid(synth::gen_flows_and_prices(cfg));
    for (const auto& c : cells) {
        if (c.pair.predictor == Asset::USDT) {
            ASSERT_FALSE(c.ok());
            EXPECT_EQ(*c.failure, ErrorCode::RankDeficient);
        } else {
            EXPECT_TRUE(c.ok());
        }
    }
}

TEST(Grid, MissingBarsMarkCellsInsteadOfThrowing) {
    auto data = white_noise();
    data.bars.erase(Asset::BTC);
    auto cells = run_grid(data);
    for (const auto& c : cells) EXPECT_EQ(c.ok(), c.pair.response == Asset::ETH);
}

TEST(Grid, RecoversPlantedEthReturnCoefficient) {
    synth::SynthConfig cfg;
    cfg.seed = 11;
    cfg.hours = 40000;
    cfg.beta1 = -0.017;
    cfg.noise_sd = 0.01;
    GridSpec spec;
    spec.horizons = {hours(1)};
    spec.pairs = {{Asset::ETH, Asset::ETH}};
    spec.targets = {Target::Return};
    auto cells = run_grid(synth::gen_flows_and_prices(cfg), spec);
    ASSERT_EQ(cells.size(), 2u);
    for (const auto& c : cells) {
        ASSERT_TRUE(c.ok());
        EXPECT_EQ(c.sign, Sign::Negative);
        EXPECT_EQ(c.stars, Stars::Three);
        EXPECT_LE(std::abs(c.beta1 + 0.017), 3 * c.fit->se[1]);
    }
}

TEST(DailyWeekly, PlantedDailyBtcVolatility) {
    synth::SynthConfig cfg;
    cfg.seed = 17;
    cfg.hours = 24 * 1200;
    cfg.plant_horizon_hours = 24;
    cfg.flows = {{Asset::BTC, synth::preset_flow_sd(Asset::BTC)}};
    synth::PricedSpec p;
    p.asset = Asset::BTC;
    p.initial_price = 40000;
    p.ret = {0.0, 0.0, 0.002, {}};
    p.vol = {0.003, 0.0, 2e-4, {{Asset::BTC, -7.7}}};
    cfg.priced = {p};
    GridSpec spec;
    spec.pairs = {{Asset::BTC, Asset::BTC}};
    auto cells = daily_weekly_grid(synth::gen_flows_and_prices(cfg), spec);
    ASSERT_EQ(cells.size(), 4u);
    const auto& daily = find(cells, {Asset::BTC, Asset::BTC}, Target::Volatility, 24, Model::Single);
    ASSERT_TRUE(daily.ok());
    EXPECT_EQ(daily.sign, Sign::Negative);
    EXPECT_EQ(daily.stars, Stars::Three);
    EXPECT_LE(std::abs(daily.beta1 + 7.7), 3 * daily.fit->se[1]);
}

TEST(DailyWeekly, ShortSampleIsTooFewObservationsWeekly) {
    // 2400 hours is about 14 weeks.
    auto cells = daily_weekly_grid(white_noise());
    for (const auto& c : cells) {
        if (c.horizon == hours(168)) {
            ASSERT_FALSE(c.ok());
            EXPECT_EQ(*c.failure, ErrorCode::TooFewObservations);
        } else {
            EXPECT_TRUE(c.ok());
        }
    }
}

TEST(DailyWeekly, WeeklyDoubleModelRecoversPersistence) {
    synth::SynthConfig cfg;
    cfg.seed = 23;
    cfg.hours = 168 * 300;
    cfg.plant_horizon_hours = 168;
    cfg.flows = {{Asset::ETH, 1.0}};
    synth::PricedSpec p;
    p.ret = {0.0, 0.0, 0.002, {}};
    p.vol = {0.003, 0.5, 5e-4, {}};
    cfg.priced = {p};
    GridSpec spec;
    spec.pairs = {{Asset::ETH, Asset::ETH}};
    auto cells = daily_weekly_grid(synth::gen_flows_and_prices(cfg), spec);
    const auto& weekly = find(cells, {Asset::ETH, Asset::ETH}, Target::Volatility, 168, Model::Double);
    ASSERT_TRUE(weekly.ok());
    ASSERT_EQ(weekly.fit->beta.size(), 3u);
    EXPECT_LE(std::abs(weekly.fit->beta[2] - 0.5), 3 * weekly.fit->se[2]);
}

TEST(Serialization, JsonHasExactlyTheCellFields) {
    auto cells = run_grid(white_noise());
    cells[0].failure = ErrorCode::RankDeficient;
    auto j = nlohmann::json::parse(grid_to_json(cells));
    ASSERT_EQ(j.size(), 80u);
    for (const auto& c : j) {
        EXPECT_EQ(c.size(), 7u);
        for (const char* f : {"pair", "target", "horizon", "model", "beta1", "stars", "sign"})
            EXPECT_TRUE(c.contains(f)) << f;
    }
    EXPECT_TRUE(j[0]["beta1"].is_null());
    EXPECT_EQ(j[1]["pair"], nlohmann::json::array({"USDT", "ETH"}));
    EXPECT_EQ(j[1]["target"], "volatility");
    EXPECT_EQ(j[1]["horizon"], 1);
    EXPECT_DOUBLE_EQ(j[1]["beta1"].get<double>(), cells[1].beta1);  // 17 digits round-trip
}

TEST(Serialization, TsvLayoutAndDeterminism) {
    auto a = run_grid(white_noise());
    auto b = run_grid(white_noise());
    EXPECT_EQ(grid_to_json(a), grid_to_json(b));
    const auto tsv = grid_to_tsv(a);
    EXPECT_EQ(tsv, grid_to_tsv(b));
    std::size_t lines = std::count(tsv.begin(), tsv.end(), '\n');
    EXPECT_EQ(lines, 11u);  // header + 5 horizons x 2 models
    const auto header = tsv.substr(0, tsv.find('\n'));
    EXPECT_EQ(std::count(header.begin(), header.end(), '\t'), 9);
    EXPECT_EQ(header.rfind("horizon\tmodel\tUSDT->ETH return\tUSDT->ETH volatility", 0), 0u);
}
