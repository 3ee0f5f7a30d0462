#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "onflow/events.hpp"
#include "support.hpp"

using namespace onflow;

namespace {

std::vector<FlowRecord> hourly_flows(Timestamp start, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 5e6);
    std::vector<FlowRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double net = z(rng);
        out.push_back({start + hours(static_cast<long long>(i)), Asset::ETH, 1e7 + std::max(net, 0.0),
                       1e7 + std::max(-net, 0.0)});
    }
    return out;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an onflow::Error";
    return ErrorCode::Io;
}

}  // namespace

TEST(Extremes, TopTenOfAFullYearMatchesSortOracle) {
    auto flows = hourly_flows(make_time(2021, 1, 1), 8760, 41);
    auto series = net_inflows(flows, kHour);
    ASSERT_EQ(series.points.size(), 8760u);
    auto hits = detect_extremes(series, 10, {2021});
    ASSERT_EQ(hits.size(), 10u);

    auto sorted = series.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const SeriesPoint& a, const SeriesPoint& b) { return a.value > b.value; });
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(hits[i].timestamp, sorted[i].t);
        EXPECT_EQ(hits[i].net_inflow_musd, sorted[i].value);
        EXPECT_EQ(hits[i].rank_in_year, static_cast<int>(i + 1));
        EXPECT_EQ(hits[i].year, 2021);
    }
    EXPECT_NEAR(implied_percentile(10, 8760), 1.0 - 10.0 / 8760.0, 1e-15);
    EXPECT_NEAR(implied_percentile(10, 8760) * 100, 99.8858, 5e-5);
}

TEST(Extremes, HitsDominateEveryOtherHourOfTheYear) {
    auto flows = hourly_flows(make_time(2021, 6, 1), 24 * 400, 43);
    auto series = net_inflows(flows, kHour);
    auto hits = detect_extremes(series, 7, {2021, 2022});
    ASSERT_EQ(hits.size(), 14u);
    for (int year : {2021, 2022}) {
        double floor = std::numeric_limits<double>::infinity();
        std::set<Timestamp> hit_times;
        for (const auto& h : hits)
            if (h.year == year) {
                floor = std::min(floor, h.net_inflow_musd);
                hit_times.insert(h.timestamp);
                EXPECT_LE(h.rank_in_year, 7);
            }
        for (const auto& p : series.points)
            if (utc_year(p.t) == year && !hit_times.count(p.t)) { EXPECT_LE(p.value, floor); }
    }
}

TEST(Extremes, KAtLeastLengthFlagsEveryHour) {
    auto series = net_inflows(hourly_flows(make_time(2021, 3, 1), 50, 47), kHour);
    EXPECT_EQ(detect_extremes(series, 50, {2021}).size(), 50u);
    EXPECT_EQ(detect_extremes(series, 500, {2021}).size(), 50u);
}

TEST(Extremes, TiesGoToTheEarlierHour) {
    const auto t0 = make_time(2022, 2, 1);
    std::vector<FlowRecord> flows;
    for (int i = 0; i < 6; ++i) flows.push_back({t0 + hours(i), Asset::ETH, i % 2 ? 5e6 : 1e6, 0.0});
    auto hits = detect_extremes(net_inflows(flows, kHour), 2, {2022});
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].timestamp, t0 + hours(1));
    EXPECT_EQ(hits[1].timestamp, t0 + hours(3));
}

TEST(Extremes, InvariantUnderInputPermutation) {
    auto series = net_inflows(hourly_flows(make_time(2021, 1, 1), 2000, 53), kHour);
    auto expect = detect_extremes(series, 10, {2021});
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(series.points.begin(), series.points.end(), rng);
        EXPECT_EQ(detect_extremes(series, 10, {2021}), expect);
    }
}

TEST(Extremes, OutflowsRankMostNegativeFirst) {
    auto series = net_inflows(hourly_flows(make_time(2021, 1, 1), 3000, 61), kHour);
    auto hits = detect_extremes(series, 5, {2021}, Extreme::Outflow);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& p : series.points) lowest = std::min(lowest, p.value);
    EXPECT_EQ(hits[0].net_inflow_musd, lowest);
    for (std::size_t i = 1; i < hits.size(); ++i)
        EXPECT_LE(hits[i - 1].net_inflow_musd, hits[i].net_inflow_musd);
}

TEST(Extremes, Errors) {
    auto series = net_inflows(hourly_flows(make_time(2021, 1, 1), 100, 67), kHour);
    EXPECT_EQ(code_of([&] { detect_extremes(series, 10, {2020}); }), ErrorCode::EmptyYear);
    EXPECT_EQ(code_of([&] { detect_extremes(series, 0, {2021}); }), ErrorCode::InvalidArgument);
}

TEST(Windows, MayTwentyTwentyTwoCaseStudy) {
    const auto start = make_time(2022, 5, 1);
    auto flows = hourly_flows(start, 24 * 20, 71);
    auto series = net_inflows(flows, kHour);
    std::mt19937_64 rng(73);
    auto bars = testing_support::bars_from_closes(start, kHour,
                                                  testing_support::random_walk(rng, 24 * 20, 2000, 0.01));
    EventHit ev{Asset::ETH, make_time(2022, 5, 12, 12), 0.0, 2022, 1};
    auto w = extract_window(ev, series, bars, hours(72), hours(48));
    ASSERT_EQ(w.flow_track.size(), 121u);
    ASSERT_EQ(w.price_track.size(), 121u);
    EXPECT_EQ(format_timestamp(w.flow_track.front().t), "2022-05-09T12:00:00Z");
    EXPECT_EQ(format_timestamp(w.flow_track.back().t), "2022-05-14T12:00:00Z");
    // price point stamped t is the close of the bar opening at t
    const auto idx = static_cast<std::size_t>((w.price_track.front().t - start) / kHour);
    EXPECT_EQ(w.price_track.front().value, bars[idx].close);
    EXPECT_EQ(w.flow_track.front().value, *series.at(w.flow_track.front().t));
}

TEST(Windows, ZeroWidthIsASinglePoint) {
    const auto start = make_time(2022, 5, 1);
    auto series = net_inflows(hourly_flows(start, 48, 79), kHour);
    auto bars = testing_support::bars_from_closes(start, kHour, std::vector<double>(48, 100.0));
    EventHit ev{Asset::ETH, start + hours(10), 0.0, 2022, 1};
    auto w = extract_window(ev, series, bars, Duration{0}, Duration{0});
    ASSERT_EQ(w.flow_track.size(), 1u);
    EXPECT_EQ(w.flow_track[0].t, ev.timestamp);
    EXPECT_EQ(w.price_track.size(), 1u);
}

TEST(Windows, EventAtSeriesStartLacksCoverage) {
    const auto start = make_time(2022, 5, 1);
    auto series = net_inflows(hourly_flows(start, 48, 83), kHour);
    auto bars = testing_support::bars_from_closes(start, kHour, std::vector<double>(48, 100.0));
    EventHit ev{Asset::ETH, start, 0.0, 2022, 1};
    EXPECT_EQ(code_of([&] { extract_window(ev, series, bars, hours(24), Duration{0}); }),
              ErrorCode::InsufficientCoverage);
}

TEST(Exports, EventsCsvLayout) {
    std::vector<EventHit> hits{{Asset::ETH, make_time(2022, 5, 12, 12), 26.75, 2022, 1}};
    EXPECT_EQ(events_to_csv(hits),
              "asset,timestamp,net_inflow_musd,year,rank\nETH,2022-05-12T12:00:00Z,26.75,2022,1\n");
    EXPECT_EQ(track_to_csv({{make_time(2022, 5, 12), 1.5}}, "close"),
              "timestamp,close\n2022-05-12T00:00:00Z,1.5\n");
}
