#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "onflow/csv.hpp"
#include "onflow/ingest.hpp"
#include "support.hpp"

using namespace onflow;
using testing_support::TempDir;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an onflow::Error";
    return ErrorCode::Io;
}

std::string flows_csv(const std::vector<std::string>& rows) {
    std::string s{kFlowsHeader};
    s += '\n';
    for (const auto& r : rows) s += r + '\n';
    return s;
}

const std::string kQuoteOk = "2022-05-12T13:03Z,2000,2022-05-13T08:00Z,0.02129,2000,0.9,0.17";

}  // namespace

// --- core text forms -------------------------------------------------------

TEST(Core, NumbersRoundTripThroughSeventeenDigits) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15);
        EXPECT_EQ(parse_number(format_number(v)).value(), v);
    }
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(0.25), "0.25");
    EXPECT_FALSE(parse_number("abc"));
    EXPECT_FALSE(parse_number("1.5x"));
    EXPECT_FALSE(parse_number(""));
    EXPECT_FALSE(parse_number("inf"));
}

TEST(Core, TimestampsParseBothPrecisions) {
    auto a = parse_timestamp("2022-05-12T12:00:00Z");
    auto b = parse_timestamp("2022-05-12T12:00Z");
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, *b);
    EXPECT_EQ(*a, make_time(2022, 5, 12, 12));
    EXPECT_EQ(format_timestamp(*a), "2022-05-12T12:00:00Z");
    EXPECT_FALSE(parse_timestamp("2022-05-12 12:00:00"));
    EXPECT_FALSE(parse_timestamp("2022-02-30T00:00Z"));
    EXPECT_FALSE(parse_timestamp("2022-05-12T12:00:00+02:00"));
    EXPECT_EQ(utc_year(make_time(2021, 12, 31, 23)), 2021);
}

TEST(Core, BucketsStartOnDayBoundaries) {
    const auto t = make_time(2022, 5, 12, 13, 30);
    EXPECT_EQ(bucket_start(t, hours(1)), make_time(2022, 5, 12, 13));
    EXPECT_EQ(bucket_start(t, hours(6)), make_time(2022, 5, 12, 12));
    EXPECT_EQ(bucket_start(t, hours(4)), make_time(2022, 5, 12, 12));
    EXPECT_EQ(bucket_start(t, hours(24)), make_time(2022, 5, 12));
    // 2022-05-09 is a Monday.
    EXPECT_EQ(bucket_start(t, hours(168)), make_time(2022, 5, 9));
}

TEST(Core, ErrorCategoriesMapToExitCodes) {
    EXPECT_EQ(category(ErrorCode::Io), ErrorCategory::Io);
    EXPECT_EQ(category(ErrorCode::MalformedRow), ErrorCategory::Validation);
    EXPECT_EQ(category(ErrorCode::RankDeficient), ErrorCategory::Estimation);
    Error e(ErrorCode::MalformedRow, "bad", 7);
    EXPECT_EQ(e.line().value(), 7u);
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
}

// --- csv --------------------------------------------------------------------

TEST(Csv, HandlesQuotesCrlfBomAndBlankLines) {
    auto rows = csv::parse("\xEF\xBB\xBF" "a,b\r\n\"x, y\",\"he said \"\"hi\"\"\"\r\n\r\n1,2");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"x, y", "he said \"hi\""}));
    EXPECT_EQ(rows[2].line, 4u);
    EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
    EXPECT_EQ(code_of([] { csv::parse("\"open"); }), ErrorCode::MalformedRow);
}

// --- flows -------------------------------------------------------------------

TEST(Flows, StoresRawUsd) {
    auto f = parse_flows_text(flows_csv({"2022-05-12T12:00:00Z,ETH,26789010,0"}));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].asset, Asset::ETH);
    EXPECT_EQ(f[0].inflow_usd, 26789010.0);
    EXPECT_EQ(f[0].outflow_usd, 0.0);
    EXPECT_EQ(f[0].timestamp, make_time(2022, 5, 12, 12));
}

TEST(Flows, HeaderOnlyIsEmpty) { EXPECT_TRUE(parse_flows_text(flows_csv({})).empty()); }

TEST(Flows, RejectsNegativeFlow) {
    EXPECT_EQ(code_of([] { parse_flows_text(flows_csv({"2022-05-12T12:00:00Z,ETH,-5,0"})); }),
              ErrorCode::NegativeFlow);
}

TEST(Flows, ReportsLineOfMalformedRow) {
    try {
        parse_flows_text(flows_csv({"2022-05-12T12:00:00Z,ETH,1,0", "2022-05-12T13:00:00Z,ETH,x,0"}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedRow);
        EXPECT_EQ(e.line().value(), 3u);
    }
    EXPECT_EQ(code_of([] { parse_flows_text("time,asset,in,out\n"); }), ErrorCode::MalformedRow);
    EXPECT_EQ(code_of([] { parse_flows_text(flows_csv({"2022-05-12T12:30:00Z,ETH,1,0"})); }),
              ErrorCode::MalformedRow);
    EXPECT_EQ(code_of([] { parse_flows_text(flows_csv({"2022-05-12T12:00:00Z,DOGE,1,0"})); }),
              ErrorCode::MalformedRow);
}

TEST(Flows, RejectsDuplicates) {
    EXPECT_EQ(code_of([] {
                  parse_flows_text(flows_csv({"2022-05-12T12:00:00Z,ETH,1,0", "2022-05-12T12:00:00Z,ETH,2,0"}));
              }),
              ErrorCode::DuplicateTimestamp);
    // Same hour, different assets is fine.
    EXPECT_EQ(parse_flows_text(flows_csv({"2022-05-12T12:00:00Z,ETH,1,0", "2022-05-12T12:00:00Z,BTC,2,0"}))
                  .size(),
              2u);
}

TEST(Flows, ShuffledInputGivesSameCanonicalOutput) {
    std::vector<std::string> rows;
    std::mt19937_64 rng(5);
    for (int h = 0; h < 48; ++h)
        for (const char* a : {"ETH", "USDT", "BTC"})
            rows.push_back(format_timestamp(make_time(2022, 1, 1) + hours(h)) + "," + a + "," +
                           format_number(static_cast<double>(rng() % 100000) / 7.0) + "," +
                           format_number(static_cast<double>(rng() % 100000) / 3.0));
    const auto canonical = serialize_flows(parse_flows_text(flows_csv(rows)));
    for (int k = 0; k < 5; ++k) {
        std::shuffle(rows.begin(), rows.end(), rng);
        EXPECT_EQ(serialize_flows(parse_flows_text(flows_csv(rows))), canonical);
    }
    // Canonical text is a fixed point.
    EXPECT_EQ(serialize_flows(parse_flows_text(canonical)), canonical);
}

TEST(Flows, FileRoundTripAndMissingFile) {
    TempDir dir("flows");
    std::vector<FlowRecord> recs{{make_time(2022, 1, 1), Asset::USDT, 1.5e6, 0.25e6},
                                 {make_time(2022, 1, 1, 1), Asset::USDT, 0.0, 3.0}};
    csv::write_file(dir / "f.csv", serialize_flows(recs));
    EXPECT_EQ(parse_flows(dir / "f.csv"), recs);
    EXPECT_EQ(code_of([&] { parse_flows(dir / "nope.csv"); }), ErrorCode::Io);
}

// --- bars ---------------------------------------------------------------------

TEST(Bars, ConsecutiveHoursHaveNoGaps) {
    auto s = parse_bars_text("timestamp,open,high,low,close\n2022-01-01T00:00Z,1,2,1,2\n2022-01-01T01:00Z,2,2,1,1\n",
                             hours(1));
    EXPECT_EQ(s.bars.size(), 2u);
    EXPECT_TRUE(s.gaps.empty());
    EXPECT_EQ(s.bars[0].frequency, hours(1));
}

TEST(Bars, RecordsGapsWithoutFilling) {
    auto s = parse_bars_text("timestamp,open,high,low,close\n2022-01-01T14:00Z,1,1,1,1\n2022-01-01T12:00Z,1,1,1,1\n",
                             hours(1));
    ASSERT_EQ(s.bars.size(), 2u);
    EXPECT_EQ(s.bars[0].timestamp, make_time(2022, 1, 1, 12));
    ASSERT_EQ(s.gaps.size(), 1u);
    EXPECT_EQ(s.gaps[0], make_time(2022, 1, 1, 13));
}

TEST(Bars, ValidatesPrices) {
    EXPECT_EQ(code_of([] { parse_bars_text("timestamp,open,high,low,close\n2022-01-01T00:00Z,1,1,1,0\n", hours(1)); }),
              ErrorCode::NonPositivePrice);
    EXPECT_EQ(code_of([] { parse_bars_text("timestamp,open,high,low,close\n2022-01-01T00:00Z,1,1.5,1.2,1.4\n", hours(1)); }),
              ErrorCode::MalformedRow);
    EXPECT_EQ(code_of([] {
                  parse_bars_text("timestamp,open,high,low,close\n2022-01-01T00:00Z,1,1,1,1\n2022-01-01T00:30Z,1,1,1,1\n",
                                  hours(1));
              }),
              ErrorCode::FrequencyMismatch);
    EXPECT_EQ(code_of([] {
                  parse_bars_text("timestamp,open,high,low,close\n2022-01-01T00:00Z,1,1,1,1\n2022-01-01T00:00Z,1,1,1,1\n",
                                  hours(1));
              }),
              ErrorCode::DuplicateTimestamp);
}

TEST(Bars, RoundTrip) {
    std::mt19937_64 rng(3);
    auto closes = testing_support::random_walk(rng, 200, 1000.0, 0.01);
    auto bars = testing_support::bars_from_closes(make_time(2022, 1, 1), minutes(5), closes);
    auto text = serialize_bars(bars);
    auto back = parse_bars_text(text, minutes(5));
    EXPECT_EQ(back.bars, bars);
    EXPECT_EQ(serialize_bars(back.bars), text);
}

// --- option quotes ---------------------------------------------------------------

TEST(Quotes, AcceptsWellFormedQuote) {
    auto q = parse_option_quotes_text(std::string(kOptionsHeader) + "\n" + kQuoteOk + "\n");
    ASSERT_EQ(q.size(), 1u);
    EXPECT_EQ(q[0].strike, 2000.0);
    EXPECT_EQ(q[0].expiry, make_time(2022, 5, 13, 8));
    EXPECT_EQ(q[0].quote_time, make_time(2022, 5, 12, 13, 3));
}

TEST(Quotes, RejectsExpiredAndBadDelta) {
    const std::string h = std::string(kOptionsHeader) + "\n";
    EXPECT_EQ(code_of([&] {
                  parse_option_quotes_text(h + "2022-05-13T09:00Z,2000,2022-05-13T08:00Z,0.02,2000,0.9,0.17\n");
              }),
              ErrorCode::ExpiredAtQuote);
    EXPECT_EQ(code_of([&] {
                  parse_option_quotes_text(h + "2022-05-13T08:00Z,2000,2022-05-13T08:00Z,0.02,2000,0.9,0.17\n");
              }),
              ErrorCode::ExpiredAtQuote);
    EXPECT_EQ(code_of([&] {
                  parse_option_quotes_text(h + "2022-05-12T13:03Z,2000,2022-05-13T08:00Z,0.02,2000,0.9,1.2\n");
              }),
              ErrorCode::DeltaOutOfRange);
    EXPECT_EQ(code_of([&] { parse_option_quotes_text(h + kQuoteOk + "\n" + kQuoteOk + "\n"); }),
              ErrorCode::DuplicateTimestamp);
}

TEST(Quotes, SortedByQuoteTimeAndRoundTrip) {
    const std::string h = std::string(kOptionsHeader) + "\n";
    auto q = parse_option_quotes_text(h + "2022-05-12T14:03Z,2000,2022-05-13T08:00Z,0.02,2010,0.9,0.2\n" + kQuoteOk +
                                      "\n2022-05-12T13:03Z,2100,2022-05-13T08:00Z,0.01,2000,0.95,0.1\n");
    ASSERT_EQ(q.size(), 3u);
    EXPECT_TRUE(std::is_sorted(q.begin(), q.end(),
                               [](const auto& a, const auto& b) { return a.quote_time < b.quote_time; }));
    EXPECT_TRUE(same_instrument(q[0], q[2]));
    EXPECT_FALSE(same_instrument(q[0], q[1]));
    auto text = serialize_option_quotes(q);
    EXPECT_EQ(serialize_option_quotes(parse_option_quotes_text(text)), text);
}
