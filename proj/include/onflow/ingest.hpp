#ifndef ONFLOW_INGEST_HPP
#define ONFLOW_INGEST_HPP

// CSV ingestion for the three input datasets: exchange flows, price bars and
// call-option quotes. Parsers validate every row, sort into canonical order,
// and reject duplicates. The serializers emit that canonical form, so
// serialize(parse(text)) is a fixed point for well-formed input.

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "csv.hpp"

namespace onflow {

struct FlowRecord {
    Timestamp timestamp;
    Asset asset = Asset::ETH;
    double inflow_usd = 0.0;
    double outflow_usd = 0.0;

    friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

struct Bar {
    Timestamp timestamp;  // bar open
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    Duration frequency{0};

    friend bool operator==(const Bar&, const Bar&) = default;
};

struct BarSeries {
    Duration frequency{0};
    std::vector<Bar> bars;
    std::vector<Timestamp> gaps;  // opens of the missing bars between first and last
};

struct OptionQuote {
    Timestamp quote_time;
    double strike = 0.0;
    Timestamp expiry;
    double option_price = 0.0;  // in units of the underlying
    double index_price = 0.0;
    double implied_vol = 0.0;
    double delta = 0.0;

    friend bool operator==(const OptionQuote&, const OptionQuote&) = default;
};

/// Raw datasets: flows of any assets plus bars per priced asset.
struct MarketData {
    std::vector<FlowRecord> flows;
    std::map<Asset, std::vector<Bar>> bars;
};

inline bool same_instrument(const OptionQuote& a, const OptionQuote& b) {
    return a.strike == b.strike && a.expiry == b.expiry;
}

inline constexpr std::string_view kFlowsHeader = "timestamp,asset,inflow_usd,outflow_usd";
inline constexpr std::string_view kBarsHeader = "timestamp,open,high,low,close";
inline constexpr std::string_view kOptionsHeader =
    "quote_time,strike,expiry,option_price,index_price,implied_vol,delta";

namespace detail {

inline std::vector<std::string> split_header(std::string_view header) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
        auto pos = header.find(',', start);
        cols.emplace_back(header.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cols;
}

inline std::vector<csv::Row> body(std::string_view text, std::string_view header) {
    auto rows = csv::parse(text);
    if (rows.empty()) throw Error(ErrorCode::MalformedRow, "missing header row", 1);
    if (rows.front().fields != split_header(header))
        throw Error(ErrorCode::MalformedRow,
                    "header does not match '" + std::string(header) + "'", rows.front().line);
    rows.erase(rows.begin());
    for (const auto& r : rows)
        if (r.fields.size() != split_header(header).size())
            throw Error(ErrorCode::MalformedRow,
                        "expected " + std::to_string(split_header(header).size()) + " fields, got " +
                            std::to_string(r.fields.size()),
                        r.line);
    return rows;
}

inline Timestamp field_time(const csv::Row& r, std::size_t i, std::string_view name) {
    auto t = parse_timestamp(r.fields[i]);
    if (!t)
        throw Error(ErrorCode::MalformedRow,
                    std::string(name) + " is not an ISO-8601 UTC instant: '" + r.fields[i] + "'",
                    r.line);
    return *t;
}

inline double field_number(const csv::Row& r, std::size_t i, std::string_view name) {
    auto v = parse_number(r.fields[i]);
    if (!v)
        throw Error(ErrorCode::MalformedRow,
                    std::string(name) + " is not a number: '" + r.fields[i] + "'", r.line);
    return *v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// flows.csv

inline std::vector<FlowRecord> parse_flows_text(std::string_view text) {
    std::vector<std::pair<FlowRecord, std::size_t>> recs;
    for (const auto& r : detail::body(text, kFlowsHeader)) {
        FlowRecord f;
        f.timestamp = detail::field_time(r, 0, "timestamp");
        if (f.timestamp.time_since_epoch().count() % 3600 != 0)
            throw Error(ErrorCode::MalformedRow, "flow timestamp is not hour-aligned", r.line);
        auto a = parse_asset(r.fields[1]);
        if (!a) throw Error(ErrorCode::MalformedRow, "unknown asset '" + r.fields[1] + "'", r.line);
        f.asset = *a;
        f.inflow_usd = detail::field_number(r, 2, "inflow_usd");
        f.outflow_usd = detail::field_number(r, 3, "outflow_usd");
        if (f.inflow_usd < 0 || f.outflow_usd < 0)
            throw Error(ErrorCode::NegativeFlow, "flows must be nonnegative", r.line);
        recs.emplace_back(f, r.line);
    }
    std::sort(recs.begin(), recs.end(), [](const auto& x, const auto& y) {
        return std::tie(x.first.asset, x.first.timestamp) < std::tie(y.first.asset, y.first.timestamp);
    });
    std::vector<FlowRecord> out;
    out.reserve(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (i > 0 && recs[i].first.asset == recs[i - 1].first.asset &&
            recs[i].first.timestamp == recs[i - 1].first.timestamp)
            throw Error(ErrorCode::DuplicateTimestamp,
                        std::string(to_string(recs[i].first.asset)) + " at " +
                            format_timestamp(recs[i].first.timestamp),
                        std::max(recs[i].second, recs[i - 1].second));
        out.push_back(recs[i].first);
    }
    return out;
}

inline std::vector<FlowRecord> parse_flows(const std::filesystem::path& path) {
    return parse_flows_text(csv::read_file(path));
}

inline std::string serialize_flows(const std::vector<FlowRecord>& flows) {
    std::string out{kFlowsHeader};
    out += '\n';
    for (const auto& f : flows)
        csv::append_row(out, {format_timestamp(f.timestamp), to_string(f.asset),
                              format_number(f.inflow_usd), format_number(f.outflow_usd)});
    return out;
}

/// Records of one asset, preserving order.
inline std::vector<FlowRecord> flows_of(const std::vector<FlowRecord>& flows, Asset asset) {
    std::vector<FlowRecord> out;
    std::copy_if(flows.begin(), flows.end(), std::back_inserter(out),
                 [asset](const FlowRecord& f) { return f.asset == asset; });
    return out;
}

// ---------------------------------------------------------------------------
// bars.csv

inline BarSeries parse_bars_text(std::string_view text, Duration frequency) {
    if (frequency.count() <= 0) throw Error(ErrorCode::FrequencyMismatch, "frequency must be positive");
    std::vector<std::pair<Bar, std::size_t>> recs;
    for (const auto& r : detail::body(text, kBarsHeader)) {
        Bar b;
        b.timestamp = detail::field_time(r, 0, "timestamp");
        b.open = detail::field_number(r, 1, "open");
        b.high = detail::field_number(r, 2, "high");
        b.low = detail::field_number(r, 3, "low");
        b.close = detail::field_number(r, 4, "close");
        b.frequency = frequency;
        if (b.open <= 0 || b.high <= 0 || b.low <= 0 || b.close <= 0)
            throw Error(ErrorCode::NonPositivePrice, "prices must be positive", r.line);
        if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close))
            throw Error(ErrorCode::MalformedRow, "low/high do not bracket open and close", r.line);
        recs.emplace_back(b, r.line);
    }
    std::sort(recs.begin(), recs.end(),
              [](const auto& x, const auto& y) { return x.first.timestamp < y.first.timestamp; });

    BarSeries out;
    out.frequency = frequency;
    out.bars.reserve(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (i > 0) {
            auto step = recs[i].first.timestamp - recs[i - 1].first.timestamp;
            auto line = std::max(recs[i].second, recs[i - 1].second);
            if (step.count() == 0)
                throw Error(ErrorCode::DuplicateTimestamp,
                            format_timestamp(recs[i].first.timestamp), line);
            if (step.count() % frequency.count() != 0)
                throw Error(ErrorCode::FrequencyMismatch,
                            "spacing of " + std::to_string(step.count()) +
                                "s is not a multiple of the bar frequency",
                            line);
            for (auto t = recs[i - 1].first.timestamp + frequency; t < recs[i].first.timestamp;
                 t += frequency)
                out.gaps.push_back(t);
        }
        out.bars.push_back(recs[i].first);
    }
    return out;
}

inline BarSeries parse_bars(const std::filesystem::path& path, Duration frequency) {
    return parse_bars_text(csv::read_file(path), frequency);
}

inline std::string serialize_bars(const std::vector<Bar>& bars) {
    std::string out{kBarsHeader};
    out += '\n';
    for (const auto& b : bars)
        csv::append_row(out, {format_timestamp(b.timestamp), format_number(b.open),
                              format_number(b.high), format_number(b.low),
                              format_number(b.close)});
    return out;
}

// ---------------------------------------------------------------------------
// options.csv

inline std::vector<OptionQuote> parse_option_quotes_text(std::string_view text) {
    std::vector<std::pair<OptionQuote, std::size_t>> recs;
    for (const auto& r : detail::body(text, kOptionsHeader)) {
        OptionQuote q;
        q.quote_time = detail::field_time(r, 0, "quote_time");
        q.strike = detail::field_number(r, 1, "strike");
        q.expiry = detail::field_time(r, 2, "expiry");
        q.option_price = detail::field_number(r, 3, "option_price");
        q.index_price = detail::field_number(r, 4, "index_price");
        q.implied_vol = detail::field_number(r, 5, "implied_vol");
        q.delta = detail::field_number(r, 6, "delta");
        if (q.strike <= 0 || q.index_price <= 0)
            throw Error(ErrorCode::NonPositivePrice, "strike and index_price must be positive", r.line);
        if (q.option_price < 0 || q.implied_vol < 0)
            throw Error(ErrorCode::MalformedRow, "option_price and implied_vol must be nonnegative",
                        r.line);
        if (q.expiry <= q.quote_time)
            throw Error(ErrorCode::ExpiredAtQuote,
                        "expiry " + format_timestamp(q.expiry) + " is not after quote time " +
                            format_timestamp(q.quote_time),
                        r.line);
        if (q.delta < 0.0 || q.delta > 1.0)
            throw Error(ErrorCode::DeltaOutOfRange, "call delta must lie in [0, 1]", r.line);
        recs.emplace_back(q, r.line);
    }
    auto key = [](const OptionQuote& q) { return std::tie(q.quote_time, q.expiry, q.strike); };
    std::sort(recs.begin(), recs.end(),
              [&](const auto& x, const auto& y) { return key(x.first) < key(y.first); });
    std::vector<OptionQuote> out;
    out.reserve(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (i > 0 && key(recs[i].first) == key(recs[i - 1].first))
            throw Error(ErrorCode::DuplicateTimestamp,
                        "two quotes for the same instrument at " +
                            format_timestamp(recs[i].first.quote_time),
                        std::max(recs[i].second, recs[i - 1].second));
        out.push_back(recs[i].first);
    }
    return out;
}

inline std::vector<OptionQuote> parse_option_quotes(const std::filesystem::path& path) {
    return parse_option_quotes_text(csv::read_file(path));
}

inline std::string serialize_option_quotes(const std::vector<OptionQuote>& quotes) {
    std::string out{kOptionsHeader};
    out += '\n';
    for (const auto& q : quotes)
        csv::append_row(out, {format_timestamp(q.quote_time), format_number(q.strike),
                              format_timestamp(q.expiry), format_number(q.option_price),
                              format_number(q.index_price), format_number(q.implied_vol),
                              format_number(q.delta)});
    return out;
}

}  // namespace onflow

#endif  // ONFLOW_INGEST_HPP
