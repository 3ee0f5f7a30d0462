#ifndef ONFLOW_EVENTS_HPP
#define ONFLOW_EVENTS_HPP

// Extreme net-inflow hours: the k largest hourly values within each UTC
// calendar year, plus plot-ready windows around a chosen event.

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "series.hpp"

namespace onflow {

enum class Extreme { Inflow, Outflow };

struct EventHit {
    Asset asset = Asset::ETH;
    Timestamp timestamp;
    double net_inflow_musd = 0.0;
    int year = 0;
    int rank_in_year = 1;

    friend bool operator==(const EventHit&, const EventHit&) = default;
};

/// Percentile implied by keeping the top k of n hours, e.g. 1 - 10/8760.
inline double implied_percentile(std::size_t k, std::size_t hours_in_year) {
    return 1.0 - static_cast<double>(k) / static_cast<double>(hours_in_year);
}

/// Ranked per-year extremes, ordered by year then rank. Ties go to the
/// earlier hour. With Extreme::Outflow the most negative hours rank first.
inline std::vector<EventHit> detect_extremes(const NetInflowSeries& series, std::size_t k,
                                             const std::set<int>& years,
                                             Extreme direction = Extreme::Inflow) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    if (series.horizon != kHour)
        throw Error(ErrorCode::HorizonMismatch, "extreme detection runs on hourly net inflows");

    std::vector<EventHit> out;
    for (int year : years) {
        std::vector<SeriesPoint> pts;
        for (const auto& p : series.points)
            if (utc_year(p.t) == year) pts.push_back(p);
        if (pts.empty()) throw Error(ErrorCode::EmptyYear, "no observations in " + std::to_string(year));

        const double sign = direction == Extreme::Inflow ? 1.0 : -1.0;
        auto before = [sign](const SeriesPoint& a, const SeriesPoint& b) {
            if (sign * a.value != sign * b.value) return sign * a.value > sign * b.value;
            return a.t < b.t;
        };
        const std::size_t take = std::min(k, pts.size());
        std::partial_sort(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(take), pts.end(),
                          before);
        for (std::size_t i = 0; i < take; ++i)
            out.push_back({series.asset, pts[i].t, pts[i].value, year, static_cast<int>(i + 1)});
    }
    return out;
}

struct CaseWindow {
    EventHit event;
    Duration pre{0};
    Duration post{0};
    std::vector<SeriesPoint> flow_track;   // net inflow, US$ millions
    std::vector<SeriesPoint> price_track;  // hourly close
};

/// Hourly tracks over [event - pre, event + post]. The price point stamped t
/// is the close of the hour that opens at t.
inline CaseWindow extract_window(const EventHit& event, const NetInflowSeries& flows,
                                 std::span<const Bar> bars, Duration pre, Duration post) {
    if (pre.count() < 0 || post.count() < 0 || pre.count() % kHour.count() != 0 ||
        post.count() % kHour.count() != 0)
        throw Error(ErrorCode::InvalidArgument, "window bounds must be whole nonnegative hours");
    if (flows.horizon != kHour)
        throw Error(ErrorCode::HorizonMismatch, "case windows use hourly net inflows");
    detail::PricePath path(bars);

    CaseWindow w;
    w.event = event;
    w.pre = pre;
    w.post = post;
    for (auto t = event.timestamp - pre; t <= event.timestamp + post; t += kHour) {
        auto f = flows.at(t);
        const double px = path.at(t + kHour);
        if (!f || std::isnan(px))
            throw Error(ErrorCode::InsufficientCoverage,
                        "no data at " + format_timestamp(t) + " inside the requested window");
        w.flow_track.push_back({t, *f});
        w.price_track.push_back({t, px});
    }
    return w;
}

// ---------------------------------------------------------------------------
// Exports

inline std::string events_to_csv(const std::vector<EventHit>& hits) {
    std::string out = "asset,timestamp,net_inflow_musd,year,rank\n";
    for (const auto& h : hits)
        csv::append_row(out, {to_string(h.asset), format_timestamp(h.timestamp),
                              format_number(h.net_inflow_musd), std::to_string(h.year),
                              std::to_string(h.rank_in_year)});
    return out;
}

inline std::string track_to_csv(const std::vector<SeriesPoint>& track, std::string_view value_column) {
    std::string out = "timestamp,";
    out += value_column;
    out += '\n';
    for (const auto& p : track) csv::append_row(out, {format_timestamp(p.t), format_number(p.value)});
    return out;
}

}  // namespace onflow

#endif  // ONFLOW_EVENTS_HPP
