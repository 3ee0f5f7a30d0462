#ifndef ONFLOW_SERIES_HPP
#define ONFLOW_SERIES_HPP

// Horizon series built from raw flows and bars, and the predictor/response
// alignment used by the predictive regressions.
//
// Conventions:
//  * A horizon series point stamped t describes the window [t, t+h). Windows
//    are non-overlapping and anchored on kBucketAnchor.
//  * The price at instant t is the close of the bar that ends at t (opens at
//    t - frequency). A window needs every bar instant in [t, t+h]; otherwise
//    it is treated as a gap and dropped. Nothing is forward-filled.
//  * Returns are simple returns; volatility is the unannualized sample
//    standard deviation (n - 1 denominator) of sub-interval simple returns.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"
#include "ingest.hpp"

namespace onflow {

struct SeriesPoint {
    Timestamp t;
    double value = 0.0;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

template <class Tag>
struct Series {
    Asset asset = Asset::ETH;
    Duration horizon{0};
    std::vector<SeriesPoint> points;  // strictly increasing t

    std::optional<double> at(Timestamp t) const {
        auto it = std::lower_bound(points.begin(), points.end(), t,
                                   [](const SeriesPoint& p, Timestamp x) { return p.t < x; });
        if (it == points.end() || it->t != t) return std::nullopt;
        return it->value;
    }
    std::size_t size() const { return points.size(); }
};

struct NetInflowTag {};
struct ReturnTag {};
struct VolTag {};

using NetInflowSeries = Series<NetInflowTag>;  // US$ millions
using ReturnSeries = Series<ReturnTag>;        // decimal simple return
using VolSeries = Series<VolTag>;              // decimal, unannualized

inline constexpr double kUsdPerMillion = 1e6;
inline constexpr Duration kDefaultSubFrequency{300};

namespace detail {

inline void require_hour_multiple(Duration horizon) {
    if (horizon.count() <= 0 || horizon.count() % kHour.count() != 0)
        throw Error(ErrorCode::InvalidArgument, "horizon must be a positive whole number of hours");
}

/// Prices sampled at the bar-close instants, NaN where a bar is missing.
class PricePath {
public:
    explicit PricePath(std::span<const Bar> bars) {
        if (bars.empty()) throw Error(ErrorCode::EmptyInput, "no bars");
        step_ = bars.front().frequency;
        if (step_.count() <= 0) throw Error(ErrorCode::FrequencyMismatch, "bar frequency must be positive");
        first_ = bars.front().timestamp + step_;
        auto span = (bars.back().timestamp + step_ - first_).count() / step_.count();
        prices_.assign(static_cast<std::size_t>(span) + 1, std::numeric_limits<double>::quiet_NaN());
        Timestamp prev = bars.front().timestamp - step_;
        for (const auto& b : bars) {
            if (b.frequency != step_)
                throw Error(ErrorCode::FrequencyMismatch, "bars carry mixed frequencies");
            if (b.timestamp <= prev)
                throw Error(ErrorCode::InvalidArgument, "bars must be strictly increasing in time");
            auto off = (b.timestamp + step_ - first_).count();
            if (off % step_.count() != 0)
                throw Error(ErrorCode::FrequencyMismatch, "bar not on the frequency grid");
            prices_[static_cast<std::size_t>(off / step_.count())] = b.close;
            prev = b.timestamp;
        }
    }

    Duration step() const { return step_; }
    Timestamp first() const { return first_; }
    Timestamp last() const { return first_ + step_ * static_cast<long long>(prices_.size() - 1); }

    double at(Timestamp t) const {
        auto off = (t - first_).count();
        if (off < 0 || off % step_.count() != 0) return std::numeric_limits<double>::quiet_NaN();
        auto i = static_cast<std::size_t>(off / step_.count());
        return i < prices_.size() ? prices_[i] : std::numeric_limits<double>::quiet_NaN();
    }

    /// True when every bar instant in [from, to] has a price.
    bool complete(Timestamp from, Timestamp to) const {
        for (auto t = from; t <= to; t += step_)
            if (std::isnan(at(t))) return false;
        return true;
    }

private:
    Duration step_{0};
    Timestamp first_;
    std::vector<double> prices_;
};

}  // namespace detail

/// Net inflow per non-overlapping horizon bucket, in US$ millions. Buckets
/// missing any hourly record are skipped.
inline NetInflowSeries net_inflows(std::span<const FlowRecord> flows, Duration horizon) {
    detail::require_hour_multiple(horizon);
    if (flows.empty()) throw Error(ErrorCode::EmptyInput, "no flow records");

    NetInflowSeries out;
    out.asset = flows.front().asset;
    out.horizon = horizon;
    const auto per_bucket = horizon / kHour;

    std::size_t i = 0;
    while (i < flows.size()) {
        const Timestamp start = bucket_start(flows[i].timestamp, horizon);
        double in = 0.0, outflow = 0.0;
        long long count = 0;
        for (; i < flows.size() && flows[i].timestamp < start + horizon; ++i) {
            const auto& f = flows[i];
            if (f.asset != out.asset)
                throw Error(ErrorCode::InvalidArgument, "net_inflows expects a single asset");
            if (i > 0 && f.timestamp <= flows[i - 1].timestamp)
                throw Error(ErrorCode::InvalidArgument, "flow records must be strictly increasing");
            in += f.inflow_usd;
            outflow += f.outflow_usd;
            ++count;
        }
        if (count == per_bucket) out.points.push_back({start, (in - outflow) / kUsdPerMillion});
    }
    return out;
}

/// Simple return over each complete horizon window.
inline ReturnSeries returns(std::span<const Bar> bars, Duration horizon) {
    detail::require_hour_multiple(horizon);
    if (bars.empty()) throw Error(ErrorCode::EmptyInput, "no bars");
    if (horizon.count() % bars.front().frequency.count() != 0)
        throw Error(ErrorCode::FrequencyMismatch, "bar frequency does not divide the horizon");
    detail::PricePath path(bars);

    ReturnSeries out;
    out.horizon = horizon;
    for (auto s = bucket_start(path.first(), horizon); s + horizon <= path.last(); s += horizon) {
        if (s < path.first() || !path.complete(s, s + horizon)) continue;
        out.points.push_back({s, path.at(s + horizon) / path.at(s) - 1.0});
    }
    return out;
}

/// Sample standard deviation of sub_frequency returns inside each window.
inline VolSeries realized_vol(std::span<const Bar> bars, Duration horizon,
                              Duration sub_frequency = kDefaultSubFrequency) {
    detail::require_hour_multiple(horizon);
    if (bars.empty()) throw Error(ErrorCode::EmptyInput, "no bars");
    const Duration f = bars.front().frequency;
    if (sub_frequency.count() <= 0 || sub_frequency.count() % f.count() != 0 ||
        horizon.count() % sub_frequency.count() != 0)
        throw Error(ErrorCode::FrequencyMismatch,
                    "sub-frequency must be a multiple of the bar frequency and divide the horizon");
    const auto m = static_cast<std::size_t>(horizon / sub_frequency);
    if (m < 2) throw Error(ErrorCode::InsufficientSubBars, "need at least two sub-intervals per window");
    detail::PricePath path(bars);

    VolSeries out;
    out.horizon = horizon;
    std::vector<double> r(m);
    for (auto s = bucket_start(path.first(), horizon); s + horizon <= path.last(); s += horizon) {
        if (s < path.first() || !path.complete(s, s + horizon)) continue;
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            auto t = s + sub_frequency * static_cast<long long>(i);
            r[i] = path.at(t + sub_frequency) / path.at(t) - 1.0;
            mean += r[i];
        }
        mean /= static_cast<double>(m);
        double ss = 0.0;
        for (double x : r) ss += (x - mean) * (x - mean);
        out.points.push_back({s, std::sqrt(ss / static_cast<double>(m - 1))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Alignment

struct AlignedRow {
    Timestamp t;  // predictor timestamp; response is stamped t + horizon
    double predictor = 0.0;
    std::optional<double> control;
    double response = 0.0;
};

struct AlignedSample {
    Duration horizon{0};
    bool has_control = false;
    std::vector<AlignedRow> rows;

    std::size_t n() const { return rows.size(); }
};

/// Pairs predictor(t) [and control(t)] with response(t + horizon). The
/// control is normally the response series itself, i.e. its time-t value.
template <class ResponseTag, class ControlTag = ResponseTag>
AlignedSample align(const NetInflowSeries& predictor, const Series<ResponseTag>& response,
                    const Series<ControlTag>* control, Duration horizon) {
    if (predictor.horizon != horizon || response.horizon != horizon ||
        (control && control->horizon != horizon))
        throw Error(ErrorCode::HorizonMismatch, "all series must share the alignment horizon");

    AlignedSample out;
    out.horizon = horizon;
    out.has_control = control != nullptr;
    for (const auto& p : predictor.points) {
        auto y = response.at(p.t + horizon);
        if (!y) continue;
        std::optional<double> c;
        if (control) {
            c = control->at(p.t);
            if (!c) continue;
        }
        out.rows.push_back({p.t, p.value, c, *y});
    }
    if (out.rows.empty()) throw Error(ErrorCode::EmptyAlignment, "no overlapping observations");
    return out;
}

template <class ResponseTag>
AlignedSample align(const NetInflowSeries& predictor, const Series<ResponseTag>& response,
                    Duration horizon) {
    return align<ResponseTag, ResponseTag>(predictor, response, nullptr, horizon);
}

}  // namespace onflow

#endif  // ONFLOW_SERIES_HPP
