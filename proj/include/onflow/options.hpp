#ifndef ONFLOW_OPTIONS_HPP
#define ONFLOW_OPTIONS_HPP

// Delta-hedged call-option trade accounting, the trading-cost model, and
// bucketed profitability statistics for percentile-selected event hours.
//
// Per-trade accounting (one option on one unit of underlying, USD):
//   P_call        = option_price * index_price
//   PnL_option    = P_call(entry) - P_call(exit)                  (sell; negated for buy)
//   r_option      = PnL_option / P_call(entry)
//   r_underlying  = -delta * r_option       (= delta * r_buy for a sold call)
//   PnL_underlying = +/- (index_exit - index_entry) * delta      (long hedge for sold calls)
//   PnL_portfolio = PnL_option + PnL_underlying
//   r_portfolio   = r_option + r_underlying
//   PnL_net       = PnL_portfolio - (premium + hedge*delta + half_spread + slippage) * index_entry
//   r_net         = PnL_net / ((0.3 + delta) * index_entry)

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "ingest.hpp"
#include "series.hpp"

namespace onflow {

enum class Side { SellCall, BuyCall };

constexpr std::string_view to_string(Side s) { return s == Side::SellCall ? "sell_call" : "buy_call"; }

struct CostParams {
    double premium_rate = 0.0003;
    double hedge_rate = 0.0005;  // scaled by delta
    double half_spread = 0.001 / 2;
    double slippage = 0.0;

    static CostParams zero() { return {0.0, 0.0, 0.0, 0.0}; }
};

inline constexpr double kCapitalMarginFactor = 0.3;

inline double call_price(const OptionQuote& q) { return q.option_price * q.index_price; }

inline double otm_range(double strike, double index) { return (strike - index) / index; }

inline double initial_capital(double delta, double index) {
    return (kCapitalMarginFactor + delta) * index;
}

struct TradeOutcome {
    OptionQuote entry;
    OptionQuote exit;
    Side side = Side::SellCall;
    double delta_hedge = 0.0;
    double pnl_option = 0.0;
    double pnl_underlying = 0.0;
    double pnl_portfolio = 0.0;
    double pnl_net = 0.0;
    double r_option = 0.0;
    double r_underlying = 0.0;
    double r_portfolio = 0.0;
    double r_portfolio_net = 0.0;
    bool win = false;
};

/// Trading costs in USD for one trade.
inline double trade_cost(const TradeOutcome& t, const CostParams& c) {
    return (c.premium_rate + c.hedge_rate * t.delta_hedge + c.half_spread + c.slippage) *
           t.entry.index_price;
}

inline double net_pnl(const TradeOutcome& t, const CostParams& c) {
    return t.pnl_portfolio -
           (c.premium_rate + c.hedge_rate * t.delta_hedge + c.half_spread + c.slippage) *
               t.entry.index_price;
}

/// Recomputes the net fields of t under cost model c.
inline void apply_costs(TradeOutcome& t, const CostParams& c) {
    t.pnl_net = net_pnl(t, c);
    t.r_portfolio_net = t.pnl_net / initial_capital(t.delta_hedge, t.entry.index_price);
    t.win = t.r_portfolio_net > 0.0;
}

inline TradeOutcome trade(const OptionQuote& entry, const OptionQuote& exit, Side side,
                          double delta_hedge, const CostParams& costs = {}) {
    if (!same_instrument(entry, exit))
        throw Error(ErrorCode::InstrumentMismatch, "entry and exit quote different instruments");
    if (exit.quote_time < entry.quote_time)
        throw Error(ErrorCode::InvalidArgument, "exit quote precedes entry quote");
    const double c0 = call_price(entry);
    if (!(c0 > 0.0)) throw Error(ErrorCode::ZeroEntryPrice, "entry call price must be positive");
    const double c1 = call_price(exit);

    TradeOutcome t;
    t.entry = entry;
    t.exit = exit;
    t.side = side;
    t.delta_hedge = delta_hedge;

    const double pnl_sell = c0 - c1;
    const double r_sell = pnl_sell / c0;
    const double hedge_sign = side == Side::SellCall ? 1.0 : -1.0;
    t.pnl_option = hedge_sign * pnl_sell;
    t.r_option = hedge_sign * r_sell;
    t.r_underlying = -delta_hedge * t.r_option;
    t.pnl_underlying = hedge_sign * (exit.index_price - entry.index_price) * delta_hedge;
    t.pnl_portfolio = t.pnl_option + t.pnl_underlying;
    t.r_portfolio = t.r_option + t.r_underlying;
    apply_costs(t, costs);
    return t;
}

/// Slippage that makes this trade's net PnL exactly zero.
inline double breakeven_slippage(const TradeOutcome& t, const CostParams& c) {
    return t.pnl_portfolio / t.entry.index_price -
           (c.premium_rate + c.hedge_rate * t.delta_hedge + c.half_spread);
}

/// Common slippage that makes the summed net return of a set of trades zero.
inline double breakeven_slippage(std::span<const TradeOutcome> trades, const CostParams& c) {
    double num = 0.0, den = 0.0;
    for (const auto& t : trades) {
        const double cap = initial_capital(t.delta_hedge, t.entry.index_price);
        const double base = c.premium_rate + c.hedge_rate * t.delta_hedge + c.half_spread;
        num += (t.pnl_portfolio - base * t.entry.index_price) / cap;
        den += t.entry.index_price / cap;
    }
    if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "no trades");
    return num / den;
}

// ---------------------------------------------------------------------------
// Buckets

struct IvFilter {
    enum class Op { AtLeast, Below } op = Op::AtLeast;
    double threshold = 1.0;

    bool accepts(double iv) const { return op == Op::AtLeast ? iv >= threshold : iv < threshold; }
    friend bool operator==(const IvFilter&, const IvFilter&) = default;
};

/// Half-open [lo, hi) interval over the OTM range.
struct OtmFilter {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool accepts(double otm) const { return otm >= lo && otm < hi; }
    friend bool operator==(const OtmFilter&, const OtmFilter&) = default;
};

struct BucketKey {
    std::optional<IvFilter> iv;
    std::optional<OtmFilter> otm;

    bool accepts(const TradeOutcome& t) const {
        if (iv && !iv->accepts(t.entry.implied_vol)) return false;
        if (otm && !otm->accepts(otm_range(t.entry.strike, t.entry.index_price))) return false;
        return true;
    }
    friend bool operator==(const BucketKey&, const BucketKey&) = default;
};

namespace detail {
inline std::string pct_text(double v) {
    double p = v * 100.0;
    if (std::fabs(p - std::round(p)) < 1e-9) return std::to_string(static_cast<long long>(std::round(p))) + "%";
    return format_number(p) + "%";
}
}  // namespace detail

inline std::string label(const BucketKey& k) {
    std::string out;
    if (k.iv) out += std::string("IV") + (k.iv->op == IvFilter::Op::AtLeast ? ">=" : "<") +
                     format_number(k.iv->threshold);
    if (k.otm) {
        if (!out.empty()) out += " & ";
        if (std::isfinite(k.otm->lo)) out += detail::pct_text(k.otm->lo) + "<=";
        out += "OTM";
        if (std::isfinite(k.otm->hi)) out += "<" + detail::pct_text(k.otm->hi);
    }
    return out.empty() ? "Original" : out;
}

/// The fifteen row buckets of the profitability tables.
inline std::vector<BucketKey> standard_buckets() {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<OtmFilter> otm{{-inf, 0.01}, {0.01, 0.03}, {0.03, 0.05}, {0.05, 0.10}};
    std::vector<BucketKey> keys;
    keys.push_back({});
    keys.push_back({IvFilter{IvFilter::Op::AtLeast, 1.0}, std::nullopt});
    keys.push_back({IvFilter{IvFilter::Op::AtLeast, 2.0}, std::nullopt});
    for (const auto& o : otm) keys.push_back({std::nullopt, o});
    for (double iv : {1.0, 2.0})
        for (const auto& o : otm) keys.push_back({IvFilter{IvFilter::Op::AtLeast, iv}, o});
    return keys;
}

enum class WtlMode { Count, PnlMagnitude };

struct BucketStats {
    std::size_t total_trades = 0;
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::optional<double> win_rate;
    std::optional<double> wtl;
    std::optional<double> r_avg_net;
    double r_total_net = 0.0;
};

/// Win rate, win-to-loss and net-return aggregates for trades in the bucket.
/// Sums run over sorted values so the result does not depend on trade order.
inline BucketStats bucket_stats(std::span<const TradeOutcome> trades, const BucketKey& key = {},
                                WtlMode mode = WtlMode::Count) {
    BucketStats s;
    std::vector<double> r;
    for (const auto& t : trades) {
        if (!key.accepts(t)) continue;
        ++s.total_trades;
        if (t.r_portfolio_net > 0.0) ++s.wins;
        else ++s.losses;
        r.push_back(t.r_portfolio_net);
    }
    if (s.total_trades == 0) return s;
    std::sort(r.begin(), r.end());
    double win_sum = 0.0, loss_sum = 0.0;
    for (double x : r) {
        s.r_total_net += x;
        if (x > 0.0) win_sum += x;
        else loss_sum += x;
    }
    s.win_rate = static_cast<double>(s.wins) / static_cast<double>(s.total_trades);
    s.r_avg_net = s.r_total_net / static_cast<double>(s.total_trades);
    if (s.losses > 0) {
        if (mode == WtlMode::Count) s.wtl = static_cast<double>(s.wins) / static_cast<double>(s.losses);
        else if (loss_sum != 0.0) s.wtl = win_sum / -loss_sum;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Percentile backtest

enum class Tail { Top, Bottom };

constexpr std::string_view to_string(Tail t) { return t == Tail::Top ? "top" : "bottom"; }

struct BacktestParams {
    Duration holding = kHour;
    Duration entry_tolerance = minutes(30);
    Duration exit_tolerance = minutes(30);
    WtlMode wtl_mode = WtlMode::Count;
};

struct BacktestResult {
    std::vector<Timestamp> events;  // selected buckets, chronological
    std::size_t unmatched_events = 0;
    std::vector<TradeOutcome> trades;
    std::vector<std::pair<BucketKey, BucketStats>> buckets;
};

/// Hours whose net inflow falls in the requested tail: the ceil(pct * n)
/// largest (Top) or smallest (Bottom), ties to the earlier hour.
inline std::vector<Timestamp> select_percentile(const NetInflowSeries& s, double pct, Tail tail) {
    if (!(pct > 0.0 && pct <= 1.0)) throw Error(ErrorCode::InvalidArgument, "percentile must lie in (0, 1]");
    auto pts = s.points;
    const auto m = std::min<std::size_t>(
        pts.size(), static_cast<std::size_t>(std::ceil(pct * static_cast<double>(pts.size()) - 1e-9)));
    std::stable_sort(pts.begin(), pts.end(), [tail](const SeriesPoint& a, const SeriesPoint& b) {
        return tail == Tail::Top ? a.value > b.value : a.value < b.value;
    });
    std::vector<Timestamp> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(pts[i].t);
    std::sort(out.begin(), out.end());
    return out;
}

/// Opens one trade per instrument quoted within the entry tolerance after
/// each selected bucket closes (signal time = bucket start + horizon), exits
/// at the first quote of the same instrument at least `holding` later, and
/// aggregates by bucket. Quotes must be sorted by quote_time.
inline BacktestResult percentile_backtest(const NetInflowSeries& net_inflows,
                                          std::span<const OptionQuote> quotes, double pct,
                                          Tail tail, Side side, const CostParams& costs,
                                          const std::vector<BucketKey>& buckets,
                                          const BacktestParams& params = {}) {
    if (quotes.empty()) throw Error(ErrorCode::NoMatchingQuotes, "option quote set is empty");

    using InstrumentKey = std::tuple<Timestamp, double>;  // expiry, strike
    std::map<InstrumentKey, std::vector<std::size_t>> by_instrument;
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        if (i > 0 && quotes[i].quote_time < quotes[i - 1].quote_time)
            throw Error(ErrorCode::InvalidArgument, "quotes must be sorted by quote time");
        by_instrument[{quotes[i].expiry, quotes[i].strike}].push_back(i);
    }

    BacktestResult res;
    res.events = select_percentile(net_inflows, pct, tail);
    for (Timestamp ev : res.events) {
        const Timestamp signal = ev + net_inflows.horizon;
        auto it = std::lower_bound(quotes.begin(), quotes.end(), signal,
                                   [](const OptionQuote& q, Timestamp t) { return q.quote_time < t; });
        std::map<InstrumentKey, std::size_t> entries;
        for (; it != quotes.end() && it->quote_time <= signal + params.entry_tolerance; ++it)
            entries.emplace(InstrumentKey{it->expiry, it->strike},
                            static_cast<std::size_t>(it - quotes.begin()));
        bool matched = false;
        for (const auto& [key, entry_idx] : entries) {
            const auto& entry = quotes[entry_idx];
            const auto& series = by_instrument[key];
            const Timestamp target = entry.quote_time + params.holding;
            auto ex = std::lower_bound(series.begin(), series.end(), target,
                                       [&](std::size_t i, Timestamp t) { return quotes[i].quote_time < t; });
            if (ex == series.end() || quotes[*ex].quote_time > target + params.exit_tolerance) continue;
            if (!(call_price(entry) > 0.0)) continue;
            res.trades.push_back(trade(entry, quotes[*ex], side, entry.delta, costs));
            matched = true;
        }
        if (!matched) ++res.unmatched_events;
    }
    if (res.trades.empty())
        throw Error(ErrorCode::NoMatchingQuotes, "no event hour produced a matched entry/exit pair");
    for (const auto& key : buckets)
        res.buckets.emplace_back(key, bucket_stats(res.trades, key, params.wtl_mode));
    return res;
}

// ---------------------------------------------------------------------------
// Report

struct ReportRow {
    std::string bucket;
    BucketStats stats;
};

inline std::string leg_label(Tail tail, double pct, Side side) {
    return std::string(to_string(tail)) + " " + detail::pct_text(pct) + " " +
           std::string(to_string(side));
}

/// TSV with columns bucket, win_rate, total_trades, wtl, r_avg_net, r_total_net.
inline std::string backtest_report_tsv(const std::vector<ReportRow>& rows) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("N/A"); };
    std::string out = "bucket\twin_rate\ttotal_trades\twtl\tr_avg_net\tr_total_net\n";
    for (const auto& r : rows) {
        out += r.bucket + "\t" + opt(r.stats.win_rate) + "\t" + std::to_string(r.stats.total_trades) +
               "\t" + opt(r.stats.wtl) + "\t" + opt(r.stats.r_avg_net) + "\t" +
               format_number(r.stats.r_total_net) + "\n";
    }
    return out;
}

}  // namespace onflow

#endif  // ONFLOW_OPTIONS_HPP
