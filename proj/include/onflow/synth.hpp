#ifndef ONFLOW_SYNTH_HPP
#define ONFLOW_SYNTH_HPP

// Deterministic synthetic market data with planted flow -> return and
// flow -> volatility relations, plus a lognormal call-option chain on top of
// the generated prices. Output uses the exact ingest schemas.
//
// Model, per planting bucket k of width H hours (H = plant_horizon_hours):
//   F_a(hour)  ~ N(0, sd_a)                          net inflow, US$ millions
//   S_a(k)     = sum of F_a over bucket k
//   R(k+1)     = b0 + sum_a b1_a S_a(k) + b2 R(k) + N(0, noise_sd)
//   V(k+1)     = max(floor, v0 + sum_a c1_a S_a(k) + c2 V(k) + N(0, vol_noise_sd))
// optionally plus a diffusive term proportional to V(k+1) in R(k+1).
// Sub-bar returns inside bucket k are mu + V(k) z_i with mu chosen so that
// their compound return is exactly R(k).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "ingest.hpp"
#include "ols.hpp"
#include "regress.hpp"
#include "series.hpp"

namespace onflow::synth {

// ---------------------------------------------------------------------------
// Random source: mt19937_64 for bits (fully specified by the standard), a
// 53-bit uniform and the Marsaglia polar method for normals. The standard
// distributions are implementation-defined, so they are avoided.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double sd) { return sd == 0.0 ? (normal(), 0.0) : sd * normal(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream per component, so adding an asset leaves others unchanged.
inline Rng stream(std::uint64_t seed, std::uint64_t component) {
    return Rng(splitmix64(seed ^ splitmix64(component)));
}

// ---------------------------------------------------------------------------
// Configuration

struct FlowSpec {
    Asset asset = Asset::ETH;
    double sd_musd = 1.0;
};

struct Loading {
    Asset flow = Asset::ETH;
    double beta1 = 0.0;
};

struct Relation {
    double beta0 = 0.0;
    double beta2 = 0.0;
    double noise_sd = 0.0;
    std::vector<Loading> loadings;
};

struct PricedSpec {
    Asset asset = Asset::ETH;
    double initial_price = 2000.0;
    Relation ret;
    Relation vol;  // beta0 is the base per-sub-bar volatility
    // Adds vol_coupling * V(k) * sqrt(sub-bars per bucket) * N(0, 1) to R(k),
    // so the bucket's own volatility also moves its close.
    double vol_coupling = 0.0;
};

struct ChainSpec {
    Asset underlying = Asset::ETH;
    std::vector<double> moneyness{-0.02, -0.01, 0.0, 0.01, 0.02, 0.03, 0.05};
    double strike_tick = 0.005;  // relative to the listing spot, snapped to a 1-2-5 step
    int expiry_hour_utc = 8;
    int listed_days = 1;  // daily expiries, each listed this many days ahead
    Duration cadence = kHour;
    double iv_base = 1.0;
    double iv_smile = 0.0;  // added per unit |ln(K/S)|
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t hours = 8760;
    Timestamp start = make_time(2021, 1, 4);

    // Single-asset shorthand, used when `priced` is empty: ETH flows and ETH
    // prices with return relation (beta0, beta1, beta2, noise_sd).
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double noise_sd = 0.01;
    double flow_sd_musd = 1.0;
    double vol_base = 0.005;

    std::vector<FlowSpec> flows;
    std::vector<PricedSpec> priced;

    std::size_t plant_horizon_hours = 1;
    Duration sub_frequency = kDefaultSubFrequency;
    double vol_floor = 1e-5;
    double gross_flow_ratio = 0.5;  // both legs carry this multiple of sd on top of the net
    ChainSpec chain;
};

/// Expands the single-asset shorthand.
inline SynthConfig normalized(SynthConfig cfg) {
    if (cfg.priced.empty()) {
        if (cfg.flows.empty()) cfg.flows.push_back({Asset::ETH, cfg.flow_sd_musd});
        PricedSpec p;
        p.asset = Asset::ETH;
        p.ret = {cfg.beta0, cfg.beta2, cfg.noise_sd, {{Asset::ETH, cfg.beta1}}};
        p.vol = {cfg.vol_base, 0.0, 0.0, {}};
        cfg.priced.push_back(p);
    }
    return cfg;
}

inline void validate(const SynthConfig& raw) {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
    const SynthConfig cfg = normalized(raw);
    if (cfg.hours < 100) bad("hours must be at least 100");
    if (cfg.plant_horizon_hours == 0) bad("plant_horizon_hours must be positive");
    if (cfg.hours % cfg.plant_horizon_hours != 0) bad("hours must be a multiple of plant_horizon_hours");
    const Duration h = hours(static_cast<long long>(cfg.plant_horizon_hours));
    if (bucket_start(cfg.start, h) != cfg.start) bad("start is not aligned to the planting bucket grid");
    if (cfg.sub_frequency.count() <= 0 || kHour.count() % cfg.sub_frequency.count() != 0)
        bad("sub_frequency must divide one hour");
    if (!(cfg.vol_floor > 0.0)) bad("vol_floor must be positive");
    if (!(cfg.gross_flow_ratio >= 0.0)) bad("gross_flow_ratio must be nonnegative");
    std::map<Asset, int> flow_seen;
    for (const auto& f : cfg.flows) {
        if (!(f.sd_musd >= 0.0)) bad("flow sd must be nonnegative");
        if (flow_seen[f.asset]++) bad("duplicate flow asset");
    }
    std::map<Asset, int> priced_seen;
    for (const auto& p : cfg.priced) {
        if (priced_seen[p.asset]++) bad("duplicate priced asset");
        if (!(p.initial_price > 0.0)) bad("initial price must be positive");
        for (const Relation* r : {&p.ret, &p.vol}) {
            if (!(r->noise_sd >= 0.0)) bad("noise_sd must be nonnegative");
            for (const auto& l : r->loadings)
                if (!flow_seen.count(l.flow))
                    bad("loading on " + std::string(to_string(l.flow)) + " which has no generated flows");
        }
        if (!(p.vol.beta0 >= 0.0)) bad("vol_base must be nonnegative");
        if (!(p.vol_coupling >= 0.0)) bad("vol_coupling must be nonnegative");
    }
    const auto& c = cfg.chain;
    if (c.moneyness.empty()) bad("option chain needs at least one strike");
    if (!(c.strike_tick > 0.0)) bad("strike_tick must be positive");
    if (c.expiry_hour_utc < 0 || c.expiry_hour_utc > 23) bad("expiry hour must lie in [0, 23]");
    if (c.listed_days < 1) bad("listed_days must be at least 1");
    if (c.cadence.count() <= 0) bad("quote cadence must be positive");
    if (!(c.iv_base > 0.0) || !(c.iv_smile >= 0.0)) bad("implied volatility must be positive");
}

// ---------------------------------------------------------------------------
// Flows and prices

namespace detail {

inline constexpr std::uint64_t kFlowStream = 0x100;
inline constexpr std::uint64_t kReturnStream = 0x200;
inline constexpr std::uint64_t kVolStream = 0x300;
inline constexpr std::uint64_t kSubBarStream = 0x400;

inline std::uint64_t id(Asset a) { return static_cast<std::uint64_t>(a); }

/// Drift mu with prod(1 + mu + vol z_i) = 1 + target, by Newton on the log.
inline double solve_drift(const std::vector<double>& z, double vol, double target) {
    const double goal = std::log1p(target);
    const double m = static_cast<double>(z.size());
    double zmin = 0.0;
    for (double x : z) zmin = std::min(zmin, x);
    const double lower = -1.0 - vol * zmin;  // every 1 + mu + vol z_i > 0 above this
    double mu = std::max(std::expm1(goal / m), lower + 1e-12);
    for (int it = 0; it < 100; ++it) {
        double g = -goal, dg = 0.0;
        for (double x : z) {
            const double a = mu + vol * x;
            g += std::log1p(a);
            dg += 1.0 / (1.0 + a);
        }
        double next = mu - g / dg;
        if (next <= lower) next = 0.5 * (mu + lower);
        if (std::abs(next - mu) <= 1e-16 * std::max(1.0, std::abs(mu))) return next;
        mu = next;
    }
    return mu;
}

}  // namespace detail

/// Flows for every configured flow asset and sub-bars for every priced asset.
inline MarketData gen_flows_and_prices(const SynthConfig& raw) {
    validate(raw);
    const SynthConfig cfg = normalized(raw);
    const std::size_t H = cfg.plant_horizon_hours;
    const std::size_t buckets = cfg.hours / H;
    const auto per_hour = static_cast<std::size_t>(kHour.count() / cfg.sub_frequency.count());
    const std::size_t m = H * per_hour;

    MarketData out;
    std::map<Asset, std::vector<double>> bucket_flow;  // S_a(k)
    for (const auto& f : cfg.flows) {
        auto rng = stream(cfg.seed, detail::kFlowStream + detail::id(f.asset));
        auto& sums = bucket_flow[f.asset];
        sums.assign(buckets, 0.0);
        const double gross = cfg.gross_flow_ratio * f.sd_musd;
        for (std::size_t i = 0; i < cfg.hours; ++i) {
            const double net = rng.normal(f.sd_musd);
            sums[i / H] += net;
            FlowRecord r;
            r.timestamp = cfg.start + hours(static_cast<long long>(i));
            r.asset = f.asset;
            r.inflow_usd = (gross + std::max(net, 0.0)) * kUsdPerMillion;
            r.outflow_usd = (gross + std::max(-net, 0.0)) * kUsdPerMillion;
            out.flows.push_back(r);
        }
    }

    for (const auto& p : cfg.priced) {
        auto ret_rng = stream(cfg.seed, detail::kReturnStream + detail::id(p.asset));
        auto vol_rng = stream(cfg.seed, detail::kVolStream + detail::id(p.asset));
        auto sub_rng = stream(cfg.seed, detail::kSubBarStream + detail::id(p.asset));
        auto loaded = [&](const Relation& r, std::size_t k) {
            double v = 0.0;
            if (k == 0) return v;
            for (const auto& l : r.loadings) v += l.beta1 * bucket_flow.at(l.flow)[k - 1];
            return v;
        };

        auto& bars = out.bars[p.asset];
        bars.reserve(buckets * m + 1);
        bars.push_back({cfg.start - cfg.sub_frequency, p.initial_price, p.initial_price,
                        p.initial_price, p.initial_price, cfg.sub_frequency});

        double prev_r = 0.0;
        double prev_v = p.vol.beta2 < 1.0 ? p.vol.beta0 / (1.0 - p.vol.beta2) : p.vol.beta0;
        std::vector<double> z(m);
        for (std::size_t k = 0; k < buckets; ++k) {
            const double v = std::max(cfg.vol_floor, p.vol.beta0 + loaded(p.vol, k) +
                                                         p.vol.beta2 * prev_v +
                                                         vol_rng.normal(p.vol.noise_sd));
            double r = p.ret.beta0 + loaded(p.ret, k) + p.ret.beta2 * prev_r +
                       ret_rng.normal(p.ret.noise_sd);
            if (p.vol_coupling != 0.0)
                r += p.vol_coupling * v * std::sqrt(static_cast<double>(m)) * vol_rng.normal();
            if (!(r > -1.0)) throw Error(ErrorCode::InvalidConfig, "planted return below -100%");
            for (auto& x : z) x = sub_rng.normal();
            const double mu = detail::solve_drift(z, v, r);

            const double p0 = bars.back().close;
            const Timestamp t0 = cfg.start + hours(static_cast<long long>(k * H));
            for (std::size_t i = 0; i < m; ++i) {
                const double open = bars.back().close;
                // Pin the bucket's last close so the bucket return is exactly r.
                const double close = i + 1 == m ? p0 * (1.0 + r) : open * (1.0 + mu + v * z[i]);
                bars.push_back({t0 + cfg.sub_frequency * static_cast<long long>(i), open,
                                std::max(open, close), std::min(open, close), close,
                                cfg.sub_frequency});
            }
            prev_r = r;
            prev_v = v;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Option chain

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Lognormal European call value with zero rates; t in years.
inline double bs_call(double spot, double strike, double t, double vol) {
    if (t <= 0.0 || vol <= 0.0) return std::max(spot - strike, 0.0);
    const double sd = vol * std::sqrt(t);
    const double d1 = (std::log(spot / strike) + 0.5 * sd * sd) / sd;
    return spot * normal_cdf(d1) - strike * normal_cdf(d1 - sd);
}

inline double bs_delta(double spot, double strike, double t, double vol) {
    if (t <= 0.0 || vol <= 0.0) return spot > strike ? 1.0 : 0.0;
    const double sd = vol * std::sqrt(t);
    return normal_cdf((std::log(spot / strike) + 0.5 * sd * sd) / sd);
}

/// Largest 1, 2 or 5 times a power of ten not above x.
inline double nice_tick(double x) {
    const double p = std::pow(10.0, std::floor(std::log10(x)));
    const double m = x / p;
    return (m >= 5.0 ? 5.0 : m >= 2.0 ? 2.0 : 1.0) * p;
}

inline constexpr double kSecondsPerYear = 365.0 * 86400.0;

/// Daily expiries at chain.expiry_hour_utc, each listed listed_days earlier
/// with strikes fixed from the listing spot, quoted every `cadence` until expiry.
inline std::vector<OptionQuote> gen_option_chain(const SynthConfig& raw, std::span<const Bar> bars) {
    validate(raw);
    if (bars.empty()) throw Error(ErrorCode::InvalidConfig, "option chain needs underlying bars");
    const ChainSpec& c = raw.chain;
    onflow::detail::PricePath path(bars);
    const Timestamp first = path.first();
    const Timestamp last = path.last();
    const Duration day{86400};
    const Duration listing = day * c.listed_days;

    auto quote_grid = [&](Timestamp t) {  // first cadence instant at or after t
        auto off = (t - first).count();
        auto step = c.cadence.count();
        auto k = off <= 0 ? 0 : (off + step - 1) / step;
        return first + Duration{k * step};
    };

    std::vector<OptionQuote> quotes;
    Timestamp expiry = std::chrono::floor<std::chrono::days>(first) + hours(c.expiry_hour_utc);
    if (expiry <= first) expiry += day;
    for (; expiry - listing <= last; expiry += day) {
        const Timestamp listed = std::max(expiry - listing, first);
        const double spot0 = path.at(quote_grid(listed));
        if (std::isnan(spot0)) continue;
        const double tick = nice_tick(spot0 * c.strike_tick);
        std::vector<double> strikes;
        for (double mny : c.moneyness) {
            const double k = std::round(spot0 * (1.0 + mny) / tick) * tick;
            if (k > 0.0 && std::find(strikes.begin(), strikes.end(), k) == strikes.end())
                strikes.push_back(k);
        }
        std::sort(strikes.begin(), strikes.end());
        for (Timestamp t = quote_grid(listed); t < expiry && t <= last; t += c.cadence) {
            const double spot = path.at(t);
            if (std::isnan(spot)) continue;
            const double tau = static_cast<double>((expiry - t).count()) / kSecondsPerYear;
            for (double k : strikes) {
                OptionQuote q;
                q.quote_time = t;
                q.strike = k;
                q.expiry = expiry;
                q.index_price = spot;
                q.implied_vol = c.iv_base + c.iv_smile * std::abs(std::log(k / spot));
                q.option_price = bs_call(spot, k, tau, q.implied_vol) / spot;
                q.delta = bs_delta(spot, k, tau, q.implied_vol);
                quotes.push_back(q);
            }
        }
    }
    std::sort(quotes.begin(), quotes.end(), [](const OptionQuote& a, const OptionQuote& b) {
        return std::tie(a.quote_time, a.expiry, a.strike) < std::tie(b.quote_time, b.expiry, b.strike);
    });
    return quotes;
}

// ---------------------------------------------------------------------------
// Reference pattern and scenario presets

/// Published heatmap cell for one (pair, target, horizon): the single- and
/// double-model coefficients with their significance.
struct ReferenceCell {
    Pair pair;
    Target target = Target::Return;
    int horizon_hours = 1;
    double single_beta1 = 0.0;
    Stars single_stars = Stars::None;
    double double_beta1 = 0.0;
    Stars double_stars = Stars::None;

    /// Coefficient to plant: the double-model value when starred, else the
    /// single-model value when starred, else zero.
    double planted() const {
        if (double_stars != Stars::None) return double_beta1;
        if (single_stars != Stars::None) return single_beta1;
        return 0.0;
    }
    Stars stars(Model m) const { return m == Model::Single ? single_stars : double_stars; }
    double beta1(Model m) const { return m == Model::Single ? single_beta1 : double_beta1; }
};

/// The 40 intraday reference cells (4 pairs x 2 targets x 5 horizons).
inline const std::vector<ReferenceCell>& reference_pattern() {
    using S = Stars;
    constexpr auto N = S::None, A = S::One, B = S::Two, C = S::Three;
    const Pair ue{Asset::USDT, Asset::ETH}, ee{Asset::ETH, Asset::ETH};
    const Pair ub{Asset::USDT, Asset::BTC}, bb{Asset::BTC, Asset::BTC};
    const auto R = Target::Return, V = Target::Volatility;
    static const std::vector<ReferenceCell> cells{
        {ue, R, 1, 1.1e-5, C, 1.1e-5, C},     {ue, V, 1, -2.0e-4, A, 5.9e-5, N},
        {ee, R, 1, -0.017, C, -0.017, C},     {ee, V, 1, -0.80, C, -0.17, N},
        {ue, R, 2, 7.5e-6, C, 8.4e-6, C},     {ue, V, 2, -1.9e-4, N, -3.5e-5, N},
        {ee, R, 2, -0.0078, B, -0.0083, B},   {ee, V, 2, -0.88, C, -0.37, C},
        {ue, R, 3, 1.5e-6, N, 2.5e-6, N},     {ue, V, 3, -1.5e-4, N, -1.9e-5, N},
        {ee, R, 3, -0.0088, A, -0.010, B},    {ee, V, 3, -0.89, C, -0.35, C},
        {ue, R, 4, -8.3e-8, N, 7.1e-7, N},    {ue, V, 4, -1.2e-4, N, 3.3e-5, N},
        {ee, R, 4, -0.013, B, -0.014, B},     {ee, V, 4, -0.87, C, -0.22, B},
        {ue, R, 6, -5.4e-7, N, 1.3e-7, N},    {ue, V, 6, -2.9e-4, C, -1.9e-4, C},
        {ee, R, 6, -0.026, C, -0.027, C},     {ee, V, 6, -0.87, C, -0.30, B},

        {ub, R, 1, 6.3e-6, C, 6.5e-6, C},     {ub, V, 1, -1.1e-4, N, 1.8e-5, N},
        {bb, R, 1, 0.0053, N, 0.0092, N},     {bb, V, 1, -17.0, C, -0.99, N},
        {ub, R, 2, 4.3e-6, A, 4.8e-6, C},     {ub, V, 2, -1.1e-4, N, -4.7e-5, N},
        {bb, R, 2, 0.014, N, 0.018, N},       {bb, V, 2, -13.0, C, 0.17, N},
        {ub, R, 3, -7.6e-7, N, -2.1e-8, N},   {ub, V, 3, -5.1e-5, N, 7.0e-6, N},
        {bb, R, 3, 0.024, N, 0.028, N},       {bb, V, 3, -13.0, C, -2.8, C},
        {ub, R, 4, 0.0, N, -1.7e-6, N},       {ub, V, 4, -4.6e-5, N, 1.8e-5, N},
        {bb, R, 4, 0.095, B, 0.099, B},       {bb, V, 4, -11.0, C, -0.20, N},
        {ub, R, 6, -2.0e-6, N, -1.7e-6, N},   {ub, V, 6, -2.3e-4, C, -1.9e-4, C},
        {bb, R, 6, 0.073, N, 0.076, N},       {bb, V, 6, -17.0, C, -4.2, C},
    };
    return cells;
}

/// Hourly net-inflow scales (US$ millions) used by the presets.
inline double preset_flow_sd(Asset a) {
    switch (a) {
    case Asset::ETH: return 6.25e-4;
    case Asset::BTC: return 2.9e-5;
    case Asset::USDT: return 2.5;
    }
    return 1.0;
}

/// Three flow series driving ETH and BTC, with the reference pattern's
/// coefficients for one horizon planted at that horizon's bucket width.
inline SynthConfig reference_scenario(std::uint64_t seed, int horizon_hours,
                                      std::size_t hours_total = 40000) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.hours = hours_total - hours_total % static_cast<std::size_t>(horizon_hours);
    cfg.plant_horizon_hours = static_cast<std::size_t>(horizon_hours);
    for (Asset a : {Asset::USDT, Asset::ETH, Asset::BTC}) cfg.flows.push_back({a, preset_flow_sd(a)});
    for (Asset a : {Asset::ETH, Asset::BTC}) {
        PricedSpec p;
        p.asset = a;
        p.initial_price = a == Asset::ETH ? 2000.0 : 40000.0;
        p.ret = {0.0, -0.03, 5e-5, {}};
        p.vol = {0.003, 0.5, 2e-4, {}};
        for (const auto& c : reference_pattern()) {
            if (c.horizon_hours != horizon_hours || c.pair.response != a) continue;
            Relation& rel = c.target == Target::Return ? p.ret : p.vol;
            rel.loadings.push_back({c.pair.predictor, c.planted()});
        }
        cfg.priced.push_back(p);
    }
    return cfg;
}

/// No planted relation anywhere: i.i.d. flows, returns and volatilities.
inline SynthConfig white_noise_scenario(std::uint64_t seed, std::size_t hours_total = 2400) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.hours = hours_total;
    for (Asset a : {Asset::USDT, Asset::ETH, Asset::BTC}) cfg.flows.push_back({a, preset_flow_sd(a)});
    for (Asset a : {Asset::ETH, Asset::BTC}) {
        PricedSpec p;
        p.asset = a;
        p.initial_price = a == Asset::ETH ? 2000.0 : 40000.0;
        p.ret = {0.0, 0.0, 0.005, {}};
        p.vol = {0.005, 0.0, 5e-4, {}};
        cfg.priced.push_back(p);
    }
    return cfg;
}

/// Large ETH net inflows are followed by a quiet hour and large outflows by
/// a turbulent one, against a flat implied volatility. A delta-hedged short
/// call earns roughly theta minus realized gamma, so it pays after inflows.
inline SynthConfig profitability_scenario(std::uint64_t seed, std::size_t hours_total = 8760) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.hours = hours_total;
    cfg.flows.push_back({Asset::ETH, 1.0});
    PricedSpec p;
    p.asset = Asset::ETH;
    p.initial_price = 2000.0;
    p.ret = {0.0, 0.0, 0.0, {}};
    p.vol = {0.0065, 0.0, 2e-4, {{Asset::ETH, -0.0025}}};
    p.vol_coupling = 1.0;
    cfg.priced.push_back(p);
    cfg.chain.iv_base = 2.5;
    cfg.chain.moneyness = {-0.01, 0.0, 0.01, 0.02};
    return cfg;
}

}  // namespace onflow::synth

#endif  // ONFLOW_SYNTH_HPP
