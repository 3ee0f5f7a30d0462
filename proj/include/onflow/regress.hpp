#ifndef ONFLOW_REGRESS_HPP
#define ONFLOW_REGRESS_HPP

// Predictive-regression grid: for every (predictor -> response pair, target,
// horizon, model) fit
//     y_{t+h} = b0 + b1 * NetInflow_t [+ b2 * y_t] + e
// and summarize b1 as a heatmap cell. Failed cells carry their error code.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "core.hpp"
#include "ingest.hpp"
#include "ols.hpp"
#include "series.hpp"

namespace onflow {

enum class Target { Return, Volatility };
enum class Model { Single, Double };
enum class Sign { Positive, Negative, Insignificant };

constexpr std::string_view to_string(Target t) { return t == Target::Return ? "return" : "volatility"; }
constexpr std::string_view to_string(Model m) { return m == Model::Single ? "single" : "double"; }
constexpr std::string_view to_string(Sign s) {
    switch (s) {
    case Sign::Positive: return "positive";
    case Sign::Negative: return "negative";
    case Sign::Insignificant: return "insignificant";
    }
    return "insignificant";
}

struct Pair {
    Asset predictor;
    Asset response;

    friend auto operator<=>(const Pair&, const Pair&) = default;
};

inline std::string to_string(const Pair& p) {
    return std::string(to_string(p.predictor)) + "->" + std::string(to_string(p.response));
}

inline const std::vector<Pair>& default_pairs() {
    static const std::vector<Pair> pairs{{Asset::USDT, Asset::ETH},
                                         {Asset::ETH, Asset::ETH},
                                         {Asset::USDT, Asset::BTC},
                                         {Asset::BTC, Asset::BTC}};
    return pairs;
}

inline std::vector<Duration> intraday_horizons() {
    return {hours(1), hours(2), hours(3), hours(4), hours(6)};
}

struct HeatmapCell {
    Pair pair;
    Target target = Target::Return;
    Duration horizon{0};
    Model model = Model::Single;
    double beta1 = 0.0;
    Stars stars = Stars::None;
    Sign sign = Sign::Insignificant;
    std::optional<ErrorCode> failure;
    std::optional<OlsFit> fit;

    bool ok() const { return !failure.has_value(); }
};

inline Sign classify(double beta1, Stars stars) {
    if (stars == Stars::None) return Sign::Insignificant;
    if (beta1 > 0) return Sign::Positive;
    if (beta1 < 0) return Sign::Negative;
    return Sign::Insignificant;
}

struct GridSpec {
    std::vector<Duration> horizons = intraday_horizons();
    std::vector<Pair> pairs = default_pairs();
    std::vector<Target> targets{Target::Return, Target::Volatility};
    std::vector<Model> models{Model::Single, Model::Double};
    Duration sub_frequency = kDefaultSubFrequency;
    std::size_t min_observations = 30;
    OlsOptions ols;
};

namespace detail {

template <class T>
using Outcome = std::variant<T, ErrorCode>;

template <class F>
auto capture(F&& f) -> Outcome<decltype(f())> {
    try {
        return f();
    } catch (const Error& e) {
        return e.code();
    }
}

class SeriesCache {
public:
    explicit SeriesCache(const MarketData& data, Duration sub_frequency)
        : data_(data), sub_frequency_(sub_frequency) {}

    const Outcome<NetInflowSeries>& inflows(Asset a, Duration h) {
        auto key = std::make_tuple(a, h);
        auto it = inflows_.find(key);
        if (it == inflows_.end()) {
            auto flows = flows_of(data_.flows, a);
            it = inflows_.emplace(key, capture([&] { return net_inflows(flows, h); })).first;
        }
        return it->second;
    }

    const Outcome<ReturnSeries>& rets(Asset a, Duration h) {
        auto key = std::make_tuple(a, h);
        auto it = returns_.find(key);
        if (it == returns_.end()) {
            it = returns_.emplace(key, capture([&] {
                         auto s = returns(bars(a), h);
                         s.asset = a;
                         return s;
                     })).first;
        }
        return it->second;
    }

    const Outcome<VolSeries>& vols(Asset a, Duration h) {
        auto key = std::make_tuple(a, h);
        auto it = vols_.find(key);
        if (it == vols_.end()) {
            it = vols_.emplace(key, capture([&] {
                         auto s = realized_vol(bars(a), h, sub_frequency_);
                         s.asset = a;
                         return s;
                     })).first;
        }
        return it->second;
    }

private:
    const std::vector<Bar>& bars(Asset a) const {
        auto it = data_.bars.find(a);
        if (it == data_.bars.end())
            throw Error(ErrorCode::EmptyInput, "no bars for " + std::string(to_string(a)));
        return it->second;
    }

    const MarketData& data_;
    Duration sub_frequency_;
    std::map<std::tuple<Asset, Duration>, Outcome<NetInflowSeries>> inflows_;
    std::map<std::tuple<Asset, Duration>, Outcome<ReturnSeries>> returns_;
    std::map<std::tuple<Asset, Duration>, Outcome<VolSeries>> vols_;
};

template <class Tag>
void fill_cell(HeatmapCell& cell, const Outcome<NetInflowSeries>& pred,
               const Outcome<Series<Tag>>& resp, const GridSpec& spec) {
    if (auto* e = std::get_if<ErrorCode>(&pred)) {
        cell.failure = *e;
        return;
    }
    if (auto* e = std::get_if<ErrorCode>(&resp)) {
        cell.failure = *e;
        return;
    }
    const auto& p = std::get<NetInflowSeries>(pred);
    const auto& r = std::get<Series<Tag>>(resp);
    try {
        const Series<Tag>* control = cell.model == Model::Double ? &r : nullptr;
        auto sample = align<Tag, Tag>(p, r, control, cell.horizon);
        const std::size_t k = sample.has_control ? 2 : 1;
        if (sample.n() < spec.min_observations)
            throw Error(ErrorCode::TooFewObservations,
                        std::to_string(sample.n()) + " aligned observations");
        auto fit = ols_fit(sample, spec.ols);
        cell.beta1 = fit.beta[1];
        cell.stars = significance(fit.t_stat[1], fit.n, k);
        cell.sign = classify(cell.beta1, cell.stars);
        cell.fit = std::move(fit);
    } catch (const Error& e) {
        cell.failure = e.code();
    }
}

}  // namespace detail

/// One cell per (horizon, model, pair, target), in that nesting order.
inline std::vector<HeatmapCell> run_grid(const MarketData& data, const GridSpec& spec = {}) {
    detail::SeriesCache cache(data, spec.sub_frequency);
    std::vector<HeatmapCell> cells;
    cells.reserve(spec.horizons.size() * spec.models.size() * spec.pairs.size() *
                  spec.targets.size());
    for (Duration h : spec.horizons) {
        for (Model m : spec.models) {
            for (const Pair& pair : spec.pairs) {
                for (Target target : spec.targets) {
                    HeatmapCell cell;
                    cell.pair = pair;
                    cell.target = target;
                    cell.horizon = h;
                    cell.model = m;
                    try {
                        const auto& pred = cache.inflows(pair.predictor, h);
                        if (target == Target::Return)
                            detail::fill_cell(cell, pred, cache.rets(pair.response, h), spec);
                        else
                            detail::fill_cell(cell, pred, cache.vols(pair.response, h), spec);
                    } catch (const Error& e) {
                        cell.failure = e.code();
                    }
                    cells.push_back(std::move(cell));
                }
            }
        }
    }
    return cells;
}

/// Daily and weekly volatility grid.
inline std::vector<HeatmapCell> daily_weekly_grid(const MarketData& data, GridSpec spec = {}) {
    spec.horizons = {hours(24), hours(168)};
    spec.targets = {Target::Volatility};
    return run_grid(data, spec);
}

// ---------------------------------------------------------------------------
// Serialization

/// JSON array, one cell object per line. Numbers carry 17 significant digits;
/// a failed cell has beta1 null (its error code appears in the TSV).
inline std::string grid_to_json(const std::vector<HeatmapCell>& cells) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        out += "  {\"pair\": [\"";
        out += to_string(c.pair.predictor);
        out += "\", \"";
        out += to_string(c.pair.response);
        out += "\"], \"target\": \"";
        out += to_string(c.target);
        out += "\", \"horizon\": " + std::to_string(c.horizon.count() / 3600);
        out += ", \"model\": \"";
        out += to_string(c.model);
        out += "\", \"beta1\": ";
        out += c.ok() ? format_number(c.beta1) : "null";
        out += ", \"stars\": \"";
        out += to_string(c.stars);
        out += "\", \"sign\": \"";
        out += to_string(c.sign);
        out += "\"}";
        out += i + 1 < cells.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

inline std::string cell_text(const HeatmapCell& c) {
    if (!c.ok()) return std::string(to_string(*c.failure));
    return format_number(c.beta1) + std::string(star_suffix(c.stars));
}

/// Tab-separated heatmap: rows = horizon x model, columns = pair x target.
inline std::string grid_to_tsv(const std::vector<HeatmapCell>& cells) {
    std::vector<Duration> horizons;
    std::vector<Model> models;
    std::vector<std::pair<Pair, Target>> columns;
    auto push_unique = [](auto& v, const auto& x) {
        if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    };
    for (const auto& c : cells) {
        push_unique(horizons, c.horizon);
        push_unique(models, c.model);
        push_unique(columns, std::make_pair(c.pair, c.target));
    }
    std::string out = "horizon\tmodel";
    for (const auto& [pair, target] : columns)
        out += "\t" + to_string(pair) + " " + std::string(to_string(target));
    out += '\n';
    for (Duration h : horizons) {
        for (Model m : models) {
            out += horizon_label(h) + "\t" + std::string(to_string(m));
            for (const auto& [pair, target] : columns) {
                out += '\t';
                for (const auto& c : cells)
                    if (c.horizon == h && c.model == m && c.pair == pair && c.target == target)
                        out += cell_text(c);
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace onflow

#endif  // ONFLOW_REGRESS_HPP
