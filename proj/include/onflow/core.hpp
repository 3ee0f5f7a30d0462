#ifndef ONFLOW_CORE_HPP
#define ONFLOW_CORE_HPP

// Shared vocabulary: assets, UTC instants, the error type, and the
// locale-independent number/timestamp text forms used by every file format.

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace onflow {

using Duration = std::chrono::seconds;
using Timestamp = std::chrono::sys_seconds;

constexpr Duration kHour{3600};
constexpr Duration kMinute{60};

constexpr Duration hours(long long n) { return Duration{n * 3600}; }
constexpr Duration minutes(long long n) { return Duration{n * 60}; }

enum class Asset { BTC, ETH, USDT };

inline constexpr std::array<Asset, 3> kAllAssets{Asset::BTC, Asset::ETH, Asset::USDT};

constexpr std::string_view to_string(Asset a) {
    switch (a) {
    case Asset::BTC: return "BTC";
    case Asset::ETH: return "ETH";
    case Asset::USDT: return "USDT";
    }
    return "?";
}

enum class ErrorCode {
    // ingest
    MalformedRow,
    NegativeFlow,
    DuplicateTimestamp,
    NonPositivePrice,
    FrequencyMismatch,
    ExpiredAtQuote,
    DeltaOutOfRange,
    // series
    EmptyInput,
    InsufficientSubBars,
    HorizonMismatch,
    EmptyAlignment,
    // regress
    RankDeficient,
    TooFewObservations,
    // events
    EmptyYear,
    InsufficientCoverage,
    // options
    InstrumentMismatch,
    ZeroEntryPrice,
    NoMatchingQuotes,
    // synth / cli
    InvalidConfig,
    InvalidArgument,
    Io,
};

constexpr std::string_view to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NegativeFlow: return "NegativeFlow";
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::FrequencyMismatch: return "FrequencyMismatch";
    case ErrorCode::ExpiredAtQuote: return "ExpiredAtQuote";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InsufficientSubBars: return "InsufficientSubBars";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::EmptyAlignment: return "EmptyAlignment";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::EmptyYear: return "EmptyYear";
    case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorCode::InstrumentMismatch: return "InstrumentMismatch";
    case ErrorCode::ZeroEntryPrice: return "ZeroEntryPrice";
    case ErrorCode::NoMatchingQuotes: return "NoMatchingQuotes";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Coarse grouping used for process exit codes.
enum class ErrorCategory { Io = 1, Validation = 2, Estimation = 3 };

constexpr ErrorCategory category(ErrorCode c) {
    switch (c) {
    case ErrorCode::Io: return ErrorCategory::Io;
    case ErrorCode::RankDeficient:
    case ErrorCode::TooFewObservations:
    case ErrorCode::EmptyAlignment:
    case ErrorCode::InsufficientSubBars:
    case ErrorCode::NoMatchingQuotes:
    case ErrorCode::EmptyYear:
    case ErrorCode::InsufficientCoverage: return ErrorCategory::Estimation;
    default: return ErrorCategory::Validation;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<std::size_t> line = std::nullopt)
        : std::runtime_error(compose(code, what, line)), code_(code), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    static std::string compose(ErrorCode code, const std::string& what,
                               std::optional<std::size_t> line) {
        std::string s{to_string(code)};
        if (line) s += " (line " + std::to_string(*line) + ")";
        if (!what.empty()) s += ": " + what;
        return s;
    }

    ErrorCode code_;
    std::optional<std::size_t> line_;
};

inline std::optional<Asset> parse_asset(std::string_view s) {
    for (Asset a : kAllAssets)
        if (to_string(a) == s) return a;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Numbers. Output always carries 17 significant digits so text round-trips
// to the identical double.

inline std::string format_number(double v) {
    if (v == 0.0) return std::signbit(v) ? "-0" : "0";
    std::array<char, 40> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

inline std::optional<double> parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// ---------------------------------------------------------------------------
// Timestamps: ISO-8601 UTC, "YYYY-MM-DDTHH:MM[:SS]Z". Written with seconds.

namespace detail {
inline bool digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}
}  // namespace detail

inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!detail::digits(s, 0, 4, y) || s.size() < 17 || s[4] != '-' ||
        !detail::digits(s, 5, 2, mo) || s[7] != '-' || !detail::digits(s, 8, 2, d) ||
        s[10] != 'T' || !detail::digits(s, 11, 2, h) || s[13] != ':' ||
        !detail::digits(s, 14, 2, mi))
        return std::nullopt;
    std::size_t pos = 16;
    if (s[pos] == ':') {
        if (!detail::digits(s, pos + 1, 2, sec)) return std::nullopt;
        pos += 3;
    }
    if (pos + 1 != s.size() || s[pos] != 'Z') return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    return sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + seconds{sec};
}

inline std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto day_start = floor<days>(t);
    year_month_day ymd{day_start};
    hh_mm_ss hms{t - day_start};
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf.data();
}

inline int utc_year(Timestamp t) {
    using namespace std::chrono;
    return static_cast<int>(year_month_day{floor<days>(t)}.year());
}

inline Timestamp make_time(int y, unsigned mo, unsigned d, int h = 0, int mi = 0) {
    using namespace std::chrono;
    return sys_days{year{y} / mo / d} + std::chrono::hours{h} + std::chrono::minutes{mi};
}

/// Horizon buckets are anchored on Monday 1970-01-05T00:00Z so every
/// divisor of a week (1h..6h, 24h, 168h) starts on a UTC day boundary.
inline constexpr Timestamp kBucketAnchor{Duration{4 * 86400}};

inline Timestamp bucket_start(Timestamp t, Duration width) {
    auto offset = (t - kBucketAnchor).count();
    auto w = width.count();
    auto q = offset / w;
    if (offset % w < 0) --q;
    return kBucketAnchor + Duration{q * w};
}

inline std::string horizon_label(Duration h) {
    return std::to_string(h.count() / 3600) + "h";
}

}  // namespace onflow

#endif  // ONFLOW_CORE_HPP
