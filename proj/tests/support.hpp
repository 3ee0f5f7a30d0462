#ifndef ONFLOW_TESTS_SUPPORT_HPP
#define ONFLOW_TESTS_SUPPORT_HPP

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "onflow/core.hpp"
#include "onflow/ingest.hpp"

namespace testing_support {

namespace fs = std::filesystem;

/// Fresh scratch directory under the build tree, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() / ("onflow_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline onflow::Bar bar(onflow::Timestamp t, double close, onflow::Duration f, double open = -1.0) {
    if (open < 0) open = close;
    return {t, open, std::max(open, close), std::min(open, close), close, f};
}

/// Bars at frequency f from a list of closes, the first bar opening at t0.
inline std::vector<onflow::Bar> bars_from_closes(onflow::Timestamp t0, onflow::Duration f,
                                                 const std::vector<double>& closes) {
    std::vector<onflow::Bar> out;
    double prev = closes.empty() ? 1.0 : closes.front();
    for (std::size_t i = 0; i < closes.size(); ++i) {
        out.push_back(bar(t0 + f * static_cast<long long>(i), closes[i], f, prev));
        prev = closes[i];
    }
    return out;
}

inline std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double p0, double sd) {
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> out;
    double p = p0;
    for (std::size_t i = 0; i < n; ++i) {
        p *= std::exp(z(rng));
        out.push_back(p);
    }
    return out;
}

inline double rel_err(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace testing_support

#endif  // ONFLOW_TESTS_SUPPORT_HPP
