#ifndef ONFLOW_OLS_HPP
#define ONFLOW_OLS_HPP

// Ordinary least squares with an intercept, classical (homoskedastic) or
// Newey-West standard errors, and the significance-star classification used
// in the heatmaps.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "series.hpp"
#include "student_t.hpp"

namespace onflow {

enum class StdErrors { Classical, NeweyWest };

struct OlsOptions {
    StdErrors std_errors = StdErrors::Classical;
    // Newey-West lag truncation; negative selects floor(4 (n/100)^(2/9)).
    int hac_lags = -1;
};

struct OlsFit {
    std::vector<double> beta;  // intercept first
    std::vector<double> se;
    std::vector<double> t_stat;
    double r2 = 0.0;
    double r2_adj = 0.0;
    double sse = 0.0;
    std::size_t n = 0;

    std::size_t regressors() const { return beta.empty() ? 0 : beta.size() - 1; }
    std::size_t dof() const { return n - beta.size(); }
};

inline int newey_west_default_lags(std::size_t n) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

/// Fits y = b0 + X b. `regressors` holds the k non-constant columns.
inline OlsFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& regressors,
                      const OlsOptions& opt = {}) {
    const auto n = static_cast<std::size_t>(y.size());
    const auto k = static_cast<std::size_t>(regressors.cols());
    const auto p = k + 1;
    if (static_cast<std::size_t>(regressors.rows()) != n)
        throw Error(ErrorCode::InvalidArgument, "response and regressors differ in length");
    if (n < k + 2)
        throw Error(ErrorCode::TooFewObservations,
                    "need at least " + std::to_string(k + 2) + " observations, got " +
                        std::to_string(n));

    Eigen::MatrixXd X(n, p);
    X.col(0).setOnes();
    X.rightCols(k) = regressors;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-12);
    if (static_cast<std::size_t>(qr.rank()) < p)
        throw Error(ErrorCode::RankDeficient, "design matrix does not have full column rank");

    const Eigen::VectorXd b = qr.solve(y);
    const Eigen::VectorXd resid = y - X * b;
    const double sse = resid.squaredNorm();

    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd R =
        qr.matrixQR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * (Rinv * Rinv.transpose()) * perm.transpose();

    Eigen::MatrixXd cov;
    const double dof = static_cast<double>(n - p);
    if (opt.std_errors == StdErrors::Classical) {
        cov = xtx_inv * (sse / dof);
    } else {
        const int lags = opt.hac_lags < 0 ? newey_west_default_lags(n) : opt.hac_lags;
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
        for (std::size_t t = 0; t < n; ++t) {
            const Eigen::VectorXd xt = X.row(t).transpose();
            meat.noalias() += resid(t) * resid(t) * xt * xt.transpose();
        }
        for (int l = 1; l <= lags && static_cast<std::size_t>(l) < n; ++l) {
            const double w = 1.0 - static_cast<double>(l) / (lags + 1.0);
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
            for (std::size_t t = static_cast<std::size_t>(l); t < n; ++t)
                acc.noalias() += resid(t) * resid(t - l) * X.row(t).transpose() * X.row(t - l);
            meat += w * (acc + acc.transpose());
        }
        cov = xtx_inv * meat * xtx_inv;
    }

    OlsFit fit;
    fit.n = n;
    fit.sse = sse;
    fit.beta.assign(b.data(), b.data() + p);
    fit.se.resize(p);
    fit.t_stat.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        fit.se[i] = std::sqrt(std::max(cov(i, i), 0.0));
        if (fit.se[i] > 0.0) fit.t_stat[i] = fit.beta[i] / fit.se[i];
        else fit.t_stat[i] = fit.beta[i] == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), fit.beta[i]);
    }
    const double mean = y.mean();
    const double sst = (y.array() - mean).square().sum();
    fit.r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    fit.r2_adj = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / dof;
    return fit;
}

namespace detail {
inline void design(const AlignedSample& s, std::size_t from, std::size_t to, Eigen::VectorXd& y,
                   Eigen::MatrixXd& x) {
    const auto n = static_cast<Eigen::Index>(to - from);
    y.resize(n);
    x.resize(n, s.has_control ? 2 : 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = s.rows[from + static_cast<std::size_t>(i)];
        y(i) = r.response;
        x(i, 0) = r.predictor;
        if (s.has_control) x(i, 1) = *r.control;
    }
}
}  // namespace detail

/// Regresses the aligned response on the net inflow (and control, if present).
inline OlsFit ols_fit(const AlignedSample& sample, const OlsOptions& opt = {}) {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    detail::design(sample, 0, sample.n(), y, x);
    return ols_fit(y, x, opt);
}

/// Fitted value for one observation; net inflow in US$ millions.
inline double predict(const OlsFit& fit, double net_inflow_musd,
                      std::optional<double> control = std::nullopt) {
    double v = fit.beta.at(0) + fit.beta.at(1) * net_inflow_musd;
    if (fit.beta.size() > 2) v += fit.beta[2] * control.value();
    return v;
}

/// Marginal effect of a raw-USD net inflow under coefficient beta1 (per US$1M).
inline double predicted_effect(double beta1, double net_inflow_usd) {
    return beta1 * (net_inflow_usd / kUsdPerMillion);
}

struct SplitEvaluation {
    OlsFit in_sample;
    double out_of_sample_r2 = 0.0;
    std::size_t train_n = 0;
    std::size_t test_n = 0;
};

/// Chronological split: fit on the first split_fraction of rows, score the rest.
inline SplitEvaluation split_evaluate(const AlignedSample& sample, double split_fraction = 0.7,
                                      const OlsOptions& opt = {}) {
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw Error(ErrorCode::InvalidArgument, "split fraction must lie in (0, 1)");
    const std::size_t n = sample.n();
    const std::size_t k = sample.has_control ? 2 : 1;
    const auto train_n =
        static_cast<std::size_t>(std::floor(split_fraction * static_cast<double>(n) + 1e-9));
    const std::size_t test_n = n - train_n;
    if (train_n < k + 2 || test_n < k + 2)
        throw Error(ErrorCode::TooFewObservations, "split leaves a segment too small to fit");

    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    detail::design(sample, 0, train_n, y, x);
    SplitEvaluation out;
    out.in_sample = ols_fit(y, x, opt);
    out.train_n = train_n;
    out.test_n = test_n;

    detail::design(sample, train_n, n, y, x);
    double sse = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double pred = out.in_sample.beta[0];
        for (Eigen::Index j = 0; j < x.cols(); ++j) pred += out.in_sample.beta[j + 1] * x(i, j);
        sse += (y(i) - pred) * (y(i) - pred);
    }
    const double mean = y.mean();
    const double sst = (y.array() - mean).square().sum();
    if (sst > 0.0) out.out_of_sample_r2 = 1.0 - sse / sst;
    else out.out_of_sample_r2 = sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    return out;
}

// ---------------------------------------------------------------------------
// Significance

enum class Stars { None, One, Two, Three };

constexpr std::string_view to_string(Stars s) {
    switch (s) {
    case Stars::None: return "none";
    case Stars::One: return "*";
    case Stars::Two: return "**";
    case Stars::Three: return "***";
    }
    return "none";
}

constexpr std::string_view star_suffix(Stars s) { return s == Stars::None ? "" : to_string(s); }

/// Two-sided Student-t test with n - k - 1 degrees of freedom. A level is
/// awarded only when p is strictly below it.
inline Stars significance(double t_stat, std::size_t n, std::size_t k) {
    if (n < k + 2) throw Error(ErrorCode::TooFewObservations, "no residual degrees of freedom");
    const double p = stats::two_sided_p(t_stat, static_cast<double>(n - k - 1));
    if (p < 0.01) return Stars::Three;
    if (p < 0.05) return Stars::Two;
    if (p < 0.10) return Stars::One;
    return Stars::None;
}

}  // namespace onflow

#endif  // ONFLOW_OLS_HPP
