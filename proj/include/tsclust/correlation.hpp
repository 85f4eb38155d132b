#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "tsclust/error.hpp"
#include "tsclust/series.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

enum class CorrelationKind { acf, pacf, ccf };

// Serial-correlation values at lags 1..max_lag together with the two-sided
// significance half-width z/sqrt(T). Lag 0 is definitional and not stored.
struct CorrelationSequence {
    Vector values;
    double significance_band = 0.0;
    CorrelationKind kind = CorrelationKind::acf;

    Index max_lag() const { return values.size(); }
    double operator[](Index lag) const { return values[lag - 1]; }

    // Entries with |value| < significance_band zeroed.
    Vector masked() const;
};

// Two-sided normal critical value for a significance level in (0,1).
// The default 5% level uses the conventional 1.96.
double critical_z(double level);

namespace detail {

template <typename Derived>
double mean_of(const Eigen::MatrixBase<Derived>& y) {
    return y.derived().template cast<double>().mean();
}

// Biased (divide-by-T) autocovariance at lag h of a centered series.
template <typename Derived>
double autocovariance(const Eigen::MatrixBase<Derived>& centered, Index h) {
    const Index n = centered.size();
    if (h >= n) return 0.0;
    return centered.tail(n - h).dot(centered.head(n - h)) / static_cast<double>(n);
}

}  // namespace detail

// Sample autocorrelations at lags 1..max_lag with the biased covariance
// estimator. Throws DegenerateSeries on zero variance.
template <typename Derived>
Vector sample_acf(const Eigen::MatrixBase<Derived>& y, Index max_lag) {
    const Index n = y.size();
    if (max_lag < 1 || max_lag >= n)
        throw InvalidArgument("acf: max_lag must satisfy 1 <= max_lag < T (max_lag=" +
                              std::to_string(max_lag) + ", T=" + std::to_string(n) + ")");
    Vector centered = y.derived().template cast<double>();
    centered.array() -= centered.mean();
    const double c0 = centered.squaredNorm() / static_cast<double>(n);
    if (c0 <= 0.0) throw DegenerateSeries("acf: series has zero variance");
    Vector out(max_lag);
    for (Index h = 1; h <= max_lag; ++h) out[h - 1] = detail::autocovariance(centered, h) / c0;
    return out;
}

// Partial autocorrelations at lags 1..max_lag via the Durbin-Levinson
// recursion on the sample ACF. pacf(1) == acf(1) exactly.
Vector pacf_from_acf(const Vector& acf_values);

template <typename Derived>
Vector sample_pacf(const Eigen::MatrixBase<Derived>& y, Index max_lag) {
    return pacf_from_acf(sample_acf(y, max_lag));
}

// One-sided sample cross-correlation of x_t with y_{t+h}, h = 1..max_lag,
// biased divide-by-T convention with global means.
template <typename DerivedX, typename DerivedY>
Vector sample_ccf(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
                  Index max_lag) {
    const Index n = x.size();
    if (y.size() != n) throw InvalidArgument("ccf: inputs must have equal length");
    if (max_lag < 1 || max_lag >= n)
        throw InvalidArgument("ccf: max_lag must satisfy 1 <= max_lag < T");
    Vector xc = x.derived().template cast<double>();
    Vector yc = y.derived().template cast<double>();
    xc.array() -= xc.mean();
    yc.array() -= yc.mean();
    const double cx0 = xc.squaredNorm() / static_cast<double>(n);
    const double cy0 = yc.squaredNorm() / static_cast<double>(n);
    if (cx0 <= 0.0 || cy0 <= 0.0) throw DegenerateSeries("ccf: input has zero variance");
    const double scale = std::sqrt(cx0 * cy0) * static_cast<double>(n);
    Vector out(max_lag);
    for (Index h = 1; h <= max_lag; ++h)
        out[h - 1] = xc.head(n - h).dot(yc.tail(n - h)) / scale;
    return out;
}

CorrelationSequence acf(const TimeSeries& series, Index max_lag, double z = 1.96);
CorrelationSequence pacf(const TimeSeries& series, Index max_lag, double z = 1.96);
CorrelationSequence ccf(const TimeSeries& x, const TimeSeries& y, Index max_lag, double z = 1.96);

}  // namespace tsclust
