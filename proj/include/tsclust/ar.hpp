#pragma once

#include <string>

#include "tsclust/series.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

enum class Criterion { aic, bic, hqic };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);

// n * log(rss/n) + penalty(n) * n_params
double information_criterion(Criterion c, double rss, Index n, Index n_params);

// OLS autoregression Y_t = intercept + sum_i coefficients[i] * Y_{t-i-1} + e_t.
struct ArModel {
    double intercept = 0.0;
    Vector coefficients;       // lag coefficients, length p
    Vector std_errors;         // intercept first, length p + 1
    Vector residuals;          // length T - p
    double sigma2 = 0.0;       // rss / (n - p - 1)
    struct {
        Criterion name = Criterion::aic;
        double value = 0.0;
    } ic;

    Index order() const { return coefficients.size(); }
};

// Least-squares fit of an AR(p) with intercept on the lag design; standard
// errors from the usual OLS covariance. Throws EstimationFailure when the
// design is singular (e.g. constant series).
ArModel fit_ar(const TimeSeries& series, Index p, Criterion ic_name = Criterion::aic);

// argmin of the criterion over p in {1..p_max}; every candidate is fit on the
// common sample with the first p_max observations dropped.
Index select_ar_order(const TimeSeries& series, Index p_max, Criterion criterion);

// Lag coefficients with entries zeroed where |coef / se| < z(level).
Vector significant_coefficients(const ArModel& model, double level);

namespace detail {

// fit_ar on y[first..T) with lags taken from within y; `first` >= p keeps the
// effective sample aligned across fits that must share it.
ArModel fit_ar_window(const Vector& y, Index p, Index first, Criterion ic_name);

Index select_ar_order_window(const Vector& y, Index p_max, Index first, Criterion criterion);

}  // namespace detail

}  // namespace tsclust
