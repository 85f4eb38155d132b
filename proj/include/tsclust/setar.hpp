#pragma once

#include <cstdint>
#include <vector>

#include "tsclust/ar.hpp"
#include "tsclust/series.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

// Estimation knobs shared by the SETAR fitters and the threshold test.
struct SetarOptions {
    Index p_max = 3;                      // per-regime AR order cap
    Index d_max = 2;                      // delay search bound
    Criterion criterion = Criterion::bic; // per-regime order selection
    Index threads = 1;                    // 0 = hardware concurrency
};

// Minimum observations per regime: max(p_max + 2, ceil(0.1 * n_effective)).
inline constexpr double kMinRegimeFraction = 0.10;

struct SetarRegime {
    double intercept = 0.0;
    Vector coefficients;  // lag coefficients, length p_j
    Vector std_errors;    // intercept first, length p_j + 1
};

// k-regime self-exciting threshold AR model. Regime j (0-based) is active at
// time t when thresholds[j-1] < y_{t-delay} <= thresholds[j], with the
// outermost bounds at -inf / +inf.
struct SetarModel {
    Index k = 1;
    Vector thresholds;                  // strictly increasing, length k - 1
    Index delay = 1;
    std::vector<SetarRegime> regimes;   // size k
    Vector residuals;                   // standardized by sigma, time order
    double rss = 0.0;
    double sigma = 0.0;                 // full-model residual std
    std::vector<Index> regime_occupancy;
    Index effective_start = 0;          // first modeled observation index

    Index regime_of(double threshold_value) const;
    Index effective_size() const { return residuals.size(); }
};

// Exhaustive least-squares fit: thresholds over the empirical quantiles of the
// delayed variable, delay over 1..d_max, per-regime order by criterion within
// each candidate split; overall winner by residual sum of squares with ties
// broken by (smaller delay, smaller total order, lower thresholds).
SetarModel fit_setar_grid(const TimeSeries& series, Index k, const SetarOptions& options = {});

// Sequential threshold selection: accept a split when the information
// criterion improves over the unsplit fit, then recurse into each regime's
// subsample until no split is accepted or k_max regimes are reached.
SetarModel fit_setar_sequential(const TimeSeries& series, Index k_max,
                                const SetarOptions& options = {});

struct ThresholdTestResult {
    double statistic = 0.0;   // sup-F over threshold candidates
    double p_value = 1.0;
    Index bootstrap_reps = 0;
    Index null_regimes = 1;
    Index alt_regimes = 2;
};

// Bootstrap sup-F test of null_k regimes against alt_k = null_k + 1. The AR
// order is fixed at the criterion-selected order of the linear fit; p-values
// come from a fixed-regressor residual bootstrap under the null.
ThresholdTestResult hansen_test(const TimeSeries& series, Index null_k, Index alt_k,
                                Index bootstrap_reps, std::uint64_t seed,
                                const SetarOptions& options = {});

}  // namespace tsclust
