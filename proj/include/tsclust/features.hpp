#pragma once

#include <string>
#include <vector>

#include "tsclust/config.hpp"
#include "tsclust/series.hpp"
#include "tsclust/setar.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

// Fixed-dimension signature of one series: masked SETAR coefficients (zero
// padded per regime to p_max), masked standardized-residual ACF/PACF and
// residual-vs-squared-residual CCF, series ACF/PACF, and masked AR
// coefficients padded to p_ar_max. Dimension = k*p_max + 5l + p_ar_max.
struct FeatureVector {
    Vector setar_coeffs;
    Vector resid_acf;
    Vector resid_pacf;
    Vector resid_ccf_sq;
    Vector series_acf;
    Vector series_pacf;
    Vector ar_coeffs;
    std::string label;

    Index dimension() const;
    Vector stacked() const;
};

// Feature vectors stacked as columns, optionally row-standardized so the
// unbounded coefficient rows cannot swamp the correlation rows.
struct FeatureMatrix {
    Matrix columns;          // dimension x n, after scaling
    Vector row_mean;
    Vector row_scale;        // 1 where the raw row was constant
    std::vector<std::string> labels;

    Index dimension() const { return columns.rows(); }
    Index count() const { return columns.cols(); }
};

// In-place row standardization; constant rows are centered to zero and left
// unscaled. Returns (mean, scale) per row.
void standardize_rows(Matrix& m, Vector& mean, Vector& scale);

// Full per-series extraction: stationarize, SETAR fit with significance
// masking, residual correlation statistics, AR fit with order selection,
// series correlation statistics. Wraps any estimation error into a
// FeatureExtractionError carrying the series label.
FeatureVector extract_features(const TimeSeries& series, const PipelineConfig& config);

FeatureMatrix assemble_matrix(const std::vector<FeatureVector>& vectors, bool scale_rows = true);

}  // namespace tsclust
