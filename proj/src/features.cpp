#include "tsclust/features.hpp"

#include <cmath>

#include "tsclust/correlation.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

Index FeatureVector::dimension() const {
    return setar_coeffs.size() + resid_acf.size() + resid_pacf.size() + resid_ccf_sq.size() +
           series_acf.size() + series_pacf.size() + ar_coeffs.size();
}

Vector FeatureVector::stacked() const {
    Vector out(dimension());
    Index at = 0;
    for (const Vector* block : {&setar_coeffs, &resid_acf, &resid_pacf, &resid_ccf_sq,
                                &series_acf, &series_pacf, &ar_coeffs}) {
        out.segment(at, block->size()) = *block;
        at += block->size();
    }
    return out;
}

namespace {

// Significance-masked regime coefficients, zero-padded to p_max per regime.
Vector masked_setar_block(const SetarModel& model, Index p_max, double level) {
    const double z = critical_z(level);
    Vector block = Vector::Zero(model.k * p_max);
    for (Index j = 0; j < model.k; ++j) {
        const SetarRegime& regime = model.regimes[j];
        for (Index i = 0; i < regime.coefficients.size(); ++i) {
            const double se = regime.std_errors[i + 1];
            const double coef = regime.coefficients[i];
            const bool keep = se > 0.0 ? std::abs(coef) / se >= z : coef != 0.0;
            if (keep) block[j * p_max + i] = coef;
        }
    }
    return block;
}

Vector padded(const Vector& v, Index size) {
    Vector out = Vector::Zero(size);
    out.head(v.size()) = v;
    return out;
}

}  // namespace

FeatureVector extract_features(const TimeSeries& series, const PipelineConfig& config) {
    config.validate();
    try {
        const TimeSeries y = stationarize(series, config.stationarize_mode);
        if (y.length() < config.min_series_length())
            throw InvalidArgument("series too short after stationarizing (" +
                                  std::to_string(y.length()) + " < " +
                                  std::to_string(config.min_series_length()) + ")");
        const double z = critical_z(config.significance_level);

        FeatureVector f;
        f.label = series.label();

        // Non-linear block: SETAR coefficients and residual correlations.
        const SetarModel setar = fit_setar_grid(y, config.k, config.setar_options());
        f.setar_coeffs = masked_setar_block(setar, config.p_max, config.significance_level);

        const Vector& res = setar.residuals;  // standardized, single scale
        CorrelationSequence racf{sample_acf(res, config.l),
                                 z / std::sqrt(static_cast<double>(res.size())),
                                 CorrelationKind::acf};
        f.resid_acf = racf.masked();
        f.resid_pacf = CorrelationSequence{pacf_from_acf(racf.values), racf.significance_band,
                                           CorrelationKind::pacf}
                           .masked();
        f.resid_ccf_sq =
            CorrelationSequence{sample_ccf(res, res.array().square().matrix().eval(), config.l),
                                racf.significance_band, CorrelationKind::ccf}
                .masked();

        // Linear block: significant AR coefficients and series correlations.
        const Index p_ar = select_ar_order(y, config.p_ar_max, config.criterion);
        const ArModel ar = fit_ar(y, p_ar, config.criterion);
        f.ar_coeffs = padded(significant_coefficients(ar, config.significance_level),
                             config.p_ar_max);
        f.series_acf = sample_acf(y.values(), config.l);
        f.series_pacf = pacf_from_acf(f.series_acf);
        return f;
    } catch (const FeatureExtractionError&) {
        throw;
    } catch (const Error& e) {
        throw FeatureExtractionError(series.label(), e.what());
    }
}

void standardize_rows(Matrix& m, Vector& mean, Vector& scale) {
    const Index rows = m.rows();
    const double n = static_cast<double>(m.cols());
    mean.resize(rows);
    scale.resize(rows);
    for (Index r = 0; r < rows; ++r) {
        const double mu = m.row(r).mean();
        m.row(r).array() -= mu;
        const double sd = std::sqrt(m.row(r).squaredNorm() / n);
        mean[r] = mu;
        if (sd > 1e-12) {
            m.row(r) /= sd;
            scale[r] = sd;
        } else {
            m.row(r).setZero();
            scale[r] = 1.0;
        }
    }
}

FeatureMatrix assemble_matrix(const std::vector<FeatureVector>& vectors, bool scale_rows) {
    if (vectors.empty()) throw InvalidArgument("assemble_matrix: no feature vectors");
    const Index dim = vectors.front().dimension();
    FeatureMatrix fm;
    fm.columns.resize(dim, static_cast<Index>(vectors.size()));
    fm.labels.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].dimension() != dim)
            throw InvalidArgument("assemble_matrix: dimension mismatch at column " +
                                  std::to_string(i) + " ('" + vectors[i].label + "')");
        fm.columns.col(static_cast<Index>(i)) = vectors[i].stacked();
        fm.labels.push_back(vectors[i].label);
    }
    if (scale_rows) {
        standardize_rows(fm.columns, fm.row_mean, fm.row_scale);
    } else {
        fm.row_mean = Vector::Zero(dim);
        fm.row_scale = Vector::Ones(dim);
    }
    return fm;
}

}  // namespace tsclust
