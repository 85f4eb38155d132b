#include "tsclust/ar.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "tsclust/correlation.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

Criterion parse_criterion(const std::string& name) {
    if (name == "aic") return Criterion::aic;
    if (name == "bic") return Criterion::bic;
    if (name == "hqic") return Criterion::hqic;
    throw ConfigError("unknown information criterion '" + name + "' (aic, bic, hqic)");
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::aic: return "aic";
        case Criterion::bic: return "bic";
        case Criterion::hqic: return "hqic";
    }
    return "aic";
}

double information_criterion(Criterion c, double rss, Index n, Index n_params) {
    const double nn = static_cast<double>(n);
    const double s2 = std::max(rss, 1e-300) / nn;
    double penalty = 2.0;
    if (c == Criterion::bic)
        penalty = std::log(nn);
    else if (c == Criterion::hqic)
        penalty = 2.0 * std::log(std::log(nn));
    return nn * std::log(s2) + penalty * static_cast<double>(n_params);
}

namespace detail {

namespace {

// Lag design for rows t = first..T-1: [1, y_{t-1}, ..., y_{t-p}].
Matrix lag_design(const Vector& y, Index p, Index first) {
    const Index n = y.size() - first;
    Matrix x(n, p + 1);
    x.col(0).setOnes();
    for (Index lag = 1; lag <= p; ++lag)
        x.col(lag) = y.segment(first - lag, n);
    return x;
}

}  // namespace

ArModel fit_ar_window(const Vector& y, Index p, Index first, Criterion ic_name) {
    if (p < 1) throw InvalidArgument("fit_ar: order must be positive");
    if (first < p) throw InvalidArgument("fit_ar: sample start precedes available lags");
    const Index n = y.size() - first;
    if (n < p + 2)
        throw InvalidArgument("fit_ar: series too short for order " + std::to_string(p) +
                              " (need T > p + 2)");
    Matrix x = lag_design(y, p, first);
    Vector response = y.tail(n);

    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < x.cols())
        throw EstimationFailure("fit_ar: singular lag design (constant series?)");
    Vector beta = qr.solve(response);
    Vector residuals = response - x * beta;
    const double rss = residuals.squaredNorm();

    ArModel model;
    model.intercept = beta[0];
    model.coefficients = beta.tail(p);
    model.residuals = std::move(residuals);
    const Index dof = n - (p + 1);
    model.sigma2 = dof > 0 ? rss / static_cast<double>(dof) : 0.0;
    Matrix xtx_inv = (x.transpose() * x).ldlt().solve(Matrix::Identity(p + 1, p + 1));
    model.std_errors = (model.sigma2 * xtx_inv.diagonal().array()).max(0.0).sqrt();
    model.ic.name = ic_name;
    model.ic.value = information_criterion(ic_name, rss, n, p + 1);
    return model;
}

Index select_ar_order_window(const Vector& y, Index p_max, Index first, Criterion criterion) {
    if (p_max < 1) throw InvalidArgument("select_ar_order: p_max must be positive");
    if (p_max > kMaxLagOrder)
        throw InvalidArgument("select_ar_order: p_max exceeds supported bound " +
                              std::to_string(kMaxLagOrder));
    first = std::max(first, p_max);
    const Index n = y.size() - first;
    if (n < p_max + 2) throw InvalidArgument("select_ar_order: series too short (need T > p_max + 2)");

    // All candidates share the sample rows t = first..T-1; the order-p design
    // is the leading 1+p columns of the order-p_max design.
    Matrix x = lag_design(y, p_max, first);
    Vector response = y.tail(n);
    Matrix xtx = x.transpose() * x;
    Vector xty = x.transpose() * response;
    const double yty = response.squaredNorm();

    Index best_p = 1;
    double best_ic = std::numeric_limits<double>::infinity();
    for (Index p = 1; p <= p_max; ++p) {
        const Index dim = p + 1;
        SmallMatrix g = xtx.topLeftCorner(dim, dim);
        SmallVector b = xty.head(dim);
        Eigen::LDLT<SmallMatrix> ldlt(g);
        SmallVector beta = ldlt.solve(b);
        const double rss = std::max(yty - beta.dot(b), 0.0);
        const double ic = information_criterion(criterion, rss, n, dim);
        if (std::isfinite(ic) && ic < best_ic) {
            best_ic = ic;
            best_p = p;
        }
    }
    if (!std::isfinite(best_ic))
        throw EstimationFailure("select_ar_order: no candidate order produced a finite criterion");
    return best_p;
}

}  // namespace detail

ArModel fit_ar(const TimeSeries& series, Index p, Criterion ic_name) {
    return detail::fit_ar_window(series.values(), p, p, ic_name);
}

Index select_ar_order(const TimeSeries& series, Index p_max, Criterion criterion) {
    return detail::select_ar_order_window(series.values(), p_max, p_max, criterion);
}

Vector significant_coefficients(const ArModel& model, double level) {
    const double z = critical_z(level);
    const Index p = model.order();
    Vector out = model.coefficients;
    for (Index i = 0; i < p; ++i) {
        const double se = model.std_errors[i + 1];
        const double t = se > 0.0 ? std::abs(out[i]) / se
                                  : (out[i] != 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (t < z) out[i] = 0.0;
    }
    return out;
}

}  // namespace tsclust
