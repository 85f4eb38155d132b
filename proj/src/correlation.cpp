#include "tsclust/correlation.hpp"

#include <algorithm>
#include <cmath>

namespace tsclust {

Vector CorrelationSequence::masked() const {
    Vector out = values;
    for (Index i = 0; i < out.size(); ++i)
        if (std::abs(out[i]) < significance_band) out[i] = 0.0;
    return out;
}

namespace {

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 over (0,1).
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double critical_z(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw InvalidArgument("significance level must lie in (0,1)");
    if (level == 0.05) return 1.96;  // conventional two-sided value
    return normal_quantile(1.0 - level / 2.0);
}

Vector pacf_from_acf(const Vector& acf_values) {
    const Index m = acf_values.size();
    Vector pacf(m);
    if (m == 0) return pacf;
    Vector phi_prev(m), phi_cur(m);
    pacf[0] = acf_values[0];
    phi_prev[0] = acf_values[0];
    for (Index h = 2; h <= m; ++h) {
        double num = acf_values[h - 1];
        double den = 1.0;
        for (Index j = 1; j < h; ++j) {
            num -= phi_prev[j - 1] * acf_values[h - j - 1];
            den -= phi_prev[j - 1] * acf_values[j - 1];
        }
        if (std::abs(den) < 1e-14) {
            // degenerate recursion stage; remaining partials are undetermined
            for (Index r = h; r <= m; ++r) pacf[r - 1] = 0.0;
            return pacf;
        }
        double phi_hh = num / den;
        phi_hh = std::clamp(phi_hh, -1.0, 1.0);
        pacf[h - 1] = phi_hh;
        for (Index j = 1; j < h; ++j)
            phi_cur[j - 1] = phi_prev[j - 1] - phi_hh * phi_prev[h - j - 1];
        phi_cur[h - 1] = phi_hh;
        std::swap(phi_prev, phi_cur);
    }
    return pacf;
}

namespace {

double band(Index n, double z) { return z / std::sqrt(static_cast<double>(n)); }

}  // namespace

CorrelationSequence acf(const TimeSeries& series, Index max_lag, double z) {
    return CorrelationSequence{sample_acf(series.values(), max_lag), band(series.length(), z),
                               CorrelationKind::acf};
}

CorrelationSequence pacf(const TimeSeries& series, Index max_lag, double z) {
    return CorrelationSequence{sample_pacf(series.values(), max_lag), band(series.length(), z),
                               CorrelationKind::pacf};
}

CorrelationSequence ccf(const TimeSeries& x, const TimeSeries& y, Index max_lag, double z) {
    return CorrelationSequence{sample_ccf(x.values(), y.values(), max_lag),
                               band(x.length(), z), CorrelationKind::ccf};
}

}  // namespace tsclust
