#include "tsclust/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tsclust/error.hpp"

namespace tsclust {

StationarizeMode parse_stationarize_mode(const std::string& name) {
    if (name == "log_diff") return StationarizeMode::log_diff;
    if (name == "diff") return StationarizeMode::diff;
    if (name == "none") return StationarizeMode::none;
    throw ConfigError("unknown stationarize mode '" + name + "' (log_diff, diff, none)");
}

std::string to_string(StationarizeMode mode) {
    switch (mode) {
        case StationarizeMode::log_diff: return "log_diff";
        case StationarizeMode::diff: return "diff";
        case StationarizeMode::none: return "none";
    }
    return "none";
}

Date Date::parse(const std::string& text) {
    int y = 0, m = 0, d = 1;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%n", &y, &m, &d, &consumed) == 3 &&
        consumed == static_cast<int>(text.size())) {
        // fall through to validation
    } else if (std::sscanf(text.c_str(), "%d-%d%n", &y, &m, &consumed) == 2 &&
               consumed == static_cast<int>(text.size())) {
        d = 1;
    } else {
        throw InvalidArgument("cannot parse date '" + text + "' (expected YYYY-MM or YYYY-MM-DD)");
    }
    if (m < 1 || m > 12 || d < 1 || d > 31)
        throw InvalidArgument("date out of range: '" + text + "'");
    return Date{y, m, d};
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

TimeSeries::TimeSeries(Vector values, std::string label,
                       std::optional<std::vector<Date>> timestamps)
    : values_(std::move(values)), label_(std::move(label)), timestamps_(std::move(timestamps)) {
    if (values_.size() < 1) throw InvalidArgument("time series must have length >= 1");
    if (!values_.allFinite())
        throw InvalidArgument("time series '" + label_ + "' contains non-finite values");
    if (timestamps_) {
        if (static_cast<Index>(timestamps_->size()) != values_.size())
            throw InvalidArgument("timestamps length does not match values length");
        for (std::size_t i = 1; i < timestamps_->size(); ++i)
            if (!((*timestamps_)[i - 1] < (*timestamps_)[i]))
                throw InvalidArgument("timestamps must be strictly increasing");
    }
}

TimeSeries TimeSeries::slice(Index first, Index last) const {
    if (first < 0 || last > length() || first >= last)
        throw InvalidArgument("slice bounds out of range");
    std::optional<std::vector<Date>> stamps;
    if (timestamps_)
        stamps = std::vector<Date>(timestamps_->begin() + first, timestamps_->begin() + last);
    return TimeSeries(values_.segment(first, last - first), label_, std::move(stamps));
}

TimeSeries TimeSeries::window(const Date& start, const Date& end) const {
    if (!timestamps_) throw InvalidArgument("window selection requires timestamps");
    const auto lo = std::lower_bound(timestamps_->begin(), timestamps_->end(), start);
    const auto hi = std::upper_bound(timestamps_->begin(), timestamps_->end(), end);
    if (lo >= hi)
        throw InvalidArgument("window [" + start.to_string() + ", " + end.to_string() +
                              "] selects no observations of '" + label_ + "'");
    return slice(lo - timestamps_->begin(), hi - timestamps_->begin());
}

TimeSeries stationarize(const TimeSeries& series, StationarizeMode mode) {
    if (mode == StationarizeMode::none) return series;
    const Vector& y = series.values();
    const Index n = y.size();
    if (n < 2) throw InvalidArgument("differencing requires at least two observations");
    Vector out(n - 1);
    if (mode == StationarizeMode::diff) {
        out = y.tail(n - 1) - y.head(n - 1);
    } else {
        if ((y.array() <= 0.0).any())
            throw InvalidArgument("log_diff requires strictly positive values ('" +
                                  series.label() + "')");
        Vector logs = y.array().log();
        out = logs.tail(n - 1) - logs.head(n - 1);
    }
    std::optional<std::vector<Date>> stamps;
    if (series.timestamps())
        stamps = std::vector<Date>(series.timestamps()->begin() + 1, series.timestamps()->end());
    return TimeSeries(std::move(out), series.label(), std::move(stamps));
}

}  // namespace tsclust
