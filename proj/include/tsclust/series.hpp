#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsclust/date.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

enum class StationarizeMode { log_diff, diff, none };

StationarizeMode parse_stationarize_mode(const std::string& name);
std::string to_string(StationarizeMode mode);

// Ordered real-valued observations with an optional label and optional
// strictly increasing timestamps. Values are validated finite on construction.
class TimeSeries {
public:
    explicit TimeSeries(Vector values, std::string label = {},
                        std::optional<std::vector<Date>> timestamps = std::nullopt);

    const Vector& values() const { return values_; }
    const std::string& label() const { return label_; }
    const std::optional<std::vector<Date>>& timestamps() const { return timestamps_; }

    Index length() const { return values_.size(); }
    double operator[](Index t) const { return values_[t]; }

    // Subrange [first, last) keeping label and timestamps.
    TimeSeries slice(Index first, Index last) const;

    // Subrange of observations whose timestamp lies in [start, end].
    // Requires timestamps.
    TimeSeries window(const Date& start, const Date& end) const;

private:
    Vector values_;
    std::string label_;
    std::optional<std::vector<Date>> timestamps_;
};

// log_diff: first differences of log values (length T-1, requires positive
// values); diff: first differences (length T-1); none: the input unchanged.
TimeSeries stationarize(const TimeSeries& series, StationarizeMode mode);

}  // namespace tsclust
