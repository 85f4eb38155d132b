#pragma once

#include <compare>
#include <string>

namespace tsclust {

// Calendar date for panel timestamps. Accepts ISO-8601 "YYYY-MM-DD" and the
// monthly shorthand "YYYY-MM" (day defaults to 1).
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static Date parse(const std::string& text);
    std::string to_string() const;
};

}  // namespace tsclust
