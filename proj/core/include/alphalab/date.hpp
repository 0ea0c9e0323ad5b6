#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace alphalab {

// Calendar date in UTC, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d.time_since_epoch().count()) {}

    static Date from_days(std::int64_t days_since_epoch);
    static Date from_ymd(int year, unsigned month, unsigned day);
    // Floor of an epoch-seconds timestamp to its UTC day.
    static Date from_epoch_seconds(std::int64_t seconds);
    // Strict "YYYY-MM-DD"; throws PreconditionError otherwise.
    static Date parse(std::string_view text);

    std::int64_t days_since_epoch() const { return days_; }
    std::int64_t epoch_seconds() const { return days_ * 86400; }
    std::chrono::sys_days sys_days() const {
        return std::chrono::sys_days{std::chrono::days{days_}};
    }
    std::string to_string() const;

    Date operator+(std::int64_t n) const { return from_days(days_ + n); }
    Date operator-(std::int64_t n) const { return from_days(days_ - n); }
    std::int64_t operator-(Date other) const { return days_ - other.days_; }

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

}  // namespace alphalab
