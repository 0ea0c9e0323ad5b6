#include "alphalab/date.hpp"

#include <charconv>
#include <cstdio>

#include "alphalab/error.hpp"

namespace alphalab {

using namespace std::chrono;

Date Date::from_days(std::int64_t days_since_epoch) {
    return Date(std::chrono::sys_days{days{days_since_epoch}});
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) throw PreconditionError("invalid calendar date");
    return Date(std::chrono::sys_days{ymd});
}

Date Date::from_epoch_seconds(std::int64_t seconds) {
    std::int64_t d = seconds / 86400;
    if (seconds % 86400 < 0) --d;
    return from_days(d);
}

Date Date::parse(std::string_view text) {
    auto bad = [&] { return PreconditionError("bad date '" + std::string(text) + "', want YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    int y = 0;
    unsigned m = 0, d = 0;
    auto ok = [](std::from_chars_result r, const char* end) { return r.ec == std::errc{} && r.ptr == end; };
    const char* s = text.data();
    if (!ok(std::from_chars(s, s + 4, y), s + 4) || !ok(std::from_chars(s + 5, s + 7, m), s + 7) ||
        !ok(std::from_chars(s + 8, s + 10, d), s + 10)) {
        throw bad();
    }
    year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw bad();
    return Date(std::chrono::sys_days{ymd});
}

std::string Date::to_string() const {
    year_month_day ymd{this->sys_days()};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace alphalab
