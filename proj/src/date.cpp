#include "infodemic/date.hpp"

#include <charconv>
#include <cstdio>

#include "infodemic/error.hpp"

namespace infodemic {

namespace {

int parse_digits(std::string_view s, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("invalid date '" + std::string(whole) + "'");
    return value;
}

}  // namespace

Date Date::from_ymd(int y, unsigned m, unsigned d) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok())
        throw ParseError("invalid calendar date " + std::to_string(y) + "-" + std::to_string(m) +
                         "-" + std::to_string(d));
    return Date(sys_days(ymd));
}

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw ParseError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    const int y = parse_digits(text.substr(0, 4), text);
    const int m = parse_digits(text.substr(5, 2), text);
    const int d = parse_digits(text.substr(8, 2), text);
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
    using namespace std::chrono;
    const year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

DateRange DateRange::parse(std::string_view text) {
    const auto sep = text.find("..");
    if (sep == std::string_view::npos)
        throw ParseError("invalid period '" + std::string(text) + "' (expected FROM..TO)");
    DateRange r{Date::parse(text.substr(0, sep)), Date::parse(text.substr(sep + 2))};
    if (r.last < r.first) throw ConfigError("period '" + std::string(text) + "' is empty");
    return r;
}

}  // namespace infodemic
