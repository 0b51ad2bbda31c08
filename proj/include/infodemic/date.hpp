#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace infodemic {

/// Calendar day (proleptic Gregorian), stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}

    static constexpr Date from_serial(int serial) {
        return Date(std::chrono::sys_days(std::chrono::days(serial)));
    }
    static Date from_ymd(int y, unsigned m, unsigned d);
    /// Strict ISO-8601 `YYYY-MM-DD`; throws ParseError.
    static Date parse(std::string_view text);

    constexpr int serial() const { return static_cast<int>(days_.time_since_epoch().count()); }
    std::string iso() const;

    constexpr Date operator+(int n) const { return Date(days_ + std::chrono::days(n)); }
    constexpr Date operator-(int n) const { return Date(days_ - std::chrono::days(n)); }
    constexpr int operator-(Date other) const { return serial() - other.serial(); }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

/// Inclusive range of days.
struct DateRange {
    Date first;
    Date last;

    /// `FROM..TO` with both ends ISO dates; throws ParseError / ConfigError.
    static DateRange parse(std::string_view text);

    constexpr std::size_t size() const {
        return last < first ? 0 : static_cast<std::size_t>(last - first) + 1;
    }
    constexpr bool contains(Date d) const { return first <= d && d <= last; }
    constexpr Date at(std::size_t i) const { return first + static_cast<int>(i); }
    std::string str() const { return first.iso() + ".." + last.iso(); }

    constexpr bool operator==(const DateRange&) const = default;
};

}  // namespace infodemic
