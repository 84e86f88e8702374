#include "temponym/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace temponym {

bool CalendarDate::valid() const {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  return ymd.ok();
}

std::string CalendarDate::iso() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

std::optional<CalendarDate> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    const char* first = text.data() + pos;
    const char* last = first + len;
    for (const char* p = first; p != last; ++p) {
      if (*p < '0' || *p > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
  };
  CalendarDate date;
  if (!field(0, 4, date.year) || !field(5, 2, date.month) ||
      !field(8, 2, date.day)) {
    return std::nullopt;
  }
  if (!date.valid()) return std::nullopt;
  return date;
}

}  // namespace temponym
