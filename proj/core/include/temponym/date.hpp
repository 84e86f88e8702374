#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace temponym {

// A proleptic Gregorian calendar date.
struct CalendarDate {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const CalendarDate&) const = default;

  bool valid() const;
  // YYYY-MM-DD
  std::string iso() const;
};

// Parses YYYY-MM-DD. Returns nullopt for anything else, including dates that
// do not exist (2021-02-29).
std::optional<CalendarDate> parse_date(std::string_view text);

}  // namespace temponym
