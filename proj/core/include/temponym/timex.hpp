#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "temponym/document.hpp"

namespace temponym {

enum class TimexType { Date, Time, Duration, Set };

std::string_view to_string(TimexType type);
std::optional<TimexType> parse_timex_type(std::string_view text);

struct Timex3Annotation {
  Span span;
  std::string surface;
  TimexType type = TimexType::Date;
  std::string value;
  std::string freq;
  std::string quant;
  std::string mod;
  std::string rule_name;

  bool operator==(const Timex3Annotation&) const = default;
};

// TIMEX3 value grammar:
//   date      YYYY[-MM[-DD]] | YYYY-Qn | YYYY-(SP|SU|FA|WI)
//   time      YYYY-MM-DDTHH:MM
//   duration  P<n>(Y|M|W|D)... | PT<n>(H|M)... | P<n>(Y|M|W|D)...T<n>(H|M)...
//   symbolic  PRESENT_REF | PAST_REF | FUTURE_REF
// Digits may be replaced by X placeholders. An UNDEF- prefix marks values
// that still need an anchor; besides the forms above it admits
//   REF-(day|month|year)-(PLUS|MINUS)-<n>   and   (last|next)-<weekday code>.
bool is_valid_value(std::string_view value);

}  // namespace temponym
