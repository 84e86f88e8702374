#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "temponym/date.hpp"

namespace temponym {

// A deictic reference resolved against the document creation time.
struct RelativeRef {
  enum class Kind { Day, Month, Year, LastWeekday, NextWeekday, Present };

  Kind kind = Kind::Present;
  // Signed offset for Day/Month/Year.
  int offset = 0;
  // ISO weekday 1 (Monday) .. 7 (Sunday) for Last/NextWeekday.
  unsigned weekday = 0;

  bool operator==(const RelativeRef&) const = default;
};

// Weekday codes MO TU WE TH FR SA SU <-> 1..7.
std::optional<unsigned> parse_weekday_code(std::string_view code);
std::string_view weekday_code(unsigned iso_weekday);

// Builds a reference from the argument pair used by the `%ref(kind,arg)`
// normalization function: kind is day|month|year (arg a signed integer such
// as "+2") or last|next (arg a weekday code), or present (arg ignored).
std::optional<RelativeRef> make_relative(std::string_view kind,
                                         std::string_view arg);

// Lexical classes of the German pack: "heute", "morgen", "übermorgen",
// "gestern", "vorgestern", "Vorjahr", "Folgejahr", "Vormonat", "nun",
// "jetzt", and "<letzter|vorheriger|nächster> <Wochentag>" in any inflection.
std::optional<RelativeRef> parse_relative_class(std::string_view phrase);

// Calendar arithmetic against `dct`:
//   Day    -> YYYY-MM-DD of dct + offset days
//   Month  -> YYYY-MM of dct + offset months
//   Year   -> YYYY of dct + offset years
//   LastWeekday -> latest date strictly before dct with that weekday
//   NextWeekday -> earliest date strictly after dct with that weekday
//   Present -> PRESENT_REF
std::string resolve_relative(const RelativeRef& ref, const CalendarDate& dct);

// Placeholder value used when no dct is known, e.g. UNDEF-REF-day-PLUS-2,
// UNDEF-last-FR. Present stays PRESENT_REF.
std::string unanchored_value(const RelativeRef& ref);

}  // namespace temponym
