#include "temponym/relative.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "temponym/utf8.hpp"

namespace temponym {
namespace {

constexpr std::array<std::string_view, 7> kWeekdayCodes = {"MO", "TU", "WE", "TH",
                                                           "FR", "SA", "SU"};

std::chrono::sys_days to_sys(const CalendarDate& date) {
  return std::chrono::sys_days{std::chrono::year_month_day{
      std::chrono::year{date.year}, std::chrono::month{date.month},
      std::chrono::day{date.day}}};
}

std::string format_day(std::chrono::sys_days days) {
  const std::chrono::year_month_day ymd{days};
  return CalendarDate{int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day())}
      .iso();
}

std::optional<unsigned> weekday_from_name(std::string_view lower) {
  static constexpr std::array<std::pair<std::string_view, unsigned>, 8> names = {{
      {"montag", 1}, {"dienstag", 2}, {"mittwoch", 3}, {"donnerstag", 4},
      {"freitag", 5}, {"samstag", 6}, {"sonnabend", 6}, {"sonntag", 7},
  }};
  for (const auto& [name, day] : names) {
    if (lower == name) return day;
  }
  return std::nullopt;
}

}  // namespace

std::optional<unsigned> parse_weekday_code(std::string_view code) {
  for (unsigned i = 0; i < kWeekdayCodes.size(); ++i) {
    if (kWeekdayCodes[i] == code) return i + 1;
  }
  return std::nullopt;
}

std::string_view weekday_code(unsigned iso_weekday) {
  return kWeekdayCodes.at(iso_weekday - 1);
}

std::optional<RelativeRef> make_relative(std::string_view kind, std::string_view arg) {
  RelativeRef ref;
  if (kind == "present") return ref;
  if (kind == "last" || kind == "next") {
    const auto day = parse_weekday_code(arg);
    if (!day) return std::nullopt;
    ref.kind = kind == "last" ? RelativeRef::Kind::LastWeekday
                              : RelativeRef::Kind::NextWeekday;
    ref.weekday = *day;
    return ref;
  }
  if (kind == "day") {
    ref.kind = RelativeRef::Kind::Day;
  } else if (kind == "month") {
    ref.kind = RelativeRef::Kind::Month;
  } else if (kind == "year") {
    ref.kind = RelativeRef::Kind::Year;
  } else {
    return std::nullopt;
  }
  if (!arg.empty() && arg.front() == '+') arg.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), ref.offset);
  if (arg.empty() || ec != std::errc{} || ptr != arg.data() + arg.size()) {
    return std::nullopt;
  }
  return ref;
}

std::optional<RelativeRef> parse_relative_class(std::string_view phrase) {
  const std::string lower = utf8::to_lower(phrase);
  using Kind = RelativeRef::Kind;
  struct Entry {
    std::string_view word;
    Kind kind;
    int offset;
  };
  static constexpr std::array<Entry, 14> single = {{
      {"heute", Kind::Day, 0},        {"morgen", Kind::Day, 1},
      {"übermorgen", Kind::Day, 2},   {"gestern", Kind::Day, -1},
      {"vorgestern", Kind::Day, -2},  {"vorjahr", Kind::Year, -1},
      {"vorjahres", Kind::Year, -1},  {"folgejahr", Kind::Year, 1},
      {"folgejahres", Kind::Year, 1}, {"vormonat", Kind::Month, -1},
      {"vormonats", Kind::Month, -1}, {"nun", Kind::Present, 0},
      {"jetzt", Kind::Present, 0},    {"vorvorjahr", Kind::Year, -2},
  }};
  for (const Entry& e : single) {
    if (lower == e.word) return RelativeRef{e.kind, e.offset, 0};
  }
  const auto space = lower.find(' ');
  if (space == std::string::npos) return std::nullopt;
  const std::string_view first = std::string_view(lower).substr(0, space);
  const auto day = weekday_from_name(std::string_view(lower).substr(space + 1));
  if (!day) return std::nullopt;
  static constexpr std::array<std::string_view, 8> last = {
      "letzter", "letzten", "letzte", "vorheriger", "vorherigen", "vorherige",
      "vergangenen", "vergangener"};
  static constexpr std::array<std::string_view, 5> next = {
      "nächster", "nächsten", "nächste", "kommenden", "kommender"};
  for (std::string_view w : last) {
    if (first == w) return RelativeRef{Kind::LastWeekday, 0, *day};
  }
  for (std::string_view w : next) {
    if (first == w) return RelativeRef{Kind::NextWeekday, 0, *day};
  }
  return std::nullopt;
}

std::string resolve_relative(const RelativeRef& ref, const CalendarDate& dct) {
  using namespace std::chrono;
  char buf[32];
  switch (ref.kind) {
    case RelativeRef::Kind::Present:
      return "PRESENT_REF";
    case RelativeRef::Kind::Day:
      return format_day(to_sys(dct) + days{ref.offset});
    case RelativeRef::Kind::Month: {
      const year_month ym =
          year_month{year{dct.year}, month{dct.month}} + months{ref.offset};
      std::snprintf(buf, sizeof buf, "%04d-%02u", int(ym.year()), unsigned(ym.month()));
      return buf;
    }
    case RelativeRef::Kind::Year:
      std::snprintf(buf, sizeof buf, "%04d", dct.year + ref.offset);
      return buf;
    case RelativeRef::Kind::LastWeekday:
    case RelativeRef::Kind::NextWeekday: {
      const int step = ref.kind == RelativeRef::Kind::LastWeekday ? -1 : 1;
      sys_days day = to_sys(dct) + days{step};
      while (weekday{day}.iso_encoding() != ref.weekday) day += days{step};
      return format_day(day);
    }
  }
  return {};
}

std::string unanchored_value(const RelativeRef& ref) {
  switch (ref.kind) {
    case RelativeRef::Kind::Present:
      return "PRESENT_REF";
    case RelativeRef::Kind::Day:
    case RelativeRef::Kind::Month:
    case RelativeRef::Kind::Year: {
      const char* unit = ref.kind == RelativeRef::Kind::Day     ? "day"
                         : ref.kind == RelativeRef::Kind::Month ? "month"
                                                                : "year";
      const int magnitude = ref.offset < 0 ? -ref.offset : ref.offset;
      return std::string("UNDEF-REF-") + unit + (ref.offset < 0 ? "-MINUS-" : "-PLUS-") +
             std::to_string(magnitude);
    }
    case RelativeRef::Kind::LastWeekday:
      return "UNDEF-last-" + std::string(weekday_code(ref.weekday));
    case RelativeRef::Kind::NextWeekday:
      return "UNDEF-next-" + std::string(weekday_code(ref.weekday));
  }
  return {};
}

}  // namespace temponym
