#include "temponym/timex.hpp"

#include <regex>

namespace temponym {

std::string_view to_string(TimexType type) {
  switch (type) {
    case TimexType::Date: return "DATE";
    case TimexType::Time: return "TIME";
    case TimexType::Duration: return "DURATION";
    case TimexType::Set: return "SET";
  }
  return "DATE";
}

std::optional<TimexType> parse_timex_type(std::string_view text) {
  if (text == "DATE") return TimexType::Date;
  if (text == "TIME") return TimexType::Time;
  if (text == "DURATION") return TimexType::Duration;
  if (text == "SET") return TimexType::Set;
  return std::nullopt;
}

bool is_valid_value(std::string_view value) {
  static const std::regex grammar = [] {
    const std::string d = "[0-9X]";
    const std::string year = d + "{4}";
    const std::string date = year + "(?:-" + d + "{2}(?:-" + d + "{2})?)?|" +
                             year + "-Q[1-4X]|" + year + "-(?:SP|SU|FA|WI)";
    const std::string time = year + "-" + d + "{2}-" + d + "{2}T" + d + "{2}:" + d + "{2}";
    const std::string number = d + "+(?:\\.[0-9]+)?";
    const std::string duration = "P(?=" + d + "|T)(?:" + number + "[YMWD])*(?:T(?:" +
                                 number + "[HMS])+)?";
    const std::string symbolic = "PRESENT_REF|PAST_REF|FUTURE_REF";
    const std::string core =
        "(?:" + time + "|" + date + "|" + duration + "|" + symbolic + ")";
    const std::string undef = "UNDEF-(?:" + core +
                              "|REF-(?:day|month|year)-(?:PLUS|MINUS)-[0-9]+" +
                              "|(?:last|next)-(?:MO|TU|WE|TH|FR|SA|SU))";
    return std::regex("^(?:" + core + "|" + undef + ")$");
  }();
  if (value.empty()) return false;
  return std::regex_match(value.begin(), value.end(), grammar);
}

}  // namespace temponym
