#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "temponym/date.hpp"
#include "temponym/rulepack.hpp"
#include "temponym/timex.hpp"

namespace temponym {

inline constexpr std::array<std::string_view, 6> kExtensionClasses = {
    "spelling", "lexical", "compound", "rule-ext", "negative", "fix"};

// The four false-negative classes that need at least two rules each.
inline constexpr std::array<std::string_view, 4> kCoreExtensionClasses = {
    "spelling", "lexical", "compound", "rule-ext"};

// One line of a golden fixture: text<TAB>expected_type<TAB>expected_value,
// optionally followed by <TAB>dct and <TAB>citation (the source phrase the
// case is taken from). An empty type means "must not match".
struct GoldenCase {
  std::string text;
  std::optional<TimexType> type;
  std::string value;
  std::optional<CalendarDate> dct;
  std::string citation;
  std::string origin;
};

std::vector<GoldenCase> read_golden(const std::filesystem::path& path);

// Runs one case. Returns an empty string on success, otherwise a
// description naming the rules that produced the offending annotations.
std::string check_golden_case(const RulePack& pack, const GoldenCase& c);

struct PackManifest {
  std::string name;
  std::string version;
  std::map<std::string, std::size_t> rules_per_kind;
  std::map<std::string, std::size_t> pattern_inventory;  // resource -> alternatives
  std::map<std::string, std::size_t> norm_inventory;     // resource -> keys
  std::map<std::string, std::string> extension_rules;    // rule -> class
  std::map<std::string, std::size_t> class_counts;       // class -> ext rules
  std::map<std::string, std::size_t> resource_extension_counts;  // class -> entries
  std::vector<std::string> disabled_by_default;
  std::vector<std::string> notes;
  std::size_t golden_cases = 0;

  std::size_t extension_rule_count() const { return extension_rules.size(); }
};

struct ValidationResult {
  std::optional<PackManifest> manifest;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

// Checks the extension-class bookkeeping (every ext: rule tagged with one
// known class, non-ext rules untagged, and for packs with extensions every
// class populated, the four core classes with two rules or more) and runs
// the golden suite.
ValidationResult validate_pack(const RulePack& pack, std::span<const GoldenCase> golden = {});

std::string format_manifest(const PackManifest& manifest);

}  // namespace temponym
