#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "temponym/timex.hpp"

namespace temponym {

enum class Polarity { Positive, Negative };

struct PosConstraint {
  std::size_t group = 0;
  // Any of these STTS tags satisfies the constraint ("NN|NE").
  std::vector<std::string> tags;

  bool operator==(const PosConstraint&) const = default;
};

struct Rule {
  std::string name;
  Polarity polarity = Polarity::Positive;
  TimexType type = TimexType::Date;  // ignored for negative rules
  // Regex template; %name interpolates a pattern resource, %% is a literal %.
  std::string extraction;
  // Normalization templates. group(i) is the text of capture group i,
  // %normX(expr) looks expr up in norm resource normX, %ref(kind,expr)
  // resolves a deictic reference against the document creation time.
  std::string norm_value;
  std::string norm_freq;
  std::string norm_quant;
  std::string norm_mod;
  std::vector<PosConstraint> pos_constraints;
  int priority = 0;
  bool enabled_by_default = true;
  // Extension class of ext:-prefixed rules: spelling, lexical, compound,
  // rule-ext, negative or fix.
  std::string ext_class;
  // file:line the rule was read from, for diagnostics.
  std::string origin;

  bool is_extension() const { return name.starts_with("ext:"); }
};

// A pattern resource entry carrying an `// ext:<class>` marker.
struct ResourceExtension {
  std::string resource;
  std::string alternative;
  std::string ext_class;
};

struct PackMetadata {
  std::string name;
  std::string version;
  std::vector<std::string> notes;
};

// Uncompiled pack contents, as read from disk or assembled in code.
struct PackSource {
  PackMetadata metadata;
  std::map<std::string, std::vector<std::string>> pattern_resources;
  std::map<std::string, std::map<std::string, std::string>> norm_resources;
  std::vector<Rule> rules;
  std::vector<ResourceExtension> resource_extensions;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kDefaultExpansionLimit = std::size_t{1} << 20;

struct CompileOptions {
  std::size_t expansion_limit = kDefaultExpansionLimit;
};

namespace detail {
struct CompiledPack;
}

// Immutable compiled rule pack. Cheap to copy; copies share compiled state
// and may be used from several threads at once.
class RulePack {
 public:
  const PackMetadata& metadata() const;
  const std::map<std::string, std::vector<std::string>>& pattern_resources() const;
  const std::map<std::string, std::map<std::string, std::string>>& norm_resources() const;
  const std::vector<Rule>& rules() const;
  const std::vector<ResourceExtension>& resource_extensions() const;
  const std::vector<std::string>& warnings() const;

  const Rule* find_rule(std::string_view name) const;
  // Extraction regex after interpolation.
  const std::string& expanded_extraction(std::size_t rule_index) const;

  const detail::CompiledPack& compiled() const { return *compiled_; }

 private:
  friend RulePack compile_pack(PackSource source, const CompileOptions& options);
  std::shared_ptr<const detail::CompiledPack> compiled_;
};

// Validates and compiles a pack: resolves interpolation (rejecting dangling
// references, cycles and oversize expansions), compiles every extraction
// regex, parses the normalization templates and checks that referenced
// groups and norm resources exist. Throws PackError.
RulePack compile_pack(PackSource source, const CompileOptions& options = {});

// Reads the directory layout
//   pack.meta                  name=, version=, note= lines (optional)
//   patterns/<name>.txt        one alternative per line, // comments
//   norms/<name>.txt           key,value per line
//   rules/<kind>.rules         kind in date, time, duration, set, negative
// and compiles it. Throws PackError with file and line on malformed input.
RulePack load_rulepack(const std::filesystem::path& directory,
                       const CompileOptions& options = {});

// Parses one rule line: RULENAME="x" EXTRACTION="..." NORM_VALUE="..." plus
// optional NORM_FREQ, NORM_QUANT, NORM_MOD, POS_CONSTRAINT="g:TAG[,g:TAG]",
// PRIORITY="n", EXT_CLASS="c" and the flag DISABLED_BY_DEFAULT.
Rule parse_rule_line(std::string_view line, Polarity polarity, TimexType type,
                     const std::string& origin);

// Expands every %name in `extraction` into a non-capturing alternation of the
// resource's alternatives, longest first (ties lexicographic), recursively.
// Throws PackError on unknown names, cycles, or expansions longer than
// `limit` bytes.
std::string interpolate(
    std::string_view extraction,
    const std::map<std::string, std::vector<std::string>>& resources,
    std::size_t limit = kDefaultExpansionLimit);

}  // namespace temponym
