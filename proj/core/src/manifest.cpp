#include "temponym/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "temponym/engine.hpp"
#include "temponym/error.hpp"
#include "temponym/preprocess.hpp"

namespace temponym {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? line.npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

std::string kind_of(const Rule& rule) {
  if (rule.polarity == Polarity::Negative) return "negative";
  std::string kind(to_string(rule.type));
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return kind;
}

std::string describe(const Timex3Annotation& a) {
  std::string out = std::string(to_string(a.type)) + " " + a.value + " on '" + a.surface +
                    "' by rule " + a.rule_name;
  return out;
}

}  // namespace

std::vector<GoldenCase> read_golden(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open golden fixture");
  std::vector<GoldenCase> cases;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    const std::string origin = path.string() + ":" + std::to_string(line_no);
    const auto fields = split_tabs(line);
    if (fields.size() < 3 || fields.size() > 5) {
      throw InputError(origin + ": expected text<TAB>type<TAB>value[<TAB>dct[<TAB>citation]]");
    }
    GoldenCase c;
    c.text = std::string(fields[0]);
    c.origin = origin;
    if (!fields[1].empty()) {
      c.type = parse_timex_type(fields[1]);
      if (!c.type) throw InputError(origin + ": unknown type '" + std::string(fields[1]) + "'");
    } else if (!fields[2].empty()) {
      throw InputError(origin + ": value given for a must-not-match case");
    }
    c.value = std::string(fields[2]);
    if (fields.size() == 5) c.citation = std::string(fields[4]);
    if (fields.size() >= 4 && !fields[3].empty()) {
      c.dct = parse_date(fields[3]);
      if (!c.dct) throw InputError(origin + ": invalid dct '" + std::string(fields[3]) + "'");
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::string check_golden_case(const RulePack& pack, const GoldenCase& c) {
  const Document doc = preprocess(c.text, c.dct);
  std::vector<Timex3Annotation> found;
  try {
    found = match_document(pack, doc);
  } catch (const NormalizationError& e) {
    return c.origin + ": '" + c.text + "': " + e.what();
  }
  std::string got;
  for (const auto& a : found) got += (got.empty() ? "" : "; ") + describe(a);
  if (!c.type) {
    if (found.empty()) return {};
    return c.origin + ": '" + c.text + "' must not match, got " + got;
  }
  const std::string expected =
      std::string(to_string(*c.type)) + (c.value.empty() ? "" : " " + c.value);
  if (found.size() != 1) {
    return c.origin + ": '" + c.text + "' expected exactly one " + expected + ", got " +
           (found.empty() ? std::string("nothing") : got);
  }
  if (found[0].type != *c.type || (!c.value.empty() && found[0].value != c.value)) {
    return c.origin + ": '" + c.text + "' expected " + expected + ", got " + got;
  }
  return {};
}

ValidationResult validate_pack(const RulePack& pack, std::span<const GoldenCase> golden) {
  ValidationResult result;
  PackManifest m;
  m.name = pack.metadata().name;
  m.version = pack.metadata().version;
  m.notes = pack.metadata().notes;
  m.golden_cases = golden.size();
  for (const auto& [name, alternatives] : pack.pattern_resources()) {
    m.pattern_inventory[name] = alternatives.size();
  }
  for (const auto& [name, table] : pack.norm_resources()) m.norm_inventory[name] = table.size();

  auto known_class = [](std::string_view c) {
    return std::find(kExtensionClasses.begin(), kExtensionClasses.end(), c) !=
           kExtensionClasses.end();
  };

  for (const Rule& rule : pack.rules()) {
    ++m.rules_per_kind[kind_of(rule)];
    if (!rule.enabled_by_default) m.disabled_by_default.push_back(rule.name);
    if (!rule.is_extension()) {
      if (!rule.ext_class.empty()) {
        result.errors.push_back(rule.origin + ": rule '" + rule.name +
                                "' has EXT_CLASS but no ext: prefix");
      }
      continue;
    }
    if (rule.ext_class.empty()) {
      result.errors.push_back(rule.origin + ": extension rule '" + rule.name +
                              "' carries no EXT_CLASS tag");
      continue;
    }
    if (!known_class(rule.ext_class)) {
      result.errors.push_back(rule.origin + ": extension rule '" + rule.name +
                              "' has unknown class '" + rule.ext_class + "'");
      continue;
    }
    if ((rule.ext_class == "negative") != (rule.polarity == Polarity::Negative)) {
      result.errors.push_back(rule.origin + ": extension rule '" + rule.name +
                              "': class negative is reserved for negative rules");
    }
    m.extension_rules[rule.name] = rule.ext_class;
    ++m.class_counts[rule.ext_class];
  }
  for (const auto& ext : pack.resource_extensions()) {
    if (!known_class(ext.ext_class)) {
      result.errors.push_back("pattern resource '" + ext.resource + "': entry '" +
                              ext.alternative + "' has unknown class '" + ext.ext_class + "'");
      continue;
    }
    ++m.resource_extension_counts[ext.ext_class];
  }

  if (!m.extension_rules.empty()) {
    for (std::string_view c : kExtensionClasses) {
      const auto it = m.class_counts.find(std::string(c));
      const std::size_t n = it == m.class_counts.end() ? 0 : it->second;
      if (n == 0) {
        result.errors.push_back("class " + std::string(c) + " unpopulated");
      } else if (n < 2 && std::find(kCoreExtensionClasses.begin(), kCoreExtensionClasses.end(),
                                    c) != kCoreExtensionClasses.end()) {
        result.errors.push_back("class " + std::string(c) + " has " + std::to_string(n) +
                                " rule; at least 2 required");
      }
    }
  }

  for (const GoldenCase& c : golden) {
    if (auto failure = check_golden_case(pack, c); !failure.empty()) {
      result.errors.push_back(std::move(failure));
    }
  }
  result.manifest = std::move(m);
  return result;
}

std::string format_manifest(const PackManifest& m) {
  std::ostringstream out;
  out << "pack " << m.name;
  if (!m.version.empty()) out << " " << m.version;
  out << "\n";
  out << "rules:";
  std::size_t total = 0;
  for (const auto& [kind, n] : m.rules_per_kind) {
    out << " " << kind << "=" << n;
    total += n;
  }
  out << " (total " << total << ")\n";
  out << "pattern resources: " << m.pattern_inventory.size()
      << ", norm resources: " << m.norm_inventory.size() << "\n";
  out << "extension rules: " << m.extension_rule_count() << "\n";
  for (std::string_view c : kExtensionClasses) {
    const auto it = m.class_counts.find(std::string(c));
    const auto rit = m.resource_extension_counts.find(std::string(c));
    if (it == m.class_counts.end() && rit == m.resource_extension_counts.end()) continue;
    out << "  " << c << ": " << (it == m.class_counts.end() ? 0 : it->second) << " rules";
    if (rit != m.resource_extension_counts.end()) {
      out << ", " << rit->second << " resource entries";
    }
    out << "\n";
  }
  if (!m.disabled_by_default.empty()) {
    out << "disabled by default:";
    for (const auto& name : m.disabled_by_default) out << " " << name;
    out << "\n";
  }
  for (const auto& note : m.notes) out << "note: " << note << "\n";
  out << "golden cases passed: " << m.golden_cases << "\n";
  return out.str();
}

}  // namespace temponym
