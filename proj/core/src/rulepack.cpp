#include "temponym/rulepack.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "compiled_pack.hpp"
#include "temponym/error.hpp"

namespace temponym {
namespace {

namespace fs = std::filesystem;

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Expands %name references with memoization and cycle detection.
class Interpolator {
 public:
  Interpolator(const std::map<std::string, std::vector<std::string>>& resources,
               std::size_t limit)
      : resources_(resources), limit_(limit) {}

  std::string expand(std::string_view text, std::string_view context) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const char c = text[pos];
      if (c != '%') {
        out.push_back(c);
        ++pos;
        continue;
      }
      if (pos + 1 < text.size() && text[pos + 1] == '%') {
        out.push_back('%');
        pos += 2;
        continue;
      }
      std::size_t end = pos + 1;
      if (end >= text.size() || !is_ident_start(text[end])) {
        throw PackError(std::string(context) + ": stray '%' at offset " +
                        std::to_string(pos) + " (write %% for a literal percent)");
      }
      while (end < text.size() && is_ident_char(text[end])) ++end;
      const std::string name(text.substr(pos + 1, end - pos - 1));
      if (!resources_.contains(name)) {
        throw PackError(std::string(context) + ": reference to unknown pattern resource '%" +
                        name + "'");
      }
      out += resource(name);
      check_size(out.size(), context);
      pos = end;
    }
    check_size(out.size(), context);
    return out;
  }

  const std::string& resource(const std::string& name) {
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    if (std::find(stack_.begin(), stack_.end(), name) != stack_.end()) {
      std::string cycle;
      auto first = std::find(stack_.begin(), stack_.end(), name);
      for (auto it = first; it != stack_.end(); ++it) cycle += *it + " -> ";
      throw PackError("interpolation cycle: " + cycle + name);
    }
    stack_.push_back(name);
    std::vector<std::string> alternatives = resources_.at(name);
    std::sort(alternatives.begin(), alternatives.end(),
              [](const std::string& a, const std::string& b) {
                if (a.size() != b.size()) return a.size() > b.size();
                return a < b;
              });
    std::string out = "(?:";
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
      if (i > 0) out.push_back('|');
      out += expand(alternatives[i], "pattern resource '" + name + "'");
      check_size(out.size(), "pattern resource '" + name + "'");
    }
    out.push_back(')');
    stack_.pop_back();
    used_.insert(name);
    return cache_.emplace(name, std::move(out)).first->second;
  }

 private:
  void check_size(std::size_t size, std::string_view context) const {
    if (size > limit_) {
      throw PackError(std::string(context) + ": interpolated expression exceeds " +
                      std::to_string(limit_) +
                      " bytes; split the resource into smaller lists or restrict it "
                      "to single-word entries");
    }
  }

  const std::map<std::string, std::vector<std::string>>& resources_;
  std::size_t limit_;
  std::map<std::string, std::string> cache_;
  std::vector<std::string> stack_;
  std::set<std::string> used_;
};

// Collects the names of resources referenced (transitively) by `text`.
void collect_references(std::string_view text,
                        const std::map<std::string, std::vector<std::string>>& resources,
                        std::set<std::string>& out) {
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    if (text[pos] != '%') continue;
    if (pos + 1 < text.size() && text[pos + 1] == '%') {
      ++pos;
      continue;
    }
    std::size_t end = pos + 1;
    while (end < text.size() && is_ident_char(text[end])) ++end;
    std::string name(text.substr(pos + 1, end - pos - 1));
    auto it = resources.find(name);
    if (it != resources.end() && out.insert(name).second) {
      for (const auto& alt : it->second) collect_references(alt, resources, out);
    }
  }
}

class TemplateParser {
 public:
  TemplateParser(std::string_view text, const Rule& rule, std::size_t groups,
                 const std::map<std::string, std::map<std::string, std::string>>& norms,
                 std::set<std::string>& used_norms)
      : text_(text), rule_(rule), groups_(groups), norms_(norms), used_norms_(used_norms) {}

  detail::Template parse() {
    auto result = sequence(false);
    if (pos_ != text_.size()) fail("unexpected ')'");
    return result;
  }

 private:
  using Node = detail::TemplateNode;

  [[noreturn]] void fail(const std::string& what) const {
    throw PackError(rule_.origin + ": rule '" + rule_.name + "': template '" +
                    std::string(text_) + "': " + what);
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "' at offset " + std::to_string(pos_));
    }
    ++pos_;
  }

  detail::Template sequence(bool nested) {
    detail::Template out;
    auto literal = [&](char c) {
      if (out.empty() || out.back().kind != Node::Kind::Literal) {
        out.push_back(Node{});
      }
      out.back().text.push_back(c);
    };
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (nested && (c == ')' || c == ',')) break;
      if (consume("group(")) {
        std::size_t index = 0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, index);
        if (ec != std::errc{} || ptr == first) fail("group index expected");
        pos_ += static_cast<std::size_t>(ptr - first);
        expect(')');
        if (index > groups_) {
          fail("group(" + std::to_string(index) + ") but the extraction has only " +
               std::to_string(groups_) + " groups");
        }
        Node node;
        node.kind = Node::Kind::Group;
        node.group = index;
        out.push_back(std::move(node));
        continue;
      }
      if (c == '%') {
        if (consume("%%")) {
          literal('%');
          continue;
        }
        ++pos_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name.empty()) fail("function name expected after '%'");
        expect('(');
        Node node;
        if (name == "ref") {
          node.kind = Node::Kind::Ref;
          const std::size_t kind_start = pos_;
          while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
          node.text = std::string(text_.substr(kind_start, pos_ - kind_start));
          static const std::set<std::string> kinds = {"day", "month", "year",
                                                      "last", "next", "present"};
          if (!kinds.contains(node.text)) fail("unknown %ref kind '" + node.text + "'");
          if (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            node.arg = sequence(true);
          }
        } else {
          node.kind = Node::Kind::Lookup;
          node.text = name;
          if (!norms_.contains(name)) fail("unknown norm resource '%" + name + "'");
          used_norms_.insert(name);
          node.arg = sequence(true);
        }
        expect(')');
        out.push_back(std::move(node));
        continue;
      }
      literal(c);
      ++pos_;
    }
    return out;
  }

  std::string_view text_;
  const Rule& rule_;
  std::size_t groups_;
  const std::map<std::string, std::map<std::string, std::string>>& norms_;
  std::set<std::string>& used_norms_;
  std::size_t pos_ = 0;
};

std::vector<PosConstraint> parse_pos_constraints(std::string_view text,
                                                 const std::string& origin) {
  std::vector<PosConstraint> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = trim(text.substr(pos, comma - pos));
    const auto colon = item.find(':');
    PosConstraint c;
    if (colon == std::string_view::npos) {
      throw PackError(origin + ": POS_CONSTRAINT item '" + std::string(item) +
                      "' is not group:TAG");
    }
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + colon, c.group);
    if (ec != std::errc{} || ptr != item.data() + colon) {
      throw PackError(origin + ": POS_CONSTRAINT group in '" + std::string(item) +
                      "' is not a number");
    }
    std::string_view tags = item.substr(colon + 1);
    std::size_t tpos = 0;
    while (tpos <= tags.size()) {
      auto bar = tags.find('|', tpos);
      if (bar == std::string_view::npos) bar = tags.size();
      const std::string_view tag = trim(tags.substr(tpos, bar - tpos));
      if (tag.empty()) {
        throw PackError(origin + ": empty tag in POS_CONSTRAINT '" + std::string(item) + "'");
      }
      c.tags.emplace_back(tag);
      tpos = bar + 1;
    }
    out.push_back(std::move(c));
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PackError(path.string() + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<fs::path> files_with_extension(const fs::path& dir, std::string_view ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void read_patterns(const fs::path& file, PackSource& source) {
  const std::string name = file.stem().string();
  auto& alternatives = source.pattern_resources[name];
  std::set<std::string> seen;
  const auto lines = read_lines(file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = file.string() + ":" + std::to_string(i + 1);
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.starts_with("//")) continue;
    std::string_view marker;
    for (std::size_t pos = line.find("//"); pos != std::string_view::npos;
         pos = line.find("//", pos + 2)) {
      if (line[pos - 1] == ' ' || line[pos - 1] == '\t') {
        marker = trim(line.substr(pos + 2));
        line = trim(line.substr(0, pos));
        break;
      }
    }
    const std::string alternative(line);
    if (!seen.insert(alternative).second) {
      source.warnings.push_back(where + ": duplicate alternative '" + alternative +
                                "' in pattern resource '" + name + "' dropped");
      continue;
    }
    alternatives.push_back(alternative);
    if (marker.starts_with("ext:")) {
      source.resource_extensions.push_back(
          {name, alternative, std::string(trim(marker.substr(4)))});
    }
  }
  if (alternatives.empty()) {
    throw PackError(file.string() + ": pattern resource '" + name + "' has no alternatives");
  }
}

void read_norms(const fs::path& file, PackSource& source) {
  const std::string name = file.stem().string();
  auto& table = source.norm_resources[name];
  const auto lines = read_lines(file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = file.string() + ":" + std::to_string(i + 1);
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.starts_with("//")) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw PackError(where + ": expected key,value");
    }
    std::string key(line.substr(0, comma));
    std::string value(line.substr(comma + 1));
    if (key.empty()) throw PackError(where + ": empty key");
    auto [it, inserted] = table.emplace(key, value);
    if (!inserted) {
      if (it->second != value) {
        throw PackError(where + ": key '" + key + "' maps to both '" + it->second +
                        "' and '" + value + "'");
      }
      source.warnings.push_back(where + ": duplicate key '" + key + "' in '" + name + "'");
    }
  }
}

void read_meta(const fs::path& file, PackSource& source) {
  const auto lines = read_lines(file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.starts_with("//") || line.starts_with('#')) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw PackError(file.string() + ":" + std::to_string(i + 1) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string value(trim(line.substr(eq + 1)));
    if (key == "name") {
      source.metadata.name = value;
    } else if (key == "version") {
      source.metadata.version = value;
    } else if (key == "note") {
      source.metadata.notes.push_back(value);
    } else {
      throw PackError(file.string() + ":" + std::to_string(i + 1) + ": unknown key '" +
                      std::string(key) + "'");
    }
  }
}

}  // namespace

const PackMetadata& RulePack::metadata() const { return compiled_->source.metadata; }
const std::map<std::string, std::vector<std::string>>& RulePack::pattern_resources() const {
  return compiled_->source.pattern_resources;
}
const std::map<std::string, std::map<std::string, std::string>>& RulePack::norm_resources()
    const {
  return compiled_->source.norm_resources;
}
const std::vector<Rule>& RulePack::rules() const { return compiled_->source.rules; }
const std::vector<ResourceExtension>& RulePack::resource_extensions() const {
  return compiled_->source.resource_extensions;
}
const std::vector<std::string>& RulePack::warnings() const {
  return compiled_->source.warnings;
}

const Rule* RulePack::find_rule(std::string_view name) const {
  auto it = compiled_->index.find(std::string(name));
  return it == compiled_->index.end() ? nullptr : &compiled_->source.rules[it->second];
}

const std::string& RulePack::expanded_extraction(std::size_t rule_index) const {
  return compiled_->rules.at(rule_index).expanded;
}

std::string interpolate(std::string_view extraction,
                        const std::map<std::string, std::vector<std::string>>& resources,
                        std::size_t limit) {
  Interpolator interpolator(resources, limit);
  return interpolator.expand(extraction, "extraction");
}

Rule parse_rule_line(std::string_view line, Polarity polarity, TimexType type,
                     const std::string& origin) {
  Rule rule;
  rule.polarity = polarity;
  rule.type = type;
  rule.origin = origin;
  std::set<std::string> seen;
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> void { throw PackError(origin + ": " + what); };
  while (true) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    const std::size_t key_start = pos;
    while (pos < line.size() && (is_ident_char(line[pos]))) ++pos;
    const std::string key(line.substr(key_start, pos - key_start));
    if (key.empty()) fail("unexpected character '" + std::string(1, line[pos]) + "'");
    if (!seen.insert(key).second) fail("duplicate attribute " + key);
    if (pos >= line.size() || line[pos] != '=') {
      if (key == "DISABLED_BY_DEFAULT") {
        rule.enabled_by_default = false;
        continue;
      }
      fail("attribute " + key + " needs a quoted value");
    }
    ++pos;
    if (pos >= line.size() || line[pos] != '"') fail("attribute " + key + " needs a quoted value");
    ++pos;
    // the value ends at a quote followed by whitespace, a comma, or end of line
    std::size_t end = pos;
    while (true) {
      end = line.find('"', end);
      if (end == std::string_view::npos) fail("unterminated value for " + key);
      if (end + 1 == line.size() || line[end + 1] == ' ' || line[end + 1] == '\t' ||
          line[end + 1] == ',') {
        break;
      }
      ++end;
    }
    const std::string value(line.substr(pos, end - pos));
    pos = end + 1;
    if (key == "RULENAME") {
      rule.name = value;
    } else if (key == "EXTRACTION") {
      rule.extraction = value;
    } else if (key == "NORM_VALUE") {
      rule.norm_value = value;
    } else if (key == "NORM_FREQ") {
      rule.norm_freq = value;
    } else if (key == "NORM_QUANT") {
      rule.norm_quant = value;
    } else if (key == "NORM_MOD") {
      rule.norm_mod = value;
    } else if (key == "POS_CONSTRAINT") {
      rule.pos_constraints = parse_pos_constraints(value, origin);
    } else if (key == "PRIORITY") {
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), rule.priority);
      if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
        fail("PRIORITY '" + value + "' is not an integer");
      }
    } else if (key == "EXT_CLASS") {
      rule.ext_class = value;
    } else {
      fail("unknown attribute " + key);
    }
  }
  if (rule.name.empty()) fail("missing RULENAME");
  if (rule.extraction.empty()) fail("rule '" + rule.name + "' has no EXTRACTION");
  if (polarity == Polarity::Positive && rule.norm_value.empty()) {
    fail("rule '" + rule.name + "' has no NORM_VALUE");
  }
  if (polarity == Polarity::Negative &&
      !(rule.norm_value.empty() && rule.norm_freq.empty() && rule.norm_quant.empty() &&
        rule.norm_mod.empty())) {
    fail("negative rule '" + rule.name + "' must not carry normalization attributes");
  }
  return rule;
}

RulePack compile_pack(PackSource source, const CompileOptions& options) {
  auto compiled = std::make_shared<detail::CompiledPack>();

  for (const auto& [name, alternatives] : source.pattern_resources) {
    if (alternatives.empty()) {
      throw PackError("pattern resource '" + name + "' has no alternatives");
    }
    std::set<std::string_view> seen;
    for (const auto& alt : alternatives) {
      if (alt.empty()) throw PackError("pattern resource '" + name + "' has an empty alternative");
      if (!seen.insert(alt).second) {
        throw PackError("pattern resource '" + name + "' repeats alternative '" + alt + "'");
      }
    }
  }

  Interpolator interpolator(source.pattern_resources, options.expansion_limit);
  // Rejects cycles even in resources no rule uses.
  for (const auto& [name, alternatives] : source.pattern_resources) {
    interpolator.resource(name);
  }

  std::set<std::string> used_patterns;
  std::set<std::string> used_norms;
  for (std::size_t i = 0; i < source.rules.size(); ++i) {
    const Rule& rule = source.rules[i];
    if (auto [it, inserted] = compiled->index.emplace(rule.name, i); !inserted) {
      throw PackError(rule.origin + ": duplicate rule name '" + rule.name +
                      "' (first defined at " + source.rules[it->second].origin + ")");
    }
    detail::CompiledRule cr;
    cr.expanded = interpolator.expand(rule.extraction, rule.origin + ": rule '" + rule.name + "'");
    collect_references(rule.extraction, source.pattern_resources, used_patterns);
    try {
      cr.regex = boost::regex(cr.expanded, boost::regex::perl);
      cr.anchored = boost::regex("(?:" + cr.expanded + ")\\z", boost::regex::perl);
    } catch (const boost::regex_error& e) {
      throw PackError(rule.origin + ": rule '" + rule.name + "': invalid regex: " + e.what());
    }
    const std::size_t groups = cr.regex.mark_count();
    for (const auto& c : rule.pos_constraints) {
      if (c.group > groups) {
        throw PackError(rule.origin + ": rule '" + rule.name + "': POS constraint on group " +
                        std::to_string(c.group) + " but the extraction has only " +
                        std::to_string(groups) + " groups");
      }
    }
    auto parse = [&](const std::string& text) {
      return TemplateParser(text, rule, groups, source.norm_resources, used_norms).parse();
    };
    cr.value = parse(rule.norm_value);
    cr.freq = parse(rule.norm_freq);
    cr.quant = parse(rule.norm_quant);
    cr.mod = parse(rule.norm_mod);
    compiled->rules.push_back(std::move(cr));
  }

  for (const auto& [name, alternatives] : source.pattern_resources) {
    if (!used_patterns.contains(name)) {
      source.warnings.push_back("pattern resource '" + name + "' is not used by any rule");
    }
  }
  for (const auto& [name, table] : source.norm_resources) {
    if (!used_norms.contains(name)) {
      source.warnings.push_back("norm resource '" + name + "' is not used by any rule");
    }
  }

  compiled->source = std::move(source);
  RulePack pack;
  pack.compiled_ = std::move(compiled);
  return pack;
}

RulePack load_rulepack(const std::filesystem::path& directory, const CompileOptions& options) {
  if (!fs::is_directory(directory)) {
    throw PackError(directory.string() + ": not a rule-pack directory");
  }
  PackSource source;
  source.metadata.name = directory.filename().string();
  if (source.metadata.name.empty()) source.metadata.name = directory.parent_path().filename().string();
  if (fs::exists(directory / "pack.meta")) read_meta(directory / "pack.meta", source);
  for (const auto& file : files_with_extension(directory / "patterns", ".txt")) {
    read_patterns(file, source);
  }
  for (const auto& file : files_with_extension(directory / "norms", ".txt")) {
    read_norms(file, source);
  }
  const auto rule_files = files_with_extension(directory / "rules", ".rules");
  if (rule_files.empty()) {
    throw PackError(directory.string() + ": no rules/*.rules files");
  }
  // Fixed kind order keeps pack order independent of directory listing.
  static const std::vector<std::pair<std::string, std::optional<TimexType>>> kinds = {
      {"date", TimexType::Date},         {"time", TimexType::Time},
      {"duration", TimexType::Duration}, {"set", TimexType::Set},
      {"negative", std::nullopt}};
  for (const auto& file : rule_files) {
    const std::string stem = file.stem().string();
    if (std::none_of(kinds.begin(), kinds.end(),
                     [&](const auto& k) { return k.first == stem; })) {
      throw PackError(file.string() + ": unknown rule kind '" + stem +
                      "' (expected date, time, duration, set or negative)");
    }
  }
  for (const auto& [kind, type] : kinds) {
    const fs::path file = directory / "rules" / (kind + ".rules");
    if (!fs::exists(file)) continue;
    const auto lines = read_lines(file);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string_view line = trim(lines[i]);
      if (line.empty() || line.starts_with("//")) continue;
      const std::string origin = file.string() + ":" + std::to_string(i + 1);
      source.rules.push_back(parse_rule_line(
          line, type ? Polarity::Positive : Polarity::Negative, type.value_or(TimexType::Date),
          origin));
    }
  }
  return compile_pack(std::move(source), options);
}

}  // namespace temponym
