#include "temponym/harvest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "temponym/error.hpp"
#include "temponym/preprocess.hpp"
#include "xml.hpp"

namespace temponym {
namespace {

std::string squeeze(std::string_view text) {
  std::string out = normalize_whitespace(text).text;
  if (!out.empty() && out.front() == ' ') out.erase(0, 1);
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

void collect(const xml::Node& node, const std::string& source, const std::string& language,
             std::vector<GoldTimex>& out) {
  for (const xml::Node& child : node.children) {
    if (child.is_text) continue;
    if (child.name == "TIMEX3") {
      GoldTimex g;
      g.source = source;
      g.surface = squeeze(child.flattened_text());
      if (const auto* t = child.attribute("type")) g.type = *t;
      if (const auto* v = child.attribute("value")) g.value = *v;
      g.language = language;
      // empty elements (e.g. document creation times) carry no surface
      if (!g.surface.empty()) out.push_back(std::move(g));
    }
    collect(child, source, language, out);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<GoldTimex> parse_timeml(std::string_view xml_text, const std::string& source,
                                    const std::string& language) {
  const xml::Node root = xml::parse(xml_text, source);
  std::string lang = language;
  if (lang.empty()) {
    if (const auto* l = root.attribute("xml:lang")) {
      lang = *l;
    } else if (const auto* l2 = root.attribute("lang")) {
      lang = *l2;
    }
  }
  std::vector<GoldTimex> out;
  if (root.name == "TIMEX3" && !squeeze(root.flattened_text()).empty()) {
    // degenerate document consisting of a single expression
    out.push_back({source, squeeze(root.flattened_text()),
                   root.attribute("type") ? *root.attribute("type") : "",
                   root.attribute("value") ? *root.attribute("value") : "", lang});
  }
  collect(root, source, lang, out);
  return out;
}

std::vector<GoldTimex> parse_timeml_file(const std::filesystem::path& path,
                                         const std::string& language) {
  return parse_timeml(read_file(path), path.string(), language);
}

std::string timeml_text(std::string_view xml_text, const std::string& source) {
  return xml::parse(xml_text, source).flattened_text();
}

std::vector<ProbeResult> probe(const RulePack& pack, std::span<const std::string> expressions,
                               const RuleSelection& selection) {
  std::vector<ProbeResult> results;
  results.reserve(expressions.size());
  for (const std::string& e : expressions) {
    ProbeResult r;
    r.expression = e;
    r.annotations = match_document(pack, preprocess_single_sentence(e), selection);
    r.matched = !r.annotations.empty();
    results.push_back(std::move(r));
  }
  std::stable_partition(results.begin(), results.end(),
                        [](const ProbeResult& r) { return !r.matched; });
  return results;
}

std::string format_probe_report(std::span<const ProbeResult> results) {
  std::ostringstream out;
  std::size_t unmatched = 0;
  for (const auto& r : results) unmatched += r.matched ? 0 : 1;
  out << "# " << unmatched << " of " << results.size() << " expressions unmatched\n";
  for (const auto& r : results) {
    if (!r.matched) {
      out << "MISS\t" << r.expression << "\n";
      continue;
    }
    out << "HIT\t" << r.expression;
    for (const auto& a : r.annotations) {
      out << "\t[" << a.surface << "] " << to_string(a.type) << " " << a.value << " ("
          << a.rule_name << ")";
    }
    out << "\n";
  }
  return out.str();
}

TranslationOutcome IdentityClient::translate(std::string_view expression) {
  return {std::string(expression), {}};
}

DictionaryClient::DictionaryClient(std::map<std::string, std::string> table)
    : table_(std::move(table)) {}

DictionaryClient DictionaryClient::from_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open dictionary");
  std::map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected source<TAB>target");
    }
    table.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return DictionaryClient(std::move(table));
}

TranslationOutcome DictionaryClient::translate(std::string_view expression) {
  const auto it = table_.find(std::string(expression));
  if (it == table_.end()) return {std::nullopt, "no dictionary entry"};
  return {it->second, {}};
}

std::vector<Translation> translate(std::span<const std::string> expressions,
                                   TranslationClient& client) {
  std::vector<Translation> out;
  out.reserve(expressions.size());
  for (const std::string& e : expressions) {
    Translation t{e, e, false, {}};
    try {
      TranslationOutcome r = client.translate(e);
      if (r.text) {
        t.text = std::move(*r.text);
        t.translated = true;
      }
      t.error = std::move(r.error);
    } catch (const std::exception& ex) {
      t.error = ex.what();
    } catch (...) {
      t.error = "unknown failure";
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace temponym
