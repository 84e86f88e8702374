#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "temponym/engine.hpp"
#include "temponym/rulepack.hpp"
#include "temponym/timex.hpp"

namespace temponym {

struct GoldTimex {
  std::string source;
  std::string surface;
  std::string type;
  std::string value;
  std::string language;

  bool operator==(const GoldTimex&) const = default;
};

// Collects every <TIMEX3> element (at any depth) with its type and value
// attributes; elements without text are skipped. Markup nested inside an
// element is flattened to its text and whitespace is normalized. The language comes from an xml:lang or lang
// attribute on the root element unless `language` is given. Throws
// InputError with the line number for malformed XML.
std::vector<GoldTimex> parse_timeml(std::string_view xml, const std::string& source,
                                    const std::string& language = {});

std::vector<GoldTimex> parse_timeml_file(const std::filesystem::path& path,
                                         const std::string& language = {});

// Text content of a TimeML document with all markup removed.
std::string timeml_text(std::string_view xml, const std::string& source);

struct ProbeResult {
  std::string expression;
  bool matched = false;
  std::vector<Timex3Annotation> annotations;
};

// Tags every expression as an isolated one-sentence document without a
// creation time. Unmatched expressions come first; input order is kept
// within both groups.
std::vector<ProbeResult> probe(const RulePack& pack, std::span<const std::string> expressions,
                               const RuleSelection& selection = {});

std::string format_probe_report(std::span<const ProbeResult> results);

struct TranslationOutcome {
  std::optional<std::string> text;  // nullopt: no translation available
  std::string error;
};

// Translation backends are used sequentially; implementations need not be
// thread-safe.
class TranslationClient {
 public:
  virtual ~TranslationClient() = default;
  virtual TranslationOutcome translate(std::string_view expression) = 0;
};

class IdentityClient final : public TranslationClient {
 public:
  TranslationOutcome translate(std::string_view expression) override;
};

// Looks expressions up in a source -> target table.
class DictionaryClient final : public TranslationClient {
 public:
  explicit DictionaryClient(std::map<std::string, std::string> table);
  // Reads `source<TAB>target` lines; '#' starts a comment line.
  static DictionaryClient from_tsv(const std::filesystem::path& path);

  TranslationOutcome translate(std::string_view expression) override;

 private:
  std::map<std::string, std::string> table_;
};

struct Translation {
  std::string source;
  std::string text;  // the source itself when untranslated
  bool translated = false;
  std::string error;
};

// Order-preserving, one output per input. Client failures (including
// exceptions) are recorded per item and the item is passed through.
std::vector<Translation> translate(std::span<const std::string> expressions,
                                   TranslationClient& client);

}  // namespace temponym
