#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "temponym/date.hpp"
#include "temponym/document.hpp"
#include "temponym/rulepack.hpp"
#include "temponym/timex.hpp"

namespace temponym {

// Which rules take part in a run. Rules marked DISABLED_BY_DEFAULT join only
// when listed in `enabled`; `disabled` wins over both.
struct RuleSelection {
  std::set<std::string> disabled;
  std::set<std::string> enabled;

  bool active(const Rule& rule) const;
};

struct Normalization {
  std::string value;
  std::string freq;
  std::string quant;
  std::string mod;
};

// Instantiates the normalization templates of a positive rule. groups[0] is
// the whole match, groups[i] the text of capture group i (empty when the
// group did not participate). Relative references are anchored to `dct`
// when given and otherwise emitted in their UNDEF form. Throws
// NormalizationError on lookup misses and on values outside the grammar.
Normalization normalize_match(const RulePack& pack, std::size_t rule_index,
                              std::span<const std::string> groups,
                              const std::optional<CalendarDate>& dct);

// Tags one document. Per sentence: every active positive rule is matched at
// every token start (matches must end on a token end and satisfy POS
// constraints); overlapping positive candidates are resolved by longest
// span, then higher priority, then pack order; survivors that intersect a
// negative-rule match are dropped; the rest are normalized. The result is
// sorted by span start and pairwise disjoint.
std::vector<Timex3Annotation> match_document(const RulePack& pack,
                                             const Document& doc,
                                             const RuleSelection& selection = {});

// Tags documents on up to `jobs` threads. The result is index-aligned with
// `docs` and independent of scheduling.
std::vector<std::vector<Timex3Annotation>> tag_corpus(
    const RulePack& pack, std::span<const Document> docs,
    const RuleSelection& selection = {}, unsigned jobs = 1);

}  // namespace temponym
