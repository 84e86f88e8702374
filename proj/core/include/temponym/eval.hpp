#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "temponym/document.hpp"
#include "temponym/timex.hpp"

namespace temponym {

enum class DiffCategory { Unchanged, Novel, Extended, Reduced, Shifted, Missing };

std::string_view to_string(DiffCategory category);

// One classified span pair. Novel pairs have no `a`, missing pairs no `b`.
struct SpanPair {
  std::optional<Span> a;
  std::optional<Span> b;
  DiffCategory category = DiffCategory::Unchanged;

  bool operator==(const SpanPair&) const = default;
};

struct DiffCounts {
  std::size_t total_a = 0;
  std::size_t total_b = 0;
  std::size_t unchanged = 0;
  std::size_t novel = 0;
  std::size_t extended = 0;
  std::size_t reduced = 0;
  std::size_t shifted = 0;
  std::size_t missing = 0;

  DiffCounts& operator+=(const DiffCounts& other);
  void add(DiffCategory category);
  bool operator==(const DiffCounts&) const = default;
};

// Pairs spans of run A with overlapping spans of run B and classifies each
// pair: identical -> unchanged, B strictly containing A -> extended, B
// strictly inside A -> reduced, other overlaps -> shifted. Pairing is greedy
// over overlapping pairs ordered by leftmost start, then largest overlap, so
// every span is used at most once; unpaired B spans are novel, unpaired A
// spans missing. Throws InputError if either side overlaps itself.
std::vector<SpanPair> classify_pair(std::span<const Span> a, std::span<const Span> b);

DiffCounts count_pairs(std::span<const SpanPair> pairs);

// Annotations of one tagger run over one document.
struct RunDocument {
  std::string doc_id;
  std::string sample;
  std::vector<Timex3Annotation> annotations;
};

using CorpusRun = std::vector<RunDocument>;

struct DocumentPair {
  std::string doc_id;
  std::string sample;
  SpanPair pair;
};

struct DiffReport {
  std::map<std::string, DiffCounts> per_sample;
  DiffCounts total;
  // Every classified pair, ordered by document then span.
  std::vector<DocumentPair> pairs;
};

// Throws InputError listing the symmetric difference when the two runs do
// not cover the same documents.
DiffReport diff_corpus(const CorpusRun& a, const CorpusRun& b);

struct SampleStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;  // punctuation included

  SampleStats& operator+=(const SampleStats& other);
  bool operator==(const SampleStats&) const = default;
};

struct CorpusStats {
  std::map<std::string, SampleStats> per_sample;
  SampleStats total;
};

CorpusStats corpus_stats(std::span<const Document> docs);

struct PopulationItem {
  std::string doc_id;
  std::string sample;
  Timex3Annotation annotation;
};

struct InspectionSample {
  std::size_t sample_id = 0;
  std::string doc_id;
  std::string sample;
  Span span;
  std::string surface;
  std::string left_context;
  std::string right_context;
  std::string rule_name;
  std::optional<bool> label;
};

// Draws `n` items without replacement. The population is first sorted by
// (document, span, rule) so the draw depends only on (seed, population as a
// set); the result is returned in that sorted order with ids 1..n. Context
// windows are `window` code points wide, taken from `texts` (doc id -> text).
// Throws InputError if n exceeds the population size.
std::vector<InspectionSample> sample_for_inspection(
    std::vector<PopulationItem> population, std::size_t n, std::uint64_t seed,
    const std::map<std::string, std::string>& texts = {}, std::size_t window = 60);

void write_inspection_tsv(std::ostream& out, std::span<const InspectionSample> samples);

// Reads a (possibly hand-labeled) inspection TSV. Accepted labels:
// true/false, yes/no, 1/0 (any case) or empty.
std::vector<InspectionSample> read_inspection_tsv(std::istream& in, const std::string& source);

struct LabelCounts {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t unlabeled = 0;

  bool operator==(const LabelCounts&) const = default;
};

struct LabelSummary {
  std::map<std::string, LabelCounts> per_sample;
  LabelCounts total;
};

LabelSummary summarize_labels(std::span<const InspectionSample> samples);

// Plain-text tables.
std::string format_stats_table(const CorpusStats& stats);
std::string format_totals_table(const DiffReport& report, std::string_view name_a,
                                std::string_view name_b);
std::string format_coverage_table(const DiffReport& report);
std::string format_label_table(const LabelSummary& summary);

// Machine-readable report: one JSON object per sample plus a "sum" line.
void write_report_jsonl(std::ostream& out, const DiffReport& report);
void write_stats_jsonl(std::ostream& out, const CorpusStats& stats);

}  // namespace temponym
