#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "temponym/date.hpp"
#include "temponym/document.hpp"

namespace temponym {

struct NormalizedText {
  std::string text;
  // offset_map[i] is the normalized offset of raw byte i; it has
  // raw.size() + 1 entries so that the end offset maps as well.
  std::vector<std::size_t> offset_map;
};

// Collapses every maximal whitespace run (ASCII and Unicode spaces) into a
// single U+0020.
NormalizedText normalize_whitespace(std::string_view raw);

// Rule-based sentence splitting and tokenization of whitespace-normalized
// text. Digit groups joined by '.', ',' or ':' ("21.30", "3,50") stay one
// token; known abbreviations keep their trailing period.
Document segment_and_tokenize(std::string_view normalized);

struct PretokenizedRecord {
  std::string surface;
  std::string pos;
  std::size_t sentence_index = 0;

  bool operator==(const PretokenizedRecord&) const = default;
};

// Rebuilds a Document from external tokenizer/tagger output. Surfaces are
// joined with single spaces. Throws InputError on decreasing sentence
// indices or surfaces that are empty or contain whitespace.
Document ingest_pretokenized(std::span<const PretokenizedRecord> records,
                             std::optional<CalendarDate> dct = std::nullopt);

// Inverse of ingest_pretokenized; sentence indices are renumbered 0..n-1.
std::vector<PretokenizedRecord> export_pretokenized(const Document& doc);

// Coarse STTS tagging from a closed-class lexicon plus shape and suffix
// heuristics. Every token receives a tag; "UNK" when nothing applies.
Document tag_pos_heuristic(Document doc);

// normalize_whitespace + segment_and_tokenize + tag_pos_heuristic.
Document preprocess(std::string_view raw,
                    std::optional<CalendarDate> dct = std::nullopt);

// Tokenizes and tags `text` as exactly one sentence, regardless of internal
// punctuation.
Document preprocess_single_sentence(std::string_view raw);

// Reads the `surface<TAB>pos<TAB>sentence_index` format. Blank lines separate
// documents; a `#dct=YYYY-MM-DD` line sets the creation time of the document
// that follows. Documents are numbered `<source>#<n>`.
std::vector<Document> read_pretokenized_tsv(std::istream& in,
                                            const std::string& source);

void write_pretokenized_tsv(std::ostream& out, const Document& doc);

}  // namespace temponym
