#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "temponym/date.hpp"
#include "temponym/document.hpp"
#include "temponym/eval.hpp"
#include "temponym/timex.hpp"

namespace temponym {

enum class InputFormat { Plain, Pretokenized, TimeML };

// Loads documents from files or directories. Directories are walked
// recursively in sorted order, picking *.txt (plain), *.tsv (pretokenized)
// or *.xml/*.tml (TimeML). A file below a directory root gets the id
// "<relative path>" and the sample label of its first sub-directory (or the
// root's own name); a file given directly is labeled by its parent
// directory. Plain files may start with a `#dct=YYYY-MM-DD` line.
// `dct_override`, when set, replaces every document's creation time.
// Throws InputError on unreadable or malformed files.
std::vector<Document> load_corpus(std::span<const std::filesystem::path> inputs,
                                  InputFormat format,
                                  const std::optional<CalendarDate>& dct_override = std::nullopt);

Document read_plain_document(std::istream& in, const std::string& id);

// Standoff record stream: JSON Lines with doc, sample, begin, end (UTF-8 byte
// offsets into the normalized text), surface, type, value, freq, quant, mod
// and rule_name.
void write_standoff(std::ostream& out, const Document& doc,
                    std::span<const Timex3Annotation> annotations);
CorpusRun read_standoff(std::istream& in, const std::string& source);

// Normalized text with <TIMEX3 tid="tN" type=".." value="..">..</TIMEX3>
// elements embedded.
void write_inline_timeml(std::ostream& out, const Document& doc,
                         std::span<const Timex3Annotation> annotations);

// Aligned human-readable listing.
void write_annotation_table(std::ostream& out, const Document& doc,
                            std::span<const Timex3Annotation> annotations);

std::string xml_escape(std::string_view text);

}  // namespace temponym
