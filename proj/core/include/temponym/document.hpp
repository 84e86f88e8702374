#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "temponym/date.hpp"

namespace temponym {

// Half-open byte range [begin, end) into a UTF-8 string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool empty() const { return begin >= end; }
  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool overlaps(const Span& other) const {
    return begin < other.end && other.begin < end;
  }
  std::size_t overlap(const Span& other) const {
    const auto lo = begin > other.begin ? begin : other.begin;
    const auto hi = end < other.end ? end : other.end;
    return hi > lo ? hi - lo : 0;
  }

  auto operator<=>(const Span&) const = default;
};

struct Token {
  Span span;
  std::string surface;
  std::string pos;  // STTS tag, "UNK", or empty before tagging
};

// Text plus sentence, token and POS layers. All offsets are UTF-8 byte
// offsets into `text`.
struct Document {
  std::string text;
  std::vector<Span> sentences;
  std::vector<Token> tokens;
  std::optional<CalendarDate> dct;
  std::string source_id;
  // Corpus sample label (e.g. the sub-corpus a document was drawn from).
  std::string sample;

  // Tokens lying inside sentence `index`.
  std::span<const Token> sentence_tokens(std::size_t index) const;

  std::string_view slice(const Span& span) const {
    return std::string_view(text).substr(span.begin, span.length());
  }
};

// Checks the layer invariants: sorted, disjoint, in bounds, every token in
// exactly one sentence, no whitespace runs. Returns a description of the
// first violation, or an empty string.
std::string check_document(const Document& doc);

}  // namespace temponym
