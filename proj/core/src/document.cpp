#include "temponym/document.hpp"

#include <algorithm>

#include "temponym/utf8.hpp"

namespace temponym {

std::span<const Token> Document::sentence_tokens(std::size_t index) const {
  const Span& sentence = sentences.at(index);
  auto first = std::lower_bound(
      tokens.begin(), tokens.end(), sentence.begin,
      [](const Token& t, std::size_t offset) { return t.span.begin < offset; });
  auto last = std::lower_bound(
      first, tokens.end(), sentence.end,
      [](const Token& t, std::size_t offset) { return t.span.begin < offset; });
  return {first, last};
}

std::string check_document(const Document& doc) {
  const std::size_t n = doc.text.size();
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Span& s = doc.sentences[i];
    if (s.empty() || s.end > n) return "sentence out of bounds or empty";
    if (i > 0 && doc.sentences[i - 1].end > s.begin) {
      return "sentences overlap or are unsorted";
    }
  }
  std::size_t sentence = 0;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.span.empty() || t.span.end > n) return "token out of bounds or empty";
    if (i > 0 && doc.tokens[i - 1].span.end > t.span.begin) {
      return "tokens overlap or are unsorted";
    }
    if (doc.slice(t.span) != t.surface) return "token surface mismatch";
    while (sentence < doc.sentences.size() &&
           doc.sentences[sentence].end <= t.span.begin) {
      ++sentence;
    }
    if (sentence == doc.sentences.size() ||
        !doc.sentences[sentence].contains(t.span)) {
      return "token outside every sentence";
    }
  }
  bool previous_space = false;
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t len = 0;
    const bool space = utf8::is_space(utf8::decode(doc.text, pos, len));
    if (space && previous_space) return "whitespace run in text";
    previous_space = space;
    pos += len;
  }
  return {};
}

}  // namespace temponym
