#include "temponym/preprocess.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "temponym/error.hpp"
#include "temponym/utf8.hpp"

namespace temponym {
namespace {

// Abbreviations that keep their period. Matched case-sensitively against the
// word preceding a '.'.
const std::unordered_set<std::string_view> kAbbreviations = {
    "Abb", "Abs",  "Aug", "Bd",   "bzw",  "ca",   "Dez",  "Dr",  "etc",
    "evtl", "Feb", "geb", "gest", "ggf",  "Hr",   "Hrsg", "inkl", "Jan",
    "Jh",  "Jhd",  "Kap", "max",  "min",  "Mio",  "Mrd",  "Nov", "Nr",
    "Okt", "Prof", "S",   "Sept", "sog",  "St",   "Str",  "Tab", "usw",
    "vgl", "Fr",   "Frl", "Bhf",  "Jr",   "sen",  "jun",  "Verf"};

// Dotted multi-part abbreviations, kept as one token.
constexpr std::array<std::string_view, 12> kDottedAbbreviations = {
    "z.B.", "u.a.", "d.h.", "o.ä.", "u.ä.", "v.a.",
    "z.T.", "i.d.R.", "n.Chr.", "v.Chr.", "s.o.", "s.u."};

struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint at(std::string_view text, std::size_t pos) {
  std::size_t len = 0;
  const char32_t cp = utf8::decode(text, pos, len);
  return {cp, len};
}

bool is_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_number_token(std::string_view s) {
  if (s.empty() || s.front() < '0' || s.front() > '9') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == ',' || c == ':';
  });
}

bool dotted_abbreviation_at(std::string_view text, std::size_t pos,
                            std::size_t& length) {
  for (std::string_view abbr : kDottedAbbreviations) {
    if (text.substr(pos, abbr.size()) != abbr) continue;
    const std::size_t end = pos + abbr.size();
    if (end < text.size() && utf8::is_word(at(text, end).value)) continue;
    length = abbr.size();
    return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const CodePoint cp = at(text, pos);
    if (utf8::is_space(cp.value)) {
      pos += cp.length;
      continue;
    }
    const std::size_t begin = pos;
    std::size_t abbr_len = 0;
    if (dotted_abbreviation_at(text, pos, abbr_len)) {
      pos += abbr_len;
    } else if (utf8::is_word(cp.value)) {
      bool last_digit = false;
      while (pos < text.size()) {
        const CodePoint c = at(text, pos);
        if (utf8::is_word(c.value)) {
          last_digit = utf8::is_digit(c.value);
          pos += c.length;
          continue;
        }
        // digit [.,:] digit stays inside the token
        if (last_digit && (c.value == U'.' || c.value == U',' || c.value == U':') &&
            pos + 1 < text.size() && utf8::is_digit(at(text, pos + 1).value)) {
          pos += 1;
          continue;
        }
        break;
      }
      if (pos < text.size() && text[pos] == '.' &&
          kAbbreviations.contains(text.substr(begin, pos - begin))) {
        pos += 1;
      }
    } else {
      pos += cp.length;
    }
    tokens.push_back(
        {{begin, pos}, std::string(text.substr(begin, pos - begin)), {}});
  }
  return tokens;
}

bool opens_sentence(const Token& token) {
  std::string_view s = token.surface;
  std::size_t pos = 0;
  // skip opening quotes and brackets
  while (pos < s.size()) {
    const CodePoint cp = at(s, pos);
    if (utf8::is_word(cp.value)) {
      return utf8::is_upper(cp.value) || utf8::is_digit(cp.value);
    }
    pos += cp.length;
  }
  return false;
}

bool ends_sentence(const std::vector<Token>& tokens, std::size_t i) {
  const Token& t = tokens[i];
  if (t.surface != "." && t.surface != "!" && t.surface != "?") return false;
  if (i + 1 >= tokens.size()) return false;
  const Token& next = tokens[i + 1];
  if (next.span.begin == t.span.end) return false;  // needs a space
  if (!opens_sentence(next)) return false;
  if (t.surface == "." && i > 0) {
    const Token& prev = tokens[i - 1];
    // "am 3. Mai": short numbers before a period are ordinals
    if (prev.span.end == t.span.begin && is_digits(prev.surface) &&
        prev.surface.size() <= 2) {
      return false;
    }
  }
  return true;
}

// Closed-class lexicon (lower-cased keys).
const std::unordered_map<std::string_view, std::string_view>& lexicon() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"der", "ART"},     {"die", "ART"},     {"das", "ART"},
      {"den", "ART"},     {"dem", "ART"},     {"des", "ART"},
      {"ein", "ART"},     {"eine", "ART"},    {"einen", "ART"},
      {"einem", "ART"},   {"einer", "ART"},   {"eines", "ART"},
      {"in", "APPR"},     {"im", "APPR"},     {"am", "APPR"},
      {"an", "APPR"},     {"auf", "APPR"},    {"bei", "APPR"},
      {"beim", "APPR"},   {"mit", "APPR"},    {"nach", "APPR"},
      {"von", "APPR"},    {"vom", "APPR"},    {"zu", "APPR"},
      {"zum", "APPR"},    {"zur", "APPR"},    {"seit", "APPR"},
      {"vor", "APPR"},    {"über", "APPR"},   {"unter", "APPR"},
      {"um", "APPR"},     {"gegen", "APPR"},  {"ab", "APPR"},
      {"bis", "APPR"},    {"für", "APPR"},    {"durch", "APPR"},
      {"ohne", "APPR"},   {"ins", "APPR"},    {"ans", "APPR"},
      {"während", "APPR"}, {"und", "KON"},    {"oder", "KON"},
      {"aber", "KON"},    {"sondern", "KON"}, {"ich", "PPER"},
      {"du", "PPER"},     {"er", "PPER"},     {"sie", "PPER"},
      {"es", "PPER"},     {"wir", "PPER"},    {"ihr", "PPER"},
      {"nun", "ADV"},     {"jetzt", "ADV"},   {"heute", "ADV"},
      {"morgen", "ADV"},  {"gestern", "ADV"}, {"dann", "ADV"},
      {"noch", "ADV"},    {"schon", "ADV"},   {"sehr", "ADV"},
      {"auch", "ADV"},    {"übermorgen", "ADV"}, {"täglich", "ADJD"},
      {"dass", "KOUS"},   {"weil", "KOUS"},   {"wenn", "KOUS"},
      {"als", "KOUS"},    {"ob", "KOUS"},     {"nicht", "PTKNEG"},
      {"ist", "VAFIN"},   {"war", "VAFIN"},   {"sind", "VAFIN"},
      {"waren", "VAFIN"}, {"hat", "VAFIN"},   {"hatte", "VAFIN"},
      {"haben", "VAFIN"}, {"wird", "VAFIN"},  {"wurde", "VAFIN"},
      {"denn", "KON"},    {"kam", "VVFIN"},   {"viele", "PIAT"},
      {"einige", "PIAT"}, {"mehrere", "PIAT"}, {"jeden", "PIAT"},
      {"jede", "PIAT"},   {"jedes", "PIAT"},
  };
  return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string heuristic_tag(const Token& token, bool sentence_initial) {
  const std::string_view surface = token.surface;
  if (is_number_token(surface)) return "CARD";
  const CodePoint first = at(surface, 0);
  if (!utf8::is_word(first.value)) {
    if (surface == "." || surface == "!" || surface == "?" || surface == ";" ||
        surface == ":") {
      return "$.";
    }
    if (surface == ",") return "$,";
    return "$(";
  }
  const std::string lower = utf8::to_lower(surface);
  const bool capitalized = utf8::is_upper(first.value);
  if (!capitalized || sentence_initial) {
    if (auto it = lexicon().find(lower); it != lexicon().end()) {
      return std::string(it->second);
    }
  }
  if (capitalized) return "NN";
  for (std::string_view stem : {"lich", "ig", "isch", "bar"}) {
    for (std::string_view ending : {"", "e", "en", "er", "es", "em"}) {
      std::string suffix(stem);
      suffix += ending;
      if (ends_with(lower, suffix)) return "ADJA";
    }
  }
  if (ends_with(lower, "en")) return "VVINF";
  if (ends_with(lower, "te") || ends_with(lower, "t")) return "VVFIN";
  return "UNK";
}

}  // namespace

NormalizedText normalize_whitespace(std::string_view raw) {
  NormalizedText out;
  out.text.reserve(raw.size());
  out.offset_map.resize(raw.size() + 1);
  bool in_run = false;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const CodePoint cp = at(raw, pos);
    if (utf8::is_space(cp.value)) {
      if (!in_run) {
        out.text.push_back(' ');
        in_run = true;
      }
      for (std::size_t i = 0; i < cp.length; ++i) {
        out.offset_map[pos + i] = out.text.size() - 1;
      }
    } else {
      in_run = false;
      for (std::size_t i = 0; i < cp.length; ++i) {
        out.offset_map[pos + i] = out.text.size() + i;
      }
      out.text.append(raw.substr(pos, cp.length));
    }
    pos += cp.length;
  }
  out.offset_map[raw.size()] = out.text.size();
  return out;
}

Document segment_and_tokenize(std::string_view normalized) {
  Document doc;
  doc.text = std::string(normalized);
  doc.tokens = tokenize(doc.text);
  std::size_t first = 0;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i + 1 == doc.tokens.size() || ends_sentence(doc.tokens, i)) {
      doc.sentences.push_back({doc.tokens[first].span.begin, doc.tokens[i].span.end});
      first = i + 1;
    }
  }
  return doc;
}

Document ingest_pretokenized(std::span<const PretokenizedRecord> records,
                             std::optional<CalendarDate> dct) {
  Document doc;
  doc.dct = dct;
  std::size_t sentence_begin = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PretokenizedRecord& r = records[i];
    if (r.surface.empty()) {
      throw InputError("record " + std::to_string(i) + ": empty surface");
    }
    for (std::size_t pos = 0; pos < r.surface.size();) {
      const CodePoint cp = at(r.surface, pos);
      if (utf8::is_space(cp.value)) {
        throw InputError("record " + std::to_string(i) +
                         ": surface contains whitespace");
      }
      pos += cp.length;
    }
    if (i > 0) {
      const std::size_t previous = records[i - 1].sentence_index;
      if (r.sentence_index < previous) {
        throw InputError("record " + std::to_string(i) +
                         ": sentence index decreases from " +
                         std::to_string(previous) + " to " +
                         std::to_string(r.sentence_index));
      }
      if (r.sentence_index != previous) {
        doc.sentences.push_back({sentence_begin, doc.text.size()});
      }
      doc.text.push_back(' ');
    }
    if (i == 0 || r.sentence_index != records[i - 1].sentence_index) {
      sentence_begin = doc.text.size();
    }
    const std::size_t begin = doc.text.size();
    doc.text += r.surface;
    doc.tokens.push_back({{begin, doc.text.size()}, r.surface, r.pos});
  }
  if (!records.empty()) doc.sentences.push_back({sentence_begin, doc.text.size()});
  return doc;
}

std::vector<PretokenizedRecord> export_pretokenized(const Document& doc) {
  std::vector<PretokenizedRecord> out;
  out.reserve(doc.tokens.size());
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const Token& t : doc.sentence_tokens(s)) {
      out.push_back({t.surface, t.pos, s});
    }
  }
  return out;
}

Document tag_pos_heuristic(Document doc) {
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto tokens = doc.sentence_tokens(s);
    const std::size_t offset =
        static_cast<std::size_t>(tokens.data() - doc.tokens.data());
    bool initial = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      Token& t = doc.tokens[offset + i];
      t.pos = heuristic_tag(t, initial);
      // opening punctuation keeps the next word sentence-initial
      if (t.pos != "$(") initial = false;
    }
  }
  return doc;
}

Document preprocess(std::string_view raw, std::optional<CalendarDate> dct) {
  Document doc = segment_and_tokenize(normalize_whitespace(raw).text);
  doc.dct = dct;
  return tag_pos_heuristic(std::move(doc));
}

Document preprocess_single_sentence(std::string_view raw) {
  Document doc = segment_and_tokenize(normalize_whitespace(raw).text);
  doc.sentences.clear();
  if (!doc.tokens.empty()) {
    doc.sentences.push_back({doc.tokens.front().span.begin, doc.tokens.back().span.end});
  }
  return tag_pos_heuristic(std::move(doc));
}

std::vector<Document> read_pretokenized_tsv(std::istream& in,
                                            const std::string& source) {
  std::vector<Document> docs;
  std::vector<PretokenizedRecord> records;
  std::optional<CalendarDate> dct;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (records.empty()) return;
    Document doc;
    try {
      doc = ingest_pretokenized(records, dct);
    } catch (const InputError& e) {
      throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    doc.source_id = source + "#" + std::to_string(docs.size() + 1);
    docs.push_back(std::move(doc));
    records.clear();
    dct.reset();
  };
  auto fail = [&](const std::string& what) {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.starts_with("#dct=")) {
      flush();
      dct = parse_date(std::string_view(line).substr(5));
      if (!dct) fail("invalid dct '" + line.substr(5) + "'");
      continue;
    }
    if (line.starts_with('#')) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
      fail("expected three tab-separated columns");
    }
    PretokenizedRecord r;
    r.surface = line.substr(0, tab1);
    r.pos = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string_view index = std::string_view(line).substr(tab2 + 1);
    auto [ptr, ec] = std::from_chars(index.data(), index.data() + index.size(),
                                     r.sentence_index);
    if (ec != std::errc{} || ptr != index.data() + index.size()) {
      fail("invalid sentence index '" + std::string(index) + "'");
    }
    if (!records.empty() && r.sentence_index < records.back().sentence_index) {
      fail("sentence index decreases");
    }
    if (r.surface.empty()) fail("empty surface");
    records.push_back(std::move(r));
  }
  flush();
  return docs;
}

void write_pretokenized_tsv(std::ostream& out, const Document& doc) {
  if (doc.dct) out << "#dct=" << doc.dct->iso() << '\n';
  for (const auto& r : export_pretokenized(doc)) {
    out << r.surface << '\t' << r.pos << '\t' << r.sentence_index << '\n';
  }
  out << '\n';
}

}  // namespace temponym
