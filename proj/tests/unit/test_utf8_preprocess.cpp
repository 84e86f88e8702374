#include <doctest.h>

#include <random>
#include <sstream>

#include "temponym/error.hpp"
#include "temponym/preprocess.hpp"
#include "temponym/utf8.hpp"

using namespace temponym;

namespace {

std::vector<std::string> surfaces(const Document& doc) {
  std::vector<std::string> out;
  for (const auto& t : doc.tokens) out.push_back(t.surface);
  return out;
}

// Reference collapse over ASCII whitespace only.
std::string collapse(std::string_view raw) {
  std::string out;
  bool in_space = false;
  for (char c : raw) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (space) {
      if (!in_space) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("utf8 decoding") {
  std::size_t len = 0;
  CHECK(utf8::decode("ä", 0, len) == U'ä');
  CHECK(len == 2);
  CHECK(utf8::decode("\xE2\x82\xAC", 0, len) == U'€');
  CHECK(len == 3);
  CHECK(utf8::decode("\xFF", 0, len) == U'�');
  CHECK(len == 1);
  CHECK(utf8::decode("\xC3", 0, len) == U'�');
  std::string s;
  utf8::append(s, U'Ü');
  CHECK(s == "Ü");
  CHECK(utf8::to_lower("ÜBERMORGEN Straße") == "übermorgen straße");
  CHECK(utf8::is_upper(U'Ä'));
  CHECK_FALSE(utf8::is_boundary("ä", 1));
  CHECK(utf8::is_boundary("ä", 2));
}

TEST_CASE("codepoint prefix counts lead bytes") {
  const std::string text = "aäb€c";
  const auto prefix = utf8::codepoint_prefix(text);
  REQUIRE(prefix.size() == text.size() + 1);
  std::size_t count = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    CHECK(prefix[i] == count);
    if (i < text.size() && (static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++count;
  }
  CHECK(prefix.back() == 5);
}

TEST_CASE("whitespace normalization agrees with a reference collapse") {
  std::mt19937_64 rng(3);
  const std::string alphabet = "ab  \t\n\r.";
  for (int round = 0; round < 500; ++round) {
    std::string raw;
    const std::size_t n = rng() % 30;
    for (std::size_t i = 0; i < n; ++i) raw += alphabet[rng() % alphabet.size()];
    const auto norm = normalize_whitespace(raw);
    CHECK(norm.text == collapse(raw));
    REQUIRE(norm.offset_map.size() == raw.size() + 1);
    CHECK(norm.offset_map.back() == norm.text.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(norm.offset_map[i] <= norm.offset_map[i + 1]);
      const char c = raw[i];
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
        CHECK(norm.text[norm.offset_map[i]] == c);
      }
    }
  }
  CHECK(normalize_whitespace("a\xC2\xA0\xE2\x80\x83 b").text == "a b");
}

TEST_CASE("tokenization keeps digit groups and abbreviations") {
  const Document doc =
      preprocess("Dr. Meier kam um 21.30 Uhr, es kostete 3,50 Euro, z.B. am 3. März.");
  const std::vector<std::string> expected = {"Dr.",  "Meier", "kam",  "um",   "21.30",
                                             "Uhr",  ",",     "es",   "kostete", "3,50",
                                             "Euro", ",",     "z.B.", "am",   "3",
                                             ".",    "März",  "."};
  CHECK(surfaces(doc) == expected);
  CHECK(doc.sentences.size() == 1);
  CHECK(check_document(doc).empty());
}

TEST_CASE("sentence splitting") {
  const Document doc = preprocess("Es war Winter. Dann kam der Frühling! Wirklich? ja.");
  REQUIRE(doc.sentences.size() == 3);
  CHECK(doc.slice(doc.sentences[0]) == "Es war Winter.");
  CHECK(doc.slice(doc.sentences[1]) == "Dann kam der Frühling!");
  CHECK(doc.slice(doc.sentences[2]) == "Wirklich? ja.");
  const Document one = preprocess_single_sentence("Es war Winter. Dann kam der Frühling.");
  CHECK(one.sentences.size() == 1);
}

TEST_CASE("heuristic POS tags") {
  const Document doc = preprocess("Im Winter 1850 kam der Arzt.");
  std::vector<std::string> tags;
  for (const auto& t : doc.tokens) tags.push_back(t.pos);
  std::string joined;
  for (const auto& t : tags) joined += t + " ";
  CHECK(joined == "APPR NN CARD VVFIN ART NN $. ");
  for (const auto& t : doc.tokens) CHECK_FALSE(t.pos.empty());
}

TEST_CASE("offsets point into the normalized text") {
  const Document doc = preprocess("  Am\t\t3.  März\n2021 ");
  CHECK(check_document(doc).empty());
  for (const auto& t : doc.tokens) CHECK(doc.slice(t.span) == t.surface);
}

TEST_CASE("document invariant checker catches violations") {
  Document doc = preprocess("Es war Winter.");
  REQUIRE(check_document(doc).empty());
  Document bad = doc;
  std::swap(bad.tokens[0], bad.tokens[1]);
  CHECK_FALSE(check_document(bad).empty());
  bad = doc;
  bad.tokens[0].span.end = doc.text.size() + 5;
  CHECK_FALSE(check_document(bad).empty());
  bad = doc;
  bad.text = "Es  war Winter.";
  CHECK_FALSE(check_document(bad).empty());
}

TEST_CASE("pretokenized round trip") {
  const Document doc = preprocess("Es war Winter. Dann kam übermorgen der Frühling.");
  const auto records = export_pretokenized(doc);
  const Document back = ingest_pretokenized(records);
  // surfaces are re-joined with single spaces
  CHECK(back.text == "Es war Winter . Dann kam übermorgen der Frühling .");
  CHECK(back.sentences.size() == 2);
  CHECK(check_document(back).empty());
  CHECK(export_pretokenized(back) == records);

  std::ostringstream out;
  write_pretokenized_tsv(out, doc);
  std::istringstream in(out.str());
  const auto docs = read_pretokenized_tsv(in, "x");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].text == back.text);
  CHECK(export_pretokenized(docs[0]) == records);
  CHECK(docs[0].source_id == "x#1");
}

TEST_CASE("pretokenized input errors") {
  CHECK_THROWS_AS(ingest_pretokenized(std::vector<PretokenizedRecord>{{"a", "NN", 1}, {"b", "NN", 0}}),
                  InputError);
  CHECK_THROWS_AS(ingest_pretokenized(std::vector<PretokenizedRecord>{{"a b", "NN", 0}}),
                  InputError);
  CHECK_THROWS_AS(ingest_pretokenized(std::vector<PretokenizedRecord>{{"", "NN", 0}}), InputError);
  std::istringstream in("#dct=2020-01-01\nHeute\tADV\t0\n\n#dct=2020-01-02\nMorgen\tADV\t0\n");
  const auto docs = read_pretokenized_tsv(in, "s");
  REQUIRE(docs.size() == 2);
  CHECK(docs[1].dct->iso() == "2020-01-02");
  std::istringstream bad("Heute\tADV\n");
  CHECK_THROWS_AS(read_pretokenized_tsv(bad, "s"), InputError);
}
