#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "temponym/error.hpp"
#include "temponym/harvest.hpp"
#include "temponym/io.hpp"
#include "temponym/preprocess.hpp"

using namespace temponym;
namespace fs = std::filesystem;

namespace {

const RulePack& ext() {
  static const RulePack pack = load_rulepack(testsupport::pack_dir("german-ext"));
  return pack;
}

std::string xml_error(const std::string& text) {
  try {
    parse_timeml(text, "t.xml");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

class ThrowingClient final : public TranslationClient {
 public:
  TranslationOutcome translate(std::string_view e) override {
    if (e == "boom") throw std::runtime_error("backend down");
    return {"<" + std::string(e) + ">", {}};
  }
};

}  // namespace

TEST_CASE("nested markup inside TIMEX3 flattens to its text") {
  const auto gold = parse_timeml("<T><TIMEX3 type=\"DATE\" value=\"X\">a <b>c</b></TIMEX3></T>", "s");
  REQUIRE(gold.size() == 1);
  CHECK(gold[0].surface == "a c");
  CHECK(gold[0].type == "DATE");
  CHECK(gold[0].value == "X");
  CHECK(gold[0].source == "s");
}

TEST_CASE("TimeML harvesting") {
  const auto gold = parse_timeml_file(testsupport::data_dir() / "corpus/fixtures/sample.tml");
  REQUIRE(gold.size() == 5);
  CHECK(gold[0].surface == "2020-01-01");
  CHECK(gold[1].surface == "übermorgen");
  CHECK(gold[2].surface == "drei Wochen");
  CHECK(gold[2].type == "DURATION");
  CHECK(gold[3].surface == "täglich");
  for (const auto& g : gold) CHECK(g.language == "de");
  CHECK(parse_timeml_file(testsupport::data_dir() / "corpus/fixtures/hiver_fr.tml")[0].language == "fr");
  CHECK(parse_timeml("<T lang=\"en\"><TIMEX3>x</TIMEX3></T>", "s", "it")[0].language == "it");
  CHECK(parse_timeml("<T lang=\"en\"><TIMEX3>x</TIMEX3></T>", "s")[0].language == "en");
  CHECK(parse_timeml("<T><TIMEX3 functionInDocument=\"CREATION_TIME\"/><TIMEX3>  </TIMEX3></T>", "s").empty());
  CHECK(parse_timeml("<TIMEX3 type=\"SET\">jeden\n Tag</TIMEX3>", "s")[0].surface == "jeden Tag");
}

TEST_CASE("XML entities, CDATA and prolog") {
  CHECK(timeml_text("<?xml version=\"1.0\"?><!-- c --><!DOCTYPE a [<!ENTITY x \"y\">]><a>&lt;&amp;&#228;&#xFC;<![CDATA[<b>]]><?pi x?></a>", "s") ==
        "<&äü<b>");
  CHECK(timeml_text("\xEF\xBB\xBF<a>x</a>", "s") == "x");
}

TEST_CASE("malformed XML is reported with a line number") {
  CHECK(xml_error("<a>\n<b></c>\n</a>").find("t.xml:2: malformed XML") == 0);
  CHECK_FALSE(xml_error("<a></a><b></b>").empty());
  CHECK_FALSE(xml_error("<a>").empty());
  CHECK_FALSE(xml_error("<a x=1></a>").empty());
  CHECK_FALSE(xml_error("<a x=\"1\" x=\"2\"></a>").empty());
  CHECK_FALSE(xml_error("<a>&nbsp;</a>").empty());
  CHECK_FALSE(xml_error("<a>&#0;</a>").empty());
  CHECK_FALSE(xml_error("plain text").empty());
  CHECK_FALSE(xml_error("").empty());
  CHECK(xml_error("<a><b/>\n</a>").empty());
}

TEST_CASE("probe equals tagging each expression as its own sentence") {
  const std::vector<std::string> expressions = {"Winterzeit", "Hund", "viele Winter", "21.30 Uhr",
                                                "Es war. Winter", "3.50"};
  const auto results = probe(ext(), expressions);
  REQUIRE(results.size() == expressions.size());
  std::size_t misses = 0;
  for (const auto& r : results) {
    CHECK(r.annotations == match_document(ext(), preprocess_single_sentence(r.expression)));
    CHECK(r.matched == !r.annotations.empty());
    misses += r.matched ? 0 : 1;
  }
  // unmatched first, input order kept inside both groups
  for (std::size_t i = 0; i < results.size(); ++i) CHECK(results[i].matched == (i >= misses));
  CHECK(results[0].expression == "Hund");
  CHECK(results[1].expression == "3.50");
  CHECK(results[misses].expression == "Winterzeit");
  const std::string report = format_probe_report(results);
  CHECK(report.starts_with("# 2 of 6 expressions unmatched\nMISS\tHund\n"));
}

TEST_CASE("translation keeps order and isolates failures") {
  ThrowingClient client;
  const std::vector<std::string> in = {"a", "boom", "c"};
  const auto out = translate(in, client);
  REQUIRE(out.size() == 3);
  CHECK(out[0].text == "<a>");
  CHECK(out[1].text == "boom");
  CHECK_FALSE(out[1].translated);
  CHECK(out[1].error == "backend down");
  CHECK(out[2].translated);

  auto dict = DictionaryClient::from_tsv(testsupport::data_dir() / "corpus/fixtures/fr_de.tsv");
  const std::vector<std::string> fr = {"hiver", "hier matin"};
  const auto de = translate(fr, dict);
  CHECK(de[0].text == "Winter");
  CHECK_FALSE(de[1].translated);
  IdentityClient id;
  CHECK(translate(fr, id)[1].text == "hier matin");

  const fs::path bad = fs::temp_directory_path() / "temponym_bad_dict.tsv";
  std::ofstream(bad) << "# c\nok\tfine\nbroken\n";
  CHECK_THROWS_WITH_AS(DictionaryClient::from_tsv(bad), doctest::Contains(":3:"), InputError);
  fs::remove(bad);
}

TEST_CASE("corpus loading") {
  const std::vector<fs::path> in = {testsupport::data_dir() / "corpus" / "mini"};
  const auto docs = load_corpus(in, InputFormat::Plain);
  REQUIRE(docs.size() == 5);
  std::set<std::string> samples;
  for (const auto& d : docs) {
    samples.insert(d.sample);
    CHECK(d.dct.has_value());
    CHECK(d.source_id.find(d.sample + "/") == 0);
    CHECK(d.text.find("#dct") == std::string::npos);
  }
  CHECK(samples == std::set<std::string>{"Bundestag", "DTA", "SZ", "WP", "Zobodat"});
  CHECK(load_corpus(in, InputFormat::Plain, parse_date("1999-09-09"))[0].dct->iso() == "1999-09-09");
  const std::vector<fs::path> missing = {testsupport::data_dir() / "nowhere"};
  CHECK_THROWS_AS(load_corpus(missing, InputFormat::Plain), InputError);

  const std::vector<fs::path> tml = {testsupport::data_dir() / "corpus/fixtures/sample.tml"};
  const auto t = load_corpus(tml, InputFormat::TimeML);
  REQUIRE(t.size() == 1);
  CHECK(t[0].dct->iso() == "2020-01-01");
  CHECK(t[0].sample == "fixtures");
  CHECK(t[0].text.find("drei Wochen geöffnet & ist") != std::string::npos);
  CHECK(t[0].text.find("2020-01-01") == std::string::npos);

  std::istringstream bad_dct("#dct=2021-02-30\nText");
  CHECK_THROWS_AS(read_plain_document(bad_dct, "x"), InputError);
}

TEST_CASE("standoff round trip") {
  const Document doc = preprocess("Übermorgen kam der Winter \"heim\".", parse_date("2020-01-01"));
  const auto anns = match_document(ext(), doc);
  REQUIRE(anns.size() == 2);
  Document named = doc;
  named.source_id = "a/b.txt";
  named.sample = "a";
  std::ostringstream out;
  write_standoff(out, named, anns);
  out << "{\"doc\":\"empty.txt\",\"sample\":\"a\"}\n";
  std::istringstream in(out.str());
  const CorpusRun run = read_standoff(in, "run.jsonl");
  REQUIRE(run.size() == 2);
  CHECK(run[0].doc_id == "a/b.txt");
  CHECK(run[0].annotations == anns);
  CHECK(run[1].annotations.empty());

  std::istringstream broken("{\"doc\":\"x\",\"begin\":5,\"end\":2,\"type\":\"DATE\"}\n");
  CHECK_THROWS_WITH_AS(read_standoff(broken, "r"), doctest::Contains("r:1"), InputError);
  std::istringstream garbage("\n{not json\n");
  CHECK_THROWS_WITH_AS(read_standoff(garbage, "r"), doctest::Contains("r:2"), InputError);
}

TEST_CASE("inline TimeML escapes text and attributes") {
  const Document doc = preprocess("A & B im Winter <x>.");
  const auto anns = match_document(ext(), doc);
  std::ostringstream out;
  write_inline_timeml(out, doc, anns);
  CHECK(out.str() ==
        "A &amp; B im <TIMEX3 tid=\"t1\" type=\"DATE\" value=\"XXXX-WI\">Winter</TIMEX3> "
        "&lt;x&gt;.\n");
  // the inline output parses back to the same expressions
  const auto gold = parse_timeml("<TEXT>" + out.str() + "</TEXT>", "s");
  REQUIRE(gold.size() == 1);
  CHECK(gold[0].surface == "Winter");
}
