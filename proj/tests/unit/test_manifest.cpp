#include <doctest.h>

#include <fstream>

#include "support.hpp"
#include "temponym/error.hpp"
#include "temponym/manifest.hpp"

using namespace temponym;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("golden fixtures parse") {
  const auto cases = read_golden(testsupport::pack_dir("german-ext") / "golden.tsv");
  CHECK(cases.size() >= 20);
  std::size_t negative = 0;
  for (const auto& c : cases) {
    CHECK_MESSAGE(!c.citation.empty(), c.origin);
    CHECK_FALSE(c.origin.empty());
    negative += c.type ? 0 : 1;
  }
  CHECK(negative >= 2);

  const auto p = write_temp("temponym_golden.tsv",
                            "# comment\nDer Winter\tDATE\tXXXX-WI\n"
                            "gestern\tDATE\t2019-12-31\t2020-01-01\tcited\n"
                            "Herr Winter\t\t\n");
  const auto toy = read_golden(p);
  REQUIRE(toy.size() == 3);
  CHECK(toy[1].dct->iso() == "2020-01-01");
  CHECK(toy[1].citation == "cited");
  CHECK_FALSE(toy[2].type.has_value());
  CHECK(toy[0].origin.find(":2") != std::string::npos);

  write_temp("temponym_golden.tsv", "x\tDAY\ty\n");
  CHECK_THROWS(read_golden(p));
  write_temp("temponym_golden.tsv", "x\tDATE\ty\t2020-02-30\n");
  CHECK_THROWS(read_golden(p));
  fs::remove(p);
}

TEST_CASE("shipped packs validate") {
  for (const char* name : {"german-base", "german-ext"}) {
    const RulePack pack = load_rulepack(testsupport::pack_dir(name));
    const auto golden = read_golden(testsupport::pack_dir(name) / "golden.tsv");
    const ValidationResult v = validate_pack(pack, golden);
    for (const auto& e : v.errors) FAIL_CHECK(e);
    REQUIRE(v.manifest);
    CHECK(v.manifest->name == name);
    CHECK(v.manifest->golden_cases == golden.size());
  }
  const RulePack ext = load_rulepack(testsupport::pack_dir("german-ext"));
  const auto m = *validate_pack(ext).manifest;
  for (auto cls : kCoreExtensionClasses) CHECK(m.class_counts.at(std::string(cls)) >= 2);
  for (auto cls : kExtensionClasses) CHECK(m.class_counts.at(std::string(cls)) >= 1);
  CHECK(m.extension_rule_count() >= 15);
  CHECK(m.disabled_by_default == std::vector<std::string>{"time_r2b-dotted"});
  CHECK(format_manifest(m).find("german-ext") != std::string::npos);
}

TEST_CASE("failing golden cases name the responsible rules") {
  const RulePack base = load_rulepack(testsupport::pack_dir("german-base"));
  GoldenCase must_not{"Herr Sommer kam.", std::nullopt, "", std::nullopt, "", "g:1"};
  CHECK(check_golden_case(base, must_not).find("date_r4a-season") != std::string::npos);
  GoldenCase wrong{"Der Winter kam.", TimexType::Date, "XXXX-SU", std::nullopt, "", "g:2"};
  CHECK_FALSE(check_golden_case(base, wrong).empty());
  GoldenCase right{"Der Winter kam.", TimexType::Date, "XXXX-WI", std::nullopt, "", "g:3"};
  CHECK(check_golden_case(base, right).empty());
  const std::vector<GoldenCase> suite = {must_not};
  CHECK_FALSE(validate_pack(base, suite).ok());
}

TEST_CASE("extension bookkeeping is enforced") {
  PackSource src;
  src.rules.push_back(parse_rule_line(R"r(RULENAME="ext:x" EXTRACTION="(a)" NORM_VALUE="2020")r",
                                      Polarity::Positive, TimexType::Date, "t:1"));
  CHECK_FALSE(validate_pack(compile_pack(src)).ok());
  src.rules[0].ext_class = "bogus";
  CHECK_FALSE(validate_pack(compile_pack(src)).ok());
  PackSource plain;
  plain.rules.push_back(parse_rule_line(R"r(RULENAME="y" EXTRACTION="(a)" NORM_VALUE="2020" EXT_CLASS="fix")r",
                                        Polarity::Positive, TimexType::Date, "t:1"));
  CHECK_FALSE(validate_pack(compile_pack(plain)).ok());
}
