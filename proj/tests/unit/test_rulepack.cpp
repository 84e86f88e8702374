#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <regex>

#include <unistd.h>

#include "support.hpp"
#include "temponym/engine.hpp"
#include "temponym/error.hpp"
#include "temponym/preprocess.hpp"
#include "temponym/rulepack.hpp"
#include "temponym/utf8.hpp"

using namespace temponym;
namespace fs = std::filesystem;

namespace {

using Resources = std::map<std::string, std::vector<std::string>>;

// Substitutes the first reference until none is left.
std::string fixpoint(std::string text, const Resources& resources) {
  static const std::regex ref("%([A-Za-z_][A-Za-z0-9_]*)");
  std::smatch m;
  while (std::regex_search(text, m, ref)) {
    auto alts = resources.at(m[1].str());
    std::sort(alts.begin(), alts.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    std::string joined = "(?:";
    for (std::size_t i = 0; i < alts.size(); ++i) joined += (i ? "|" : "") + alts[i];
    joined += ")";
    text = m.prefix().str() + joined + m.suffix().str();
  }
  return text;
}

std::string escape(std::string_view entry) {
  std::string out;
  for (char c : entry) {
    if (std::string_view("\\^$.|?*+()[]{}").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

class TempPack {
 public:
  TempPack() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("temponym_pack_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_ / "patterns");
    fs::create_directories(dir_ / "norms");
    fs::create_directories(dir_ / "rules");
  }
  ~TempPack() { fs::remove_all(dir_); }
  void write(const std::string& rel, const std::string& content) const {
    std::ofstream(dir_ / rel, std::ios::binary) << content;
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
};

std::string pack_error(const TempPack& pack) {
  try {
    load_rulepack(pack.dir());
  } catch (const PackError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("interpolation matches a substitution fixpoint on a toy pack") {
  const Resources toy = {{"A", {"x", "%B y"}}, {"B", {"b", "%C"}}, {"C", {"cc", "c", "dd"}}};
  for (const char* extraction : {"(%A)-%C", "%B%B", "no refs", "100%% (%C)"}) {
    std::string expected = fixpoint(extraction, toy);
    // %% is a literal percent in templates
    for (auto p = expected.find("%%"); p != std::string::npos; p = expected.find("%%", p + 1)) {
      expected.erase(p, 1);
    }
    CHECK(interpolate(extraction, toy) == expected);
  }
  CHECK(interpolate("%A", toy) == "(?:(?:(?:cc|dd|c)|b) y|x)");
}

TEST_CASE("interpolation matches the fixpoint on random acyclic packs") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> atoms = {"a", "bb", "c", "dd", "eee", "f"};
  for (int round = 0; round < 200; ++round) {
    Resources r;
    // R2 may reference R1 and R0, R1 only R0
    for (int level = 0; level < 3; ++level) {
      auto& alts = r["R" + std::to_string(level)];
      const int n = 1 + int(rng() % 4);
      for (int i = 0; i < n; ++i) {
        std::string alt = atoms[rng() % atoms.size()];
        if (level > 0 && rng() % 2) alt += "%R" + std::to_string(rng() % level);
        if (std::find(alts.begin(), alts.end(), alt) == alts.end()) alts.push_back(alt);
      }
    }
    const std::string extraction = "(%R2) %R1";
    CHECK(interpolate(extraction, r) == fixpoint(extraction, r));
  }
}

TEST_CASE("interpolation errors") {
  CHECK_THROWS_WITH_AS(interpolate("%missing", {}), doctest::Contains("unknown"), PackError);
  CHECK_THROWS_WITH_AS(interpolate("%A", {{"A", {"%B"}}, {"B", {"x|%A"}}}),
                       doctest::Contains("cycle"), PackError);
  CHECK_THROWS_AS(interpolate("50% off", {}), PackError);
  CHECK_THROWS_WITH_AS(interpolate("%A", {{"A", {"0123456789"}}}, 8),
                       doctest::Contains("exceeds"), PackError);
}

TEST_CASE("a 5000-name list expands under the default limit") {
  Resources r;
  auto& names = r["reNames"];
  for (int i = 0; i < 5000; ++i) {
    std::string name = "N";
    for (int k = i; k > 0 || name.size() == 1; k /= 26) name += char('a' + k % 26);
    names.push_back(name + "ke");
  }
  const std::string expanded = interpolate("(?:%reNames) Winter", r);
  CHECK(expanded.size() < kDefaultExpansionLimit);
  CHECK_THROWS_AS(interpolate("(?:%reNames) Winter", r, expanded.size() - 1), PackError);

  PackSource src;
  src.pattern_resources = r;
  src.pattern_resources["reSeason"] = {"Winter"};
  src.norm_resources["normSeason"] = {{"Winter", "WI"}};
  src.rules.push_back(parse_rule_line(
      R"r(RULENAME="season" EXTRACTION="(%reSeason)" NORM_VALUE="XXXX-%normSeason(group(1))")r",
      Polarity::Positive, TimexType::Date, "t:1"));
  src.rules.push_back(parse_rule_line(R"r(RULENAME="names" EXTRACTION="(?:%reNames) Winter")r",
                                      Polarity::Negative, TimexType::Date, "t:2"));
  const RulePack pack = compile_pack(src);
  CHECK(match_document(pack, preprocess(names.back() + " Winter kam.")).empty());
  CHECK(match_document(pack, preprocess("Der Winter kam.")).size() == 1);
}

TEST_CASE("escaped entries compile and match literally") {
  TempPack tp;
  tp.write("patterns/reSeason.txt", "Winter\n");
  tp.write("patterns/reNames.txt", "// curated\n" + escape("C++") + "\n" + escape("A.B.") + "\n");
  tp.write("norms/normSeason.txt", "Winter,WI\n");
  tp.write("rules/date.rules",
           R"r(RULENAME="season" EXTRACTION="(%reSeason)" NORM_VALUE="XXXX-%normSeason(group(1))")r"
           "\n");
  tp.write("rules/negative.rules", R"r(RULENAME="names" EXTRACTION="(?:%reNames) Winter")r" "\n");
  const RulePack pack = load_rulepack(tp.dir());
  CHECK(pack.pattern_resources().at("reNames") == std::vector<std::string>{"C\\+\\+", "A\\.B\\."});
  CHECK(match_document(pack, preprocess("Sprache C++ Winter.")).empty());
  CHECK(match_document(pack, preprocess("Sprache C Winter.")).size() == 1);
  CHECK(match_document(pack, preprocess("Sprache AxB. Winter.")).size() == 1);
}

TEST_CASE("a curator-style name file loads without warnings") {
  TempPack tp;
  std::string names = "// generated name list\n// 5000 entries, rank order\n";
  for (int i = 0; i < 5000; ++i) names += "Name" + std::to_string(i) + (i % 500 ? "" : "-Jo") + "\n";
  names += escape("O'Neil.") + "\n";
  tp.write("patterns/reBertNames.txt", names);
  tp.write("patterns/reSeason.txt", "Winter\nSommer\n");
  tp.write("norms/normSeason.txt", "Winter,WI\nSommer,SU\n");
  tp.write("rules/date.rules",
           R"r(RULENAME="season" EXTRACTION="(%reSeason)" NORM_VALUE="XXXX-%normSeason(group(1))")r"
           "\n");
  tp.write("rules/negative.rules",
           R"r(RULENAME="ext:negative_given-name" EXTRACTION="(?:%reBertNames) (?:%reSeason)" EXT_CLASS="negative")r"
           "\n");
  const RulePack pack = load_rulepack(tp.dir());
  CHECK(pack.warnings().empty());
  CHECK(pack.pattern_resources().at("reBertNames").size() == 5001);
  CHECK(match_document(pack, preprocess("Name4999 Sommer kam.")).empty());
  CHECK(match_document(pack, preprocess("Name5000 Sommer kam.")).size() == 1);

  tp.write("patterns/reBertNames.txt", "Anna\nAnna\n");
  CHECK(load_rulepack(tp.dir()).warnings().size() == 1);
}

TEST_CASE("pack loading diagnostics carry file and line") {
  {
    TempPack tp;
    tp.write("rules/date.rules", "\n" R"r(RULENAME="x" EXTRACTION="%reNope" NORM_VALUE="2020")r" "\n");
    const std::string err = pack_error(tp);
    CHECK(err.find("date.rules:2") != std::string::npos);
    CHECK(err.find("reNope") != std::string::npos);
  }
  {
    TempPack tp;
    tp.write("rules/date.rules", R"r(RULENAME="x" EXTRACTION="(a)" NORM_VALUE="group(3)")r" "\n");
    CHECK(pack_error(tp).find("date.rules:1") != std::string::npos);
  }
  {
    TempPack tp;
    tp.write("rules/date.rules", R"r(RULENAME="x" EXTRACTION="(a)" NORM_VALUE="%normNone(group(1))")r" "\n");
    CHECK_FALSE(pack_error(tp).empty());
  }
  {
    TempPack tp;
    tp.write("rules/date.rules", R"r(RULENAME="x" EXTRACTION="(a" NORM_VALUE="2020")r" "\n");
    CHECK_FALSE(pack_error(tp).empty());
  }
  {
    TempPack tp;
    tp.write("rules/date.rules", R"r(RULENAME="x" RULENAME="y" EXTRACTION="a" NORM_VALUE="2020")r" "\n");
    CHECK(pack_error(tp).find("duplicate") != std::string::npos);
  }
  {
    TempPack tp;
    tp.write("norms/normX.txt", "a;b\n");
    CHECK(pack_error(tp).find("normX.txt:1") != std::string::npos);
  }
  CHECK_THROWS_AS(load_rulepack(testsupport::data_dir() / "no-such-pack"), PackError);
}

TEST_CASE("rule line attributes") {
  const Rule r = parse_rule_line(
      R"r(RULENAME="ext:set_x" EXTRACTION="(a)" NORM_VALUE="P1D" NORM_QUANT="EACH" NORM_FREQ="1X" )r"
      R"r(POS_CONSTRAINT="1:NN|NE" PRIORITY="3" EXT_CLASS="rule-ext" DISABLED_BY_DEFAULT)r",
      Polarity::Positive, TimexType::Set, "f:9");
  CHECK(r.name == "ext:set_x");
  CHECK(r.is_extension());
  CHECK(r.norm_quant == "EACH");
  CHECK(r.norm_freq == "1X");
  CHECK(r.priority == 3);
  CHECK_FALSE(r.enabled_by_default);
  CHECK(r.ext_class == "rule-ext");
  REQUIRE(r.pos_constraints.size() == 1);
  CHECK(r.pos_constraints[0] == PosConstraint{1, {"NN", "NE"}});
  CHECK_THROWS_AS(parse_rule_line(R"r(RULENAME="x" BOGUS="1")r", Polarity::Positive,
                                  TimexType::Date, "f:1"),
                  PackError);
}

TEST_CASE("shipped packs") {
  const RulePack base = load_rulepack(testsupport::pack_dir("german-base"));
  const RulePack ext = load_rulepack(testsupport::pack_dir("german-ext"));
  CHECK(base.metadata().name == "german-base");
  CHECK(base.warnings().empty());
  CHECK(ext.warnings().empty());
  CHECK(ext.metadata().name == "german-ext");
  for (const Rule& r : base.rules()) CHECK_FALSE(r.is_extension());

  // every base rule survives into the extended pack unchanged
  for (const Rule& r : base.rules()) {
    const Rule* twin = ext.find_rule(r.name);
    REQUIRE_MESSAGE(twin, r.name);
    CHECK(twin->extraction == r.extraction);
    CHECK(twin->norm_value == r.norm_value);
  }
  CHECK(base.find_rule("date_r8a-explicit"));
  CHECK_FALSE(ext.find_rule("time_r2b-dotted")->enabled_by_default);

  bool nun = false;
  for (const auto& e : ext.resource_extensions()) {
    if (e.alternative == "[Nn]un") nun = e.ext_class == "lexical";
  }
  CHECK(nun);
  for (std::size_t i = 0; i < ext.rules().size(); ++i) {
    CHECK(ext.expanded_extraction(i).find('%') == std::string::npos);
  }
}

TEST_CASE("profession list: single words in masculine/feminine pairs") {
  const RulePack ext = load_rulepack(testsupport::pack_dir("german-ext"));
  const auto& list = ext.pattern_resources().at("reProfession");
  REQUIRE(list.size() % 2 == 0);
  CHECK(list.size() >= 200);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string& w = list[i];
    CHECK_MESSAGE(w.find_first_of(" \t\\()|") == std::string::npos, w);
    std::size_t len = 0;
    CHECK_MESSAGE(utf8::is_upper(utf8::decode(w, 0, len)), w);
    CHECK_MESSAGE(seen.insert(w).second, w);
  }
  std::size_t in_suffix = 0;
  for (std::size_t i = 0; i < list.size(); i += 2) {
    CHECK(list[i] != list[i + 1]);
    in_suffix += list[i + 1].ends_with("in") ? 1 : 0;
  }
  // a handful of irregular pairs (Kaufmann/Kauffrau) are allowed
  CHECK(in_suffix + 5 >= list.size() / 2);
}

TEST_CASE("name list: curated sample without short names") {
  const RulePack ext = load_rulepack(testsupport::pack_dir("german-ext"));
  const auto& names = ext.pattern_resources().at("reBertNames");
  CHECK(names.size() >= 100);
  for (const auto& n : names) CHECK_MESSAGE(utf8::codepoint_prefix(n).back() >= 4, n);
  CHECK(std::find(names.begin(), names.end(), "Carl") == names.end());
  CHECK(std::find(names.begin(), names.end(), "Karl") != names.end());
}
