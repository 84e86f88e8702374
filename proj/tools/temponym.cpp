// temponym: tag German text with TIMEX3 expressions, compare rule packs and
// prepare inspection samples.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "temponym/engine.hpp"
#include "temponym/error.hpp"
#include "temponym/eval.hpp"
#include "temponym/harvest.hpp"
#include "temponym/io.hpp"
#include "temponym/manifest.hpp"
#include "temponym/rulepack.hpp"

namespace fs = std::filesystem;
using namespace temponym;

namespace {

constexpr int kUsage = 1;
constexpr int kPackError = 2;
constexpr int kInputError = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::vector<std::string> inputs;
  std::string format = "plain";
  std::string dct;
};

struct SelectionOptions {
  std::vector<std::string> disabled;
  std::vector<std::string> enabled;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("inputs", o.inputs, "Input files or directories")->required();
  cmd->add_option("--format", o.format, "Input format")
      ->check(CLI::IsMember({"plain", "tsv", "timeml"}))
      ->capture_default_str();
  cmd->add_option("--dct", o.dct, "Document creation time (YYYY-MM-DD) for every document");
}

void add_selection_options(CLI::App* cmd, SelectionOptions& s) {
  cmd->add_option("--disable-rule", s.disabled, "Deactivate a rule (repeatable)");
  cmd->add_option("--enable-rule", s.enabled, "Activate a rule that is off by default");
}

InputFormat parse_format(const std::string& f) {
  if (f == "tsv") return InputFormat::Pretokenized;
  if (f == "timeml") return InputFormat::TimeML;
  return InputFormat::Plain;
}

std::vector<Document> load(const InputOptions& o) {
  std::optional<CalendarDate> dct;
  if (!o.dct.empty()) {
    dct = parse_date(o.dct);
    if (!dct) throw UsageError("--dct: '" + o.dct + "' is not a calendar date (YYYY-MM-DD)");
  }
  std::vector<fs::path> paths(o.inputs.begin(), o.inputs.end());
  return load_corpus(paths, parse_format(o.format), dct);
}

RuleSelection selection_for(const RulePack& pack, const SelectionOptions& s) {
  RuleSelection sel;
  for (const auto& name : s.disabled) {
    if (!pack.find_rule(name)) throw UsageError("--disable-rule: unknown rule '" + name + "'");
    sel.disabled.insert(name);
  }
  for (const auto& name : s.enabled) {
    if (!pack.find_rule(name)) throw UsageError("--enable-rule: unknown rule '" + name + "'");
    sel.enabled.insert(name);
  }
  return sel;
}

RulePack load_pack(const std::string& dir) {
  RulePack pack = load_rulepack(dir);
  for (const auto& w : pack.warnings()) std::cerr << "warning: " << w << "\n";
  return pack;
}

CorpusRun to_run(const std::vector<Document>& docs,
                 std::vector<std::vector<Timex3Annotation>> annotations) {
  CorpusRun run;
  run.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    run.push_back({docs[i].source_id, docs[i].sample, std::move(annotations[i])});
  }
  return run;
}

// Writes to the named file, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw InputError(path + ": cannot open for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

CorpusRun read_run(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  return read_standoff(in, path);
}

void pad_documents(CorpusRun& run, const CorpusRun& other) {
  std::set<std::string> present;
  for (const auto& d : run) present.insert(d.doc_id);
  for (const auto& d : other) {
    if (!present.contains(d.doc_id)) run.push_back({d.doc_id, d.sample, {}});
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based temporal tagging for German"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "temponym 0.3.0");

  // tag
  InputOptions tag_in;
  SelectionOptions tag_sel;
  std::string tag_pack, tag_output = "standoff", tag_out_file;
  unsigned tag_jobs = 1;
  auto* tag = app.add_subcommand("tag", "Annotate documents");
  tag->add_option("--pack", tag_pack, "Rule-pack directory")->required();
  add_input_options(tag, tag_in);
  add_selection_options(tag, tag_sel);
  tag->add_option("--output", tag_output, "Output format")
      ->check(CLI::IsMember({"standoff", "inline", "table"}))
      ->capture_default_str();
  tag->add_option("-o,--out", tag_out_file, "Output file (default stdout)");
  tag->add_option("-j,--jobs", tag_jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  // diff
  InputOptions diff_in;
  std::string diff_pack_a, diff_pack_b, diff_run_a, diff_run_b, diff_out_file;
  std::string diff_name_a = "A", diff_name_b = "B";
  bool diff_json = false, diff_pairs = false;
  unsigned diff_jobs = 1;
  auto* diff = app.add_subcommand("diff", "Compare two runs (coverage accounting)");
  diff->add_option("--pack-a", diff_pack_a, "Baseline rule pack");
  diff->add_option("--pack-b", diff_pack_b, "Compared rule pack");
  diff->add_option("--run-a", diff_run_a, "Baseline standoff file");
  diff->add_option("--run-b", diff_run_b, "Compared standoff file");
  diff->add_option("inputs", diff_in.inputs, "Corpus (with --pack-a/--pack-b)");
  diff->add_option("--format", diff_in.format)->check(CLI::IsMember({"plain", "tsv", "timeml"}));
  diff->add_option("--dct", diff_in.dct, "Document creation time override");
  diff->add_option("--name-a", diff_name_a, "Column label of run A");
  diff->add_option("--name-b", diff_name_b, "Column label of run B");
  diff->add_flag("--json", diff_json, "JSON Lines report instead of tables");
  diff->add_flag("--pairs", diff_pairs, "Also list every non-unchanged pair");
  diff->add_option("-j,--jobs", diff_jobs)->check(CLI::Range(1u, 256u));
  diff->add_option("-o,--out", diff_out_file);

  // stats
  InputOptions stats_in;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Sentence and token counts per sample");
  add_input_options(stats, stats_in);
  stats->add_flag("--json", stats_json, "JSON Lines instead of a table");

  // probe
  std::string probe_pack, probe_dict, probe_lang;
  std::vector<std::string> probe_expr_files, probe_timeml;
  SelectionOptions probe_sel;
  auto* probe_cmd = app.add_subcommand("probe", "Tag expressions in isolation and list misses");
  probe_cmd->add_option("--pack", probe_pack, "Rule-pack directory")->required();
  probe_cmd->add_option("--expressions", probe_expr_files, "Files with one expression per line");
  probe_cmd->add_option("--timeml", probe_timeml, "TimeML files to harvest TIMEX3 surfaces from");
  probe_cmd->add_option("--dictionary", probe_dict, "source<TAB>target translation table");
  probe_cmd->add_option("--language", probe_lang, "Keep only TimeML expressions of this language");
  add_selection_options(probe_cmd, probe_sel);

  // sample
  InputOptions sample_in;
  SelectionOptions sample_sel;
  std::string sample_pack, sample_baseline, sample_out_file;
  std::size_t sample_n = 0, sample_window = 60;
  std::uint64_t sample_seed = 1;
  auto* sample = app.add_subcommand("sample", "Draw annotations for manual inspection");
  sample->add_option("--pack", sample_pack, "Rule-pack directory")->required();
  sample->add_option("--baseline", sample_baseline,
                     "Only sample annotations this pack does not produce (novel spans)");
  add_input_options(sample, sample_in);
  add_selection_options(sample, sample_sel);
  sample->add_option("-n", sample_n, "Sample size")->required();
  sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
  sample->add_option("--window", sample_window, "Context width in characters")
      ->capture_default_str();
  sample->add_option("-o,--out", sample_out_file);

  // validate-pack
  std::string validate_dir, validate_golden;
  auto* validate = app.add_subcommand("validate-pack", "Check a pack and run its golden suite");
  validate->alias("validate");
  validate->add_option("pack", validate_dir, "Rule-pack directory")->required();
  validate->add_option("--golden", validate_golden,
                       "Golden fixture (default: golden.tsv inside the pack)");

  // label-import
  std::vector<std::string> label_files;
  auto* labels = app.add_subcommand("label-import", "Summarize hand-labeled inspection samples");
  labels->add_option("files", label_files, "Labeled inspection TSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*tag) {
      const RulePack pack = load_pack(tag_pack);
      const RuleSelection sel = selection_for(pack, tag_sel);
      const auto docs = load(tag_in);
      const auto annotations = tag_corpus(pack, docs, sel, tag_jobs);
      Output out(tag_out_file);
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (tag_output == "standoff") {
          write_standoff(out.stream(), docs[i], annotations[i]);
        } else if (tag_output == "inline") {
          write_inline_timeml(out.stream(), docs[i], annotations[i]);
        } else {
          write_annotation_table(out.stream(), docs[i], annotations[i]);
        }
      }
    } else if (*diff) {
      CorpusRun a, b;
      const bool by_pack = !diff_pack_a.empty() || !diff_pack_b.empty();
      const bool by_run = !diff_run_a.empty() || !diff_run_b.empty();
      if (by_pack == by_run) {
        throw UsageError("diff: give either --pack-a/--pack-b with a corpus or --run-a/--run-b");
      }
      if (by_pack) {
        if (diff_pack_a.empty() || diff_pack_b.empty() || diff_in.inputs.empty()) {
          throw UsageError("diff: --pack-a, --pack-b and at least one input are required");
        }
        const RulePack pa = load_pack(diff_pack_a);
        const RulePack pb = load_pack(diff_pack_b);
        const auto docs = load(diff_in);
        a = to_run(docs, tag_corpus(pa, docs, {}, diff_jobs));
        b = to_run(docs, tag_corpus(pb, docs, {}, diff_jobs));
        if (diff_name_a == "A") diff_name_a = pa.metadata().name;
        if (diff_name_b == "B") diff_name_b = pb.metadata().name;
      } else {
        if (diff_run_a.empty() || diff_run_b.empty()) {
          throw UsageError("diff: both --run-a and --run-b are required");
        }
        a = read_run(diff_run_a);
        b = read_run(diff_run_b);
        // standoff files only list documents that carry annotations
        pad_documents(a, b);
        pad_documents(b, a);
      }
      const DiffReport report = diff_corpus(a, b);
      Output out(diff_out_file);
      if (diff_json) {
        write_report_jsonl(out.stream(), report);
      } else {
        out.stream() << format_totals_table(report, diff_name_a, diff_name_b) << "\n"
                     << format_coverage_table(report);
      }
      if (diff_pairs) {
        out.stream() << "\n";
        for (const auto& p : report.pairs) {
          if (p.pair.category == DiffCategory::Unchanged) continue;
          out.stream() << p.doc_id << "\t" << to_string(p.pair.category);
          auto span = [](const std::optional<Span>& s) {
            return s ? "[" + std::to_string(s->begin) + "," + std::to_string(s->end) + ")"
                     : std::string("-");
          };
          out.stream() << "\t" << span(p.pair.a) << "\t" << span(p.pair.b) << "\n";
        }
      }
    } else if (*stats) {
      const auto docs = load(stats_in);
      const CorpusStats s = corpus_stats(docs);
      if (stats_json) {
        write_stats_jsonl(std::cout, s);
      } else {
        std::cout << format_stats_table(s);
      }
    } else if (*probe_cmd) {
      const RulePack pack = load_pack(probe_pack);
      const RuleSelection sel = selection_for(pack, probe_sel);
      std::vector<std::string> expressions;
      for (const auto& f : probe_expr_files) {
        for (auto& line : read_lines(f)) expressions.push_back(std::move(line));
      }
      for (const auto& f : probe_timeml) {
        for (const GoldTimex& g : parse_timeml_file(f)) {
          if (probe_lang.empty() || g.language == probe_lang) expressions.push_back(g.surface);
        }
      }
      if (expressions.empty()) throw UsageError("probe: no expressions given");
      if (!probe_dict.empty()) {
        DictionaryClient client = DictionaryClient::from_tsv(probe_dict);
        const auto translated = translate(expressions, client);
        expressions.clear();
        for (const auto& t : translated) {
          if (!t.translated) std::cerr << "untranslated: " << t.source << " (" << t.error << ")\n";
          expressions.push_back(t.text);
        }
      }
      const auto results = probe(pack, expressions, sel);
      std::cout << format_probe_report(results);
    } else if (*sample) {
      const RulePack pack = load_pack(sample_pack);
      const RuleSelection sel = selection_for(pack, sample_sel);
      const auto docs = load(sample_in);
      auto annotations = tag_corpus(pack, docs, sel);
      std::vector<PopulationItem> population;
      if (!sample_baseline.empty()) {
        const RulePack base = load_pack(sample_baseline);
        const CorpusRun a = to_run(docs, tag_corpus(base, docs));
        const CorpusRun b = to_run(docs, annotations);
        const DiffReport report = diff_corpus(a, b);
        std::map<std::string, std::set<Span>> novel;
        for (const auto& p : report.pairs) {
          if (p.pair.category == DiffCategory::Novel) novel[p.doc_id].insert(*p.pair.b);
        }
        for (const auto& doc : b) {
          for (const auto& an : doc.annotations) {
            if (novel[doc.doc_id].contains(an.span)) {
              population.push_back({doc.doc_id, doc.sample, an});
            }
          }
        }
      } else {
        for (std::size_t i = 0; i < docs.size(); ++i) {
          for (auto& an : annotations[i]) {
            population.push_back({docs[i].source_id, docs[i].sample, std::move(an)});
          }
        }
      }
      std::map<std::string, std::string> texts;
      for (const auto& d : docs) texts[d.source_id] = d.text;
      const auto drawn =
          sample_for_inspection(std::move(population), sample_n, sample_seed, texts, sample_window);
      Output out(sample_out_file);
      write_inspection_tsv(out.stream(), drawn);
    } else if (*validate) {
      const RulePack pack = load_pack(validate_dir);
      fs::path golden = validate_golden;
      if (golden.empty() && fs::exists(fs::path(validate_dir) / "golden.tsv")) {
        golden = fs::path(validate_dir) / "golden.tsv";
      }
      const auto cases = golden.empty() ? std::vector<GoldenCase>{} : read_golden(golden);
      const ValidationResult result = validate_pack(pack, cases);
      if (result.manifest) std::cout << format_manifest(*result.manifest);
      for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
      if (!result.ok()) return kPackError;
    } else if (*labels) {
      std::vector<InspectionSample> all;
      for (const auto& f : label_files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw InputError(f + ": cannot open");
        for (auto& s : read_inspection_tsv(in, f)) all.push_back(std::move(s));
      }
      std::cout << format_label_table(summarize_labels(all));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PackError& e) {
    std::cerr << "pack error: " << e.what() << "\n";
    return kPackError;
  } catch (const NormalizationError& e) {
    std::cerr << "normalization error: " << e.what() << "\n";
    return kPackError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return 0;
}
