#include "temponym/eval.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "temponym/error.hpp"
#include "temponym/utf8.hpp"

namespace temponym {
namespace {

void check_disjoint(std::vector<Span>& spans, std::string_view side) {
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].empty()) {
      throw InputError("run " + std::string(side) + " contains an empty span");
    }
    if (i > 0 && spans[i - 1].end > spans[i].begin) {
      throw InputError("run " + std::string(side) + " has overlapping spans [" +
                       std::to_string(spans[i - 1].begin) + "," +
                       std::to_string(spans[i - 1].end) + ") and [" +
                       std::to_string(spans[i].begin) + "," + std::to_string(spans[i].end) +
                       ")");
    }
  }
}

std::vector<Span> spans_of(const std::vector<Timex3Annotation>& annotations) {
  std::vector<Span> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations) out.push_back(a.span);
  return out;
}

// Aligned plain-text table; the first column is left-aligned, the rest
// right-aligned.
std::string render_table(const std::vector<std::vector<std::string>>& rows,
                         std::size_t rule_before_last) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::size_t line_width = 0;
  for (std::size_t w : widths) line_width += w + 2;
  const std::string rule(line_width > 2 ? line_width - 2 : 0, '-');
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 1 || (rule_before_last && r + 1 == rows.size())) out << rule << "\n";
    const auto& row = rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(widths[c] - row[c].size(), ' ');
      if (c > 0) out << "  ";
      if (c == 0) {
        out << row[c] << pad;
      } else {
        out << pad << row[c];
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string num(std::size_t n) { return std::to_string(n); }

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return out;
}

// Uniform integer in [0, range) from raw engine output; the standard fixes
// mt19937_64's sequence but not the distributions built on it.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  const std::uint64_t threshold = (0 - range) % range;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % range;
  }
}

std::string left_window(std::string_view text, std::size_t end, std::size_t window) {
  std::size_t begin = end;
  for (std::size_t n = 0; n < window && begin > 0; ++n) {
    --begin;
    while (begin > 0 && !utf8::is_boundary(text, begin)) --begin;
  }
  return std::string(text.substr(begin, end - begin));
}

std::string right_window(std::string_view text, std::size_t begin, std::size_t window) {
  std::size_t end = begin;
  for (std::size_t n = 0; n < window && end < text.size(); ++n) {
    std::size_t len = 0;
    utf8::decode(text, end, len);
    end += len;
  }
  return std::string(text.substr(begin, end - begin));
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

nlohmann::json counts_json(const DiffCounts& c) {
  return {{"total_a", c.total_a},   {"total_b", c.total_b}, {"unchanged", c.unchanged},
          {"novel", c.novel},       {"extended", c.extended}, {"reduced", c.reduced},
          {"shifted", c.shifted},   {"missing", c.missing}};
}

}  // namespace

std::string_view to_string(DiffCategory category) {
  switch (category) {
    case DiffCategory::Unchanged: return "unchanged";
    case DiffCategory::Novel: return "novel";
    case DiffCategory::Extended: return "extended";
    case DiffCategory::Reduced: return "reduced";
    case DiffCategory::Shifted: return "shifted";
    case DiffCategory::Missing: return "missing";
  }
  return "unchanged";
}

DiffCounts& DiffCounts::operator+=(const DiffCounts& o) {
  total_a += o.total_a;
  total_b += o.total_b;
  unchanged += o.unchanged;
  novel += o.novel;
  extended += o.extended;
  reduced += o.reduced;
  shifted += o.shifted;
  missing += o.missing;
  return *this;
}

void DiffCounts::add(DiffCategory category) {
  switch (category) {
    case DiffCategory::Unchanged:
      ++unchanged;
      ++total_a;
      ++total_b;
      break;
    case DiffCategory::Novel:
      ++novel;
      ++total_b;
      break;
    case DiffCategory::Extended:
      ++extended;
      ++total_a;
      ++total_b;
      break;
    case DiffCategory::Reduced:
      ++reduced;
      ++total_a;
      ++total_b;
      break;
    case DiffCategory::Shifted:
      ++shifted;
      ++total_a;
      ++total_b;
      break;
    case DiffCategory::Missing:
      ++missing;
      ++total_a;
      break;
  }
}

std::vector<SpanPair> classify_pair(std::span<const Span> a_in, std::span<const Span> b_in) {
  std::vector<Span> a(a_in.begin(), a_in.end());
  std::vector<Span> b(b_in.begin(), b_in.end());
  check_disjoint(a, "A");
  check_disjoint(b, "B");

  struct Candidate {
    std::size_t ia, ib;
    std::size_t left, overlap, right, min_end, max_end;
  };
  std::vector<Candidate> candidates;
  // both sides are sorted and disjoint, so overlaps can be found by merging
  std::size_t j0 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (j0 < b.size() && b[j0].end <= a[i].begin) ++j0;
    for (std::size_t j = j0; j < b.size() && b[j].begin < a[i].end; ++j) {
      if (!a[i].overlaps(b[j])) continue;
      candidates.push_back({i, j, std::min(a[i].begin, b[j].begin), a[i].overlap(b[j]),
                            std::max(a[i].begin, b[j].begin), std::min(a[i].end, b[j].end),
                            std::max(a[i].end, b[j].end)});
    }
  }
  // The key is symmetric in A and B, so swapping the runs pairs the same spans.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.left != y.left) return x.left < y.left;
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    if (x.right != y.right) return x.right < y.right;
    if (x.min_end != y.min_end) return x.min_end < y.min_end;
    return x.max_end < y.max_end;
  });

  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  std::vector<SpanPair> pairs;
  for (const Candidate& c : candidates) {
    if (used_a[c.ia] || used_b[c.ib]) continue;
    used_a[c.ia] = used_b[c.ib] = true;
    const Span& sa = a[c.ia];
    const Span& sb = b[c.ib];
    DiffCategory category = DiffCategory::Shifted;
    if (sa == sb) {
      category = DiffCategory::Unchanged;
    } else if (sb.contains(sa)) {
      category = DiffCategory::Extended;
    } else if (sa.contains(sb)) {
      category = DiffCategory::Reduced;
    }
    pairs.push_back({sa, sb, category});
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!used_a[i]) pairs.push_back({a[i], std::nullopt, DiffCategory::Missing});
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used_b[j]) pairs.push_back({std::nullopt, b[j], DiffCategory::Novel});
  }
  auto start = [](const SpanPair& p) {
    const std::size_t sa = p.a ? p.a->begin : SIZE_MAX;
    const std::size_t sb = p.b ? p.b->begin : SIZE_MAX;
    return std::min(sa, sb);
  };
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const SpanPair& x, const SpanPair& y) { return start(x) < start(y); });
  return pairs;
}

DiffCounts count_pairs(std::span<const SpanPair> pairs) {
  DiffCounts counts;
  for (const SpanPair& p : pairs) counts.add(p.category);
  return counts;
}

DiffReport diff_corpus(const CorpusRun& a, const CorpusRun& b) {
  std::map<std::string, const RunDocument*> docs_a, docs_b;
  for (const auto& d : a) docs_a[d.doc_id] = &d;
  for (const auto& d : b) docs_b[d.doc_id] = &d;
  std::vector<std::string> only_a, only_b;
  for (const auto& [id, doc] : docs_a) {
    if (!docs_b.contains(id)) only_a.push_back(id);
  }
  for (const auto& [id, doc] : docs_b) {
    if (!docs_a.contains(id)) only_b.push_back(id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "runs cover different documents;";
    if (!only_a.empty()) {
      msg += " only in A:";
      for (const auto& id : only_a) msg += " " + id;
      if (!only_b.empty()) msg += ";";
    }
    if (!only_b.empty()) {
      msg += " only in B:";
      for (const auto& id : only_b) msg += " " + id;
    }
    throw InputError(msg);
  }

  DiffReport report;
  for (const auto& [id, doc_a] : docs_a) {
    const RunDocument* doc_b = docs_b.at(id);
    std::vector<SpanPair> pairs;
    try {
      pairs = classify_pair(spans_of(doc_a->annotations), spans_of(doc_b->annotations));
    } catch (const InputError& e) {
      throw InputError("document " + id + ": " + e.what());
    }
    const DiffCounts counts = count_pairs(pairs);
    report.per_sample[doc_a->sample] += counts;
    report.total += counts;
    for (auto& p : pairs) report.pairs.push_back({id, doc_a->sample, std::move(p)});
  }
  return report;
}

SampleStats& SampleStats::operator+=(const SampleStats& o) {
  documents += o.documents;
  sentences += o.sentences;
  tokens += o.tokens;
  return *this;
}

CorpusStats corpus_stats(std::span<const Document> docs) {
  CorpusStats stats;
  for (const Document& doc : docs) {
    const SampleStats s{1, doc.sentences.size(), doc.tokens.size()};
    stats.per_sample[doc.sample] += s;
    stats.total += s;
  }
  return stats;
}

std::vector<InspectionSample> sample_for_inspection(std::vector<PopulationItem> population,
                                                    std::size_t n, std::uint64_t seed,
                                                    const std::map<std::string, std::string>& texts,
                                                    std::size_t window) {
  if (n > population.size()) {
    throw InputError("sample size " + std::to_string(n) + " exceeds population of " +
                     std::to_string(population.size()));
  }
  auto key = [](const PopulationItem& p) {
    return std::tie(p.doc_id, p.annotation.span, p.annotation.rule_name, p.annotation.value,
                    p.annotation.surface);
  };
  std::sort(population.begin(), population.end(),
            [&](const PopulationItem& x, const PopulationItem& y) { return key(x) < key(y); });

  std::vector<std::size_t> order(population.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  std::sort(order.begin(), order.end());

  std::vector<InspectionSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const PopulationItem& item = population[order[k]];
    InspectionSample s;
    s.sample_id = k + 1;
    s.doc_id = item.doc_id;
    s.sample = item.sample;
    s.span = item.annotation.span;
    s.surface = item.annotation.surface;
    s.rule_name = item.annotation.rule_name;
    if (auto it = texts.find(item.doc_id); it != texts.end()) {
      const std::string_view text = it->second;
      if (s.span.end <= text.size()) {
        s.left_context = left_window(text, s.span.begin, window);
        s.right_context = right_window(text, s.span.end, window);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_inspection_tsv(std::ostream& out, std::span<const InspectionSample> samples) {
  out << "sample_id\tdoc_id\tsample\tbegin\tend\tsurface\tleft_context\tright_context\t"
         "rule_name\tlabel\n";
  for (const auto& s : samples) {
    out << s.sample_id << '\t' << sanitize(s.doc_id) << '\t' << sanitize(s.sample) << '\t'
        << s.span.begin << '\t' << s.span.end << '\t' << sanitize(s.surface) << '\t'
        << sanitize(s.left_context) << '\t' << sanitize(s.right_context) << '\t'
        << sanitize(s.rule_name) << '\t';
    if (s.label) out << (*s.label ? "true" : "false");
    out << '\n';
  }
}

std::vector<InspectionSample> read_inspection_tsv(std::istream& in, const std::string& source) {
  std::vector<InspectionSample> out;
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> column;
  auto fail = [&](const std::string& what) {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  static const std::vector<std::string> required = {"sample_id", "doc_id", "sample",
                                                    "begin", "end", "surface", "label"};
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      const auto header = split_tabs(line);
      for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
      for (const auto& name : required) {
        if (!column.contains(name)) fail("header lacks column '" + name + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    auto field = [&](const std::string& name) -> std::string {
      const std::size_t i = column.at(name);
      return i < fields.size() ? fields[i] : std::string();
    };
    auto number = [&](const std::string& name) {
      const std::string text = field(name);
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        fail("column '" + name + "' is not a number: '" + text + "'");
      }
      return value;
    };
    InspectionSample s;
    s.sample_id = number("sample_id");
    s.doc_id = field("doc_id");
    s.sample = field("sample");
    s.span = {number("begin"), number("end")};
    s.surface = field("surface");
    if (column.contains("left_context")) s.left_context = field("left_context");
    if (column.contains("right_context")) s.right_context = field("right_context");
    if (column.contains("rule_name")) s.rule_name = field("rule_name");
    const std::string label = utf8::to_lower(field("label"));
    if (label == "true" || label == "yes" || label == "1" || label == "t") {
      s.label = true;
    } else if (label == "false" || label == "no" || label == "0" || label == "f") {
      s.label = false;
    } else if (!label.empty()) {
      fail("unrecognized label '" + field("label") + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

LabelSummary summarize_labels(std::span<const InspectionSample> samples) {
  LabelSummary summary;
  for (const auto& s : samples) {
    LabelCounts& per = summary.per_sample[s.sample];
    auto bump = [&](LabelCounts& c) {
      if (!s.label) {
        ++c.unlabeled;
      } else if (*s.label) {
        ++c.true_positive;
      } else {
        ++c.false_positive;
      }
    };
    bump(per);
    bump(summary.total);
  }
  return summary;
}

std::string format_stats_table(const CorpusStats& stats) {
  std::vector<std::vector<std::string>> rows = {{"Sample", "# sentences", "# tokens"}};
  for (const auto& [sample, s] : stats.per_sample) {
    rows.push_back({sample, num(s.sentences), num(s.tokens)});
  }
  rows.push_back({"sum", num(stats.total.sentences), num(stats.total.tokens)});
  return render_table(rows, true);
}

std::string format_totals_table(const DiffReport& report, std::string_view name_a,
                                std::string_view name_b) {
  std::vector<std::vector<std::string>> rows = {
      {"Sample", std::string(name_a), std::string(name_b)}};
  for (const auto& [sample, c] : report.per_sample) {
    rows.push_back({sample, num(c.total_a), num(c.total_b)});
  }
  rows.push_back({"sum", num(report.total.total_a), num(report.total.total_b)});
  return render_table(rows, true);
}

std::string format_coverage_table(const DiffReport& report) {
  std::vector<std::vector<std::string>> rows = {
      {"Sample", "novel", "extended", "reduced", "shifted", "missing", "unchanged"}};
  auto row = [](const std::string& name, const DiffCounts& c) {
    return std::vector<std::string>{name,         num(c.novel),   num(c.extended),
                                    num(c.reduced), num(c.shifted), num(c.missing),
                                    num(c.unchanged)};
  };
  for (const auto& [sample, c] : report.per_sample) rows.push_back(row(sample, c));
  rows.push_back(row("sum", report.total));
  return render_table(rows, true);
}

std::string format_label_table(const LabelSummary& summary) {
  std::vector<std::vector<std::string>> rows = {{"Sample", "true", "false", "unlabeled"}};
  for (const auto& [sample, c] : summary.per_sample) {
    rows.push_back({sample, num(c.true_positive), num(c.false_positive), num(c.unlabeled)});
  }
  rows.push_back({"sum", num(summary.total.true_positive), num(summary.total.false_positive),
                  num(summary.total.unlabeled)});
  return render_table(rows, true);
}

void write_report_jsonl(std::ostream& out, const DiffReport& report) {
  for (const auto& [sample, c] : report.per_sample) {
    nlohmann::json j = counts_json(c);
    j["sample"] = sample;
    out << j.dump() << '\n';
  }
  nlohmann::json j = counts_json(report.total);
  j["sample"] = "sum";
  out << j.dump() << '\n';
}

void write_stats_jsonl(std::ostream& out, const CorpusStats& stats) {
  auto emit = [&](const std::string& sample, const SampleStats& s) {
    nlohmann::json j = {{"sample", sample},
                        {"documents", s.documents},
                        {"sentences", s.sentences},
                        {"tokens", s.tokens}};
    out << j.dump() << '\n';
  };
  for (const auto& [sample, s] : stats.per_sample) emit(sample, s);
  emit("sum", stats.total);
}

}  // namespace temponym
