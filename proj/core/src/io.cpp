#include "temponym/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "temponym/error.hpp"
#include "temponym/preprocess.hpp"
#include "xml.hpp"

namespace temponym {
namespace fs = std::filesystem;
namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool wanted(const fs::path& p, InputFormat format) {
  const std::string ext = p.extension().string();
  switch (format) {
    case InputFormat::Plain:
      return ext == ".txt";
    case InputFormat::Pretokenized:
      return ext == ".tsv";
    case InputFormat::TimeML:
      return ext == ".xml" || ext == ".tml";
  }
  return false;
}

const xml::Node* find_element(const xml::Node& node, std::string_view name) {
  if (!node.is_text && node.name == name) return &node;
  for (const auto& child : node.children) {
    if (const auto* hit = find_element(child, name)) return hit;
  }
  return nullptr;
}

std::optional<CalendarDate> creation_time(const xml::Node& node) {
  if (!node.is_text && node.name == "TIMEX3") {
    const auto* role = node.attribute("functionInDocument");
    const auto* value = node.attribute("value");
    if (role && *role == "CREATION_TIME" && value) {
      if (auto d = parse_date(std::string_view(*value).substr(0, 10))) return d;
    }
  }
  for (const auto& child : node.children) {
    if (auto d = creation_time(child)) return d;
  }
  return std::nullopt;
}

// TimeML: the text of the TEXT element (whole document if absent); the
// creation time comes from a TIMEX3 marked functionInDocument="CREATION_TIME".
Document read_timeml_document(const fs::path& path, const std::string& id) {
  const xml::Node root = xml::parse(slurp(path), path.string());
  const xml::Node* body = find_element(root, "TEXT");
  Document doc = preprocess((body ? *body : root).flattened_text(), creation_time(root));
  doc.source_id = id;
  return doc;
}

std::vector<Document> read_file(const fs::path& path, InputFormat format, const std::string& id) {
  switch (format) {
    case InputFormat::Plain: {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw InputError(path.string() + ": cannot open");
      return {read_plain_document(in, id)};
    }
    case InputFormat::Pretokenized: {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw InputError(path.string() + ": cannot open");
      return read_pretokenized_tsv(in, id);
    }
    case InputFormat::TimeML:
      return {read_timeml_document(path, id)};
  }
  return {};
}

std::string generic(const fs::path& p) { return p.generic_string(); }

}  // namespace

Document read_plain_document(std::istream& in, const std::string& id) {
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  if (raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
  std::optional<CalendarDate> dct;
  if (raw.starts_with("#dct=")) {
    const auto eol = raw.find('\n');
    std::string value = raw.substr(5, eol == std::string::npos ? std::string::npos : eol - 5);
    if (!value.empty() && value.back() == '\r') value.pop_back();
    dct = parse_date(value);
    if (!dct) throw InputError(id + ":1: invalid #dct line '" + value + "'");
    raw.erase(0, eol == std::string::npos ? raw.size() : eol + 1);
  }
  Document doc = preprocess(raw, dct);
  doc.source_id = id;
  return doc;
}

std::vector<Document> load_corpus(std::span<const fs::path> inputs, InputFormat format,
                                  const std::optional<CalendarDate>& dct_override) {
  std::vector<Document> docs;
  for (const fs::path& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<fs::path> files;
      for (auto it = fs::recursive_directory_iterator(input, ec);
           !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (it->is_regular_file() && wanted(it->path(), format)) files.push_back(it->path());
      }
      if (ec) throw InputError(input.string() + ": " + ec.message());
      std::sort(files.begin(), files.end());
      const fs::path root = input.lexically_normal();
      std::string root_name = generic(root.filename());
      if (root_name.empty()) root_name = generic(root.parent_path().filename());
      for (const fs::path& file : files) {
        const fs::path rel = file.lexically_normal().lexically_relative(root);
        const std::string sample =
            std::distance(rel.begin(), rel.end()) > 1 ? generic(*rel.begin()) : root_name;
        for (Document& d : read_file(file, format, generic(rel))) {
          d.sample = sample;
          docs.push_back(std::move(d));
        }
      }
    } else if (fs::is_regular_file(input, ec)) {
      const fs::path parent = fs::absolute(input).lexically_normal().parent_path();
      const std::string sample = generic(parent.filename());
      for (Document& d : read_file(input, format, generic(input.lexically_normal()))) {
        d.sample = sample;
        docs.push_back(std::move(d));
      }
    } else {
      throw InputError(input.string() + ": no such file or directory");
    }
  }
  if (dct_override) {
    for (Document& d : docs) d.dct = dct_override;
  }
  return docs;
}

void write_standoff(std::ostream& out, const Document& doc,
                    std::span<const Timex3Annotation> annotations) {
  for (const auto& a : annotations) {
    nlohmann::ordered_json j;
    j["doc"] = doc.source_id;
    j["sample"] = doc.sample;
    j["begin"] = a.span.begin;
    j["end"] = a.span.end;
    j["surface"] = a.surface;
    j["type"] = to_string(a.type);
    j["value"] = a.value;
    j["freq"] = a.freq;
    j["quant"] = a.quant;
    j["mod"] = a.mod;
    j["rule_name"] = a.rule_name;
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
  }
}

CorpusRun read_standoff(std::istream& in, const std::string& source) {
  CorpusRun run;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      const std::string doc = j.at("doc").get<std::string>();
      auto [it, fresh] = index.emplace(doc, run.size());
      if (fresh) run.push_back({doc, j.value("sample", std::string()), {}});
      // a document may be listed without annotations
      if (!j.contains("begin")) continue;
      Timex3Annotation a;
      a.span = {j.at("begin").get<std::size_t>(), j.at("end").get<std::size_t>()};
      if (a.span.end < a.span.begin) throw InputError(where + ": end before begin");
      a.surface = j.value("surface", std::string());
      const auto type = parse_timex_type(j.at("type").get<std::string>());
      if (!type) throw InputError(where + ": unknown type");
      a.type = *type;
      a.value = j.value("value", std::string());
      a.freq = j.value("freq", std::string());
      a.quant = j.value("quant", std::string());
      a.mod = j.value("mod", std::string());
      a.rule_name = j.value("rule_name", std::string());
      run[it->second].annotations.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return run;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_inline_timeml(std::ostream& out, const Document& doc,
                         std::span<const Timex3Annotation> annotations) {
  std::size_t pos = 0;
  std::size_t tid = 0;
  for (const auto& a : annotations) {
    out << xml_escape(doc.text.substr(pos, a.span.begin - pos));
    out << "<TIMEX3 tid=\"t" << ++tid << "\" type=\"" << to_string(a.type) << "\" value=\""
        << xml_escape(a.value) << "\"";
    if (!a.freq.empty()) out << " freq=\"" << xml_escape(a.freq) << "\"";
    if (!a.quant.empty()) out << " quant=\"" << xml_escape(a.quant) << "\"";
    if (!a.mod.empty()) out << " mod=\"" << xml_escape(a.mod) << "\"";
    out << ">" << xml_escape(doc.slice(a.span)) << "</TIMEX3>";
    pos = a.span.end;
  }
  out << xml_escape(std::string_view(doc.text).substr(pos)) << "\n";
}

void write_annotation_table(std::ostream& out, const Document& doc,
                            std::span<const Timex3Annotation> annotations) {
  out << "# " << doc.source_id << " (" << annotations.size() << ")\n";
  for (const auto& a : annotations) {
    out << std::setw(6) << a.span.begin << std::setw(6) << a.span.end << "  " << std::left
        << std::setw(9) << to_string(a.type) << std::setw(14) << a.value << std::right << "  "
        << a.surface << "  [" << a.rule_name << "]\n";
  }
}

}  // namespace temponym
