#include "xml.hpp"

#include <charconv>

#include "temponym/error.hpp"
#include "temponym/utf8.hpp"

namespace temponym::xml {
namespace {

class Parser {
 public:
  Parser(std::string_view input, const std::string& source) : in_(input), source_(source) {
    if (in_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  Node document() {
    misc(true);
    if (eof() || peek() != '<') fail("expected root element");
    Node root = element();
    misc(false);
    if (!eof()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < in_.size(); ++i) {
      if (in_[i] == '\n') ++line;
    }
    throw InputError(source_ + ":" + std::to_string(line) + ": malformed XML: " + what);
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) {
      ++pos_;
    }
  }

  void skip_past(std::string_view terminator, const char* what) {
    const auto end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
  }

  void doctype() {
    // <!DOCTYPE name ... [internal subset]>
    int bracket = 0;
    while (!eof()) {
      const char c = peek();
      if (c == '"' || c == '\'') {
        const auto end = in_.find(c, pos_ + 1);
        if (end == std::string_view::npos) fail("unterminated literal in DOCTYPE");
        pos_ = end + 1;
        continue;
      }
      ++pos_;
      if (c == '[') ++bracket;
      if (c == ']') --bracket;
      if (c == '>' && bracket == 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  // Whitespace, comments, processing instructions and (in the prolog) a
  // DOCTYPE declaration.
  void misc(bool prolog) {
    while (true) {
      skip_space();
      if (starts("<?")) {
        skip_past("?>", "processing instruction");
      } else if (starts("<!--")) {
        skip_past("-->", "comment");
      } else if (prolog && starts("<!DOCTYPE")) {
        doctype();
      } else {
        return;
      }
    }
  }

  static bool name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == ':' || c == '-' || c == '.' || u >= 0x80;
  }

  std::string name() {
    const std::size_t start = pos_;
    while (!eof() && name_char(peek())) ++pos_;
    if (pos_ == start) fail("expected a name");
    const char first = in_[start];
    if ((first >= '0' && first <= '9') || first == '-' || first == '.') {
      fail("invalid name '" + std::string(in_.substr(start, pos_ - start)) + "'");
    }
    return std::string(in_.substr(start, pos_ - start));
  }

  void entity(std::string& out) {
    ++pos_;  // '&'
    const auto end = in_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("unterminated entity reference");
    const std::string_view ref = in_.substr(pos_, end - pos_);
    pos_ = end + 1;
    if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "amp") {
      out += '&';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref.starts_with('#')) {
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      auto [ptr, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() ||
          cp == 0 || cp > 0x10FFFF) {
        fail("invalid character reference '&" + std::string(ref) + ";'");
      }
      utf8::append(out, static_cast<char32_t>(cp));
    } else {
      fail("unknown entity '&" + std::string(ref) + ";'");
    }
  }

  Node element() {
    ++pos_;  // '<'
    Node node;
    node.name = name();
    while (true) {
      const std::size_t before = pos_;
      skip_space();
      if (eof()) fail("unterminated start tag <" + node.name + ">");
      if (starts("/>")) {
        pos_ += 2;
        return node;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (pos_ == before) fail("expected whitespace before attribute in <" + node.name + ">");
      std::string key = name();
      skip_space();
      if (eof() || peek() != '=') fail("attribute '" + key + "' lacks a value");
      ++pos_;
      skip_space();
      if (eof() || (peek() != '"' && peek() != '\'')) {
        fail("attribute '" + key + "' value must be quoted");
      }
      const char quote = peek();
      ++pos_;
      std::string value;
      while (true) {
        if (eof()) fail("unterminated value of attribute '" + key + "'");
        const char c = peek();
        if (c == quote) {
          ++pos_;
          break;
        }
        if (c == '<') fail("'<' in value of attribute '" + key + "'");
        if (c == '&') {
          entity(value);
        } else {
          value += c;
          ++pos_;
        }
      }
      for (const auto& [k, v] : node.attributes) {
        if (k == key) fail("duplicate attribute '" + key + "' in <" + node.name + ">");
      }
      node.attributes.emplace_back(std::move(key), std::move(value));
    }
    content(node);
    return node;
  }

  void content(Node& parent) {
    std::string text;
    auto flush = [&] {
      if (text.empty()) return;
      Node t;
      t.is_text = true;
      t.text = std::move(text);
      parent.children.push_back(std::move(t));
      text.clear();
    };
    while (true) {
      if (eof()) fail("missing end tag </" + parent.name + ">");
      const char c = peek();
      if (c == '&') {
        entity(text);
        continue;
      }
      if (c != '<') {
        text += c;
        ++pos_;
        continue;
      }
      if (starts("</")) {
        flush();
        pos_ += 2;
        const std::string closing = name();
        skip_space();
        if (eof() || peek() != '>') fail("malformed end tag </" + closing);
        ++pos_;
        if (closing != parent.name) {
          fail("end tag </" + closing + "> does not match <" + parent.name + ">");
        }
        return;
      }
      if (starts("<!--")) {
        skip_past("-->", "comment");
      } else if (starts("<![CDATA[")) {
        pos_ += 9;
        const auto end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        text.append(in_.substr(pos_, end - pos_));
        pos_ = end + 3;
      } else if (starts("<?")) {
        skip_past("?>", "processing instruction");
      } else {
        flush();
        parent.children.push_back(element());
      }
    }
  }

  std::string_view in_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

void flatten(const Node& node, std::string& out) {
  for (const Node& child : node.children) {
    if (child.is_text) {
      out += child.text;
    } else {
      flatten(child, out);
    }
  }
}

}  // namespace

const std::string* Node::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Node::flattened_text() const {
  std::string out;
  flatten(*this, out);
  return out;
}

Node parse(std::string_view input, const std::string& source) {
  return Parser(input, source).document();
}

}  // namespace temponym::xml
