#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace temponym::xml {

// Minimal DOM for well-formed XML 1.0 documents. Text and element children
// are kept in document order.
struct Node {
  bool is_text = false;
  std::string name;  // element name
  std::string text;  // character data for text nodes
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;

  const std::string* attribute(std::string_view key) const;
  // Concatenated character data of all descendants.
  std::string flattened_text() const;
};

// Parses a complete document and returns its root element. Enforces
// matching end tags, a single root, quoted unique attributes, and known
// entities; DOCTYPE declarations, comments and processing instructions are
// skipped. Throws InputError("<source>:<line>: ...").
Node parse(std::string_view input, const std::string& source);

}  // namespace temponym::xml
