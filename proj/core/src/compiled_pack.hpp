#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <boost/regex.hpp>

#include "temponym/rulepack.hpp"

namespace temponym::detail {

// Parsed normalization template: a concatenation of nodes.
struct TemplateNode {
  enum class Kind { Literal, Group, Lookup, Ref };
  Kind kind = Kind::Literal;
  std::string text;  // literal text, norm resource name, or ref kind
  std::size_t group = 0;
  std::vector<TemplateNode> arg;
};

using Template = std::vector<TemplateNode>;

struct CompiledRule {
  std::string expanded;
  boost::regex regex;
  // (?:expanded)\z, used to find a match that ends exactly at a token end
  boost::regex anchored;
  Template value;
  Template freq;
  Template quant;
  Template mod;
};

struct CompiledPack {
  PackSource source;
  std::vector<CompiledRule> rules;
  std::unordered_map<std::string, std::size_t> index;
};

}  // namespace temponym::detail
