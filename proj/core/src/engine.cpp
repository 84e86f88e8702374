#include "temponym/engine.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "compiled_pack.hpp"
#include "temponym/error.hpp"
#include "temponym/relative.hpp"

namespace temponym {
namespace {

using detail::Template;
using detail::TemplateNode;

struct EvalContext {
  const RulePack& pack;
  const Rule& rule;
  std::span<const std::string> groups;
  const std::optional<CalendarDate>& dct;
};

std::string evaluate(const Template& tmpl, const EvalContext& ctx) {
  std::string out;
  for (const TemplateNode& node : tmpl) {
    switch (node.kind) {
      case TemplateNode::Kind::Literal:
        out += node.text;
        break;
      case TemplateNode::Kind::Group:
        if (node.group < ctx.groups.size()) out += ctx.groups[node.group];
        break;
      case TemplateNode::Kind::Lookup: {
        const std::string key = evaluate(node.arg, ctx);
        const auto& table = ctx.pack.norm_resources().at(node.text);
        auto it = table.find(key);
        if (it == table.end()) {
          throw NormalizationError("rule '" + ctx.rule.name + "': key '" + key +
                                   "' not found in norm resource '" + node.text + "'");
        }
        out += it->second;
        break;
      }
      case TemplateNode::Kind::Ref: {
        const std::string arg = evaluate(node.arg, ctx);
        const auto ref = make_relative(node.text, arg);
        if (!ref) {
          throw NormalizationError("rule '" + ctx.rule.name + "': invalid %ref(" + node.text +
                                   "," + arg + ")");
        }
        out += ctx.dct ? resolve_relative(*ref, *ctx.dct) : unanchored_value(*ref);
        break;
      }
    }
  }
  return out;
}

struct Candidate {
  Span span;
  std::size_t rule = 0;
  std::vector<std::string> groups;
};

const Token* token_at(std::span<const Token> tokens, std::size_t offset) {
  auto it = std::upper_bound(tokens.begin(), tokens.end(), offset,
                             [](std::size_t o, const Token& t) { return o < t.span.begin; });
  if (it == tokens.begin()) return nullptr;
  --it;
  return it->span.end > offset ? &*it : nullptr;
}

using Iter = std::string::const_iterator;

// Finds the match of `rule` starting at `start` that ends on a token end.
// Tries the regex engine's own match first and falls back to the longest
// token-aligned match. Lookbehind may inspect text before the sentence, but
// not before the document.
bool match_at(const detail::CompiledRule& rule, const Document& doc,
              std::span<const Token> tokens, std::size_t first_token, std::size_t sentence_end,
              boost::smatch& m) {
  const Iter text_begin = doc.text.begin();
  const Iter begin = text_begin + static_cast<std::ptrdiff_t>(tokens[first_token].span.begin);
  const Iter end = text_begin + static_cast<std::ptrdiff_t>(sentence_end);
  const auto flags = boost::match_continuous | boost::match_not_null |
                     (begin == text_begin ? boost::match_default : boost::match_prev_avail);
  if (!boost::regex_search(begin, end, m, rule.regex, flags, text_begin)) return false;
  const auto match_end = static_cast<std::size_t>(m[0].second - text_begin);
  for (std::size_t t = first_token; t < tokens.size(); ++t) {
    if (tokens[t].span.end == match_end) return true;
    if (tokens[t].span.end > match_end) break;
  }
  for (std::size_t t = tokens.size(); t-- > first_token;) {
    const Iter stop = text_begin + static_cast<std::ptrdiff_t>(tokens[t].span.end);
    if (boost::regex_search(begin, stop, m, rule.anchored, flags, text_begin)) return true;
  }
  return false;
}

bool satisfies_pos(const Rule& rule, const boost::smatch& m, const Document& doc,
                   std::span<const Token> tokens) {
  for (const PosConstraint& c : rule.pos_constraints) {
    if (!m[static_cast<int>(c.group)].matched) continue;
    const auto offset = static_cast<std::size_t>(m[static_cast<int>(c.group)].first -
                                                 doc.text.begin());
    const Token* token = token_at(tokens, offset);
    if (token == nullptr) return false;
    if (std::find(c.tags.begin(), c.tags.end(), token->pos) == c.tags.end()) return false;
  }
  return true;
}

}  // namespace

bool RuleSelection::active(const Rule& rule) const {
  if (disabled.contains(rule.name)) return false;
  return rule.enabled_by_default || enabled.contains(rule.name);
}

Normalization normalize_match(const RulePack& pack, std::size_t rule_index,
                              std::span<const std::string> groups,
                              const std::optional<CalendarDate>& dct) {
  const Rule& rule = pack.rules().at(rule_index);
  const auto& compiled = pack.compiled().rules.at(rule_index);
  const EvalContext ctx{pack, rule, groups, dct};
  Normalization n;
  n.value = evaluate(compiled.value, ctx);
  n.freq = evaluate(compiled.freq, ctx);
  n.quant = evaluate(compiled.quant, ctx);
  n.mod = evaluate(compiled.mod, ctx);
  if (!is_valid_value(n.value)) {
    throw NormalizationError("rule '" + rule.name + "': value '" + n.value +
                             "' does not follow the TIMEX3 value grammar");
  }
  return n;
}

std::vector<Timex3Annotation> match_document(const RulePack& pack, const Document& doc,
                                             const RuleSelection& selection) {
  const auto& rules = pack.rules();
  const auto& compiled = pack.compiled().rules;
  std::vector<Timex3Annotation> result;

  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto tokens = doc.sentence_tokens(s);
    if (tokens.empty()) continue;
    const std::size_t sentence_end = doc.sentences[s].end;

    std::vector<Candidate> positives;
    std::vector<Span> negatives;
    boost::smatch m;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const Rule& rule = rules[r];
      if (!selection.active(rule)) continue;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (!match_at(compiled[r], doc, tokens, t, sentence_end, m)) continue;
        if (!satisfies_pos(rule, m, doc, tokens)) continue;
        const Span span{static_cast<std::size_t>(m[0].first - doc.text.begin()),
                        static_cast<std::size_t>(m[0].second - doc.text.begin())};
        if (rule.polarity == Polarity::Negative) {
          negatives.push_back(span);
          continue;
        }
        Candidate c{span, r, {}};
        c.groups.reserve(m.size());
        for (std::size_t g = 0; g < m.size(); ++g) {
          c.groups.push_back(m[static_cast<int>(g)].matched ? m[static_cast<int>(g)].str()
                                                            : std::string());
        }
        positives.push_back(std::move(c));
      }
    }

    // longest span, then priority, then pack order
    std::sort(positives.begin(), positives.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
      if (rules[a.rule].priority != rules[b.rule].priority) {
        return rules[a.rule].priority > rules[b.rule].priority;
      }
      if (a.rule != b.rule) return a.rule < b.rule;
      return a.span.begin < b.span.begin;
    });
    std::vector<const Candidate*> accepted;
    for (const Candidate& c : positives) {
      const bool clashes = std::any_of(accepted.begin(), accepted.end(),
                                       [&](const Candidate* o) { return o->span.overlaps(c.span); });
      if (!clashes) accepted.push_back(&c);
    }
    std::erase_if(accepted, [&](const Candidate* c) {
      return std::any_of(negatives.begin(), negatives.end(),
                         [&](const Span& n) { return n.overlaps(c->span); });
    });
    std::sort(accepted.begin(), accepted.end(),
              [](const Candidate* a, const Candidate* b) { return a->span.begin < b->span.begin; });

    for (const Candidate* c : accepted) {
      const Rule& rule = rules[c->rule];
      Normalization n = normalize_match(pack, c->rule, c->groups, doc.dct);
      Timex3Annotation a;
      a.span = c->span;
      a.surface = std::string(doc.slice(c->span));
      a.type = rule.type;
      a.value = std::move(n.value);
      a.freq = std::move(n.freq);
      a.quant = std::move(n.quant);
      a.mod = std::move(n.mod);
      a.rule_name = rule.name;
      result.push_back(std::move(a));
    }
  }
  return result;
}

std::vector<std::vector<Timex3Annotation>> tag_corpus(const RulePack& pack,
                                                      std::span<const Document> docs,
                                                      const RuleSelection& selection,
                                                      unsigned jobs) {
  std::vector<std::vector<Timex3Annotation>> out(docs.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(docs.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) out[i] = match_document(pack, docs[i], selection);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> workers;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < docs.size() && !failed; i = next++) {
        try {
          out[i] = match_document(pack, docs[i], selection);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace temponym
