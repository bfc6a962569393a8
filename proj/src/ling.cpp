#include "denograph/ling.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "denograph/errors.hpp"

namespace dg {

namespace {

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

// Maximal chunk segments. NP = B-NP (I-NP)*, VP = B-VP (I-VP)*, PP = single
// B-PP token (the label set has no I-PP), O tokens are singletons.
struct Segment {
  char kind;  // 'N', 'V', 'P', 'O'
  int begin;
  int end;  // exclusive
};

std::vector<Segment> segment_chunks(const std::vector<TaggedToken>& tokens) {
  std::vector<Segment> segs;
  const int n = static_cast<int>(tokens.size());
  int i = 0;
  while (i < n) {
    const std::string& c = tokens[i].chunk;
    if (c == "B-NP" || c == "I-NP") {
      int j = i + 1;
      while (j < n && tokens[j].chunk == "I-NP") ++j;
      segs.push_back({'N', i, j});
      i = j;
    } else if (c == "B-VP" || c == "I-VP") {
      int j = i + 1;
      while (j < n && tokens[j].chunk == "I-VP") ++j;
      segs.push_back({'V', i, j});
      i = j;
    } else if (c == "B-PP") {
      segs.push_back({'P', i, i + 1});
      ++i;
    } else {
      segs.push_back({'O', i, i + 1});
      ++i;
    }
  }
  return segs;
}

const Segment* segment_of(const std::vector<Segment>& segs, int index) {
  for (const Segment& s : segs)
    if (index >= s.begin && index < s.end) return &s;
  return nullptr;
}

// Re-establish BIO validity after token removal or replacement.
void fix_bio(std::vector<TaggedToken>& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string& c = tokens[i].chunk;
    if (c[0] != 'I') continue;
    std::string tail = c.substr(1);
    bool ok = i > 0 && (tokens[i - 1].chunk == "B" + tail ||
                        tokens[i - 1].chunk == "I" + tail);
    if (!ok) c = "B" + tail;
  }
}

// Last noun-tagged token of the NP segment containing `index`, or -1.
int np_head(const std::vector<TaggedToken>& tokens,
            const std::vector<Segment>& segs, int index) {
  const Segment* seg = segment_of(segs, index);
  if (!seg || seg->kind != 'N') return -1;
  int head = -1;
  for (int j = seg->begin; j < seg->end; ++j)
    if (is_noun_tag(tokens[j].pos)) head = j;
  return head;
}

std::vector<TaggedToken> remove_indices(const std::vector<TaggedToken>& tokens,
                                        const std::vector<int>& drop) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  std::size_t k = 0;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    if (k < drop.size() && drop[k] == i) {
      ++k;
      continue;
    }
    out.push_back(tokens[i]);
  }
  return out;
}

using Candidate = std::pair<std::vector<TaggedToken>, std::string>;  // tokens, rule

// R1: drop the determiners/articles of one NP.
void rule_drop_determiners(const std::vector<TaggedToken>& tokens,
                           const std::vector<Segment>& segs,
                           std::vector<Candidate>& out) {
  for (const Segment& seg : segs) {
    if (seg.kind != 'N') continue;
    std::vector<int> dts;
    for (int j = seg.begin; j < seg.end; ++j)
      if (is_determiner_tag(tokens[j].pos)) dts.push_back(j);
    if (dts.empty() || static_cast<int>(dts.size()) == seg.end - seg.begin)
      continue;
    out.emplace_back(remove_indices(tokens, dts), "R1");
  }
}

// R2: hypernym replacement. Lexicon keys are matched against the lemma
// sequence, longest key first at each start position. A single-lemma key
// must sit on the head noun of its NP; multi-word keys only need a noun at
// the start. Determiners of the NP the match starts in are dropped too.
void rule_hypernym(const std::vector<TaggedToken>& tokens,
                   const std::vector<Segment>& segs,
                   const HypernymLexicon& lexicon,
                   std::vector<Candidate>& out) {
  if (lexicon.empty()) return;
  const int n = static_cast<int>(tokens.size());
  std::vector<std::string> lemmas(n);
  for (int i = 0; i < n; ++i) lemmas[i] = lower(tokens[i].lemma);

  for (int i = 0; i < n; ++i) {
    if (!is_noun_tag(tokens[i].pos)) continue;
    const int max_len =
        std::min<int>(static_cast<int>(lexicon.max_key_words()), n - i);
    for (int len = max_len; len >= 1; --len) {
      std::string key = lemmas[i];
      for (int j = 1; j < len; ++j) key += " " + lemmas[i + j];
      const std::string* hyp = lexicon.next(key);
      if (!hyp) continue;
      if (len == 1 && np_head(tokens, segs, i) != i) break;

      std::vector<TaggedToken> replaced;
      const Segment* seg = segment_of(segs, i);
      for (int j = 0; j < i; ++j) {
        bool same_np_det = seg && seg->kind == 'N' && j >= seg->begin &&
                           is_determiner_tag(tokens[j].pos);
        if (!same_np_det) replaced.push_back(tokens[j]);
      }
      std::string first_chunk = tokens[i].chunk;
      std::string word;
      bool first = true;
      for (std::size_t p = 0; p <= hyp->size(); ++p) {
        if (p < hyp->size() && (*hyp)[p] != ' ') {
          word += (*hyp)[p];
          continue;
        }
        if (word.empty()) continue;
        std::string chunk = first ? first_chunk
                                  : (first_chunk == "O" ? "O" : "I-NP");
        replaced.push_back({word, word, "NN", chunk});
        word.clear();
        first = false;
      }
      for (int j = i + len; j < n; ++j) replaced.push_back(tokens[j]);
      out.emplace_back(std::move(replaced), "R2");
      break;  // longest match only at this position
    }
  }
}

// R3: drop a trailing PP modifier. Any B-PP that starts a suffix made up
// solely of prepositions and noun-phrase tokens can be dropped with
// everything after it.
void rule_drop_trailing_pp(const std::vector<TaggedToken>& tokens,
                           std::vector<Candidate>& out) {
  const int n = static_cast<int>(tokens.size());
  auto pp_or_np = [&](int j) {
    const std::string& c = tokens[j].chunk;
    return c == "B-PP" || c == "B-NP" || c == "I-NP";
  };
  for (int p = 1; p < n; ++p) {
    if (tokens[p].chunk != "B-PP") continue;
    bool clean = true;
    for (int j = p; j < n && clean; ++j) clean = pp_or_np(j);
    if (!clean) continue;
    out.emplace_back(
        std::vector<TaggedToken>(tokens.begin(), tokens.begin() + p), "R3");
  }
}

// R4: drop one adjectival/adverbial modifier inside an NP.
void rule_drop_modifier(const std::vector<TaggedToken>& tokens,
                        const std::vector<Segment>& segs,
                        std::vector<Candidate>& out) {
  for (const Segment& seg : segs) {
    if (seg.kind != 'N') continue;
    for (int j = seg.begin; j < seg.end; ++j) {
      if (!is_modifier_tag(tokens[j].pos)) continue;
      int remaining = 0;
      for (int k = seg.begin; k < seg.end; ++k)
        if (k != j && !is_determiner_tag(tokens[k].pos)) ++remaining;
      if (remaining == 0) continue;
      out.emplace_back(remove_indices(tokens, {j}), "R4");
    }
  }
}

// R5: extract a bare NP as a standalone expression.
void rule_extract_np(const std::vector<TaggedToken>& tokens,
                     const std::vector<Segment>& segs,
                     std::vector<Candidate>& out) {
  const int n = static_cast<int>(tokens.size());
  for (const Segment& seg : segs) {
    if (seg.kind != 'N' || seg.end - seg.begin >= n) continue;
    out.emplace_back(std::vector<TaggedToken>(tokens.begin() + seg.begin,
                                              tokens.begin() + seg.end),
                     "R5");
  }
}

// R6: truncate after the head verb of a VP (keep subject + verb).
void rule_truncate_vp(const std::vector<TaggedToken>& tokens,
                      const std::vector<Segment>& segs,
                      std::vector<Candidate>& out) {
  const int n = static_cast<int>(tokens.size());
  for (const Segment& seg : segs) {
    if (seg.kind != 'V') continue;
    int head = -1;
    for (int j = seg.begin; j < seg.end; ++j)
      if (is_verb_tag(tokens[j].pos)) head = j;
    if (head < 0 || head >= n - 1) continue;
    out.emplace_back(
        std::vector<TaggedToken>(tokens.begin(), tokens.begin() + head + 1),
        "R6");
  }
}

}  // namespace

std::string normalize(const std::vector<TaggedToken>& tokens) {
  std::string norm;
  for (const TaggedToken& t : tokens) {
    if (!norm.empty()) norm += ' ';
    norm += lower(t.lemma);
  }
  return norm;
}

Expression make_sentence(const CaptionRecord& record) {
  Expression e;
  e.tokens = record.tokens;
  e.level = 0;
  e.norm = normalize(e.tokens);
  return e;
}

RuleSet RuleSet::none() {
  RuleSet rs;
  rs.r1 = rs.r2 = rs.r3 = rs.r4 = rs.r5 = rs.r6 = false;
  return rs;
}

RuleSet RuleSet::parse(const std::string& spec) {
  RuleSet rs = RuleSet::none();
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    if (token == "R1")
      rs.r1 = true;
    else if (token == "R2")
      rs.r2 = true;
    else if (token == "R3")
      rs.r3 = true;
    else if (token == "R4")
      rs.r4 = true;
    else if (token == "R5")
      rs.r5 = true;
    else if (token == "R6")
      rs.r6 = true;
    else
      throw DataError("unknown rule id: " + token);
    token.clear();
  };
  for (char c : spec) {
    if (c == ',' || c == ' ')
      flush();
    else
      token += c;
  }
  flush();
  return rs;
}

bool RuleSet::enabled(int rule_number) const {
  switch (rule_number) {
    case 1: return r1;
    case 2: return r2;
    case 3: return r3;
    case 4: return r4;
    case 5: return r5;
    case 6: return r6;
    default: return false;
  }
}

std::string RuleSet::to_string() const {
  std::string out;
  for (int r = 1; r <= 6; ++r) {
    if (!enabled(r)) continue;
    if (!out.empty()) out += ',';
    out += "R" + std::to_string(r);
  }
  return out;
}

std::vector<std::pair<Expression, Derivation>> abstract_once(
    const Expression& expr, const HypernymLexicon& lexicon,
    const RuleSet& rules) {
  const std::vector<Segment> segs = segment_chunks(expr.tokens);

  std::vector<Candidate> candidates;
  if (rules.r1) rule_drop_determiners(expr.tokens, segs, candidates);
  if (rules.r2) rule_hypernym(expr.tokens, segs, lexicon, candidates);
  if (rules.r3) rule_drop_trailing_pp(expr.tokens, candidates);
  if (rules.r4) rule_drop_modifier(expr.tokens, segs, candidates);
  if (rules.r5) rule_extract_np(expr.tokens, segs, candidates);
  if (rules.r6) rule_truncate_vp(expr.tokens, segs, candidates);

  // Dedup by norm; candidates arrive in rule order, so the first occurrence
  // carries the smallest rule id.
  std::map<std::string, std::pair<Expression, Derivation>> by_norm;
  for (Candidate& cand : candidates) {
    if (cand.first.empty()) continue;
    fix_bio(cand.first);
    std::string norm = normalize(cand.first);
    if (norm == expr.norm || by_norm.count(norm)) continue;
    Expression out;
    out.tokens = std::move(cand.first);
    out.level = expr.level + 1;
    out.norm = norm;
    Derivation d{norm, expr.norm, cand.second};
    by_norm.emplace(std::move(norm), std::make_pair(std::move(out), std::move(d)));
  }

  std::vector<std::pair<Expression, Derivation>> out;
  out.reserve(by_norm.size());
  for (auto& [norm, pair] : by_norm) out.push_back(std::move(pair));
  return out;
}

Closure abstract_closure(const Expression& sentence,
                         const HypernymLexicon& lexicon, int max_levels,
                         const RuleSet& rules) {
  if (max_levels < 1) throw DataError("max_levels must be >= 1");

  std::map<std::string, Expression> visited;
  std::set<Derivation> derivations;
  visited[sentence.norm] = sentence;

  std::vector<Expression> frontier{sentence};
  for (int level = 0; level < max_levels && !frontier.empty(); ++level) {
    std::vector<Expression> next;
    for (const Expression& expr : frontier) {
      for (auto& [out, deriv] : abstract_once(expr, lexicon, rules)) {
        derivations.insert(deriv);
        if (!visited.count(out.norm)) {
          visited.emplace(out.norm, out);
          next.push_back(std::move(out));
        }
      }
    }
    std::sort(next.begin(), next.end(),
              [](const Expression& a, const Expression& b) {
                return a.norm < b.norm;
              });
    frontier = std::move(next);
  }

  Closure closure;
  closure.expressions.reserve(visited.size());
  for (auto& [norm, expr] : visited) closure.expressions.push_back(expr);
  std::sort(closure.expressions.begin(), closure.expressions.end(),
            [](const Expression& a, const Expression& b) {
              return std::tie(a.level, a.norm) < std::tie(b.level, b.norm);
            });
  closure.derivations.assign(derivations.begin(), derivations.end());
  return closure;
}

}  // namespace dg
