#pragma once

#include <string>
#include <vector>

#include "denograph/corpus.hpp"

namespace dg {

/// A linguistic expression: annotated tokens plus a canonical key. The norm
/// is the lowercased lemma sequence joined by single spaces and is always
/// recomputable from the tokens. level 0 is a full caption sentence; each
/// rule application increases the level by one.
struct Expression {
  std::vector<TaggedToken> tokens;
  int level = 0;
  std::string norm;
};

std::string normalize(const std::vector<TaggedToken>& tokens);
Expression make_sentence(const CaptionRecord& record);

/// parent is the more generic expression produced from child by rule_id.
struct Derivation {
  std::string parent_norm;
  std::string child_norm;
  std::string rule_id;

  bool operator==(const Derivation&) const = default;
  auto operator<=>(const Derivation&) const = default;
};

/// The six templated abstraction rules, individually switchable:
///   R1  drop the determiners/articles of one NP
///   R2  replace a head noun (or a multi-word lexicon key, matched greedily
///       longest-first over lemmas) by its next hypernym; determiners of the
///       NP the match starts in are dropped with it
///   R3  drop a trailing PP modifier (a preposition-led suffix made up of
///       prepositions and noun phrases only)
///   R4  drop one adjectival/adverbial pre-modifier inside an NP
///   R5  extract a bare NP as a standalone expression
///   R6  truncate after the head verb of a VP (keep subject + verb)
struct RuleSet {
  bool r1 = true, r2 = true, r3 = true, r4 = true, r5 = true, r6 = true;

  static RuleSet all() { return RuleSet{}; }
  static RuleSet none();
  /// Parses "R1,R3,R5"; unknown names throw DataError.
  static RuleSet parse(const std::string& spec);
  bool enabled(int rule_number) const;
  std::string to_string() const;
};

/// Every distinct expression producible from `expr` by exactly one
/// application of one enabled rule, each paired with its derivation
/// (parent = the produced, more generic expression; child = `expr`).
/// Outputs are deduplicated by norm and sorted by norm.
std::vector<std::pair<Expression, Derivation>> abstract_once(
    const Expression& expr, const HypernymLexicon& lexicon,
    const RuleSet& rules = RuleSet::all());

struct Closure {
  std::vector<Expression> expressions;   // includes the sentence; sorted by (level, norm)
  std::vector<Derivation> derivations;   // deduplicated by (parent, child), sorted
};

/// Breadth-first closure of abstract_once up to max_levels levels above the
/// sentence. Each norm keeps the minimum level at which it first appears.
Closure abstract_closure(const Expression& sentence,
                         const HypernymLexicon& lexicon, int max_levels,
                         const RuleSet& rules = RuleSet::all());

}  // namespace dg
