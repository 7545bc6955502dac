#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ug/dag.hpp"
#include "ug/symbols.hpp"

namespace ug {

enum class GrammarErrorCode {
  kSyntax,
  kUndeclaredConstituent,
  kDuplicateRuleId,
  kInconsistentEquations,
  kValidation,
};

struct GrammarError : std::runtime_error {
  GrammarError(GrammarErrorCode c, int line_number, const std::string& message)
      : std::runtime_error(line_number > 0
                               ? "line " + std::to_string(line_number) + ": " + message
                               : message),
        code(c),
        line(line_number) {}

  GrammarErrorCode code;
  int line;
};

// A production. Constituent labels from the source text (NP0, NP1, ...) are
// resolved at load time: equations are stored over rule-dag paths, where the
// left-hand side is the dag root and right-hand-side constituent i sits
// under the numbered arc <i>.
struct Rule {
  std::string id;
  Symbol lhs = kNoSymbol;
  std::vector<Symbol> rhs;  // categories, in order
  std::vector<Constraint> equations;
  FeatureDag dag;  // compiled by rule_to_dag
  std::size_t index = 0;
  int line = 0;
};

struct LexEntry {
  Symbol cat = kNoSymbol;
  FeatureDag dag;  // carries <cat> plus any lexical features
};

struct Grammar {
  std::vector<Rule> rules;
  std::map<std::string, std::vector<LexEntry>> lexicon;
  Symbol start = kNoSymbol;
  SymbolSet features;    // every feature name in any rule or lexical dag
  SymbolSet categories;  // every category symbol

  const Rule* rule(std::string_view id) const;
  const std::vector<std::size_t>& rule_indices_for_lhs(Symbol cat) const;

  // categories that can appear as parse goals: left-hand sides plus the
  // left-corner (first right-hand-side) categories
  SymbolSet goal_categories() const;

 private:
  friend Grammar load_grammar(std::istream&);
  std::map<Symbol, std::vector<std::size_t>, SymbolNameLess> by_lhs_;
  std::vector<std::size_t> no_rules_;
};

// Text format, one declaration per line ('#' starts a comment):
//
//   start NP
//   rule r1: NP0 -> NP1 POS NP2
//     <NP0 head> = <NP2 head>
//     <NP0 head sem owner> = <NP1 head sem>
//   lex Kris: NP  <head sem id> = kris
//   lex 's: POS
//
// Indented lines continue the preceding rule or lexical entry with
// equations. Rule equations address constituents by label; a trailing digit
// on a rule constituent is label decoration, so NP2 names an NP. Lexical
// equations have no label: paths apply to the entry itself.
Grammar load_grammar(std::istream& in);
Grammar load_grammar_text(std::string_view text);
Grammar load_grammar_file(const std::string& path);

// Build the rule dag: root carries <cat> = lhs, numbered arcs 1..n lead to
// the constituent nodes (each with its <cat>), equations install sharing and
// constants. Throws GrammarError(kInconsistentEquations) when the equations
// clash.
FeatureDag rule_to_dag(Symbol lhs, const std::vector<Symbol>& rhs,
                       const std::vector<Constraint>& equations);

}  // namespace ug
