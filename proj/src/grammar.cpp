#include "ug/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace ug {

const Rule* Grammar::rule(std::string_view id) const {
  for (const Rule& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

const std::vector<std::size_t>& Grammar::rule_indices_for_lhs(Symbol cat) const {
  auto it = by_lhs_.find(cat);
  return it == by_lhs_.end() ? no_rules_ : it->second;
}

SymbolSet Grammar::goal_categories() const {
  SymbolSet out;
  for (const Rule& r : rules) {
    out.insert(r.lhs);
    out.insert(r.rhs.front());
  }
  return out;
}

FeatureDag rule_to_dag(Symbol lhs, const std::vector<Symbol>& rhs,
                       const std::vector<Constraint>& equations) {
  DagBuilder builder;
  std::uint32_t root = builder.root();
  builder.set_atom(builder.ensure(root, {cat_symbol()}), lhs);
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    Path p{position_symbol(i + 1), cat_symbol()};
    builder.set_atom(builder.ensure(root, p), rhs[i]);
  }
  for (const Constraint& eq : equations) {
    if (eq.kind == Constraint::kPathPath) {
      std::uint32_t na = builder.ensure(root, eq.a);
      std::uint32_t nb = builder.ensure(root, eq.b);
      if (na == DagBuilder::kNoNode || nb == DagBuilder::kNoNode ||
          !builder.merge(na, nb))
        throw GrammarError(GrammarErrorCode::kInconsistentEquations, 0,
                           "inconsistent equation " + eq.to_string());
    } else {
      std::uint32_t np = builder.ensure(root, eq.a);
      if (np == DagBuilder::kNoNode || !builder.set_atom(np, eq.value))
        throw GrammarError(GrammarErrorCode::kInconsistentEquations, 0,
                           "inconsistent equation " + eq.to_string());
    }
  }
  auto dag = builder.finish();
  if (!dag)
    throw GrammarError(GrammarErrorCode::kInconsistentEquations, 0,
                       "equations create a cyclic structure");
  return *dag;
}

namespace {

// --- line scanner -----------------------------------------------------------

struct LineScanner {
  std::string_view text;
  std::size_t pos = 0;
  int line;

  explicit LineScanner(std::string_view t, int line_number)
      : text(t), line(line_number) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw GrammarError(GrammarErrorCode::kSyntax, line, message);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  // Bare token: anything up to whitespace or one of the structural chars.
  std::string token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '>' ||
          c == '=')
        break;
      ++pos;
    }
    if (pos == start) fail("expected a symbol");
    return std::string(text.substr(start, pos - start));
  }

  // Token that may contain '=' etc. but ends at ':' (rule ids, lex forms).
  std::string token_until_colon() {
    skip_ws();
    std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) fail("expected ':'");
    std::size_t end = colon;
    while (end > pos && std::isspace(static_cast<unsigned char>(text[end - 1])))
      --end;
    if (end == pos) fail("expected a name before ':'");
    std::string out(text.substr(pos, end - pos));
    pos = colon + 1;
    return out;
  }
};

struct RawEquation {
  std::vector<std::string> left;   // first element may be a label
  std::vector<std::string> right;  // empty when the right side is a constant
  std::string constant;
  int line;
};

std::vector<std::string> parse_angle_group(LineScanner& sc) {
  sc.expect('<');
  std::vector<std::string> items;
  while (sc.peek() != '>' && !sc.at_end()) items.push_back(sc.token());
  sc.expect('>');
  if (items.empty()) sc.fail("empty <> group");
  return items;
}

RawEquation parse_equation(LineScanner& sc) {
  RawEquation eq;
  eq.line = sc.line;
  eq.left = parse_angle_group(sc);
  sc.expect('=');
  if (sc.peek() == '<') {
    eq.right = parse_angle_group(sc);
  } else {
    eq.constant = sc.token();
  }
  return eq;
}

// Trailing digits on a rule constituent are label decoration: NP2 names an
// NP. A label that is all digits is rejected.
std::string strip_decoration(const std::string& label, int line) {
  std::size_t end = label.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(label[end - 1])))
    --end;
  if (end == 0)
    throw GrammarError(GrammarErrorCode::kSyntax, line,
                       "constituent '" + label + "' has no category name");
  return label.substr(0, end);
}

struct PendingRule {
  std::string id;
  std::string lhs_label;
  std::vector<std::string> rhs_labels;
  std::vector<RawEquation> equations;
  int line;
};

struct PendingLex {
  std::string form;
  std::string cat;
  std::vector<RawEquation> equations;
  int line;
};

}  // namespace

Grammar load_grammar(std::istream& in) {
  Grammar grammar;
  std::vector<PendingRule> rules;
  std::vector<PendingLex> lexes;
  std::string start_name;
  int start_line = 0;

  enum class Attach { kNone, kRule, kLex };
  Attach attach = Attach::kNone;

  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view view(raw);
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    std::size_t first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    bool indented = first > 0;

    LineScanner sc(view, line_number);
    if (indented) {
      // Continuation: equations for the preceding declaration.
      if (attach == Attach::kNone)
        sc.fail("equation without a preceding rule or lex entry");
      while (!sc.at_end()) {
        RawEquation eq = parse_equation(sc);
        if (attach == Attach::kRule)
          rules.back().equations.push_back(std::move(eq));
        else
          lexes.back().equations.push_back(std::move(eq));
      }
      continue;
    }

    std::string keyword = sc.token();
    if (keyword == "start") {
      if (!start_name.empty())
        sc.fail("duplicate start declaration");
      start_name = sc.token();
      start_line = line_number;
      if (!sc.at_end()) sc.fail("unexpected text after start category");
      attach = Attach::kNone;
    } else if (keyword == "rule") {
      PendingRule r;
      r.line = line_number;
      r.id = sc.token_until_colon();
      r.lhs_label = sc.token();
      sc.skip_ws();
      if (sc.text.substr(sc.pos, 2) != "->") sc.fail("expected '->'");
      sc.pos += 2;
      while (!sc.at_end() && sc.peek() != '<') r.rhs_labels.push_back(sc.token());
      if (r.rhs_labels.empty()) sc.fail("rule needs at least one constituent");
      while (!sc.at_end()) r.equations.push_back(parse_equation(sc));
      rules.push_back(std::move(r));
      attach = Attach::kRule;
    } else if (keyword == "lex") {
      PendingLex l;
      l.line = line_number;
      l.form = sc.token_until_colon();
      l.cat = sc.token();
      while (!sc.at_end()) l.equations.push_back(parse_equation(sc));
      lexes.push_back(std::move(l));
      attach = Attach::kLex;
    } else {
      sc.fail("unknown declaration '" + keyword + "'");
    }
  }

  if (rules.empty())
    throw GrammarError(GrammarErrorCode::kValidation, 0,
                       "grammar must declare at least one rule");
  if (start_name.empty())
    throw GrammarError(GrammarErrorCode::kValidation, 0,
                       "grammar must declare a start category");

  // Resolve rules.
  std::set<std::string> seen_ids;
  for (PendingRule& pr : rules) {
    if (!seen_ids.insert(pr.id).second)
      throw GrammarError(GrammarErrorCode::kDuplicateRuleId, pr.line,
                         "duplicate rule id '" + pr.id + "'");

    Rule rule;
    rule.id = pr.id;
    rule.line = pr.line;
    rule.lhs = intern(strip_decoration(pr.lhs_label, pr.line));
    for (const std::string& label : pr.rhs_labels)
      rule.rhs.push_back(intern(strip_decoration(label, pr.line)));

    // Label -> dag path prefix. Duplicate labels are only an error when an
    // equation actually refers to one.
    std::map<std::string, Path> prefix;
    std::set<std::string> ambiguous;
    auto declare = [&](const std::string& label, Path p) {
      if (!prefix.emplace(label, std::move(p)).second) ambiguous.insert(label);
    };
    declare(pr.lhs_label, Path{});
    for (std::size_t i = 0; i < pr.rhs_labels.size(); ++i)
      declare(pr.rhs_labels[i], Path{position_symbol(i + 1)});

    auto resolve = [&](const std::vector<std::string>& side,
                       int line) -> Path {
      const std::string& label = side.front();
      auto it = prefix.find(label);
      if (it == prefix.end())
        throw GrammarError(GrammarErrorCode::kUndeclaredConstituent, line,
                           "equation refers to undeclared constituent '" +
                               label + "' in rule " + pr.id);
      if (ambiguous.count(label))
        throw GrammarError(GrammarErrorCode::kSyntax, line,
                           "constituent label '" + label +
                               "' is ambiguous in rule " + pr.id);
      Path p = it->second;
      for (std::size_t i = 1; i < side.size(); ++i) p.push_back(intern(side[i]));
      return p;
    };

    for (const RawEquation& eq : pr.equations) {
      Path left = resolve(eq.left, eq.line);
      if (!eq.right.empty()) {
        rule.equations.push_back(
            Constraint::eq(std::move(left), resolve(eq.right, eq.line)));
      } else {
        rule.equations.push_back(
            Constraint::is(std::move(left), intern(eq.constant)));
      }
    }

    if (rule.rhs.size() == 1 && rule.rhs[0] == rule.lhs && rule.equations.empty())
      throw GrammarError(GrammarErrorCode::kValidation, pr.line,
                         "rule " + pr.id +
                             " rewrites a category as itself with no equations");

    try {
      rule.dag = rule_to_dag(rule.lhs, rule.rhs, rule.equations);
    } catch (const GrammarError& e) {
      throw GrammarError(e.code, pr.line, std::string(e.what()) + " in rule " + pr.id);
    }
    rule.index = grammar.rules.size();
    grammar.rules.push_back(std::move(rule));
  }

  // Resolve lexicon.
  for (const PendingLex& pl : lexes) {
    LexEntry entry;
    entry.cat = intern(pl.cat);
    DagBuilder builder;
    builder.set_atom(builder.ensure(builder.root(), {cat_symbol()}), entry.cat);
    for (const RawEquation& eq : pl.equations) {
      Path left;
      for (const std::string& f : eq.left) left.push_back(intern(f));
      std::uint32_t nl = builder.ensure(builder.root(), left);
      bool ok = nl != DagBuilder::kNoNode;
      if (ok && !eq.right.empty()) {
        Path right;
        for (const std::string& f : eq.right) right.push_back(intern(f));
        std::uint32_t nr = builder.ensure(builder.root(), right);
        ok = nr != DagBuilder::kNoNode && builder.merge(nl, nr);
      } else if (ok) {
        ok = builder.set_atom(nl, intern(eq.constant));
      }
      if (!ok)
        throw GrammarError(GrammarErrorCode::kInconsistentEquations, eq.line,
                           "inconsistent lexical equation for '" + pl.form + "'");
    }
    auto dag = builder.finish();
    if (!dag)
      throw GrammarError(GrammarErrorCode::kInconsistentEquations, pl.line,
                         "cyclic lexical entry for '" + pl.form + "'");
    entry.dag = *dag;
    grammar.lexicon[pl.form].push_back(std::move(entry));
  }

  // Vocabulary and category inventory.
  grammar.features.insert(cat_symbol());
  auto note_features = [&grammar](const std::vector<Constraint>& cs) {
    for (const Constraint& c : cs) {
      for (Symbol f : c.a)
        if (!is_position_symbol(f)) grammar.features.insert(f);
      for (Symbol f : c.b)
        if (!is_position_symbol(f)) grammar.features.insert(f);
    }
  };
  for (const Rule& r : grammar.rules) {
    note_features(r.equations);
    grammar.categories.insert(r.lhs);
    for (Symbol c : r.rhs) grammar.categories.insert(c);
  }
  for (const auto& [form, entries] : grammar.lexicon) {
    (void)form;
    for (const LexEntry& e : entries) {
      grammar.categories.insert(e.cat);
      note_features(constraints_of(e.dag));
      for (const Path& p : leaf_paths(e.dag))
        for (Symbol f : p) grammar.features.insert(f);
    }
  }

  grammar.start = intern(start_name);
  if (!grammar.categories.count(grammar.start))
    throw GrammarError(GrammarErrorCode::kValidation, start_line,
                       "start category '" + start_name +
                           "' does not appear in the grammar");

  for (std::size_t i = 0; i < grammar.rules.size(); ++i)
    grammar.by_lhs_[grammar.rules[i].lhs].push_back(i);

  return grammar;
}

Grammar load_grammar_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_grammar(in);
}

Grammar load_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw GrammarError(GrammarErrorCode::kValidation, 0,
                       "cannot open grammar file: " + path);
  return load_grammar(in);
}

}  // namespace ug
