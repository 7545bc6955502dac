#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ug/dag.hpp"
#include "ug/grammar.hpp"
#include "ug/symbols.hpp"

namespace ug {

// One propagation path: the goal category plus the rule chain walked down
// the left-corner spine, collapsed at the first revisit of a rule id so the
// key space stays finite. Each key owns the set of features ignored by the
// filtering function on that path.
struct PathKey {
  Symbol goal = kNoSymbol;
  std::vector<std::string> rules;

  bool operator==(const PathKey& other) const {
    return goal == other.goal && rules == other.rules;
  }
  bool operator<(const PathKey& other) const {
    if (goal != other.goal) return SymbolNameLess{}(goal, other.goal);
    return rules < other.rules;
  }
  std::string to_string() const;
};

// Appends a rule id to a collapsed chain: a revisit truncates the chain back
// to the first occurrence of that rule.
std::vector<std::string> collapse_chain(std::vector<std::string> chain,
                                        const std::string& rule_id);

class RestrictorLedger {
 public:
  const SymbolSet& at(const PathKey& key) const;
  bool add(const PathKey& key, const SymbolSet& features);  // true if it grew
  std::size_t total_features() const;
  bool empty() const { return restrictors_.empty(); }
  const std::map<PathKey, SymbolSet>& entries() const { return restrictors_; }

 private:
  std::map<PathKey, SymbolSet> restrictors_;
  static const SymbolSet empty_set_;
};

struct TableEntry {
  std::string rule_id;             // rule under the lc arc
  std::vector<std::string> path;   // collapsed chain that produced the dag
  SymbolSet restrictor;            // features ignored on that path
  FeatureDag dag;
};

enum class InsertOutcome { kInserted, kRedundant };

struct InsertResult {
  InsertOutcome outcome;
  bool identical = false;            // a stored entry is isomorphic to the input
  std::vector<TableEntry> replaced;  // entries displaced by a more general dag
};

// Rows keyed by goal category; each row is an antichain under subsumption
// (no entry's dag subsumes another's).
class ReachabilityTable {
 public:
  using Row = std::vector<TableEntry>;

  const Row* row(Symbol goal) const;
  InsertResult insert(Symbol goal, TableEntry entry);
  const std::map<Symbol, Row, SymbolNameLess>& rows() const { return rows_; }
  std::size_t entry_count() const;
  // Rewrite every entry's restrictor (used once compilation settles).
  void resolve_restrictors(const std::function<SymbolSet(const TableEntry&)>& fn);

 private:
  std::map<Symbol, Row, SymbolNameLess> rows_;
};

struct DetectionEvent {
  PathKey key;
  FeatureDag older;     // first dag at the comparison point
  FeatureDag newer;     // dag after one more trip around the cycle
  SymbolSet selected;
  bool incompatible = false;  // the two dags failed to unify
  bool fallback = false;      // no comparison case applied; heuristic choice
};

struct CompileReport {
  std::vector<DetectionEvent> detections;
  std::size_t propagate_steps = 0;
  std::size_t repropagations = 0;  // ledger-growth restarts + replacements
  std::size_t fallbacks = 0;
  std::size_t iteration_guard = 0;  // bound in force
  double wall_ms = 0.0;
};

struct CompileOptions {
  // 0 means the default bound: |features| x |rules| x 4.
  std::size_t max_iterations = 0;
  // Propagate only the category skeleton (context-free backbone): every
  // step filters out all non-cat features and seeds share nothing.
  bool category_only = false;
};

struct CompileResult {
  ReachabilityTable table;
  RestrictorLedger ledger;
  CompileReport report;
};

struct NonterminationGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- propagation steps ----------------------------------------------------

// Copy of d with the numbered arcs and the lc arc deleted and the old
// <lc 1> subdag placed under lc; sharing between the root region and the
// promoted subdag survives. nullopt when <lc 1> is undefined.
std::optional<FeatureDag> promote(const FeatureDag& d);

// One trip down the left-corner spine: filter the promoted dag by the
// path's restrictor, then unify the rule dag in under lc. nullopt when the
// rule cannot apply there.
std::optional<FeatureDag> propagate_step(const FeatureDag& d,
                                         const FeatureDag& rule_dag,
                                         const SymbolSet& restrictor);

// Initial table dag for a goal rewritten by `rule`: the rule dag embedded
// under lc with the root sharing each top-level feature of the rule's
// left-hand side (full top-down propagation). With share_features false the
// root carries the category only.
FeatureDag seed_entry(Symbol goal, const Rule& rule, bool share_features = true);

// Compares two successive dags of a looping propagation path and names the
// feature that keeps them from converging. Scans the constraints of each
// dag against the other; the selected feature is the last arc of the chosen
// path. Only members of `candidates` may be picked, never `cat`, and never
// anything in `exclude`. Empty result means no comparison case applied.
SymbolSet detect(const FeatureDag& a, const FeatureDag& b,
                 const SymbolSet& candidates, const SymbolSet& exclude = {});

// Last-resort selection when detect() comes back empty: the deepest path of
// `newer` missing from `older`, else the first unrestricted candidate.
SymbolSet detect_fallback(const FeatureDag& older, const FeatureDag& newer,
                          const SymbolSet& candidates, const SymbolSet& exclude);

// --- the compiler -----------------------------------------------------------

class TableCompiler {
 public:
  TableCompiler(const Grammar& grammar, CompileOptions options = {});

  // Runs every goal category; throws NonterminationGuard when a path
  // exceeds the iteration bound.
  CompileResult run();

  // Explores a single seed; exposed so the propagation of one rule can be
  // inspected in isolation. Returns the goal's row after closure.
  std::vector<TableEntry> close_path(Symbol goal, const Rule& seed_rule);

 private:
  struct ChainLink {
    const Rule* rule;
    FeatureDag dag;
    std::vector<std::string> key_chain;
  };
  struct RestartSeed {};
  struct RedoFrame {
    std::size_t index;
  };

  void explore(Symbol goal, std::vector<ChainLink>& chain);
  void expand_frontier(Symbol goal, std::vector<ChainLink>& chain);
  void run_comparison(Symbol goal, std::vector<ChainLink>& chain,
                      std::size_t prev_index, const Rule& rule);
  struct SegmentResult {
    bool failed = false;
    FeatureDag dag;
    PathKey key;
  };
  SegmentResult apply_segment(Symbol goal, const FeatureDag& from,
                              const std::vector<const Rule*>& rules,
                              std::vector<std::string> key_chain);
  const SymbolSet& effective_restrictor(const PathKey& key) const;
  void grow_ledger(const PathKey& key, const FeatureDag& older,
                   const FeatureDag& newer, bool incompatible);
  void tick();

  const Grammar& grammar_;
  CompileOptions options_;
  ReachabilityTable table_;
  RestrictorLedger ledger_;
  CompileReport report_;
  SymbolSet candidates_;        // grammar features minus cat
  SymbolSet all_but_cat_;       // restrictor used in category-only mode
  std::size_t budget_ = 0;      // per-close_path iteration budget
  std::size_t used_ = 0;
};

CompileResult compile_table(const Grammar& grammar, CompileOptions options = {});

// Deterministic text dump: one block per entry (goal, rule chain, canonical
// constraints, restrictor), then the ledger.
std::string dump_table(const CompileResult& result);

}  // namespace ug
