#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ug/symbols.hpp"

namespace ug {

// A path is a sequence of arc labels from the root. The empty path denotes
// the root itself.
using Path = std::vector<Symbol>;

Path make_path(std::initializer_list<std::string_view> features);
std::string path_to_string(const Path& p);  // "<head sem owner>", "<>" for empty

// Canonical path order: shorter paths first, ties broken by the spelling of
// the labels left to right. Every canonical form in the library uses it.
bool path_less(const Path& a, const Path& b);

// One unification equation. Either two paths lead to the same node
// (kPathPath, a canonical-least, b the other occurrence) or a path carries an
// atomic constant (kPathConst).
struct Constraint {
  enum Kind : std::uint8_t { kPathPath, kPathConst };

  Kind kind;
  Path a;
  Path b;               // kPathPath only
  Symbol value = kNoSymbol;  // kPathConst only

  static Constraint eq(Path left, Path right);
  static Constraint is(Path path, Symbol constant);

  bool operator==(const Constraint& other) const;
  std::string to_string() const;  // "<a> == <b>" / "<a> = value"
};

bool constraint_less(const Constraint& x, const Constraint& y);

// Rooted directed acyclic graph with labeled arcs. Nodes are either complex
// (arc map), atomic (leaf constant) or empty (fully underspecified). The
// representation is normalized: nodes are numbered in breadth-first order
// from the root with arcs sorted by label spelling, so two dags are
// isomorphic exactly when their node arrays compare equal.
class FeatureDag {
 public:
  struct Node {
    Symbol atom = kNoSymbol;
    std::vector<std::pair<Symbol, std::uint32_t>> arcs;  // label-name sorted

    bool is_atom() const { return atom != kNoSymbol; }
    bool is_empty() const { return atom == kNoSymbol && arcs.empty(); }
    // Returns the child id or nullptr when the label is absent.
    const std::uint32_t* arc(Symbol label) const;

    bool operator==(const Node&) const = default;
  };

  FeatureDag();  // single empty root

  static FeatureDag leaf(Symbol constant);

  std::uint32_t root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(std::uint32_t id) const { return nodes_[id]; }

  // Node reached by p, or kNoNode when p is not a defined path.
  static constexpr std::uint32_t kNoNode = 0xffffffffu;
  std::uint32_t at(const Path& p) const;
  bool defined(const Path& p) const { return at(p) != kNoNode; }
  // Constant found at p, or kNoSymbol if p is undefined or not atomic.
  Symbol constant_at(const Path& p) const;

  bool operator==(const FeatureDag& other) const {
    return nodes_ == other.nodes_;
  }

  std::size_t hash() const;

 private:
  friend class DagBuilder;
  friend FeatureDag detail_make_dag(std::vector<Node>&& nodes);
  std::vector<Node> nodes_;
};

struct FeatureDagHash {
  std::size_t operator()(const FeatureDag& d) const { return d.hash(); }
};

// Mutable workspace for assembling dags: import existing dags, grow paths,
// merge nodes (with congruence closure over shared arcs) and place
// constants. finish() fails when the merged graph has a cycle, which is how
// unification failure by self-embedding surfaces.
class DagBuilder {
 public:
  DagBuilder();

  std::uint32_t root() const { return root_; }
  void set_root(std::uint32_t id) { root_ = id; }

  std::uint32_t import(const FeatureDag& d);          // returns d's root
  std::uint32_t ensure(std::uint32_t base, const Path& p);
  std::uint32_t child(std::uint32_t base, Symbol label);  // kNoNode if absent
  std::uint32_t node_at(std::uint32_t base, const Path& p) const;

  // All return false on clash (constant conflict, or a constant forced to
  // take arcs).
  bool merge(std::uint32_t a, std::uint32_t b);
  bool set_atom(std::uint32_t id, Symbol constant);

  // Normalized dag reachable from the root; nullopt if the result is cyclic.
  std::optional<FeatureDag> finish() const;

  static constexpr std::uint32_t kNoNode = FeatureDag::kNoNode;

 private:
  struct WorkNode {
    Symbol atom = kNoSymbol;
    std::vector<std::pair<Symbol, std::uint32_t>> arcs;  // unsorted, unique labels
  };

  std::uint32_t find(std::uint32_t id) const;
  std::uint32_t fresh();

  mutable std::vector<std::uint32_t> parent_;
  std::vector<WorkNode> nodes_;
  std::uint32_t root_;
};

// --- The dag algebra ---------------------------------------------------

// Least upper bound in the subsumption order; nullopt on constant clash, on
// an atom forced to become complex, or when the merge would create a cycle.
// Inputs are never mutated.
std::optional<FeatureDag> unify(const FeatureDag& a, const FeatureDag& b);

// True when `general` is more general than (or isomorphic to) `specific`:
// every defined path, constant and node-sharing of `general` is present in
// `specific`.
bool subsumes(const FeatureDag& general, const FeatureDag& specific);

inline bool isomorphic(const FeatureDag& a, const FeatureDag& b) {
  return a == b;  // representation is canonical
}

// Subdag under p as an independent dag; sharing internal to the subdag is
// preserved, sharing with the outside is dropped. nullopt when p is not
// defined (including descent through an atom).
std::optional<FeatureDag> extract(const FeatureDag& d, const Path& p);

// Smallest dag d2 with extract(d2, p) == d.
FeatureDag embed(const FeatureDag& d, const Path& p);

// Copy of d with every arc whose label is in `removed` deleted, at every
// depth; nodes left unreachable disappear. The result subsumes d.
FeatureDag restrict_features(const FeatureDag& d, const SymbolSet& removed);

// Canonical constraint decomposition: one constant equation per atom (at the
// node's canonical least path), one path equation per extra occurrence of a
// shared node, sorted by constraint_less. Together with leaf_paths() this
// determines the dag up to isomorphism.
std::vector<Constraint> constraints_of(const FeatureDag& d);

// Canonical least path of every empty leaf node, sorted.
std::vector<Path> leaf_paths(const FeatureDag& d);

// Every defined path, sorted by path_less. Exponential under heavy sharing;
// meant for small dags (tests, detection, reporting).
std::vector<Path> all_paths(const FeatureDag& d);

// Rebuild a dag from a canonical description. nullopt when the constraints
// are inconsistent.
std::optional<FeatureDag> from_constraints(const std::vector<Constraint>& cs,
                                           const std::vector<Path>& paths = {});

// Reassemble a dag from an edited copy of its node array (labels unique per
// node). Unreachable nodes are dropped; nullopt when the graph is cyclic.
std::optional<FeatureDag> reassemble(std::vector<FeatureDag::Node> nodes,
                                     std::uint32_t root);

// One line per constraint / underspecified leaf, canonical order:
//   <cat> = NP
//   <head> == <lc head>
//   <head sem> = *
std::string to_text(const FeatureDag& d);

}  // namespace ug
