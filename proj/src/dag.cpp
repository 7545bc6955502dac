#include "ug/dag.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

namespace ug {

// --- paths ---------------------------------------------------------------

Path make_path(std::initializer_list<std::string_view> features) {
  Path p;
  p.reserve(features.size());
  for (auto f : features) p.push_back(intern(f));
  return p;
}

std::string path_to_string(const Path& p) {
  std::string out = "<";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += symbol_name(p[i]);
  }
  out += '>';
  return out;
}

bool path_less(const Path& a, const Path& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return symbol_name(a[i]) < symbol_name(b[i]);
  }
  return false;
}

// --- constraints -----------------------------------------------------------

Constraint Constraint::eq(Path left, Path right) {
  Constraint c;
  c.kind = kPathPath;
  if (path_less(right, left)) std::swap(left, right);
  c.a = std::move(left);
  c.b = std::move(right);
  return c;
}

Constraint Constraint::is(Path path, Symbol constant) {
  Constraint c;
  c.kind = kPathConst;
  c.a = std::move(path);
  c.value = constant;
  return c;
}

bool Constraint::operator==(const Constraint& other) const {
  return kind == other.kind && a == other.a && b == other.b &&
         value == other.value;
}

std::string Constraint::to_string() const {
  if (kind == kPathPath)
    return path_to_string(a) + " == " + path_to_string(b);
  return path_to_string(a) + " = " + symbol_name(value);
}

bool constraint_less(const Constraint& x, const Constraint& y) {
  if (x.a != y.a) return path_less(x.a, y.a);
  if (x.kind != y.kind) return x.kind == Constraint::kPathConst;
  if (x.kind == Constraint::kPathPath) {
    if (x.b != y.b) return path_less(x.b, y.b);
    return false;
  }
  if (x.value != y.value)
    return symbol_name(x.value) < symbol_name(y.value);
  return false;
}

// --- FeatureDag -------------------------------------------------------------

const std::uint32_t* FeatureDag::Node::arc(Symbol label) const {
  for (const auto& [l, t] : arcs)
    if (l == label) return &t;
  return nullptr;
}

FeatureDag::FeatureDag() { nodes_.emplace_back(); }

FeatureDag FeatureDag::leaf(Symbol constant) {
  FeatureDag d;
  d.nodes_[0].atom = constant;
  return d;
}

std::uint32_t FeatureDag::at(const Path& p) const {
  std::uint32_t cur = root();
  for (Symbol f : p) {
    const std::uint32_t* next = nodes_[cur].arc(f);
    if (!next) return kNoNode;
    cur = *next;
  }
  return cur;
}

Symbol FeatureDag::constant_at(const Path& p) const {
  std::uint32_t id = at(p);
  if (id == kNoNode) return kNoSymbol;
  return nodes_[id].atom;
}

std::size_t FeatureDag::hash() const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const Node& n : nodes_) {
    mix(n.atom == kNoSymbol ? 0x9e37u : symbol_name(n.atom).size() + 3u);
    if (n.atom != kNoSymbol)
      for (char c : symbol_name(n.atom)) mix(static_cast<std::size_t>(c));
    for (const auto& [l, t] : n.arcs) {
      for (char c : symbol_name(l)) mix(static_cast<std::size_t>(c));
      mix(t);
    }
  }
  return h;
}

FeatureDag detail_make_dag(std::vector<FeatureDag::Node>&& nodes) {
  FeatureDag d;
  d.nodes_ = std::move(nodes);
  return d;
}

// Breadth-first renumbering from `start`; arcs of the input must already be
// label-name sorted. Unreachable nodes are dropped.
static FeatureDag normalize(const std::vector<FeatureDag::Node>& nodes,
                            std::uint32_t start) {
  std::vector<std::uint32_t> remap(nodes.size(), FeatureDag::kNoNode);
  std::vector<std::uint32_t> order;
  order.reserve(nodes.size());
  remap[start] = 0;
  order.push_back(start);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto& [l, t] : nodes[order[head]].arcs) {
      (void)l;
      if (remap[t] == FeatureDag::kNoNode) {
        remap[t] = static_cast<std::uint32_t>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<FeatureDag::Node> result(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const FeatureDag::Node& src = nodes[order[i]];
    FeatureDag::Node& dst = result[i];
    dst.atom = src.atom;
    dst.arcs.reserve(src.arcs.size());
    for (const auto& [l, t] : src.arcs) dst.arcs.emplace_back(l, remap[t]);
  }
  return detail_make_dag(std::move(result));
}

// --- DagBuilder --------------------------------------------------------------

DagBuilder::DagBuilder() { root_ = fresh(); }

std::uint32_t DagBuilder::fresh() {
  nodes_.emplace_back();
  parent_.push_back(static_cast<std::uint32_t>(nodes_.size() - 1));
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t DagBuilder::find(std::uint32_t id) const {
  while (parent_[id] != id) {
    parent_[id] = parent_[parent_[id]];
    id = parent_[id];
  }
  return id;
}

std::uint32_t DagBuilder::import(const FeatureDag& d) {
  std::uint32_t offset = static_cast<std::uint32_t>(nodes_.size());
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    std::uint32_t id = fresh();
    const FeatureDag::Node& src = d.node(static_cast<std::uint32_t>(i));
    nodes_[id].atom = src.atom;
    nodes_[id].arcs.reserve(src.arcs.size());
    for (const auto& [l, t] : src.arcs)
      nodes_[id].arcs.emplace_back(l, offset + t);
  }
  return offset + d.root();
}

std::uint32_t DagBuilder::child(std::uint32_t base, Symbol label) {
  std::uint32_t rep = find(base);
  for (const auto& [l, t] : nodes_[rep].arcs)
    if (l == label) return find(t);
  return kNoNode;
}

std::uint32_t DagBuilder::node_at(std::uint32_t base, const Path& p) const {
  std::uint32_t cur = find(base);
  for (Symbol f : p) {
    std::uint32_t next = kNoNode;
    for (const auto& [l, t] : nodes_[cur].arcs)
      if (l == f) {
        next = find(t);
        break;
      }
    if (next == kNoNode) return kNoNode;
    cur = next;
  }
  return cur;
}

std::uint32_t DagBuilder::ensure(std::uint32_t base, const Path& p) {
  std::uint32_t cur = find(base);
  for (Symbol f : p) {
    std::uint32_t next = kNoNode;
    for (const auto& [l, t] : nodes_[cur].arcs)
      if (l == f) {
        next = find(t);
        break;
      }
    if (next == kNoNode) {
      if (nodes_[cur].atom != kNoSymbol) return kNoNode;  // constant is a leaf
      next = fresh();
      cur = find(cur);  // fresh() may not move reps, but stay safe
      nodes_[cur].arcs.emplace_back(f, next);
    }
    cur = next;
  }
  return cur;
}

bool DagBuilder::set_atom(std::uint32_t id, Symbol constant) {
  std::uint32_t rep = find(id);
  if (!nodes_[rep].arcs.empty()) return false;
  if (nodes_[rep].atom != kNoSymbol) return nodes_[rep].atom == constant;
  nodes_[rep].atom = constant;
  return true;
}

bool DagBuilder::merge(std::uint32_t a, std::uint32_t b) {
  std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
  work.emplace_back(a, b);
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    std::uint32_t rx = find(x), ry = find(y);
    if (rx == ry) continue;

    WorkNode& nx = nodes_[rx];
    WorkNode& ny = nodes_[ry];
    if (nx.atom != kNoSymbol && ny.atom != kNoSymbol && nx.atom != ny.atom)
      return false;  // constant clash
    if (nx.atom != kNoSymbol && !ny.arcs.empty()) return false;
    if (ny.atom != kNoSymbol && !nx.arcs.empty()) return false;

    parent_[ry] = rx;
    if (nx.atom == kNoSymbol) nx.atom = ny.atom;
    for (const auto& [label, target] : ny.arcs) {
      const std::uint32_t* mine = nullptr;
      for (const auto& [l, t] : nx.arcs)
        if (l == label) {
          mine = &t;
          break;
        }
      if (mine) {
        work.emplace_back(*mine, target);  // congruence on shared labels
      } else {
        nx.arcs.emplace_back(label, target);
      }
    }
    ny.arcs.clear();
  }
  return true;
}

std::optional<FeatureDag> DagBuilder::finish() const {
  std::uint32_t start = find(root_);

  // Resolve representatives and sort arcs once.
  std::unordered_map<std::uint32_t, std::vector<std::pair<Symbol, std::uint32_t>>>
      arcs;
  std::unordered_map<std::uint32_t, int> color;  // 0 unseen, 1 open, 2 done
  // First pass: gather reachable reps.
  {
    std::vector<std::uint32_t> todo{start};
    while (!todo.empty()) {
      std::uint32_t rep = todo.back();
      todo.pop_back();
      if (arcs.count(rep)) continue;
      auto& list = arcs[rep];
      for (const auto& [l, t] : nodes_[rep].arcs)
        list.emplace_back(l, find(t));
      std::sort(list.begin(), list.end(), [](const auto& p, const auto& q) {
        return symbol_name(p.first) < symbol_name(q.first);
      });
      for (const auto& [l, t] : list) {
        (void)l;
        if (!arcs.count(t)) todo.push_back(t);
      }
    }
  }

  // Cycle check (iterative DFS with an explicit arc cursor).
  {
    std::vector<std::pair<std::uint32_t, std::size_t>> frames;
    frames.emplace_back(start, 0);
    color[start] = 1;
    while (!frames.empty()) {
      auto& [rep, idx] = frames.back();
      auto& list = arcs[rep];
      if (idx == list.size()) {
        color[rep] = 2;
        frames.pop_back();
        continue;
      }
      std::uint32_t next = list[idx++].second;
      int c = color[next];
      if (c == 1) return std::nullopt;  // back edge: cyclic result
      if (c == 0) {
        color[next] = 1;
        frames.emplace_back(next, 0);
      }
    }
  }

  // Breadth-first numbering over the rep graph.
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::vector<std::uint32_t> order;
  remap[start] = 0;
  order.push_back(start);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto& [l, t] : arcs[order[head]]) {
      (void)l;
      if (!remap.count(t)) {
        remap[t] = static_cast<std::uint32_t>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<FeatureDag::Node> out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::uint32_t rep = order[i];
    out[i].atom = nodes_[rep].atom;
    for (const auto& [l, t] : arcs[rep]) out[i].arcs.emplace_back(l, remap[t]);
  }
  return normalize(out, 0);
}

// --- algebra -------------------------------------------------------------

std::optional<FeatureDag> unify(const FeatureDag& a, const FeatureDag& b) {
  DagBuilder builder;
  std::uint32_t ra = builder.import(a);
  std::uint32_t rb = builder.import(b);
  if (!builder.merge(ra, rb)) return std::nullopt;
  builder.set_root(ra);
  return builder.finish();
}

bool subsumes(const FeatureDag& general, const FeatureDag& specific) {
  std::vector<std::uint32_t> image(general.node_count(), FeatureDag::kNoNode);
  image[general.root()] = specific.root();
  std::vector<std::uint32_t> queue{general.root()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t g = queue[head];
    const FeatureDag::Node& gn = general.node(g);
    const FeatureDag::Node& sn = specific.node(image[g]);
    if (gn.is_atom()) {
      if (!sn.is_atom() || sn.atom != gn.atom) return false;
      continue;
    }
    for (const auto& [label, child] : gn.arcs) {
      const std::uint32_t* target = sn.arc(label);
      if (!target) return false;  // path undefined in the specific dag
      if (image[child] == FeatureDag::kNoNode) {
        image[child] = *target;
        queue.push_back(child);
      } else if (image[child] != *target) {
        return false;  // sharing in `general` not present in `specific`
      }
    }
  }
  return true;
}

static FeatureDag slice(const FeatureDag& d, std::uint32_t start) {
  std::vector<FeatureDag::Node> nodes;
  nodes.reserve(d.node_count());
  for (std::size_t i = 0; i < d.node_count(); ++i)
    nodes.push_back(d.node(static_cast<std::uint32_t>(i)));
  return normalize(nodes, start);
}

std::optional<FeatureDag> extract(const FeatureDag& d, const Path& p) {
  std::uint32_t id = d.at(p);
  if (id == FeatureDag::kNoNode) return std::nullopt;
  return slice(d, id);
}

FeatureDag embed(const FeatureDag& d, const Path& p) {
  if (p.empty()) return d;
  std::vector<FeatureDag::Node> nodes(p.size());
  std::uint32_t shift = static_cast<std::uint32_t>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::uint32_t next =
        (i + 1 < p.size()) ? static_cast<std::uint32_t>(i + 1) : shift + d.root();
    nodes[i].arcs.emplace_back(p[i], next);
  }
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    FeatureDag::Node n = d.node(static_cast<std::uint32_t>(i));
    for (auto& [l, t] : n.arcs) t += shift;
    nodes.push_back(std::move(n));
  }
  return normalize(nodes, 0);
}

FeatureDag restrict_features(const FeatureDag& d, const SymbolSet& removed) {
  if (removed.empty()) return d;
  std::vector<FeatureDag::Node> nodes;
  nodes.reserve(d.node_count());
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    FeatureDag::Node n = d.node(static_cast<std::uint32_t>(i));
    std::erase_if(n.arcs,
                  [&removed](const auto& arc) { return removed.count(arc.first); });
    nodes.push_back(std::move(n));
  }
  return normalize(nodes, d.root());
}

// Canonical least path per node (shortlex). Nodes are processed in
// topological order so parents settle before children.
static std::vector<Path> canonical_paths(const FeatureDag& d) {
  std::size_t n = d.node_count();
  std::vector<std::uint32_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [l, t] : d.node(static_cast<std::uint32_t>(i)).arcs) {
      (void)l;
      ++indegree[t];
    }
  std::vector<std::uint32_t> topo;
  topo.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) topo.push_back(static_cast<std::uint32_t>(i));
  for (std::size_t head = 0; head < topo.size(); ++head)
    for (const auto& [l, t] : d.node(topo[head]).arcs) {
      (void)l;
      if (--indegree[t] == 0) topo.push_back(t);
    }
  assert(topo.size() == n);

  std::vector<Path> canon(n);
  std::vector<bool> set(n, false);
  canon[d.root()] = {};
  set[d.root()] = true;
  for (std::uint32_t u : topo) {
    if (!set[u]) continue;  // unreachable (cannot happen for valid dags)
    for (const auto& [label, v] : d.node(u).arcs) {
      Path candidate = canon[u];
      candidate.push_back(label);
      if (!set[v] || path_less(candidate, canon[v])) {
        canon[v] = std::move(candidate);
        set[v] = true;
      }
    }
  }
  return canon;
}

std::vector<Constraint> constraints_of(const FeatureDag& d) {
  std::vector<Path> canon = canonical_paths(d);
  std::vector<std::vector<Path>> occurrences(d.node_count());
  occurrences[d.root()].push_back({});
  for (std::size_t i = 0; i < d.node_count(); ++i)
    for (const auto& [label, t] : d.node(static_cast<std::uint32_t>(i)).arcs) {
      Path occ = canon[i];
      occ.push_back(label);
      occurrences[t].push_back(std::move(occ));
    }

  std::vector<Constraint> out;
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    const FeatureDag::Node& node = d.node(static_cast<std::uint32_t>(i));
    if (node.is_atom()) out.push_back(Constraint::is(canon[i], node.atom));
    if (occurrences[i].size() >= 2) {
      for (const Path& occ : occurrences[i])
        if (occ != canon[i]) out.push_back(Constraint::eq(canon[i], occ));
    }
  }
  std::sort(out.begin(), out.end(), constraint_less);
  return out;
}

std::vector<Path> leaf_paths(const FeatureDag& d) {
  std::vector<Path> canon = canonical_paths(d);
  std::vector<Path> out;
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    const FeatureDag::Node& node = d.node(static_cast<std::uint32_t>(i));
    if (node.is_empty()) out.push_back(canon[i]);
  }
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

std::vector<Path> all_paths(const FeatureDag& d) {
  std::vector<Path> out;
  std::vector<std::pair<std::uint32_t, Path>> stack;
  stack.emplace_back(d.root(), Path{});
  while (!stack.empty()) {
    auto [id, path] = std::move(stack.back());
    stack.pop_back();
    out.push_back(path);
    for (const auto& [label, t] : d.node(id).arcs) {
      Path next = path;
      next.push_back(label);
      stack.emplace_back(t, std::move(next));
    }
  }
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

std::optional<FeatureDag> from_constraints(const std::vector<Constraint>& cs,
                                           const std::vector<Path>& paths) {
  DagBuilder builder;
  for (const Constraint& c : cs) {
    if (c.kind == Constraint::kPathPath) {
      std::uint32_t na = builder.ensure(builder.root(), c.a);
      std::uint32_t nb = builder.ensure(builder.root(), c.b);
      if (na == DagBuilder::kNoNode || nb == DagBuilder::kNoNode)
        return std::nullopt;
      if (!builder.merge(na, nb)) return std::nullopt;
    } else {
      std::uint32_t np = builder.ensure(builder.root(), c.a);
      if (np == DagBuilder::kNoNode) return std::nullopt;
      if (!builder.set_atom(np, c.value)) return std::nullopt;
    }
  }
  for (const Path& p : paths) {
    if (builder.ensure(builder.root(), p) == DagBuilder::kNoNode)
      return std::nullopt;
  }
  return builder.finish();
}

std::optional<FeatureDag> reassemble(std::vector<FeatureDag::Node> nodes,
                                     std::uint32_t root) {
  for (FeatureDag::Node& n : nodes)
    std::sort(n.arcs.begin(), n.arcs.end(), [](const auto& p, const auto& q) {
      return symbol_name(p.first) < symbol_name(q.first);
    });
  // Cycle check over the reachable part.
  std::vector<int> color(nodes.size(), 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> frames;
  frames.emplace_back(root, 0);
  color[root] = 1;
  while (!frames.empty()) {
    auto& [id, idx] = frames.back();
    const auto& arcs = nodes[id].arcs;
    if (idx == arcs.size()) {
      color[id] = 2;
      frames.pop_back();
      continue;
    }
    std::uint32_t next = arcs[idx++].second;
    if (color[next] == 1) return std::nullopt;
    if (color[next] == 0) {
      color[next] = 1;
      frames.emplace_back(next, 0);
    }
  }
  return normalize(nodes, root);
}

std::string to_text(const FeatureDag& d) {
  std::vector<std::pair<Path, std::string>> lines;
  for (const Constraint& c : constraints_of(d))
    lines.emplace_back(c.a, c.to_string());
  for (const Path& p : leaf_paths(d))
    lines.emplace_back(p, path_to_string(p) + " = *");
  std::sort(lines.begin(), lines.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return path_less(x.first, y.first);
    return x.second < y.second;
  });
  std::string out;
  for (const auto& [p, text] : lines) {
    (void)p;
    out += text;
    out += '\n';
  }
  return out;
}

}  // namespace ug
