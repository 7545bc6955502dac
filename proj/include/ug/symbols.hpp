#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ug {

// Interned string handle. Feature names, category symbols and atomic
// constants all live in one process-wide pool.
using Symbol = std::uint32_t;

inline constexpr Symbol kNoSymbol = 0xffffffffu;

class SymbolPool {
 public:
  static SymbolPool& instance();

  Symbol intern(std::string_view text);
  const std::string& name(Symbol s) const;

 private:
  SymbolPool() = default;

  mutable std::mutex mutex_;
  std::deque<std::string> names_;  // deque: element references stay valid
  std::unordered_map<std::string_view, Symbol> index_;
};

inline Symbol intern(std::string_view text) {
  return SymbolPool::instance().intern(text);
}

inline const std::string& symbol_name(Symbol s) {
  return SymbolPool::instance().name(s);
}

// Canonical symbol order is the spelling, not the intern id, so output is
// independent of interning history.
struct SymbolNameLess {
  bool operator()(Symbol a, Symbol b) const {
    return symbol_name(a) < symbol_name(b);
  }
};

using SymbolSet = std::set<Symbol, SymbolNameLess>;

// Reserved labels. `cat` marks the category of a constituent node, `lc` the
// left-corner subdag of a table entry, and "1", "2", ... the right-hand-side
// positions of a rule dag.
Symbol cat_symbol();
Symbol lc_symbol();
Symbol position_symbol(std::size_t i);  // 1-based
bool is_position_symbol(Symbol s);

}  // namespace ug
