#include "ug/symbols.hpp"

#include <cctype>

namespace ug {

SymbolPool& SymbolPool::instance() {
  static SymbolPool pool;
  return pool;
}

Symbol SymbolPool::intern(std::string_view text) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = index_.find(text);
  if (it != index_.end()) return it->second;
  names_.emplace_back(text);
  Symbol id = static_cast<Symbol>(names_.size() - 1);
  // The map key views the pooled string; deque elements never move.
  index_.emplace(std::string_view(names_.back()), id);
  return id;
}

const std::string& SymbolPool::name(Symbol s) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return names_.at(s);
}

Symbol cat_symbol() {
  static const Symbol s = intern("cat");
  return s;
}

Symbol lc_symbol() {
  static const Symbol s = intern("lc");
  return s;
}

Symbol position_symbol(std::size_t i) {
  return intern(std::to_string(i));
}

bool is_position_symbol(Symbol s) {
  const std::string& n = symbol_name(s);
  if (n.empty()) return false;
  for (char c : n)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace ug
