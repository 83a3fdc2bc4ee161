#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ciimp/universe.hpp"

namespace ciimp {

/// Parse failure with a 0-based character offset into the offending text.
/// File-level parsers translate the offset into line/column diagnostics.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (at offset " + std::to_string(offset) + ")"),
        message_(message),
        offset_(offset) {}

  const std::string& message() const { return message_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string message_;
  std::size_t offset_;
};

/// A conditional-independence statement over three pairwise disjoint variable
/// sets: the two independent sides and the conditioning set. The two sides are
/// interchangeable, so construction canonicalizes their order: the side whose
/// lexicographically smallest member comes first is stored first. (The sides
/// are disjoint and non-empty, so comparing their smallest members decides.)
class CIStatement {
 public:
  CIStatement(UniversePtr universe, std::uint32_t a, std::uint32_t b, std::uint32_t c)
      : universe_(std::move(universe)), a_(a), b_(b), c_(c) {
    if (!universe_) throw std::invalid_argument("CIStatement: null universe");
    const std::uint32_t full = universe_->full_mask();
    if ((a | b | c) & ~full) throw std::invalid_argument("CIStatement: set out of range");
    if (a == 0 || b == 0) throw std::invalid_argument("CIStatement: independent sides must be non-empty");
    if ((a & b) || (a & c) || (b & c)) throw std::invalid_argument("CIStatement: sets must be pairwise disjoint");
    if (std::countr_zero(b_) < std::countr_zero(a_)) std::swap(a_, b_);
  }

  CIStatement(const VarSet& a, const VarSet& b, const VarSet& c)
      : CIStatement(check_shared(a, b, c), a.mask(), b.mask(), c.mask()) {}

  const UniversePtr& universe() const { return universe_; }
  std::uint32_t a_mask() const { return a_; }
  std::uint32_t b_mask() const { return b_; }
  std::uint32_t c_mask() const { return c_; }
  VarSet a() const { return VarSet(universe_, a_); }
  VarSet b() const { return VarSet(universe_, b_); }
  VarSet c() const { return VarSet(universe_, c_); }

  /// Both independent sides are singletons.
  bool elementary() const { return std::popcount(a_) == 1 && std::popcount(b_) == 1; }

  friend bool operator==(const CIStatement& x, const CIStatement& y) {
    return same_universe(x.universe_, y.universe_) && x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_;
  }

  /// Deterministic order for canonical statement sets: (a, b, c) masks.
  friend bool operator<(const CIStatement& x, const CIStatement& y) {
    if (x.a_ != y.a_) return x.a_ < y.a_;
    if (x.b_ != y.b_) return x.b_ < y.b_;
    return x.c_ < y.c_;
  }

 private:
  static UniversePtr check_shared(const VarSet& a, const VarSet& b, const VarSet& c) {
    if (!same_universe(a.universe(), b.universe()) || !same_universe(a.universe(), c.universe()))
      throw std::invalid_argument("CIStatement: sets over different universes");
    return a.universe();
  }

  UniversePtr universe_;
  std::uint32_t a_, b_, c_;
};

namespace detail {

struct StatementTokens {
  std::vector<std::pair<std::string, std::size_t>> sets[3];  // (name, offset)
  std::size_t semi_pos = 0;
  std::size_t bar_pos = 0;
};

inline StatementTokens tokenize_statement(std::string_view text) {
  StatementTokens out;
  int section = 0;  // 0 = first side, 1 = second side, 2 = conditioning set
  bool seen_semi = false, seen_bar = false;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char ch = text[i];
    if (ch == '#') break;  // comment to end of line
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      ++i;
      continue;
    }
    if (ch == ';') {
      if (section != 0) throw ParseError("unexpected ';'", i);
      out.semi_pos = i;
      seen_semi = true;
      section = 1;
      ++i;
      continue;
    }
    if (ch == '|') {
      if (section != 1) throw ParseError(section == 0 ? "'|' before ';'" : "unexpected '|'", i);
      out.bar_pos = i;
      seen_bar = true;
      section = 2;
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n && text[i] != ' ' && text[i] != '\t' && text[i] != ';' && text[i] != '|' &&
           text[i] != '#' && text[i] != '\r' && text[i] != '\n')
      ++i;
    out.sets[section].emplace_back(std::string(text.substr(start, i - start)), start);
  }
  if (!seen_semi) throw ParseError("expected ';' between the two independent sides", n);
  if (!seen_bar) throw ParseError("expected '|' before the conditioning set", n);
  return out;
}

}  // namespace detail

/// Parses "Aset ; Bset | Cset" (names whitespace-separated, Cset may be empty,
/// '#' starts a comment) into a canonical statement over the given universe.
inline CIStatement parse_statement(std::string_view text, const UniversePtr& universe) {
  auto tokens = detail::tokenize_statement(text);
  std::uint32_t masks[3] = {0, 0, 0};
  static const char* kSetNames[3] = {"first", "second", "conditioning"};
  for (int s = 0; s < 3; ++s) {
    for (const auto& [name, offset] : tokens.sets[s]) {
      auto idx = universe->index_of(name);
      if (!idx) throw ParseError("unknown variable '" + name + "'", offset);
      const std::uint32_t bit = std::uint32_t{1} << *idx;
      for (int t = 0; t <= s; ++t) {
        if (masks[t] & bit)
          throw ParseError(t == s ? "variable '" + name + "' repeated in the " + kSetNames[s] + " set"
                                  : "variable '" + name + "' appears in two sets",
                           offset);
      }
      masks[s] |= bit;
    }
  }
  if (masks[0] == 0) throw ParseError("first independent side is empty", tokens.semi_pos);
  if (masks[1] == 0) throw ParseError("second independent side is empty", tokens.bar_pos);
  return CIStatement(universe, masks[0], masks[1], masks[2]);
}

/// Canonical text form "a ; b | c d"; an empty conditioning set prints as
/// nothing after '|'. parse_statement(format_statement(s)) == s.
inline std::string format_statement(const CIStatement& s) {
  std::string out = s.a().to_names();
  out += " ; ";
  out += s.b().to_names();
  out += " |";
  std::string cond = s.c().to_names();
  if (!cond.empty()) {
    out += ' ';
    out += cond;
  }
  return out;
}

/// Display form "I(a ; b | c d)", also used by certificate files.
inline std::string statement_display(const CIStatement& s) {
  return "I(" + format_statement(s) + ")";
}

}  // namespace ciimp
