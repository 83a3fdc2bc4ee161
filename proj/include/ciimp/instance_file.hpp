#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

/// A parsed decision problem: variable universe, antecedent statements, and
/// at least one query statement.
struct Instance {
  UniversePtr universe;
  std::vector<CIStatement> antecedents;
  std::vector<CIStatement> queries;
};

namespace detail {

inline std::string line_col_prefix(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
}

}  // namespace detail

/// Parses the instance grammar: one `vars <name>+` line, then `assume <stmt>`
/// and `query <stmt>` lines in any order; `#` comments and blank lines are
/// skipped. Errors carry line/column positions.
inline Instance parse_instance(std::string_view text) {
  const auto fail = [&text](const std::string& message, std::size_t offset) -> void {
    throw ParseError(detail::line_col_prefix(text, offset) + message, offset);
  };
  Instance out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    const std::size_t line_start = pos;
    pos = eol + 1;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    std::size_t word_end = line.find_first_of(" \t\r", first);
    if (word_end == std::string_view::npos) word_end = line.size();
    const std::string_view keyword = line.substr(first, word_end - first);
    const std::string_view rest = word_end < line.size() ? line.substr(word_end) : std::string_view{};
    const std::size_t rest_offset = line_start + word_end;
    if (keyword == "vars") {
      if (out.universe) fail("duplicate vars line", line_start + first);
      std::vector<std::string> names;
      std::istringstream stream{std::string(rest)};
      for (std::string name; stream >> name;) names.push_back(name);
      try {
        out.universe = make_universe(names);
      } catch (const std::exception& e) {
        fail(std::string("bad vars line: ") + e.what(), line_start + first);
      }
      continue;
    }
    if (keyword == "assume" || keyword == "query") {
      if (!out.universe) fail("statement before the vars declaration", line_start + first);
      try {
        CIStatement stmt = parse_statement(rest, out.universe);
        (keyword == "assume" ? out.antecedents : out.queries).push_back(std::move(stmt));
      } catch (const ParseError& e) {
        fail(e.message(), rest_offset + e.offset());
      }
      continue;
    }
    fail("unknown directive '" + std::string(keyword) + "'", line_start + first);
  }
  if (!out.universe) fail("no vars declaration", text.size());
  if (out.queries.empty()) fail("no query statements", text.size());
  return out;
}

/// Canonical text form; parse_instance round-trips it.
inline std::string instance_to_text(const Instance& instance) {
  std::string out = "vars";
  for (const std::string& name : instance.universe->names()) out += ' ' + name;
  out += '\n';
  for (const CIStatement& s : instance.antecedents) out += "assume " + format_statement(s) + '\n';
  for (const CIStatement& s : instance.queries) out += "query " + format_statement(s) + '\n';
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

inline Instance read_instance_file(const std::string& path) {
  return parse_instance(read_text_file(path));
}

}  // namespace ciimp
