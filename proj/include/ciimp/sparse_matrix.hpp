#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ciimp {

/// A 0-1 matrix stored as one sorted row-index list per column. Immutable
/// after construction; every stored entry is 1.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix(int n_rows, std::vector<std::vector<int>> columns)
      : n_rows_(n_rows), columns_(std::move(columns)) {
    if (n_rows_ < 0) throw std::invalid_argument("SparseBinaryMatrix: negative row count");
    for (const auto& col : columns_) {
      int prev = -1;
      for (int r : col) {
        if (r < 0 || r >= n_rows_) throw std::invalid_argument("SparseBinaryMatrix: row index out of range");
        if (r <= prev) throw std::invalid_argument("SparseBinaryMatrix: row indices must be strictly increasing");
        prev = r;
      }
    }
  }

  int rows() const { return n_rows_; }
  int cols() const { return static_cast<int>(columns_.size()); }

  const std::vector<int>& column(int j) const { return columns_.at(j); }

  bool entry(int row, int col) const {
    const auto& c = columns_.at(col);
    return std::binary_search(c.begin(), c.end(), row);
  }

  std::size_t entry_count() const {
    std::size_t total = 0;
    for (const auto& c : columns_) total += c.size();
    return total;
  }

  /// Dense 0/1 text grid, one row per line, entries space-separated.
  std::string debug_grid() const {
    std::vector<std::string> lines(n_rows_);
    for (auto& line : lines) {
      line.reserve(2 * columns_.size());
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (j) line += ' ';
        line += '0';
      }
    }
    for (std::size_t j = 0; j < columns_.size(); ++j)
      for (int r : columns_[j]) lines[r][2 * j] = '1';
    std::string out;
    for (auto& line : lines) {
      out += line;
      out += '\n';
    }
    return out;
  }

 private:
  int n_rows_;
  std::vector<std::vector<int>> columns_;
};

}  // namespace ciimp
