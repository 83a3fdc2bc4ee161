#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciimp/rational.hpp"
#include "ciimp/simplex.hpp"
#include "ciimp/sparse_matrix.hpp"

namespace ciimp {

/// The branch-and-bound search hit its node budget before reaching an answer.
/// Deliberately distinct from infeasibility: the caller learns nothing about
/// the instance, only that the search was cut short.
struct NodeBudgetExceeded : std::runtime_error {
  explicit NodeBudgetExceeded(long long budget)
      : std::runtime_error("integer feasibility search exceeded its node budget of " +
                           std::to_string(budget)) {}
};

namespace detail {

struct IpNode {
  std::vector<std::vector<int>> columns;  // original columns first, then slacks
  int n_rows;
  std::vector<long long> b;
  std::vector<long long> lower;  // accumulated substituted lower bound per original column
};

struct IpSearch {
  int n_original;
  long long budget;
  long long nodes = 0;
  std::span<const int> crash;
  std::vector<Rational> found;

  bool run(IpNode node, int depth) {
    if (depth > 10'000) throw NodeBudgetExceeded(budget);
    if (++nodes > budget) throw NodeBudgetExceeded(budget);
    SparseBinaryMatrix A(node.n_rows, node.columns);
    FeasibilityOutcome lp = lp_feasible(A, node.b, crash);
    if (!lp.feasible) return false;
    const std::vector<Rational>& x = *lp.solution;
    int frac = -1;
    for (int j = 0; j < n_original; ++j)
      if (boost::multiprecision::denominator(x[j]) != 1) {
        frac = j;
        break;
      }
    if (frac < 0) {
      found.assign(n_original, Rational(0));
      for (int j = 0; j < n_original; ++j) found[j] = x[j] + node.lower[j];
      return true;
    }
    const long long fl =
        (boost::multiprecision::numerator(x[frac]) / boost::multiprecision::denominator(x[frac]))
            .convert_to<long long>();
    // Down branch: x_frac ≤ fl via an appended row x_frac + slack = fl.
    {
      IpNode down = node;
      const int new_row = down.n_rows++;
      down.columns[frac].push_back(new_row);
      down.columns.push_back({new_row});
      down.b.push_back(fl);
      if (run(std::move(down), depth + 1)) return true;
    }
    // Up branch: x_frac ≥ fl + 1 by substituting the bound out of the system;
    // a negative right-hand side entry proves this branch empty.
    {
      IpNode up = std::move(node);
      bool ok = true;
      for (int r : up.columns[frac]) {
        up.b[r] -= fl + 1;
        if (up.b[r] < 0) {
          ok = false;
          break;
        }
      }
      up.lower[frac] += fl + 1;
      if (ok && run(std::move(up), depth + 1)) return true;
    }
    return false;
  }
};

}  // namespace detail

/// Exact feasibility of A·x = b over nonnegative integers, by depth-first
/// branch-and-bound on the rational relaxation: branch on the smallest-index
/// fractional variable, floor branch first. Every subproblem stays a 0-1
/// system — upper bounds become appended rows with slack columns, lower bounds
/// are substituted into the right-hand side.
inline FeasibilityOutcome ip_feasible(const SparseBinaryMatrix& A, std::span<const long long> b,
                                      long long node_budget = 1'000'000,
                                      std::span<const int> crash_columns = {}) {
  if (static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("ip_feasible: dimension mismatch");
  for (long long v : b)
    if (v < 0) throw std::invalid_argument("ip_feasible: negative right-hand side");
  detail::IpNode root;
  root.n_rows = A.rows();
  root.columns.reserve(A.cols());
  for (int j = 0; j < A.cols(); ++j) root.columns.push_back(A.column(j));
  root.b.assign(b.begin(), b.end());
  root.lower.assign(A.cols(), 0);
  detail::IpSearch search{A.cols(), node_budget, 0, crash_columns, {}};
  if (!search.run(std::move(root), 0)) return {false, std::nullopt};
  return {true, std::move(search.found)};
}

}  // namespace ciimp
