#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ciimp/falsifier.hpp"
#include "ciimp/integer_feasibility.hpp"
#include "ciimp/rational.hpp"
#include "ciimp/semilattice.hpp"
#include "ciimp/simplex.hpp"
#include "ciimp/sparse_matrix.hpp"
#include "ciimp/statement.hpp"

namespace ciimp {

/// A statement set's counting vector over its own lattice union: index lists
/// the member subsets in ascending mask order, counts holds per subset how
/// many statements' lattices contain it (≥ 1 everywhere by construction).
struct LatticeVector {
  std::vector<std::uint32_t> index;
  std::vector<long long> counts;
};

inline LatticeVector lattice_vector(std::span<const CIStatement> set, const EnumOptions& opts = {}) {
  const SemiLattice lattice = semi_lattice_union(set, opts);
  LatticeVector v{lattice.masks(), std::vector<long long>(lattice.size(), 0)};
  std::vector<std::uint32_t> masks;
  for (const CIStatement& s : set) {
    masks.clear();
    detail::append_lattice_masks(s, masks);
    for (std::uint32_t m : masks) {
      const auto it = std::lower_bound(v.index.begin(), v.index.end(), m);
      ++v.counts[it - v.index.begin()];
    }
  }
  return v;
}

/// The consequent-independent part of a constraint system: rows are the
/// antecedents' lattice union, columns the relevant elementary statements,
/// and the matrix their incidence. Reusable across consequents — only the
/// right-hand side depends on the consequent.
struct SystemBase {
  UniversePtr universe;
  LatticeVector v_antecedents;         // .index doubles as the row order
  std::vector<CIStatement> cols;       // canonical elementary order
  SparseBinaryMatrix matrix;
  std::vector<int> crash_columns;      // antecedent refinement pieces, as solver entering hints
};

/// Full system for one consequent: rhs = v_antecedents − v_consequent ≥ 0.
struct ConstraintSystem {
  SystemBase base;
  std::vector<long long> rhs;
};

inline SystemBase build_system_base(std::span<const CIStatement> antecedents,
                                    const EnumOptions& opts = {}) {
  LatticeVector v = lattice_vector(antecedents, opts);
  std::vector<CIStatement> cols = relevant_elementary(antecedents, opts);
  const std::vector<std::uint32_t>& rows = v.index;
  const auto row_of = [&rows](std::uint32_t mask) {
    return static_cast<int>(std::lower_bound(rows.begin(), rows.end(), mask) - rows.begin());
  };
  std::vector<std::vector<int>> columns;
  columns.reserve(cols.size());
  std::vector<std::uint32_t> masks;
  for (const CIStatement& r : cols) {
    masks.clear();
    detail::append_lattice_masks(r, masks);
    std::vector<int> col;
    col.reserve(masks.size());
    for (std::uint32_t m : masks) col.push_back(row_of(m));  // ascending masks → ascending rows
    columns.push_back(std::move(col));
  }
  // Every antecedent refines into elementary pieces whose lattices partition
  // its own, so the pieces are all relevant; their indicator sum reproduces
  // v_antecedents exactly, which makes them ideal entering hints.
  std::vector<int> crash;
  std::vector<char> taken(cols.size(), 0);
  for (const CIStatement& s : antecedents) {
    for (const CIStatement& piece : elementary_decomposition(s)) {
      const auto it = std::lower_bound(cols.begin(), cols.end(), piece);
      if (it == cols.end() || !(*it == piece))
        throw std::logic_error("antecedent refinement piece missing from the relevant set");
      const int j = static_cast<int>(it - cols.begin());
      if (!taken[j]) {
        taken[j] = 1;
        crash.push_back(j);
      }
    }
  }
  const UniversePtr universe = antecedents.front().universe();
  const int n_rows = static_cast<int>(rows.size());
  return SystemBase{universe, std::move(v), std::move(cols),
                    SparseBinaryMatrix(n_rows, std::move(columns)), std::move(crash)};
}

/// rhs for one consequent against a prebuilt base. The consequent's lattice
/// must lie inside the row set — callers falsify first; a violation is a
/// contract error, never clamped.
inline std::vector<long long> consequent_rhs(const SystemBase& base, const CIStatement& consequent) {
  if (!same_universe(base.universe, consequent.universe()))
    throw std::invalid_argument("consequent over a different universe");
  std::vector<long long> rhs = base.v_antecedents.counts;
  const std::vector<std::uint32_t>& rows = base.v_antecedents.index;
  std::vector<std::uint32_t> masks;
  detail::append_lattice_masks(consequent, masks);
  for (std::uint32_t m : masks) {
    const auto it = std::lower_bound(rows.begin(), rows.end(), m);
    if (it == rows.end() || *it != m)
      throw std::logic_error("constraint system requires prior falsification: "
                             "consequent lattice escapes the antecedent rows");
    --rhs[it - rows.begin()];  // counts ≥ 1 on every row, so this stays ≥ 0
  }
  return rhs;
}

inline ConstraintSystem build_system(std::span<const CIStatement> antecedents,
                                     const CIStatement& consequent, const EnumOptions& opts = {}) {
  SystemBase base = build_system_base(antecedents, opts);
  std::vector<long long> rhs = consequent_rhs(base, consequent);
  return ConstraintSystem{std::move(base), std::move(rhs)};
}

/// Positive coefficients on relevant elementary statements witnessing
/// v_antecedents = v_consequent + Σ k_r · v_r. Zero coefficients are omitted;
/// terms follow the canonical statement order.
struct ValidationCertificate {
  std::vector<std::pair<CIStatement, Rational>> terms;
};

enum class ValidationStatus { Validated, Unknown };

/// Unknown means only "this sufficient test did not fire" — it never claims
/// non-implication.
struct ValidationResult {
  ValidationStatus status = ValidationStatus::Unknown;
  std::optional<ValidationCertificate> certificate;
};

namespace detail {

inline ValidationCertificate certificate_from_solution(const SystemBase& base,
                                                       std::span<const Rational> x) {
  ValidationCertificate cert;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j].sign() != 0) cert.terms.emplace_back(base.cols[j], x[j]);
  return cert;
}

}  // namespace detail

inline ValidationResult validate_from_base(const SystemBase& base, const CIStatement& consequent) {
  const std::vector<long long> rhs = consequent_rhs(base, consequent);
  FeasibilityOutcome lp = lp_feasible(base.matrix, rhs, base.crash_columns);
  if (!lp.feasible) return {ValidationStatus::Unknown, std::nullopt};
  return {ValidationStatus::Validated, detail::certificate_from_solution(base, *lp.solution)};
}

/// Sufficient validation: feasibility of the rational system proves the
/// implication; the certificate is the found solution filtered to its support.
inline ValidationResult validate(std::span<const CIStatement> antecedents,
                                 const CIStatement& consequent, const EnumOptions& opts = {}) {
  return validate_from_base(build_system_base(antecedents, opts), consequent);
}

inline ValidationResult validate_combinatorial_from_base(const SystemBase& base,
                                                         const CIStatement& consequent,
                                                         long long node_budget = 1'000'000) {
  const std::vector<long long> rhs = consequent_rhs(base, consequent);
  FeasibilityOutcome ip = ip_feasible(base.matrix, rhs, node_budget, base.crash_columns);
  if (!ip.feasible) return {ValidationStatus::Unknown, std::nullopt};
  return {ValidationStatus::Validated, detail::certificate_from_solution(base, *ip.solution)};
}

/// Integer-coefficient variant; NodeBudgetExceeded propagates so budget
/// exhaustion is never mistaken for Unknown.
inline ValidationResult validate_combinatorial(std::span<const CIStatement> antecedents,
                                               const CIStatement& consequent,
                                               long long node_budget = 1'000'000,
                                               const EnumOptions& opts = {}) {
  return validate_combinatorial_from_base(build_system_base(antecedents, opts), consequent, node_budget);
}

/// Total re-check of a certificate: coefficients positive, every statement
/// elementary with lattice inside the antecedents' union, and the counting
/// identity balancing exactly on every subset. Any malformation returns
/// false; nothing throws.
inline bool verify_certificate(std::span<const CIStatement> antecedents, const CIStatement& consequent,
                               const ValidationCertificate& cert, const EnumOptions& opts = {}) {
  try {
    const UniversePtr& universe = consequent.universe();
    for (const CIStatement& s : antecedents)
      if (!same_universe(s.universe(), universe)) return false;
    check_enum_cap(universe, opts);
    const detail::SubsetBitmap in_union = detail::lattice_union_bitmap(antecedents, universe);
    // balance(U) must end at zero for every subset that appears anywhere.
    std::vector<Rational> balance(std::size_t{1} << universe->size(), Rational(0));
    std::vector<std::uint32_t> masks;
    for (const CIStatement& s : antecedents) {
      masks.clear();
      detail::append_lattice_masks(s, masks);
      for (std::uint32_t m : masks) balance[m] += 1;
    }
    masks.clear();
    detail::append_lattice_masks(consequent, masks);
    for (std::uint32_t m : masks) balance[m] -= 1;
    const CIStatement* prev = nullptr;
    for (const auto& [r, k] : cert.terms) {
      if (!same_universe(r.universe(), universe)) return false;
      if (!r.elementary() || k.sign() <= 0) return false;
      if (prev && !(*prev < r)) return false;  // canonical order, no repeats
      prev = &r;
      masks.clear();
      detail::append_lattice_masks(r, masks);
      for (std::uint32_t m : masks) {
        if (!in_union.contains(m)) return false;  // not a relevant statement
        balance[m] -= k;
      }
    }
    for (const Rational& v : balance)
      if (v.sign() != 0) return false;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

/// Text form: comment header naming the instance, then one `k * I(...)` line
/// per term with k always written as numerator/denominator.
inline std::string certificate_to_text(const ValidationCertificate& cert,
                                       std::span<const CIStatement> antecedents,
                                       const CIStatement& consequent) {
  std::string out = "# certificate for: " + statement_display(consequent) + "\n";
  for (const CIStatement& s : antecedents) out += "# given: " + statement_display(s) + "\n";
  for (const auto& [r, k] : cert.terms)
    out += rational_to_fraction(k) + " * " + statement_display(r) + "\n";
  return out;
}

/// Parses the certificate text form. Comment and blank lines are skipped; term
/// statements must be over the given universe.
inline ValidationCertificate parse_certificate(std::string_view text, const UniversePtr& universe) {
  ValidationCertificate cert;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    const std::size_t line_start = pos;
    pos = eol + 1;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const std::size_t star = line.find('*');
    if (star == std::string_view::npos)
      throw ParseError("expected 'coefficient * I(...)'", line_start + first);
    std::string_view coeff = line.substr(first, star - first);
    while (!coeff.empty() && (coeff.back() == ' ' || coeff.back() == '\t')) coeff.remove_suffix(1);
    Rational k;
    try {
      k = rational_from_string(std::string(coeff));
    } catch (const std::exception&) {
      throw ParseError("bad coefficient '" + std::string(coeff) + "'", line_start + first);
    }
    if (k.sign() <= 0) throw ParseError("coefficients must be positive", line_start + first);
    const std::size_t open = line.find("I(", star);
    const std::size_t close = line.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close <= open + 2)
      throw ParseError("expected 'I(...)' statement", line_start + star);
    CIStatement stmt = [&] {
      try {
        return parse_statement(line.substr(open + 2, close - open - 2), universe);
      } catch (const ParseError& e) {
        throw ParseError(e.message(), line_start + open + 2 + e.offset());
      }
    }();
    cert.terms.emplace_back(std::move(stmt), std::move(k));
  }
  std::sort(cert.terms.begin(), cert.terms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 1; i < cert.terms.size(); ++i)
    if (cert.terms[i].first == cert.terms[i - 1].first)
      throw ParseError("statement repeated across terms", 0);
  return cert;
}

}  // namespace ciimp
