#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ciimp/rational.hpp"
#include "ciimp/rng.hpp"
#include "ciimp/set_function.hpp"
#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

namespace detail {

/// Mixed-radix addressing for assignments over a subset of the variables,
/// listed in ascending universe order. The first variable varies slowest.
struct Scope {
  std::vector<int> vars;
  std::vector<int> dims;
  std::vector<std::size_t> strides;
  std::size_t total = 1;

  std::size_t index(std::span<const int> assignment) const {
    std::size_t idx = 0;
    for (std::size_t p = 0; p < vars.size(); ++p) {
      if (assignment[p] < 0 || assignment[p] >= dims[p])
        throw std::out_of_range("assignment value out of domain range");
      idx += static_cast<std::size_t>(assignment[p]) * strides[p];
    }
    return idx;
  }

  std::vector<int> assignment(std::size_t idx) const {
    std::vector<int> a(vars.size());
    for (std::size_t p = 0; p < vars.size(); ++p) {
      a[p] = static_cast<int>(idx / strides[p]);
      idx %= strides[p];
    }
    return a;
  }
};

inline Scope make_scope(const std::vector<int>& all_dims, std::uint32_t mask) {
  Scope sc;
  for (int i = 0; i < static_cast<int>(all_dims.size()); ++i)
    if (mask & (std::uint32_t{1} << i)) {
      sc.vars.push_back(i);
      sc.dims.push_back(all_dims[i]);
    }
  sc.strides.assign(sc.vars.size(), 1);
  for (std::size_t p = sc.vars.size(); p-- > 0;) {
    sc.strides[p] = sc.total;
    sc.total *= static_cast<std::size_t>(sc.dims[p]);
  }
  return sc;
}

constexpr std::size_t kMaxTableCells = std::size_t{1} << 22;

}  // namespace detail

/// Marginal distribution over a subset of the variables: exact rational mass
/// per assignment vector (values for the subset's variables in ascending
/// universe order).
class MarginalTable {
 public:
  MarginalTable(UniversePtr universe, std::uint32_t scope_mask, std::vector<int> scope_dims,
                std::vector<Rational> values)
      : universe_(std::move(universe)),
        mask_(scope_mask),
        scope_{},
        values_(std::move(values)) {
    std::vector<int> all_dims(universe_->size(), 0);
    int p = 0;
    for (int i = 0; i < universe_->size(); ++i)
      if (mask_ & (std::uint32_t{1} << i)) all_dims[i] = scope_dims.at(p++);
    if (p != static_cast<int>(scope_dims.size()))
      throw std::invalid_argument("MarginalTable: dims/scope size mismatch");
    scope_ = detail::make_scope(all_dims, mask_);
    if (values_.size() != scope_.total) throw std::invalid_argument("MarginalTable: wrong cell count");
  }

  const UniversePtr& universe() const { return universe_; }
  std::uint32_t scope_mask() const { return mask_; }
  const std::vector<int>& scope_dims() const { return scope_.dims; }
  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t idx) const { return values_[idx]; }
  const Rational& value(std::span<const int> assignment) const { return values_[scope_.index(assignment)]; }
  const detail::Scope& scope() const { return scope_; }

 private:
  UniversePtr universe_;
  std::uint32_t mask_;
  detail::Scope scope_;
  std::vector<Rational> values_;
};

/// An explicit finite discrete probability measure: one exact rational density
/// per full assignment vector. Immutable after construction.
class JointTable {
 public:
  JointTable(UniversePtr universe, std::vector<int> dims, std::vector<Rational> densities)
      : universe_(std::move(universe)), dims_(std::move(dims)), densities_(std::move(densities)) {
    if (!universe_) throw std::invalid_argument("JointTable: null universe");
    if (static_cast<int>(dims_.size()) != universe_->size())
      throw std::invalid_argument("JointTable: one domain size per variable required");
    std::size_t total = 1;
    for (int k : dims_) {
      if (k < 2) throw std::invalid_argument("JointTable: domain sizes must be at least 2");
      total *= static_cast<std::size_t>(k);
      if (total > detail::kMaxTableCells) throw std::length_error("JointTable: table too large");
    }
    if (densities_.size() != total) throw std::invalid_argument("JointTable: wrong cell count");
    Rational sum = 0;
    for (const Rational& d : densities_) {
      if (d < 0) throw std::invalid_argument("JointTable: negative density");
      sum += d;
    }
    if (sum != 1) throw std::invalid_argument("JointTable: densities must sum to 1");
    scope_ = detail::make_scope(dims_, universe_->full_mask());
  }

  const UniversePtr& universe() const { return universe_; }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return densities_.size(); }
  const Rational& density(std::size_t idx) const { return densities_[idx]; }
  const Rational& density(std::span<const int> assignment) const {
    return densities_[scope_.index(assignment)];
  }
  const detail::Scope& scope() const { return scope_; }

  friend bool operator==(const JointTable& x, const JointTable& y) {
    return same_universe(x.universe_, y.universe_) && x.dims_ == y.dims_ && x.densities_ == y.densities_;
  }

 private:
  UniversePtr universe_;
  std::vector<int> dims_;
  std::vector<Rational> densities_;
  detail::Scope scope_;
};

/// Full marginal of P on the variables of A, computed by one pass over the
/// table. A may be empty (the scope then has the single empty assignment with
/// mass 1).
inline MarginalTable marginal_table(const JointTable& P, const VarSet& A) {
  if (!same_universe(P.universe(), A.universe()))
    throw std::invalid_argument("marginal_table: set over a different universe");
  detail::Scope sub = detail::make_scope(P.dims(), A.mask());
  // Contribution of each universe variable to the sub-scope index.
  std::vector<std::size_t> contrib(P.universe()->size(), 0);
  for (std::size_t p = 0; p < sub.vars.size(); ++p) contrib[sub.vars[p]] = sub.strides[p];
  std::vector<Rational> values(sub.total, Rational(0));
  const detail::Scope& full = P.scope();
  for (std::size_t idx = 0; idx < P.size(); ++idx) {
    if (P.density(idx) == 0) continue;
    std::size_t rem = idx, sub_idx = 0;
    for (std::size_t p = 0; p < full.vars.size(); ++p) {
      const std::size_t v = rem / full.strides[p];
      rem %= full.strides[p];
      sub_idx += v * contrib[full.vars[p]];
    }
    values[sub_idx] += P.density(idx);
  }
  std::vector<int> scope_dims = sub.dims;
  return MarginalTable(P.universe(), A.mask(), std::move(scope_dims), std::move(values));
}

/// Mass of a single assignment of A under P's marginal on A.
inline Rational marginal(const JointTable& P, const VarSet& A, std::span<const int> a) {
  if (!same_universe(P.universe(), A.universe()))
    throw std::invalid_argument("marginal: set over a different universe");
  detail::Scope sub = detail::make_scope(P.dims(), A.mask());
  if (a.size() != sub.vars.size()) throw std::invalid_argument("marginal: wrong assignment length");
  const std::size_t want = sub.index(a);
  std::vector<std::size_t> contrib(P.universe()->size(), 0);
  for (std::size_t p = 0; p < sub.vars.size(); ++p) contrib[sub.vars[p]] = sub.strides[p];
  Rational sum = 0;
  const detail::Scope& full = P.scope();
  for (std::size_t idx = 0; idx < P.size(); ++idx) {
    std::size_t rem = idx, sub_idx = 0;
    for (std::size_t p = 0; p < full.vars.size(); ++p) {
      const std::size_t v = rem / full.strides[p];
      rem %= full.strides[p];
      sub_idx += v * contrib[full.vars[p]];
    }
    if (sub_idx == want) sum += P.density(idx);
  }
  return sum;
}

/// Exact satisfaction test: the product identity
///   P^C(c) * P^{ABC}(a,b,c) = P^{AC}(a,c) * P^{BC}(b,c)
/// must hold for every assignment of the statement's variables.
inline bool satisfies(const JointTable& P, const CIStatement& stmt) {
  if (!same_universe(P.universe(), stmt.universe()))
    throw std::invalid_argument("satisfies: statement over a different universe");
  const std::uint32_t abc = stmt.a_mask() | stmt.b_mask() | stmt.c_mask();
  const MarginalTable m_abc = marginal_table(P, VarSet(P.universe(), abc));
  const MarginalTable m_ac = marginal_table(P, VarSet(P.universe(), stmt.a_mask() | stmt.c_mask()));
  const MarginalTable m_bc = marginal_table(P, VarSet(P.universe(), stmt.b_mask() | stmt.c_mask()));
  const MarginalTable m_c = marginal_table(P, VarSet(P.universe(), stmt.c_mask()));
  // Index contribution of each ABC-scope position into the three sub-scopes.
  const detail::Scope& sc = m_abc.scope();
  const auto contrib_of = [&](const MarginalTable& t) {
    std::vector<std::size_t> contrib(sc.vars.size(), 0);
    const detail::Scope& target = t.scope();
    for (std::size_t q = 0; q < target.vars.size(); ++q) {
      auto it = std::find(sc.vars.begin(), sc.vars.end(), target.vars[q]);
      contrib[it - sc.vars.begin()] = target.strides[q];
    }
    return contrib;
  };
  const std::vector<std::size_t> to_ac = contrib_of(m_ac), to_bc = contrib_of(m_bc), to_c = contrib_of(m_c);
  for (std::size_t idx = 0; idx < m_abc.size(); ++idx) {
    std::size_t rem = idx, i_ac = 0, i_bc = 0, i_c = 0;
    for (std::size_t p = 0; p < sc.vars.size(); ++p) {
      const std::size_t v = rem / sc.strides[p];
      rem %= sc.strides[p];
      i_ac += v * to_ac[p];
      i_bc += v * to_bc[p];
      i_c += v * to_c[p];
    }
    if (m_c[i_c] * m_abc[idx] != m_ac[i_ac] * m_bc[i_bc]) return false;
  }
  return true;
}

/// Relative entropy of P against Q over the same scope, natural log, evaluated
/// in floating point: sum over P's support of P(x) * log(P(x)/Q(x)).
inline double relative_entropy(const MarginalTable& P, const MarginalTable& Q) {
  if (!same_universe(P.universe(), Q.universe()) || P.scope_mask() != Q.scope_mask() ||
      P.scope_dims() != Q.scope_dims())
    throw std::invalid_argument("relative_entropy: tables over different scopes");
  double sum = 0.0;
  for (std::size_t idx = 0; idx < P.size(); ++idx) {
    const Rational& p = P[idx];
    if (p == 0) continue;
    const Rational& q = Q[idx];
    if (q == 0)
      throw std::domain_error("relative_entropy: P not absolutely continuous w.r.t. Q");
    sum += to_double(p) * std::log(to_double(Rational(p / q)));
  }
  return sum;
}

/// Relative entropy of the A-marginal of P against the product of P's
/// singleton marginals on A; zero exactly when the variables of A are jointly
/// independent. Empty and singleton A give 0 by definition.
inline double multiinformation(const JointTable& P, const VarSet& A) {
  if (!same_universe(P.universe(), A.universe()))
    throw std::invalid_argument("multiinformation: set over a different universe");
  if (A.size() <= 1) return 0.0;
  const MarginalTable joint = marginal_table(P, A);
  std::vector<MarginalTable> singles;
  singles.reserve(A.size());
  for (int i : A.indices()) singles.push_back(marginal_table(P, VarSet(P.universe(), std::uint32_t{1} << i)));
  const detail::Scope& sc = joint.scope();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    const Rational& p = joint[idx];
    if (p == 0) continue;
    Rational q = 1;
    std::size_t rem = idx;
    for (std::size_t pos = 0; pos < sc.vars.size(); ++pos) {
      const std::size_t v = rem / sc.strides[pos];
      rem %= sc.strides[pos];
      q *= singles[pos][v];
    }
    if (q == 0) throw std::domain_error("multiinformation: zero product mass inside the support");
    sum += to_double(p) * std::log(to_double(Rational(p / q)));
  }
  return sum;
}

/// Multiinformation of P on every subset, as a real-valued set function.
inline SetFunction<double> multiinformation_function(const JointTable& P) {
  SetFunction<double> f(P.universe());
  const std::uint32_t full = P.universe()->full_mask();
  for (std::uint32_t m = 0;; ++m) {
    f[m] = multiinformation(P, VarSet(P.universe(), m));
    if (m == full) break;
  }
  return f;
}

/// Random measure factorized along a DAG: each variable gets a conditional
/// distribution per parent assignment, with strictly positive entries whose
/// common denominator is at most 64. Deterministic per seed.
inline JointTable random_factorized_table(const UniversePtr& universe,
                                          const std::vector<std::pair<int, int>>& dag_edges,
                                          std::uint64_t seed, const std::vector<int>& dims = {}) {
  const int n = universe->size();
  std::vector<int> all_dims = dims.empty() ? std::vector<int>(n, 2) : dims;
  if (static_cast<int>(all_dims.size()) != n)
    throw std::invalid_argument("random_factorized_table: one domain size per variable required");
  std::vector<std::uint32_t> parents(n, 0);
  for (auto [from, to] : dag_edges) {
    if (from < 0 || from >= n || to < 0 || to >= n || from == to)
      throw std::invalid_argument("random_factorized_table: edge endpoint out of range");
    parents[to] |= std::uint32_t{1} << from;
  }
  // Kahn's algorithm; leftovers mean a cycle.
  {
    std::vector<std::uint32_t> remaining = parents;
    std::uint32_t done = 0;
    for (int round = 0; round < n; ++round) {
      bool progressed = false;
      for (int i = 0; i < n; ++i)
        if (!(done & (std::uint32_t{1} << i)) && (remaining[i] & ~done) == 0) {
          done |= std::uint32_t{1} << i;
          progressed = true;
        }
      if (!progressed) break;
    }
    if (done != universe->full_mask())
      throw std::invalid_argument("random_factorized_table: edge set has a cycle");
  }

  Rng rng(seed);
  // A positive k-part composition of a denominator drawn from [k, 64]: cut the
  // segment [0, den] at k-1 distinct interior points.
  const auto draw_distribution = [&](int k) {
    const int den = static_cast<int>(rng.range(k, 64));
    std::vector<std::size_t> cuts = rng.sample_without_replacement(den - 1, k - 1);
    for (std::size_t& c : cuts) ++c;  // interior points 1..den-1
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rational> dist(k);
    std::size_t prev = 0;
    for (int v = 0; v < k; ++v) {
      const std::size_t next = (v == k - 1) ? static_cast<std::size_t>(den) : cuts[v];
      dist[v] = Rational(static_cast<long>(next - prev), static_cast<long>(den));
      prev = next;
    }
    return dist;
  };

  // Conditional tables in variable order, parent assignments in ascending
  // index order — the draw order is part of the determinism contract.
  std::vector<detail::Scope> parent_scopes(n);
  std::vector<std::vector<std::vector<Rational>>> cpt(n);
  for (int i = 0; i < n; ++i) {
    parent_scopes[i] = detail::make_scope(all_dims, parents[i]);
    cpt[i].reserve(parent_scopes[i].total);
    for (std::size_t pa = 0; pa < parent_scopes[i].total; ++pa) cpt[i].push_back(draw_distribution(all_dims[i]));
  }

  detail::Scope full = detail::make_scope(all_dims, universe->full_mask());
  std::vector<Rational> densities(full.total);
  std::vector<int> assignment(n);
  for (std::size_t idx = 0; idx < full.total; ++idx) {
    std::size_t rem = idx;
    for (int p = 0; p < n; ++p) {
      assignment[p] = static_cast<int>(rem / full.strides[p]);
      rem %= full.strides[p];
    }
    Rational prod = 1;
    for (int i = 0; i < n; ++i) {
      std::size_t pa_idx = 0;
      const detail::Scope& ps = parent_scopes[i];
      for (std::size_t q = 0; q < ps.vars.size(); ++q)
        pa_idx += static_cast<std::size_t>(assignment[ps.vars[q]]) * ps.strides[q];
      prod *= cpt[i][pa_idx][assignment[i]];
    }
    densities[idx] = prod;
  }
  return JointTable(universe, std::move(all_dims), std::move(densities));
}

/// Serializes a table as a `dims` header plus one line per cell. Inverse of
/// parse_joint_table.
inline std::string joint_table_to_text(const JointTable& P) {
  std::string out = "dims";
  for (int k : P.dims()) out += ' ' + std::to_string(k);
  out += '\n';
  const detail::Scope& sc = P.scope();
  for (std::size_t idx = 0; idx < P.size(); ++idx) {
    std::size_t rem = idx;
    for (std::size_t p = 0; p < sc.vars.size(); ++p) {
      out += std::to_string(rem / sc.strides[p]);
      out += ' ';
      rem %= sc.strides[p];
    }
    out += rational_to_fraction(P.density(idx));
    out += '\n';
  }
  return out;
}

/// Parses the `dims k1 … kn` + assignment-line format. Unlisted cells default
/// to mass 0; listing a cell twice is an error. Variables default to letter
/// names when no universe is supplied.
inline JointTable parse_joint_table(std::string_view text, UniversePtr universe = nullptr) {
  std::size_t pos = 0;
  const std::size_t end = text.size();
  std::vector<int> dims;
  std::vector<Rational> densities;
  std::vector<bool> seen;
  detail::Scope scope;
  bool header_done = false;
  while (pos < end) {
    std::size_t line_start = pos;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = end;
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::pair<std::string, std::size_t>> tokens;
    for (std::size_t i = 0; i < line.size();) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      tokens.emplace_back(std::string(line.substr(start, i - start)), line_start + start);
    }
    if (tokens.empty()) continue;
    if (!header_done) {
      if (tokens[0].first != "dims")
        throw ParseError("expected 'dims' header line", tokens[0].second);
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        int k;
        try {
          k = std::stoi(tokens[t].first);
        } catch (const std::exception&) {
          throw ParseError("bad domain size '" + tokens[t].first + "'", tokens[t].second);
        }
        if (k < 2) throw ParseError("domain sizes must be at least 2", tokens[t].second);
        dims.push_back(k);
      }
      if (dims.size() < 2) throw ParseError("need at least two variables", tokens[0].second);
      if (!universe) universe = letters_universe(static_cast<int>(dims.size()));
      if (universe->size() != static_cast<int>(dims.size()))
        throw ParseError("dims count does not match the universe", tokens[0].second);
      scope = detail::make_scope(dims, universe->full_mask());
      if (scope.total > detail::kMaxTableCells)
        throw ParseError("table too large", tokens[0].second);
      densities.assign(scope.total, Rational(0));
      seen.assign(scope.total, false);
      header_done = true;
      continue;
    }
    if (tokens.size() != dims.size() + 1)
      throw ParseError("expected " + std::to_string(dims.size()) + " values and a probability",
                       tokens[0].second);
    std::vector<int> assignment(dims.size());
    for (std::size_t t = 0; t < dims.size(); ++t) {
      int v;
      try {
        v = std::stoi(tokens[t].first);
      } catch (const std::exception&) {
        throw ParseError("bad assignment value '" + tokens[t].first + "'", tokens[t].second);
      }
      if (v < 0 || v >= dims[t]) throw ParseError("assignment value out of range", tokens[t].second);
      assignment[t] = v;
    }
    Rational p;
    try {
      p = rational_from_string(tokens.back().first);
    } catch (const std::exception&) {
      throw ParseError("bad probability '" + tokens.back().first + "'", tokens.back().second);
    }
    if (p < 0) throw ParseError("negative probability", tokens.back().second);
    const std::size_t idx = scope.index(assignment);
    if (seen[idx]) throw ParseError("assignment listed twice", tokens[0].second);
    seen[idx] = true;
    densities[idx] = p;
  }
  if (!header_done) throw ParseError("missing 'dims' header line", 0);
  return JointTable(universe, std::move(dims), std::move(densities));
}

}  // namespace ciimp
