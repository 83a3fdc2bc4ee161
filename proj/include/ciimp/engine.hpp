#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciimp/closure.hpp"
#include "ciimp/falsifier.hpp"
#include "ciimp/semilattice.hpp"
#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"
#include "ciimp/validator.hpp"

namespace ciimp {

enum class Outcome { Falsified, Validated, Undecided };

/// Which test produced (or, for Undecided, last attempted) the outcome.
enum class Method { Semilattice, Lp, Ip, Closure };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Falsified: return "falsified";
    case Outcome::Validated: return "validated";
    default: return "undecided";
  }
}

struct Decision {
  Outcome outcome = Outcome::Undecided;
  Method method = Method::Lp;
  std::optional<VarSet> witness;                    // present iff Falsified
  std::optional<ValidationCertificate> certificate; // present iff Validated via LP/IP
  std::optional<bool> ip_feasible;                  // present iff the integer variant ran
  std::optional<bool> closure_contains;             // present iff the closure baseline ran
};

struct DecideOptions {
  EnumOptions enum_opts;
  bool use_ip = false;       // also run the integer variant and record agreement
  bool use_closure = false;  // also run the semigraphoid baseline
  long long node_budget = 1'000'000;
  ClosureOptions closure_opts;
};

/// Disjunctive verdict over a consequent set: implied when some member is,
/// refuted only when every member is.
struct SetDecision {
  Outcome outcome = Outcome::Undecided;
  std::vector<Decision> per_consequent;
};

namespace detail {

/// Shared state for deciding several consequents against one antecedent set:
/// the lattice bitmap, the constraint-system base, and the closure are each
/// built once, on first use.
class DecideContext {
 public:
  DecideContext(std::span<const CIStatement> antecedents, const DecideOptions& opts)
      : antecedents_(antecedents), opts_(opts) {
    if (antecedents.empty()) throw std::invalid_argument("decide: empty antecedent set");
    universe_ = antecedents.front().universe();
    check_enum_cap(universe_, opts.enum_opts);
    bitmap_.emplace(lattice_union_bitmap(antecedents, universe_));
  }

  Decision decide_one(const CIStatement& consequent) {
    if (!same_universe(consequent.universe(), universe_))
      throw std::invalid_argument("decide: consequent over a different universe");
    Decision d;
    if (opts_.use_closure)
      d.closure_contains = closure_contains(antecedents_, consequent, opts_.closure_opts);
    std::vector<std::uint32_t> masks;
    append_lattice_masks(consequent, masks);
    for (std::uint32_t m : masks)
      if (!bitmap_->contains(m)) {
        d.outcome = Outcome::Falsified;
        d.method = Method::Semilattice;
        d.witness = VarSet(universe_, m);
        return d;
      }
    if (!base_) base_.emplace(build_system_base(antecedents_, opts_.enum_opts));
    ValidationResult lp = validate_from_base(*base_, consequent);
    std::optional<ValidationResult> ip;
    if (opts_.use_ip) {
      ip.emplace(validate_combinatorial_from_base(*base_, consequent, opts_.node_budget));
      d.ip_feasible = ip->status == ValidationStatus::Validated;
    }
    if (lp.status == ValidationStatus::Validated) {
      d.outcome = Outcome::Validated;
      d.method = Method::Lp;
      d.certificate = std::move(lp.certificate);
    } else if (ip && ip->status == ValidationStatus::Validated) {
      // Unreachable when both solvers are correct (integer-feasible implies
      // rationally feasible); kept so a disagreement surfaces as a decision
      // rather than vanishing.
      d.outcome = Outcome::Validated;
      d.method = Method::Ip;
      d.certificate = std::move(ip->certificate);
    } else if (d.closure_contains.value_or(false)) {
      d.outcome = Outcome::Validated;
      d.method = Method::Closure;
    } else {
      d.outcome = Outcome::Undecided;
      d.method = Method::Lp;
    }
    return d;
  }

 private:
  std::span<const CIStatement> antecedents_;
  const DecideOptions& opts_;
  UniversePtr universe_;
  std::optional<SubsetBitmap> bitmap_;
  std::optional<SystemBase> base_;
};

}  // namespace detail

/// Falsify, then validate, else report Undecided. Undecided never claims
/// non-implication; NodeBudgetExceeded propagates when the integer variant
/// runs out of nodes.
inline Decision decide(std::span<const CIStatement> antecedents, const CIStatement& consequent,
                       const DecideOptions& opts = {}) {
  return detail::DecideContext(antecedents, opts).decide_one(consequent);
}

inline SetDecision decide_set(std::span<const CIStatement> antecedents,
                              std::span<const CIStatement> consequents,
                              const DecideOptions& opts = {}) {
  if (consequents.empty()) throw std::invalid_argument("decide_set: empty consequent set");
  detail::DecideContext ctx(antecedents, opts);
  SetDecision out;
  out.per_consequent.reserve(consequents.size());
  bool any_validated = false, all_falsified = true;
  for (const CIStatement& c : consequents) {
    Decision d = ctx.decide_one(c);
    any_validated = any_validated || d.outcome == Outcome::Validated;
    all_falsified = all_falsified && d.outcome == Outcome::Falsified;
    out.per_consequent.push_back(std::move(d));
  }
  out.outcome = any_validated ? Outcome::Validated
                              : (all_falsified ? Outcome::Falsified : Outcome::Undecided);
  return out;
}

}  // namespace ciimp
