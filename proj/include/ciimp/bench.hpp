#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciimp/engine.hpp"
#include "ciimp/generator.hpp"
#include "ciimp/parallel.hpp"
#include "ciimp/rng.hpp"
#include "ciimp/validator.hpp"

namespace ciimp {

/// One decision's worth of measurement. rows/cols are the built system's
/// dimensions (0 when falsification ended the pipeline before any system was
/// built); lp_ms times the feasibility solve alone, total_ms the whole
/// decision including enumeration and system construction.
struct BenchRecord {
  int n_vars = 0;
  int n_antecedents = 0;
  std::uint64_t seed = 0;
  int query_idx = 0;
  Outcome outcome = Outcome::Undecided;
  int rows = 0;
  int cols = 0;
  double lp_ms = 0.0;
  double total_ms = 0.0;
};

inline constexpr const char* kBenchCsvHeader =
    "n_vars,n_antecedents,seed,query_idx,outcome,rows,cols,lp_ms,total_ms";

namespace detail {

inline std::string format_ms(double ms) {
  // Fixed three decimals: wall-clock capture is in microseconds.
  const long long scaled = static_cast<long long>(ms * 1000.0 + 0.5);
  std::string out = std::to_string(scaled / 1000);
  const long long frac = scaled % 1000;
  out += '.';
  out += static_cast<char>('0' + frac / 100);
  out += static_cast<char>('0' + frac / 10 % 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

using BenchClock = std::chrono::steady_clock;

inline double ms_since(BenchClock::time_point start) {
  return std::chrono::duration<double, std::milli>(BenchClock::now() - start).count();
}

}  // namespace detail

inline std::string bench_csv_row(const BenchRecord& r) {
  return std::to_string(r.n_vars) + ',' + std::to_string(r.n_antecedents) + ',' +
         std::to_string(r.seed) + ',' + std::to_string(r.query_idx) + ',' +
         outcome_name(r.outcome) + ',' + std::to_string(r.rows) + ',' + std::to_string(r.cols) +
         ',' + detail::format_ms(r.lp_ms) + ',' + detail::format_ms(r.total_ms);
}

namespace detail {

/// Standalone timed pipeline run: falsify, else build and solve. Every query
/// pays its own full cost — nothing is shared, so records are comparable.
inline BenchRecord timed_decide(const Instance& instance, int query_idx, std::uint64_t seed,
                                const EnumOptions& opts) {
  const CIStatement& consequent = instance.queries[query_idx];
  BenchRecord rec;
  rec.n_vars = instance.universe->size();
  rec.n_antecedents = static_cast<int>(instance.antecedents.size());
  rec.seed = seed;
  rec.query_idx = query_idx;
  const auto t0 = BenchClock::now();
  const FalsificationResult fr = check_inclusion(instance.antecedents, consequent, opts);
  if (!fr.included) {
    rec.outcome = Outcome::Falsified;
    rec.total_ms = ms_since(t0);
    return rec;
  }
  const SystemBase base = build_system_base(instance.antecedents, opts);
  const std::vector<long long> rhs = consequent_rhs(base, consequent);
  rec.rows = base.matrix.rows();
  rec.cols = base.matrix.cols();
  const auto t_lp = BenchClock::now();
  const FeasibilityOutcome lp = lp_feasible(base.matrix, rhs, base.crash_columns);
  rec.lp_ms = ms_since(t_lp);
  rec.outcome = lp.feasible ? Outcome::Validated : Outcome::Undecided;
  rec.total_ms = ms_since(t0);
  return rec;
}

}  // namespace detail

struct CurveSummaryRow {
  int n_antecedents = 0;
  double falsified_frac = 0.0;
  double validated_frac = 0.0;
  double undecided_frac = 0.0;
};

struct CurveResult {
  std::vector<BenchRecord> records;  // deterministic (ℓ, set, query) order
  std::vector<CurveSummaryRow> summary;
};

/// Decision-outcome curve over antecedent-set sizes: per ℓ, `sets_per_ell`
/// random instances with `consequents_per_set` queries each. Instances carry
/// derived seeds, so the records are identical for any worker count.
inline CurveResult run_decide_curve(int n_vars, std::span<const int> ell_values, int sets_per_ell,
                                    int consequents_per_set, std::uint64_t seed) {
  EnumOptions opts;
  opts.max_enum_vars = std::max(opts.max_enum_vars, n_vars);
  const std::size_t n_instances = ell_values.size() * static_cast<std::size_t>(sets_per_ell);
  std::vector<std::vector<BenchRecord>> per_instance(n_instances);
  run_parallel(n_instances, engine_thread_count(), [&](std::size_t idx) {
    const int ell = ell_values[idx / sets_per_ell];
    const std::uint64_t instance_seed = Rng::derive_seed(seed, idx);
    const Instance instance = gen_random_instance(n_vars, ell, consequents_per_set, instance_seed);
    auto& records = per_instance[idx];
    records.reserve(consequents_per_set);
    for (int q = 0; q < consequents_per_set; ++q)
      records.push_back(detail::timed_decide(instance, q, instance_seed, opts));
  });
  CurveResult out;
  out.records.reserve(n_instances * consequents_per_set);
  for (auto& records : per_instance)
    for (BenchRecord& r : records) out.records.push_back(r);
  for (std::size_t e = 0; e < ell_values.size(); ++e) {
    CurveSummaryRow row;
    row.n_antecedents = ell_values[e];
    const std::size_t begin = e * sets_per_ell * consequents_per_set;
    const std::size_t count = static_cast<std::size_t>(sets_per_ell) * consequents_per_set;
    for (std::size_t i = begin; i < begin + count; ++i) {
      switch (out.records[i].outcome) {
        case Outcome::Falsified: row.falsified_frac += 1; break;
        case Outcome::Validated: row.validated_frac += 1; break;
        case Outcome::Undecided: row.undecided_frac += 1; break;
      }
    }
    row.falsified_frac /= static_cast<double>(count);
    row.validated_frac /= static_cast<double>(count);
    row.undecided_frac /= static_cast<double>(count);
    out.summary.push_back(row);
  }
  return out;
}

struct DimsRow {
  int n_vars = 0;
  double mean_rows = 0.0;
  double mean_cols = 0.0;
  long long max_rows = 0;  // 2^n − n − 1
  long long max_cols = 0;  // C(n,2) · 2^(n−2)
  double mean_lp_ms = 0.0; // over queries that reached the solver
  int lp_reached = 0;
};

/// Constraint-system dimensions against their theoretical maxima, averaged
/// over random instances per variable count.
inline std::vector<DimsRow> run_dimension_timing(std::span<const int> n_values, int n_antecedents,
                                                 int trials, std::uint64_t seed) {
  std::vector<DimsRow> out;
  std::size_t stream = 0;
  for (int n : n_values) {
    EnumOptions opts;
    opts.max_enum_vars = std::max(opts.max_enum_vars, n);
    DimsRow row;
    row.n_vars = n;
    row.max_rows = (1LL << n) - n - 1;
    row.max_cols = static_cast<long long>(n) * (n - 1) / 2 << (n - 2);
    const int ell = std::min<long long>(n_antecedents, row.max_cols);
    std::vector<BenchRecord> records(trials);
    std::vector<int> base_rows(trials), base_cols(trials);
    run_parallel(trials, engine_thread_count(), [&, stream](std::size_t t) {
      const std::uint64_t instance_seed = Rng::derive_seed(seed, stream + t);
      const Instance instance = gen_random_instance(n, ell, 1, instance_seed);
      const SystemBase base = build_system_base(instance.antecedents, opts);
      base_rows[t] = base.matrix.rows();
      base_cols[t] = base.matrix.cols();
      records[t] = detail::timed_decide(instance, 0, instance_seed, opts);
    });
    stream += trials;
    for (int t = 0; t < trials; ++t) {
      row.mean_rows += base_rows[t];
      row.mean_cols += base_cols[t];
      if (records[t].outcome != Outcome::Falsified) {
        row.mean_lp_ms += records[t].lp_ms;
        ++row.lp_reached;
      }
    }
    row.mean_rows /= trials;
    row.mean_cols /= trials;
    if (row.lp_reached > 0) row.mean_lp_ms /= row.lp_reached;
    out.push_back(row);
  }
  return out;
}

namespace detail {

/// The unpruned baseline system: every subset of size ≤ n−2 as a row, every
/// elementary statement as a column, rhs padded with zeros outside the
/// antecedents' lattice union. Feasibility is unchanged — zero rows force the
/// non-relevant columns to zero — which is exactly what the pruned
/// construction exploits.
struct FullVariant {
  SparseBinaryMatrix matrix;
  std::vector<long long> rhs;
  std::vector<int> crash_columns;
};

inline FullVariant build_full_variant(const Instance& instance, const CIStatement& consequent,
                                      const SystemBase& pruned, const EnumOptions& opts) {
  const UniversePtr& universe = instance.universe;
  const int n = universe->size();
  const std::uint32_t full_mask = universe->full_mask();
  std::vector<std::uint32_t> rows;
  rows.reserve((std::size_t{1} << n) - n - 1);
  for (std::uint32_t m = 0; m <= full_mask; ++m)
    if (std::popcount(m) <= n - 2) rows.push_back(m);
  const std::vector<CIStatement> all_cols = enumerate_elementary(universe, opts);
  const auto row_of = [&rows](std::uint32_t mask) {
    return static_cast<int>(std::lower_bound(rows.begin(), rows.end(), mask) - rows.begin());
  };
  std::vector<std::vector<int>> columns;
  columns.reserve(all_cols.size());
  std::vector<std::uint32_t> masks;
  for (const CIStatement& r : all_cols) {
    masks.clear();
    append_lattice_masks(r, masks);
    std::vector<int> col;
    col.reserve(masks.size());
    for (std::uint32_t m : masks) col.push_back(row_of(m));
    columns.push_back(std::move(col));
  }
  std::vector<long long> rhs(rows.size(), 0);
  const std::vector<long long> pruned_rhs = consequent_rhs(pruned, consequent);
  for (std::size_t i = 0; i < pruned.v_antecedents.index.size(); ++i)
    rhs[row_of(pruned.v_antecedents.index[i])] = pruned_rhs[i];
  // Same entering hints as the pruned side, re-indexed into the full column
  // order, so the comparison isolates the matrix size.
  std::vector<int> crash;
  crash.reserve(pruned.crash_columns.size());
  for (int j : pruned.crash_columns) {
    const auto it = std::lower_bound(all_cols.begin(), all_cols.end(), pruned.cols[j]);
    crash.push_back(static_cast<int>(it - all_cols.begin()));
  }
  return FullVariant{SparseBinaryMatrix(static_cast<int>(rows.size()), std::move(columns)),
                     std::move(rhs), std::move(crash)};
}

}  // namespace detail

struct MinVsFullRow {
  int n_antecedents = 0;
  int lp_reached = 0;          // trials whose query passed falsification
  double pruned_rows_mean = 0.0;
  double pruned_cols_mean = 0.0;
  long long full_rows = 0;
  long long full_cols = 0;
  double pruned_ms_mean = 0.0; // min-of-repeats per trial, averaged
  double full_ms_mean = 0.0;
  int outcome_mismatches = 0;  // pruned vs full feasibility disagreements
};

/// Paired pruned-vs-unpruned solve timings. Per trial both systems solve the
/// same instance; each timing is the minimum over `repeats` interleaved runs,
/// which suppresses scheduling noise in what is often a near-tie. Both sides
/// solve with presolve off: its reductions discover the pruning dynamically
/// and would collapse the two matrices to the same core, leaving nothing to
/// compare; the bare tableau times the constructions as built.
inline std::vector<MinVsFullRow> run_minimal_vs_full(int n_vars, std::span<const int> ell_values,
                                                     int trials, std::uint64_t seed,
                                                     int repeats = 5) {
  constexpr LpOptions kBareTableau{.presolve = false};
  EnumOptions opts;
  opts.max_enum_vars = std::max(opts.max_enum_vars, n_vars);
  std::vector<MinVsFullRow> out;
  std::size_t stream = 0;
  for (int ell : ell_values) {
    MinVsFullRow row;
    row.n_antecedents = ell;
    row.full_rows = (1LL << n_vars) - n_vars - 1;
    row.full_cols = static_cast<long long>(n_vars) * (n_vars - 1) / 2 << (n_vars - 2);
    struct TrialResult {
      bool reached = false;
      int rows = 0, cols = 0;
      double pruned_ms = 0.0, full_ms = 0.0;
      bool mismatch = false;
    };
    std::vector<TrialResult> results(trials);
    run_parallel(trials, engine_thread_count(), [&, stream](std::size_t t) {
      const std::uint64_t instance_seed = Rng::derive_seed(seed, stream + t);
      const Instance instance = gen_random_instance(n_vars, ell, 1, instance_seed);
      const CIStatement& consequent = instance.queries[0];
      if (!check_inclusion(instance.antecedents, consequent, opts).included) return;
      TrialResult& res = results[t];
      res.reached = true;
      const SystemBase pruned = build_system_base(instance.antecedents, opts);
      const std::vector<long long> pruned_rhs = consequent_rhs(pruned, consequent);
      const detail::FullVariant full = detail::build_full_variant(instance, consequent, pruned, opts);
      res.rows = pruned.matrix.rows();
      res.cols = pruned.matrix.cols();
      bool pruned_feasible = false, full_feasible = false;
      for (int rep = 0; rep < repeats; ++rep) {
        auto t0 = detail::BenchClock::now();
        pruned_feasible =
            lp_feasible(pruned.matrix, pruned_rhs, pruned.crash_columns, kBareTableau).feasible;
        const double p_ms = detail::ms_since(t0);
        t0 = detail::BenchClock::now();
        full_feasible = lp_feasible(full.matrix, full.rhs, full.crash_columns, kBareTableau).feasible;
        const double f_ms = detail::ms_since(t0);
        if (rep == 0 || p_ms < res.pruned_ms) res.pruned_ms = p_ms;
        if (rep == 0 || f_ms < res.full_ms) res.full_ms = f_ms;
      }
      res.mismatch = pruned_feasible != full_feasible;
    });
    stream += trials;
    for (const TrialResult& res : results) {
      if (!res.reached) continue;
      ++row.lp_reached;
      row.pruned_rows_mean += res.rows;
      row.pruned_cols_mean += res.cols;
      row.pruned_ms_mean += res.pruned_ms;
      row.full_ms_mean += res.full_ms;
      row.outcome_mismatches += res.mismatch ? 1 : 0;
    }
    if (row.lp_reached > 0) {
      row.pruned_rows_mean /= row.lp_reached;
      row.pruned_cols_mean /= row.lp_reached;
      row.pruned_ms_mean /= row.lp_reached;
      row.full_ms_mean /= row.lp_reached;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace ciimp
