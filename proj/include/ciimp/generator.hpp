#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciimp/instance_file.hpp"
#include "ciimp/rng.hpp"
#include "ciimp/semilattice.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

/// Random decision problem: n_antecedents distinct elementary statements
/// sampled uniformly without replacement, and n_queries distinct elementary
/// statements sampled the same way, independently (queries may repeat
/// antecedents). Deterministic per seed; both groups come out in canonical
/// order.
inline Instance gen_random_instance(int n_vars, int n_antecedents, int n_queries,
                                    std::uint64_t seed) {
  Instance out;
  out.universe = letters_universe(n_vars);
  EnumOptions opts;
  opts.max_enum_vars = std::max(opts.max_enum_vars, n_vars);
  const std::vector<CIStatement> all = enumerate_elementary(out.universe, opts);
  const auto total = static_cast<std::size_t>(all.size());
  if (n_antecedents < 1 || static_cast<std::size_t>(n_antecedents) > total)
    throw std::invalid_argument("gen_random_instance: antecedent count must be in [1, " +
                                std::to_string(total) + "]");
  if (n_queries < 1 || static_cast<std::size_t>(n_queries) > total)
    throw std::invalid_argument("gen_random_instance: query count must be in [1, " +
                                std::to_string(total) + "]");
  Rng rng(seed);
  const auto pick = [&](int count) {
    std::vector<std::size_t> idx = rng.sample_without_replacement(total, count);
    std::sort(idx.begin(), idx.end());
    std::vector<CIStatement> chosen;
    chosen.reserve(idx.size());
    for (std::size_t i : idx) chosen.push_back(all[i]);
    return chosen;
  };
  out.antecedents = pick(n_antecedents);
  out.queries = pick(n_queries);
  return out;
}

}  // namespace ciimp
