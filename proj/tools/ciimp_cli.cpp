// Command-line front end: decide instance files, generate random instances,
// re-check certificates, and run the benchmark tables.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ciimp/ciimp.hpp>

namespace {

const char* outcome_token(ciimp::Outcome o) {
  switch (o) {
    case ciimp::Outcome::Falsified: return "FALSIFIED";
    case ciimp::Outcome::Validated: return "VALIDATED";
    default: return "UNDECIDED";
  }
}

std::string certificate_inline(const ciimp::ValidationCertificate& cert) {
  std::string out;
  for (const auto& [stmt, k] : cert.terms) {
    if (!out.empty()) out += " + ";
    out += ciimp::rational_to_fraction(k) + " * " + ciimp::statement_display(stmt);
  }
  return out.empty() ? "0" : out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

long long env_node_budget(long long fallback) {
  const char* raw = std::getenv("CI_ENGINE_NODE_BUDGET");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const long long value = std::strtoll(raw, &end, 10);
  if (end == raw || *end != '\0' || value <= 0)
    throw std::invalid_argument("CI_ENGINE_NODE_BUDGET must be a positive integer");
  return value;
}

ciimp::EnumOptions enum_options_for(int n_vars) {
  ciimp::EnumOptions opts;
  opts.max_enum_vars = std::max(opts.max_enum_vars, n_vars);
  return opts;
}

int cmd_decide(const std::string& path, bool use_ip, bool use_closure,
               const std::string& cert_out) {
  const ciimp::Instance instance = ciimp::read_instance_file(path);
  ciimp::DecideOptions opts;
  opts.enum_opts = enum_options_for(instance.universe->size());
  opts.use_ip = use_ip;
  opts.use_closure = use_closure;
  opts.node_budget = env_node_budget(opts.node_budget);
  const ciimp::SetDecision result = ciimp::decide_set(instance.antecedents, instance.queries, opts);
  bool cert_written = false;
  for (std::size_t i = 0; i < result.per_consequent.size(); ++i) {
    const ciimp::Decision& d = result.per_consequent[i];
    std::string line = outcome_token(d.outcome);
    if (d.witness) line += " witness=" + d.witness->to_string();
    if (d.certificate) {
      line += " cert=" + certificate_inline(*d.certificate);
      if (!cert_out.empty() && !cert_written) {
        write_file(cert_out, ciimp::certificate_to_text(*d.certificate, instance.antecedents,
                                                        instance.queries[i]));
        cert_written = true;
      }
    }
    if (d.ip_feasible) line += d.ip_feasible.value() ? " ip=feasible" : " ip=infeasible";
    if (d.closure_contains)
      line += d.closure_contains.value() ? " closure=contains" : " closure=absent";
    std::cout << line << '\n';
  }
  std::cout << "combined: " << outcome_token(result.outcome) << '\n';
  if (!cert_out.empty() && !cert_written)
    std::cerr << "note: no query validated, " << cert_out << " not written\n";
  return 0;
}

int cmd_gen(int n_vars, int n_antecedents, int n_queries, std::uint64_t seed,
            const std::string& out_path) {
  const ciimp::Instance instance =
      ciimp::gen_random_instance(n_vars, n_antecedents, n_queries, seed);
  const std::string text = ciimp::instance_to_text(instance);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& cert_path) {
  const ciimp::Instance instance = ciimp::read_instance_file(instance_path);
  const ciimp::ValidationCertificate cert =
      ciimp::parse_certificate(ciimp::read_text_file(cert_path), instance.universe);
  const ciimp::EnumOptions opts = enum_options_for(instance.universe->size());
  for (std::size_t i = 0; i < instance.queries.size(); ++i) {
    const bool ok =
        ciimp::verify_certificate(instance.antecedents, instance.queries[i], cert, opts);
    std::cout << "query " << i << ": " << (ok ? "CERTIFIED" : "REJECTED") << '\n';
  }
  return 0;
}

int cmd_bench_curve(int n_vars, const std::vector<int>& ells, int sets, int queries,
                    std::uint64_t seed, const std::string& records_path) {
  const ciimp::CurveResult result =
      ciimp::run_decide_curve(n_vars, ells, sets, queries, seed);
  std::cout << "n_antecedents,falsified_frac,validated_frac,undecided_frac\n";
  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  for (const ciimp::CurveSummaryRow& row : result.summary)
    std::cout << row.n_antecedents << ',' << row.falsified_frac << ',' << row.validated_frac
              << ',' << row.undecided_frac << '\n';
  if (!records_path.empty()) {
    std::string csv = std::string(ciimp::kBenchCsvHeader) + "\n";
    for (const ciimp::BenchRecord& r : result.records) csv += ciimp::bench_csv_row(r) + "\n";
    write_file(records_path, csv);
  }
  return 0;
}

int cmd_bench_dims(const std::vector<int>& n_values, int ell, int trials, std::uint64_t seed) {
  const std::vector<ciimp::DimsRow> rows =
      ciimp::run_dimension_timing(n_values, ell, trials, seed);
  std::cout << "n_vars,mean_rows,mean_cols,max_rows,max_cols,mean_lp_ms,lp_reached\n";
  std::cout.setf(std::ios::fixed);
  std::cout.precision(3);
  for (const ciimp::DimsRow& row : rows)
    std::cout << row.n_vars << ',' << row.mean_rows << ',' << row.mean_cols << ','
              << row.max_rows << ',' << row.max_cols << ',' << row.mean_lp_ms << ','
              << row.lp_reached << '\n';
  return 0;
}

int cmd_bench_minvfull(int n_vars, const std::vector<int>& ells, int trials, std::uint64_t seed,
                       int repeats) {
  const std::vector<ciimp::MinVsFullRow> rows =
      ciimp::run_minimal_vs_full(n_vars, ells, trials, seed, repeats);
  std::cout << "n_antecedents,lp_reached,pruned_rows_mean,pruned_cols_mean,full_rows,full_cols,"
               "pruned_ms_mean,full_ms_mean,outcome_mismatches\n";
  std::cout.setf(std::ios::fixed);
  std::cout.precision(3);
  for (const ciimp::MinVsFullRow& row : rows)
    std::cout << row.n_antecedents << ',' << row.lp_reached << ',' << row.pruned_rows_mean << ','
              << row.pruned_cols_mean << ',' << row.full_rows << ',' << row.full_cols << ','
              << row.pruned_ms_mean << ',' << row.full_ms_mean << ',' << row.outcome_mismatches
              << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate decision procedure for conditional-independence implication"};
  app.require_subcommand(1);

  std::string decide_file, cert_out;
  bool use_ip = false, use_closure = false;
  CLI::App* decide = app.add_subcommand("decide", "decide an instance file");
  decide->add_option("file", decide_file, "instance file")->required();
  decide->add_flag("--ip", use_ip, "also run the integer-program variant");
  decide->add_flag("--closure", use_closure, "also run the semigraphoid-closure baseline");
  decide->add_option("--cert-out", cert_out, "write the first validated query's certificate here");

  int gen_vars = 0, gen_ell = 0, gen_queries = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a random elementary instance");
  gen->add_option("--vars", gen_vars, "variable count")->required();
  gen->add_option("--antecedents", gen_ell, "antecedent count")->required();
  gen->add_option("--queries", gen_queries, "query count")->capture_default_str();
  gen->add_option("--seed", gen_seed, "rng seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  std::string verify_instance, verify_cert;
  CLI::App* verify = app.add_subcommand("verify", "re-check a certificate against an instance");
  verify->add_option("file", verify_instance, "instance file")->required();
  verify->add_option("certfile", verify_cert, "certificate file")->required();

  int curve_vars = 5, curve_sets = 200, curve_queries = 5;
  std::vector<int> curve_ells = {2, 10, 20, 30, 40, 50};
  std::uint64_t curve_seed = 1;
  std::string curve_records;
  CLI::App* curve = app.add_subcommand("bench-curve", "outcome fractions vs antecedent count");
  curve->add_option("--vars", curve_vars, "variable count")->capture_default_str();
  curve->add_option("--ells", curve_ells, "antecedent counts")->capture_default_str()->delimiter(',');
  curve->add_option("--sets", curve_sets, "instances per antecedent count")->capture_default_str();
  curve->add_option("--queries", curve_queries, "queries per instance")->capture_default_str();
  curve->add_option("--seed", curve_seed, "rng seed")->capture_default_str();
  curve->add_option("--records", curve_records, "write per-decision records CSV here");

  std::vector<int> dims_vars = {4, 5, 6, 7};
  int dims_ell = 50, dims_trials = 20;
  std::uint64_t dims_seed = 1;
  CLI::App* dims = app.add_subcommand("bench-dims", "system dimensions vs variable count");
  dims->add_option("--vars", dims_vars, "variable counts")->capture_default_str()->delimiter(',');
  dims->add_option("--antecedents", dims_ell, "antecedent count")->capture_default_str();
  dims->add_option("--trials", dims_trials, "instances per variable count")->capture_default_str();
  dims->add_option("--seed", dims_seed, "rng seed")->capture_default_str();

  int mvf_vars = 6, mvf_trials = 100, mvf_repeats = 5;
  std::vector<int> mvf_ells = {50};
  std::uint64_t mvf_seed = 1;
  CLI::App* mvf = app.add_subcommand("bench-minvfull", "pruned vs full constraint matrix timing");
  mvf->add_option("--vars", mvf_vars, "variable count")->capture_default_str();
  mvf->add_option("--ells", mvf_ells, "antecedent counts")->capture_default_str()->delimiter(',');
  mvf->add_option("--trials", mvf_trials, "instances per antecedent count")->capture_default_str();
  mvf->add_option("--seed", mvf_seed, "rng seed")->capture_default_str();
  mvf->add_option("--repeats", mvf_repeats, "timing repetitions per trial")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is an input error
  }

  try {
    if (decide->parsed()) return cmd_decide(decide_file, use_ip, use_closure, cert_out);
    if (gen->parsed()) return cmd_gen(gen_vars, gen_ell, gen_queries, gen_seed, gen_out);
    if (verify->parsed()) return cmd_verify(verify_instance, verify_cert);
    if (curve->parsed())
      return cmd_bench_curve(curve_vars, curve_ells, curve_sets, curve_queries, curve_seed,
                             curve_records);
    if (dims->parsed()) return cmd_bench_dims(dims_vars, dims_ell, dims_trials, dims_seed);
    if (mvf->parsed())
      return cmd_bench_minvfull(mvf_vars, mvf_ells, mvf_trials, mvf_seed, mvf_repeats);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ciimp::NodeBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ciimp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
