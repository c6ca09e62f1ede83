#ifndef MLSHADE_HARNESS_HPP
#define MLSHADE_HARNESS_HPP

#include <memory>
#include <string>
#include <vector>

#include "mlshade/optimizer.hpp"
#include "mlshade/problem.hpp"
#include "mlshade/stats.hpp"

namespace mlshade {

/// One experiment: a problem list run n_runs times each under one algorithm
/// variant. Variants: full | no-restart | no-local-search |
/// single-strategy-MS1|2|3 | binomial-only.
struct ExperimentConfig {
  std::vector<std::string> problems;
  std::size_t dim = 30;
  std::size_t n_runs = 25;
  std::uint64_t base_seed = 1;
  std::uint64_t budget = 0;  // 0 -> 10000 * dim
  std::string variant = "full";
  std::string out_dir;       // empty -> nothing persisted
  std::string data_dir;      // root for shift/rotate data files
  int jobs = 1;
  bool record_trace = false;
  double alpha = 0.05;
};

/// Key = value text file, one key per line, '#' comments. Repeated `problem`
/// keys (or comma lists) accumulate. Unknown keys are a ConfigError.
ExperimentConfig load_config_file(const std::string& path);

/// Builtin name, or `<builtin>@<file>` for a shift-rotate wrapper whose data
/// file is resolved against data_dir. ConfigError when unresolvable.
std::shared_ptr<Problem> resolve_problem(const std::string& name, std::size_t dim,
                                         const std::string& data_dir);

/// RunConfig realizing cfg's variant; ConfigError for an unknown variant id.
RunConfig variant_run_config(const ExperimentConfig& cfg);

struct ExperimentResult {
  std::vector<std::string> problems;
  std::vector<Summary> table;                    // one row per problem
  std::vector<std::vector<RunRecord>> records;   // [problem][run]
};

/// Run the full matrix. When out_dir is set, writes results.csv (display +
/// full-precision statistics) and records.jsonl (one JSON object per run).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct ComparisonRow {
  std::string problem;
  Verdict verdict;
  double statistic;
  double p_value;
  bool sufficient;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  int better = 0;
  int similar = 0;
  int worse = 0;
};

/// Per-problem Wilcoxon of variant a against variant b on paired per-run
/// errors, plus the better/similar/worse tally. The two configs must agree on
/// problems, dimension, runs, seeds and budget.
Comparison compare_variants(const ExperimentConfig& a, const ExperimentConfig& b, double alpha);

void write_results_csv(const ExperimentResult& result, const std::string& path);
void write_records_jsonl(const ExperimentResult& result, const std::string& path);
void write_comparison_csv(const Comparison& comparison, const std::string& path);

/// Long-format convergence export: problem,run,nfes,best_f. Records without a
/// trace are skipped with a warning on stderr.
void export_trace(const ExperimentResult& result, const std::string& path);

/// Rendered Table-I-style text (two-decimal scientific notation).
std::string format_table(const ExperimentResult& result);

}  // namespace mlshade

#endif
