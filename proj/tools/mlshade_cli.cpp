#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mlshade/errors.hpp"
#include "mlshade/harness.hpp"

namespace {

// Flags override config-file values; only flags the user actually passed win.
void add_matrix_options(CLI::App* cmd, mlshade::ExperimentConfig& cfg,
                        std::vector<std::string>& problems, std::string& config_path) {
  cmd->add_option("--config", config_path, "key = value config file");
  cmd->add_option("--problem", problems,
                  "problem name (repeatable; builtin or <builtin>@<datafile>)");
  cmd->add_option("--dim", cfg.dim, "problem dimension");
  cmd->add_option("--runs", cfg.n_runs, "independent runs per problem");
  cmd->add_option("--seed", cfg.base_seed, "base seed; run k uses seed+k");
  cmd->add_option("--budget", cfg.budget, "evaluation budget (default 10000*dim)");
  cmd->add_option("--jobs", cfg.jobs, "max concurrent (problem, run) cells");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--data-dir", cfg.data_dir, "directory holding shift/rotate data files");
}

void merge(mlshade::ExperimentConfig& cfg, const CLI::App* cmd, const std::string& config_path,
           const std::vector<std::string>& problems) {
  if (!config_path.empty()) {
    mlshade::ExperimentConfig file_cfg = mlshade::load_config_file(config_path);
    mlshade::ExperimentConfig flags = cfg;
    cfg = file_cfg;
    if (!problems.empty()) cfg.problems = problems;
    if (cmd->count("--dim")) cfg.dim = flags.dim;
    if (cmd->count("--runs")) cfg.n_runs = flags.n_runs;
    if (cmd->count("--seed")) cfg.base_seed = flags.base_seed;
    if (cmd->count("--budget")) cfg.budget = flags.budget;
    if (cmd->count("--jobs")) cfg.jobs = flags.jobs;
    if (cmd->count("--out")) cfg.out_dir = flags.out_dir;
    if (cmd->count("--data-dir")) cfg.data_dir = flags.data_dir;
  } else if (!problems.empty()) {
    cfg.problems = problems;
  }
  if (cfg.problems.empty())
    throw mlshade::ConfigError("no problems given (use --problem or a config file)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mLSHADE-RL optimizer benchmark harness"};
  app.require_subcommand(1);

  mlshade::ExperimentConfig run_cfg, trace_cfg, cmp_cfg;
  std::vector<std::string> run_problems, trace_problems, cmp_problems;
  std::string run_config_path, trace_config_path, cmp_config_path;
  std::string run_variant;
  std::vector<std::string> cmp_variants;
  bool run_trace = false;
  double cmp_alpha = 0.05;

  CLI::App* cmd_run = app.add_subcommand("run", "run one experiment, write the result table");
  add_matrix_options(cmd_run, run_cfg, run_problems, run_config_path);
  cmd_run->add_option("--variant", run_variant,
                      "full | no-restart | no-local-search | single-strategy-MS1|2|3 | "
                      "binomial-only");
  cmd_run->add_flag("--trace", run_trace, "record and export convergence traces");

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "Wilcoxon comparison of two variants on one matrix");
  add_matrix_options(cmd_compare, cmp_cfg, cmp_problems, cmp_config_path);
  cmd_compare->add_option("--variant", cmp_variants, "two variant ids (flag given twice)")
      ->expected(0, 2);
  cmd_compare->add_option("--alpha", cmp_alpha, "significance level (default 0.05)");

  CLI::App* cmd_trace =
      app.add_subcommand("trace", "run with traces enabled, export convergence data");
  add_matrix_options(cmd_trace, trace_cfg, trace_problems, trace_config_path);
  cmd_trace->add_option("--variant", run_variant, "algorithm variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_run->parsed()) {
      merge(run_cfg, cmd_run, run_config_path, run_problems);
      if (cmd_run->count("--variant")) run_cfg.variant = run_variant;
      if (run_trace) run_cfg.record_trace = true;
      mlshade::ExperimentResult result = mlshade::run_experiment(run_cfg);
      std::cout << mlshade::format_table(result);
      if (!run_cfg.out_dir.empty())
        std::cout << "wrote " << run_cfg.out_dir << "/results.csv and records.jsonl\n";
    } else if (cmd_compare->parsed()) {
      merge(cmp_cfg, cmd_compare, cmp_config_path, cmp_problems);
      if (cmd_compare->count("--alpha")) cmp_cfg.alpha = cmp_alpha;
      if (cmp_variants.size() != 2)
        throw mlshade::ConfigError("compare needs --variant given exactly twice");
      mlshade::ExperimentConfig a = cmp_cfg, b = cmp_cfg;
      a.variant = cmp_variants[0];
      b.variant = cmp_variants[1];
      // each variant keeps its own record files
      if (!cmp_cfg.out_dir.empty()) {
        a.out_dir = (std::filesystem::path(cmp_cfg.out_dir) / a.variant).string();
        b.out_dir = (std::filesystem::path(cmp_cfg.out_dir) / b.variant).string();
      }
      mlshade::Comparison cmp = mlshade::compare_variants(a, b, cmp_cfg.alpha);
      for (const auto& row : cmp.rows)
        std::cout << row.problem << ": " << mlshade::to_string(row.verdict)
                  << " (W+=" << row.statistic << ", p=" << row.p_value << ")\n";
      std::cout << "tally: better=" << cmp.better << " similar=" << cmp.similar
                << " worse=" << cmp.worse << '\n';
      if (!cmp_cfg.out_dir.empty()) {
        std::filesystem::create_directories(cmp_cfg.out_dir);
        auto path = std::filesystem::path(cmp_cfg.out_dir) / "comparison.csv";
        mlshade::write_comparison_csv(cmp, path.string());
        std::cout << "wrote " << path.string() << '\n';
      }
    } else if (cmd_trace->parsed()) {
      merge(trace_cfg, cmd_trace, trace_config_path, trace_problems);
      if (cmd_trace->count("--variant")) trace_cfg.variant = run_variant;
      trace_cfg.record_trace = true;
      if (trace_cfg.out_dir.empty())
        throw mlshade::ConfigError("trace needs --out for the exported CSV");
      mlshade::ExperimentResult result = mlshade::run_experiment(trace_cfg);
      std::cout << mlshade::format_table(result);
      std::cout << "wrote " << trace_cfg.out_dir << "/trace.csv\n";
    }
  } catch (const mlshade::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
