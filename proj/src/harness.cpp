#include "mlshade/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mlshade/errors.hpp"

namespace mlshade {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string sci2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", v);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);

  ExperimentConfig cfg;
  cfg.problems.clear();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "problem") {
        for (auto& p : split_csv_list(value)) cfg.problems.push_back(p);
      } else if (key == "dim") {
        cfg.dim = std::stoul(value);
      } else if (key == "runs") {
        cfg.n_runs = std::stoul(value);
      } else if (key == "seed") {
        cfg.base_seed = std::stoull(value);
      } else if (key == "budget") {
        cfg.budget = std::stoull(value);
      } else if (key == "variant") {
        cfg.variant = value;
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "data_dir") {
        cfg.data_dir = value;
      } else if (key == "jobs") {
        cfg.jobs = std::stoi(value);
      } else if (key == "trace") {
        cfg.record_trace = value == "true" || value == "1";
      } else if (key == "alpha") {
        cfg.alpha = std::stod(value);
      } else {
        throw ConfigError("config: unknown key '" + key + "' at line " +
                          std::to_string(line_no));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config: bad value for '" + key + "' at line " +
                        std::to_string(line_no));
    }
  }
  return cfg;
}

std::shared_ptr<Problem> resolve_problem(const std::string& name, std::size_t dim,
                                         const std::string& data_dir) {
  auto at = name.find('@');
  if (at == std::string::npos) {
    auto p = make_builtin(name, dim);
    if (!p) throw ConfigError("unknown problem '" + name + "'");
    return p;
  }
  std::string base_name = name.substr(0, at);
  std::string file = name.substr(at + 1);
  auto base = make_builtin(base_name, dim);
  if (!base) throw ConfigError("unknown base problem '" + base_name + "'");
  std::filesystem::path path = file;
  if (!data_dir.empty() && path.is_relative()) path = std::filesystem::path(data_dir) / path;
  auto [shift, rotation] = load_shift_rotate(path.string(), dim);
  return std::make_shared<ShiftRotateProblem>(base, std::move(shift), std::move(rotation), 0.0);
}

RunConfig variant_run_config(const ExperimentConfig& cfg) {
  RunConfig rc = RunConfig::for_dim(cfg.dim);
  if (cfg.budget > 0) rc.nfes_max = cfg.budget;
  rc.record_trace = cfg.record_trace;
  const std::string& v = cfg.variant;
  if (v == "full") {
  } else if (v == "no-restart") {
    rc.restart_enabled = false;
  } else if (v == "no-local-search") {
    rc.local_search_enabled = false;
  } else if (v == "single-strategy-MS1") {
    rc.forced_strategy = StrategyKind::current_to_pbest_weight_archive;
  } else if (v == "single-strategy-MS2") {
    rc.forced_strategy = StrategyKind::current_to_pbest;
  } else if (v == "single-strategy-MS3") {
    rc.forced_strategy = StrategyKind::current_to_ordpbest_weight;
  } else if (v == "binomial-only") {
    rc.p_c = 0.0;
  } else {
    throw ConfigError("unknown variant '" + v + "'");
  }
  return rc;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.problems.empty()) throw ConfigError("experiment: no problems configured");
  if (cfg.n_runs == 0) throw ConfigError("experiment: runs must be positive");

  // Resolve everything up front so a bad name fails before any run starts.
  std::vector<std::shared_ptr<Problem>> problems;
  for (const auto& name : cfg.problems)
    problems.push_back(resolve_problem(name, cfg.dim, cfg.data_dir));
  RunConfig rc = variant_run_config(cfg);

  ExperimentResult result;
  result.problems = cfg.problems;
  result.records.resize(problems.size());

  // Flatten the (problem, run) matrix into independently dispatchable cells.
  struct Cell {
    std::size_t problem;
    std::size_t run;
  };
  std::vector<Cell> cells;
  cells.reserve(problems.size() * cfg.n_runs);
  for (std::size_t p = 0; p < problems.size(); ++p) {
    result.records[p].resize(cfg.n_runs);
    for (std::size_t r = 0; r < cfg.n_runs; ++r) cells.push_back({p, r});
  }

  const auto n_cells = static_cast<std::int64_t>(cells.size());
#ifdef _OPENMP
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, cfg.jobs)) if (cfg.jobs > 1)
  for (std::int64_t c = 0; c < n_cells; ++c) {
    try {
      const Cell cell = cells[static_cast<std::size_t>(c)];
      RunConfig local = rc;
      local.seed = cfg.base_seed + static_cast<std::uint64_t>(cell.run);
      result.records[cell.problem][cell.run] = run(*problems[cell.problem], local);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
#else
  for (std::int64_t c = 0; c < n_cells; ++c) {
    const Cell cell = cells[static_cast<std::size_t>(c)];
    RunConfig local = rc;
    local.seed = cfg.base_seed + static_cast<std::uint64_t>(cell.run);
    result.records[cell.problem][cell.run] = run(*problems[cell.problem], local);
  }
#endif

  for (std::size_t p = 0; p < problems.size(); ++p) {
    std::vector<double> errors;
    errors.reserve(cfg.n_runs);
    for (const RunRecord& rec : result.records[p]) errors.push_back(rec.error);
    result.table.push_back(summarize(errors));
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    auto dir = std::filesystem::path(cfg.out_dir);
    write_results_csv(result, (dir / "results.csv").string());
    write_records_jsonl(result, (dir / "records.jsonl").string());
    if (cfg.record_trace) export_trace(result, (dir / "trace.csv").string());
  }
  return result;
}

Comparison compare_variants(const ExperimentConfig& a, const ExperimentConfig& b, double alpha) {
  if (a.problems != b.problems || a.dim != b.dim || a.n_runs != b.n_runs ||
      a.base_seed != b.base_seed || a.budget != b.budget || a.data_dir != b.data_dir)
    throw ConfigError("compare: the two configs must share problems, dim, runs, seeds, budget");

  ExperimentResult ra = run_experiment(a);
  ExperimentResult rb = run_experiment(b);

  Comparison cmp;
  for (std::size_t p = 0; p < ra.problems.size(); ++p) {
    std::vector<double> ea, eb;
    for (const RunRecord& rec : ra.records[p]) ea.push_back(rec.error);
    for (const RunRecord& rec : rb.records[p]) eb.push_back(rec.error);
    WilcoxonResult w = wilcoxon_signed_rank(ea, eb, alpha);
    cmp.rows.push_back({ra.problems[p], w.verdict, w.statistic, w.p_value, w.sufficient});
    switch (w.verdict) {
      case Verdict::better: ++cmp.better; break;
      case Verdict::similar: ++cmp.similar; break;
      case Verdict::worse: ++cmp.worse; break;
    }
  }
  return cmp;
}

void write_results_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "problem,best,worst,median,mean,std,"
         "best_exact,worst_exact,median_exact,mean_exact,std_exact\n";
  for (std::size_t p = 0; p < result.problems.size(); ++p) {
    const Summary& s = result.table[p];
    out << result.problems[p] << ',' << sci2(s.best) << ',' << sci2(s.worst) << ','
        << sci2(s.median) << ',' << sci2(s.mean) << ',' << sci2(s.stddev) << ','
        << full(s.best) << ',' << full(s.worst) << ',' << full(s.median) << ','
        << full(s.mean) << ',' << full(s.stddev) << '\n';
  }
}

void write_records_jsonl(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t p = 0; p < result.problems.size(); ++p) {
    for (std::size_t r = 0; r < result.records[p].size(); ++r) {
      const RunRecord& rec = result.records[p][r];
      nlohmann::json j{
          {"problem", result.problems[p]},
          {"run", r},
          {"seed", rec.seed},
          {"error", rec.error},
          {"best_f", rec.best_f},
          {"best_x", rec.best_x},
          {"evaluations", rec.evaluations_used},
          {"restarts", rec.counters.restarts},
          {"local_searches", rec.counters.local_searches},
          {"cml_uses", rec.counters.cml_uses},
          {"cml_fallbacks", rec.counters.cml_fallbacks},
      };
      if (!rec.trace.empty()) {
        nlohmann::json trace = nlohmann::json::array();
        for (const TracePoint& t : rec.trace) trace.push_back({t.nfes, t.best_f});
        j["trace"] = std::move(trace);
      }
      out << j.dump() << '\n';
    }
  }
}

void write_comparison_csv(const Comparison& comparison, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "problem,verdict,statistic,p_value\n";
  for (const ComparisonRow& row : comparison.rows) {
    out << row.problem << ',' << to_string(row.verdict)
        << (row.sufficient ? "" : " (insufficient data)") << ',' << full(row.statistic) << ','
        << full(row.p_value) << '\n';
  }
  out << "tally,better=" << comparison.better << ";similar=" << comparison.similar
      << ";worse=" << comparison.worse << ",,\n";
}

void export_trace(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "problem,run,nfes,best_f\n";
  for (std::size_t p = 0; p < result.problems.size(); ++p) {
    for (std::size_t r = 0; r < result.records[p].size(); ++r) {
      const RunRecord& rec = result.records[p][r];
      if (rec.trace.empty()) {
        std::cerr << "export_trace: no trace for " << result.problems[p] << " run " << r
                  << ", skipping\n";
        continue;
      }
      for (const TracePoint& t : rec.trace)
        out << result.problems[p] << ',' << r << ',' << t.nfes << ',' << full(t.best_f) << '\n';
    }
  }
}

std::string format_table(const ExperimentResult& result) {
  std::ostringstream out;
  out << "Problem          Best      Worst     Median    Mean      Std\n";
  for (std::size_t p = 0; p < result.problems.size(); ++p) {
    const Summary& s = result.table[p];
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-16s %-9s %-9s %-9s %-9s %s\n",
                  result.problems[p].c_str(), sci2(s.best).c_str(), sci2(s.worst).c_str(),
                  sci2(s.median).c_str(), sci2(s.mean).c_str(), sci2(s.stddev).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace mlshade
