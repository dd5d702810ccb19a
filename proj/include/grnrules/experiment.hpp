#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "grnrules/config.hpp"
#include "grnrules/serialize.hpp"
#include "grnrules/stats.hpp"

namespace grnrules {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SummaryRow {
  long generation = 0;
  double evaluations_mean = 0;
  double best_quality_mean = 0;
  int best_quality_min = 0;
  int best_quality_max = 0;
};

// Cross-run aggregates: a per-generation quality band plus final-state
// means.
struct SummaryTable {
  std::vector<SummaryRow> rows;
  double final_quality_mean = 0;
  double final_size_mean = 0;
  double final_cycles_mean = -1;  // T or psi; -1 when not applicable
  double final_rule_count_mean = 0;
  double final_train_accuracy_mean = -1;
  double final_test_accuracy_mean = -1;
  int runs = 0;
};

inline SummaryTable summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  const std::size_t n_rows = records[0].rows.size();
  for (const RunRecord& r : records) {
    if (r.rows.size() != n_rows)
      throw std::invalid_argument("summarize: misaligned generation grids");
    for (std::size_t i = 0; i < n_rows; ++i)
      if (r.rows[i].generation != records[0].rows[i].generation)
        throw std::invalid_argument("summarize: misaligned generation grids");
  }
  SummaryTable table;
  table.runs = static_cast<int>(records.size());
  table.rows.resize(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    SummaryRow& row = table.rows[i];
    row.generation = records[0].rows[i].generation;
    row.best_quality_min = records[0].rows[i].best_quality;
    row.best_quality_max = records[0].rows[i].best_quality;
    for (const RunRecord& r : records) {
      const GenerationRow& g = r.rows[i];
      row.evaluations_mean += g.evaluations;
      row.best_quality_mean += g.best_quality;
      row.best_quality_min = std::min(row.best_quality_min, g.best_quality);
      row.best_quality_max = std::max(row.best_quality_max, g.best_quality);
    }
    row.evaluations_mean /= table.runs;
    row.best_quality_mean /= table.runs;
  }
  double cycles_sum = 0;
  int cycles_n = 0;
  table.final_train_accuracy_mean = 0;
  table.final_test_accuracy_mean = 0;
  for (const RunRecord& r : records) {
    table.final_quality_mean += r.final_quality;
    table.final_size_mean += genome_size(r.best_genome);
    if (auto c = genome_cycles(r.best_genome)) {
      cycles_sum += *c;
      ++cycles_n;
    }
    table.final_rule_count_mean += r.rows.back().best_rule_count;
    if (r.final_train_accuracy >= 0)
      table.final_train_accuracy_mean += r.final_train_accuracy;
    if (r.final_test_accuracy >= 0)
      table.final_test_accuracy_mean += r.final_test_accuracy;
  }
  table.final_quality_mean /= table.runs;
  table.final_size_mean /= table.runs;
  table.final_rule_count_mean /= table.runs;
  table.final_cycles_mean = cycles_n > 0 ? cycles_sum / cycles_n : -1;
  if (records[0].final_train_accuracy >= 0)
    table.final_train_accuracy_mean /= table.runs;
  else
    table.final_train_accuracy_mean = -1;
  if (records[0].final_test_accuracy >= 0)
    table.final_test_accuracy_mean /= table.runs;
  else
    table.final_test_accuracy_mean = -1;
  return table;
}

namespace detail {

inline std::string csv_real(double v) {
  return v < 0 ? std::string() : format_real(v);
}

}  // namespace detail

inline constexpr const char* kRunCsvHeader =
    "generation,evaluations,best_quality,mean_quality,best_size,best_cycles,"
    "best_rule_count,train_accuracy,test_accuracy";

inline std::string run_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << kRunCsvHeader << "\n";
  for (const GenerationRow& r : rec.rows) {
    out << r.generation << "," << r.evaluations << "," << r.best_quality << ","
        << format_real(r.mean_quality) << "," << r.best_size << ","
        << (r.best_cycles >= 0 ? std::to_string(r.best_cycles) : std::string())
        << "," << r.best_rule_count << ","
        << detail::csv_real(r.train_accuracy) << ","
        << detail::csv_real(r.test_accuracy) << "\n";
  }
  return out.str();
}

// One row per run with the final-state metrics compare() consumes.
inline constexpr const char* kRunsCsvHeader =
    "run,seed,mu,final_quality,evals_to_optimum,total_evaluations,final_size,"
    "final_cycles,final_rule_count,final_train_accuracy,final_test_accuracy";

inline std::string runs_csv(const std::vector<RunRecord>& records, int mu) {
  std::ostringstream out;
  out << kRunsCsvHeader << "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    const auto cycles = genome_cycles(r.best_genome);
    out << i << "," << r.seed << "," << mu << "," << r.final_quality << ","
        << r.evals_to_optimum << "," << r.total_evaluations << ","
        << genome_size(r.best_genome) << ","
        << (cycles ? std::to_string(*cycles) : std::string()) << ","
        << r.rows.back().best_rule_count << ","
        << detail::csv_real(r.final_train_accuracy) << ","
        << detail::csv_real(r.final_test_accuracy) << "\n";
  }
  return out.str();
}

inline std::string summary_csv(const SummaryTable& table) {
  std::ostringstream out;
  out << "generation,evaluations_mean,best_quality_mean,best_quality_min,"
         "best_quality_max\n";
  for (const SummaryRow& r : table.rows) {
    out << r.generation << "," << format_real(r.evaluations_mean) << ","
        << format_real(r.best_quality_mean) << "," << r.best_quality_min << ","
        << r.best_quality_max << "\n";
  }
  return out.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Executes `runs` seeded searches (seed_i = base seed + i) and writes the
// per-run telemetry CSVs, the cross-run summary, the per-run final-metrics
// table, and each run's best genome.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg,
                                             bool verbose = false) {
  validate_config(cfg);
  const std::filesystem::path out_dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");

  Dataset data;
  const Dataset* data_ptr = nullptr;
  if (cfg.task.domain == TaskDomain::real) {
    data = generate_dataset(cfg.task, cfg.n_train, cfg.n_test,
                            cfg.effective_dataset_seed());
    data_ptr = &data;
  }

  std::vector<RunRecord> records;
  records.reserve(cfg.runs);
  for (int i = 0; i < cfg.runs; ++i) {
    SearchConfig sc = cfg.search_config(cfg.seed + i);
    RunRecord rec = run_search(sc, cfg.task, data_ptr);
    write_file(out_dir / ("run_" + std::to_string(i) + ".csv"), run_csv(rec));
    write_file(out_dir / ("best_genome_" + std::to_string(i) + ".txt"),
               format_any_genome(rec.best_genome));
    if (verbose) {
      std::cerr << "run " << i << ": quality " << rec.final_quality
                << ", evals " << rec.total_evaluations;
      if (rec.evals_to_optimum >= 0)
        std::cerr << ", optimum at " << rec.evals_to_optimum;
      std::cerr << "\n";
    }
    records.push_back(std::move(rec));
  }
  write_file(out_dir / "runs.csv", runs_csv(records, cfg.mu));
  write_file(out_dir / "summary.csv", summary_csv(summarize(records)));
  return records;
}

// ---- compare ----

enum class CompareMetric {
  generations_to_optimum,
  final_quality,
  final_test_accuracy,
};

inline CompareMetric parse_metric(const std::string& name) {
  if (name == "generations-to-optimum")
    return CompareMetric::generations_to_optimum;
  if (name == "final-quality") return CompareMetric::final_quality;
  if (name == "final-test-accuracy")
    return CompareMetric::final_test_accuracy;
  throw ConfigError("unknown metric '" + name + "'");
}

struct RunMetrics {
  std::uint64_t seed = 0;
  int mu = 50;
  int final_quality = 0;
  long evals_to_optimum = -1;
  long total_evaluations = 0;
  double final_test_accuracy = -1;
};

inline std::vector<RunMetrics> load_runs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRunsCsvHeader)
    throw IoError("'" + path + "': unexpected header");
  std::vector<RunMetrics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    fields.resize(11);
    RunMetrics m;
    m.seed = std::stoull(fields[1]);
    m.mu = std::stoi(fields[2]);
    m.final_quality = std::stoi(fields[3]);
    m.evals_to_optimum = std::stol(fields[4]);
    m.total_evaluations = std::stol(fields[5]);
    m.final_test_accuracy =
        fields[10].empty() ? -1.0 : std::stod(fields[10]);
    out.push_back(m);
  }
  return out;
}

struct CompareReport {
  TestResult test;
  bool significant = false;
  double mean_a = 0;
  double mean_b = 0;
  int used_a = 0;
  int used_b = 0;
  int excluded_a = 0;  // runs lacking the metric (never reached optimum)
  int excluded_b = 0;
};

inline std::vector<double> metric_sample(const std::vector<RunMetrics>& runs,
                                         CompareMetric metric, int& excluded) {
  std::vector<double> out;
  excluded = 0;
  for (const RunMetrics& m : runs) {
    switch (metric) {
      case CompareMetric::generations_to_optimum:
        if (m.evals_to_optimum < 0) {
          ++excluded;
        } else {
          out.push_back(static_cast<double>(m.evals_to_optimum) / m.mu);
        }
        break;
      case CompareMetric::final_quality:
        out.push_back(m.final_quality);
        break;
      case CompareMetric::final_test_accuracy:
        if (m.final_test_accuracy < 0)
          throw ConfigError("result set lacks test accuracy");
        out.push_back(m.final_test_accuracy);
        break;
    }
  }
  return out;
}

inline CompareReport compare(const std::vector<RunMetrics>& a,
                             const std::vector<RunMetrics>& b,
                             CompareMetric metric) {
  CompareReport rep;
  auto sa = metric_sample(a, metric, rep.excluded_a);
  auto sb = metric_sample(b, metric, rep.excluded_b);
  if (sa.size() < 2 || sb.size() < 2)
    throw ConfigError("compare: metric sample smaller than 2 in one set");
  rep.used_a = static_cast<int>(sa.size());
  rep.used_b = static_cast<int>(sb.size());
  rep.mean_a = sample_mean(sa);
  rep.mean_b = sample_mean(sb);
  rep.test = welch_t(sa, sb);
  rep.significant = rep.test.p <= 0.05;
  return rep;
}

}  // namespace grnrules
