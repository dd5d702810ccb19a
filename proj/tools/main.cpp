// Command-line front end: run experiments, emit dynamics statistics,
// compare result sets, and inspect genome files.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "grnrules/experiment.hpp"

using namespace grnrules;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& overrides, bool quiet) {
  ExperimentConfig cfg = load_config_file(config_path);
  for (const std::string& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + kv + "' is not key=value");
    apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate_config(cfg);
  auto records = run_experiment(cfg, !quiet);
  SummaryTable table = summarize(records);
  std::cout << "runs=" << table.runs
            << " final_quality_mean=" << table.final_quality_mean
            << " final_size_mean=" << table.final_size_mean;
  if (table.final_cycles_mean >= 0)
    std::cout << " final_cycles_mean=" << table.final_cycles_mean;
  std::cout << " final_rule_count_mean=" << table.final_rule_count_mean;
  if (table.final_train_accuracy_mean >= 0)
    std::cout << " train_accuracy_mean=" << table.final_train_accuracy_mean
              << " test_accuracy_mean=" << table.final_test_accuracy_mean;
  std::cout << "\n";
  return kExitOk;
}

int cmd_dynamics(int r, int b, int cycles, int samples, std::uint64_t seed,
                 const std::string& out_path) {
  Rng rng(seed);
  auto stats = dynamics_stats(r, b, cycles, samples, rng);
  std::ostringstream csv;
  csv << "cycle,fraction_changed_mean,fraction_changed_min,"
         "fraction_changed_max\n";
  for (std::size_t t = 0; t < stats.size(); ++t) {
    csv << (t + 1) << "," << format_real(stats[t].mean) << ","
        << format_real(stats[t].min) << "," << format_real(stats[t].max)
        << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out_path, csv.str());
  }
  return kExitOk;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& metric_name) {
  const CompareMetric metric = parse_metric(metric_name);
  auto a = load_runs_csv(
      (std::filesystem::path(dir_a) / "runs.csv").string());
  auto b = load_runs_csv(
      (std::filesystem::path(dir_b) / "runs.csv").string());
  CompareReport rep = compare(a, b, metric);
  std::cout << "metric=" << metric_name << "\n";
  std::cout << "mean_a=" << rep.mean_a << " (n=" << rep.used_a
            << ", excluded=" << rep.excluded_a << ")\n";
  std::cout << "mean_b=" << rep.mean_b << " (n=" << rep.used_b
            << ", excluded=" << rep.excluded_b << ")\n";
  std::cout << "t=" << rep.test.t << " dof=" << rep.test.dof
            << " p=" << rep.test.p << "\n";
  std::cout << "verdict: "
            << (rep.significant ? "significant" : "not significant")
            << " at alpha = 0.05\n";
  return kExitOk;
}

int cmd_eval(const std::string& genome_path, const std::string& task_name,
             const std::string& domain_name, int x, double theta,
             const std::string& mode, bool clock, std::uint64_t dataset_seed,
             int n_train, int n_test) {
  TaskSpec task;
  if (task_name == "mux") task.kind = TaskKind::mux;
  else if (task_name == "demux") task.kind = TaskKind::demux;
  else throw ConfigError("unknown task '" + task_name + "'");
  if (domain_name == "boolean") task.domain = TaskDomain::boolean;
  else if (domain_name == "real") task.domain = TaskDomain::real;
  else throw ConfigError("unknown domain '" + domain_name + "'");
  task.x = x;
  task.theta = theta;

  Genome genome = parse_any_genome(read_file(genome_path));

  if (task.domain == TaskDomain::boolean) {
    Evaluation ev;
    if (const auto* net = std::get_if<NetworkGenome>(&genome)) {
      if (mode == "standard") {
        if (net->size() < task.inputs() + task.outputs())
          throw ConfigError("genome too small for standard mode");
        ev = evaluate_standard_rbn(*net, task);
      } else {
        if (net->size() < task.rule_width())
          throw ConfigError("genome too small for protein mode");
        auto traj = run_trajectory(*net, task.rule_width(), clock);
        ev = evaluate_boolean(
            build_ternary_rule_list(traj, task.inputs(), task.outputs()), task);
      }
    } else if (const auto* rs = std::get_if<TernaryRuleSetGenome>(&genome)) {
      if (rs->inputs != task.inputs() || rs->outputs != task.outputs())
        throw ConfigError("ruleset shape does not match the task");
      ev = evaluate_boolean(to_rule_list(*rs), task);
    } else {
      throw ConfigError("interval rulesets need domain=real");
    }
    std::cout << "quality=" << ev.quality << " cases=" << ev.cases
              << " accuracy=" << ev.accuracy() << "\n";
    return kExitOk;
  }

  Dataset data = generate_dataset(task, n_train, n_test, dataset_seed);
  IntervalRuleList list;
  if (const auto* net = std::get_if<NetworkGenome>(&genome)) {
    if (net->logic != Logic::fuzzy)
      throw ConfigError("real tasks need a fuzzy network genome");
    if (net->size() < task.rule_width())
      throw ConfigError("genome too small for protein mode");
    auto traj = run_trajectory(*net, task.rule_width(), clock);
    list = build_interval_rule_list(traj, task.inputs(), task.outputs());
  } else if (const auto* rs = std::get_if<IntervalRuleSetGenome>(&genome)) {
    if (rs->inputs != task.inputs() || rs->outputs != task.outputs())
      throw ConfigError("ruleset shape does not match the task");
    list = to_rule_list(*rs);
  } else {
    throw ConfigError("ternary rulesets need domain=boolean");
  }
  Evaluation train = evaluate_real(list, task, data.train);
  Evaluation test = evaluate_real(list, task, data.test);
  std::cout << "train_quality=" << train.quality
            << " train_accuracy=" << train.accuracy()
            << " test_accuracy=" << test.accuracy() << "\n";
  return kExitOk;
}

int cmd_genome(const std::string& path) {
  Genome g = parse_any_genome(read_file(path));
  std::cout << format_any_genome(g);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GRN-derived production rule workbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir, metric = "final-quality";
  std::vector<std::string> overrides;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--set", overrides,
                  "override any config key, e.g. --set seed=7");
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--seed", "base seed (override)")
      ->each([&](const std::string& v) { overrides.push_back("seed=" + v); });
  run->add_option("--runs", "run count (override)")
      ->each([&](const std::string& v) { overrides.push_back("runs=" + v); });
  run->add_flag("--quiet", quiet, "suppress per-run progress");

  int r = 100, b = 2, cycles = 100, samples = 100;
  std::uint64_t seed = 1;
  std::string dyn_out;
  auto* dyn = app.add_subcommand("dynamics",
                                 "fraction-of-nodes-changed statistics for "
                                 "random lookup-table networks");
  dyn->add_option("--r", r, "nodes per network");
  dyn->add_option("--b", b, "connections per node");
  dyn->add_option("--cycles", cycles, "update cycles");
  dyn->add_option("--samples", samples, "sampled networks");
  dyn->add_option("--seed", seed, "rng seed");
  dyn->add_option("--out", dyn_out, "output CSV (default stdout)");

  std::string dir_a, dir_b;
  auto* cmp = app.add_subcommand("compare",
                                 "Welch t-test between two experiment "
                                 "output directories");
  cmp->add_option("--a", dir_a, "first experiment directory")->required();
  cmp->add_option("--b", dir_b, "second experiment directory")->required();
  cmp->add_option("--metric", metric,
                  "generations-to-optimum | final-quality | "
                  "final-test-accuracy");

  std::string genome_path, task_name = "mux", domain_name = "boolean",
              mode = "protein";
  int x = 2, n_train = 1000, n_test = 1000;
  double theta = 0.5;
  bool clock = true;
  std::uint64_t dataset_seed = 1000004;
  auto* ev = app.add_subcommand("eval", "score a saved genome on a task");
  ev->add_option("--genome", genome_path, "genome file")->required();
  ev->add_option("--task", task_name, "mux | demux");
  ev->add_option("--domain", domain_name, "boolean | real");
  ev->add_option("--x", x, "address width");
  ev->add_option("--theta", theta, "real threshold");
  ev->add_option("--mode", mode, "protein | standard (network genomes)");
  ev->add_flag("--clock,!--no-clock", clock, "clock input (protein mode)");
  ev->add_option("--dataset-seed", dataset_seed, "real dataset seed");
  ev->add_option("--train", n_train, "train vectors (real tasks)");
  ev->add_option("--test", n_test, "test vectors (real tasks)");

  std::string check_path;
  auto* gen = app.add_subcommand("genome",
                                 "validate a genome file and print its "
                                 "canonical form");
  gen->add_option("file", check_path, "genome file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!out_dir.empty()) overrides.push_back("out=" + out_dir);
      return cmd_run(config_path, overrides, quiet);
    }
    if (dyn->parsed()) return cmd_dynamics(r, b, cycles, samples, seed, dyn_out);
    if (cmp->parsed()) return cmd_compare(dir_a, dir_b, metric);
    if (ev->parsed())
      return cmd_eval(genome_path, task_name, domain_name, x, theta, mode,
                      clock, dataset_seed, n_train, n_test);
    if (gen->parsed()) return cmd_genome(check_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const GenomeParseError& e) {
    std::cerr << "genome error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitOk;
}
