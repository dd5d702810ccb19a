#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "grnrules/search.hpp"

namespace grnrules {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full experiment definition: a task binding, a representation, IP
// parameters, and the multi-run protocol.
struct ExperimentConfig {
  TaskSpec task;
  int n_train = 1000;
  int n_test = 1000;
  Representation representation = Representation::protein_rbn;
  bool clock = true;
  int mu = 50;
  int b = 2;
  long generations = 1000;
  int runs = 20;
  std::uint64_t seed = 1;
  std::uint64_t dataset_seed = 0;  // 0 -> derived from seed
  int report_interval = 1;
  bool stop_at_optimum = true;
  std::string out_dir = "out";

  SearchConfig search_config(std::uint64_t run_seed) const {
    SearchConfig sc;
    sc.representation = representation;
    sc.clock = clock;
    sc.mu = mu;
    sc.b = b;
    sc.generations = generations;
    sc.seed = run_seed;
    sc.stop_at_optimum = stop_at_optimum;
    sc.report_interval = report_interval;
    return sc;
  }

  std::uint64_t effective_dataset_seed() const {
    return dataset_seed != 0 ? dataset_seed : seed + 1000003;
  }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v +
                    "'");
}

inline long parse_long(const std::string& v, const std::string& key) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
  return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': bad real '" + v + "'");
  return out;
}

}  // namespace detail

inline Representation parse_representation(const std::string& v) {
  if (v == "protein_rbn") return Representation::protein_rbn;
  if (v == "protein_fln") return Representation::protein_fln;
  if (v == "standard_rbn") return Representation::standard_rbn;
  if (v == "direct_ternary") return Representation::direct_ternary;
  if (v == "direct_interval") return Representation::direct_interval;
  throw ConfigError("unknown representation '" + v + "'");
}

inline const char* representation_name(Representation r) {
  switch (r) {
    case Representation::protein_rbn: return "protein_rbn";
    case Representation::protein_fln: return "protein_fln";
    case Representation::standard_rbn: return "standard_rbn";
    case Representation::direct_ternary: return "direct_ternary";
    case Representation::direct_interval: return "direct_interval";
  }
  return "?";
}

inline void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                             const std::string& value) {
  using namespace detail;
  if (key == "task") {
    if (value == "mux") cfg.task.kind = TaskKind::mux;
    else if (value == "demux") cfg.task.kind = TaskKind::demux;
    else throw ConfigError("config key 'task': expected mux|demux");
  } else if (key == "domain") {
    if (value == "boolean") cfg.task.domain = TaskDomain::boolean;
    else if (value == "real") cfg.task.domain = TaskDomain::real;
    else throw ConfigError("config key 'domain': expected boolean|real");
  } else if (key == "x") {
    cfg.task.x = static_cast<int>(parse_long(value, key));
  } else if (key == "theta") {
    cfg.task.theta = parse_double(value, key);
  } else if (key == "train") {
    cfg.n_train = static_cast<int>(parse_long(value, key));
  } else if (key == "test") {
    cfg.n_test = static_cast<int>(parse_long(value, key));
  } else if (key == "representation") {
    cfg.representation = parse_representation(value);
  } else if (key == "clock") {
    cfg.clock = parse_bool(value, key);
  } else if (key == "mu") {
    cfg.mu = static_cast<int>(parse_long(value, key));
  } else if (key == "b") {
    cfg.b = static_cast<int>(parse_long(value, key));
  } else if (key == "generations") {
    cfg.generations = parse_long(value, key);
  } else if (key == "runs") {
    cfg.runs = static_cast<int>(parse_long(value, key));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_long(value, key));
  } else if (key == "dataset_seed") {
    cfg.dataset_seed = static_cast<std::uint64_t>(parse_long(value, key));
  } else if (key == "report_interval") {
    cfg.report_interval = static_cast<int>(parse_long(value, key));
  } else if (key == "stop_at_optimum") {
    cfg.stop_at_optimum = parse_bool(value, key);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.task.x < 1) throw ConfigError("config key 'x': must be >= 1");
  if (!(cfg.task.theta > 0.0 && cfg.task.theta < 1.0))
    throw ConfigError("config key 'theta': must be in (0,1)");
  if (cfg.mu < 2) throw ConfigError("config key 'mu': must be >= 2");
  if (cfg.b < 1) throw ConfigError("config key 'b': must be >= 1");
  if (cfg.runs < 1) throw ConfigError("config key 'runs': must be >= 1");
  if (cfg.generations < 0)
    throw ConfigError("config key 'generations': must be >= 0");
  if (cfg.report_interval < 1)
    throw ConfigError("config key 'report_interval': must be >= 1");
  if (cfg.n_train < 0) throw ConfigError("config key 'train': must be >= 0");
  if (cfg.n_test < 0) throw ConfigError("config key 'test': must be >= 0");
  const bool real_repr = cfg.representation == Representation::protein_fln ||
                         cfg.representation == Representation::direct_interval;
  if (real_repr != (cfg.task.domain == TaskDomain::real))
    throw ConfigError(
        "config keys 'representation'/'domain': real-valued representations "
        "require domain=real and vice versa");
}

// Flat key=value text; '#' starts a comment; unknown keys are errors.
inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    line = line.substr(start, end - start + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    apply_config_key(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace grnrules
