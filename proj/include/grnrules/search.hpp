#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <variant>
#include <vector>

#include "grnrules/dynamics.hpp"
#include "grnrules/rules.hpp"
#include "grnrules/tasks.hpp"

namespace grnrules {

// The four searched representations plus the inputs-on-nodes baseline.
enum class Representation {
  protein_rbn,
  protein_fln,
  standard_rbn,
  direct_ternary,
  direct_interval,
};

inline constexpr int kMinRules = 1;
inline constexpr int kMaxRules = 100;
inline constexpr int kInitMaxRules = 32;  // seeding range, same as T

// Directly encoded Pittsburgh-style ruleset: rule order is inference order.
struct TernaryRuleSetGenome {
  int inputs = 0;
  int outputs = 0;
  std::vector<TernaryRule> rules;

  int size() const { return static_cast<int>(rules.size()); }

  bool operator==(const TernaryRuleSetGenome&) const = default;
};

// Direct interval ruleset; bounds are stored raw and ordered (min, max) at
// match time, mirroring the protein decode path.
struct IntervalRuleSetGenome {
  struct Rule {
    std::vector<double> bounds;  // 2*inputs raw values
    std::vector<std::uint8_t> action;

    bool operator==(const Rule&) const = default;
  };
  int inputs = 0;
  int outputs = 0;
  std::vector<Rule> rules;

  int size() const { return static_cast<int>(rules.size()); }

  bool operator==(const IntervalRuleSetGenome&) const = default;
};

using Genome =
    std::variant<NetworkGenome, TernaryRuleSetGenome, IntervalRuleSetGenome>;

inline TernaryRuleSetGenome init_random_ternary_ruleset(int inputs, int outputs,
                                                        Rng& rng) {
  TernaryRuleSetGenome g;
  g.inputs = inputs;
  g.outputs = outputs;
  g.rules.resize(rng.range(kMinRules, kInitMaxRules));
  for (TernaryRule& r : g.rules) {
    r.condition.resize(inputs);
    for (Ternary& s : r.condition) s = static_cast<Ternary>(rng.below(3));
    r.action.resize(outputs);
    for (std::uint8_t& a : r.action) a = static_cast<std::uint8_t>(rng.below(2));
  }
  return g;
}

inline IntervalRuleSetGenome init_random_interval_ruleset(int inputs,
                                                          int outputs,
                                                          Rng& rng) {
  IntervalRuleSetGenome g;
  g.inputs = inputs;
  g.outputs = outputs;
  g.rules.resize(rng.range(kMinRules, kInitMaxRules));
  for (auto& r : g.rules) {
    r.bounds.resize(2 * inputs);
    for (double& v : r.bounds) v = rng.unit();
    r.action.resize(outputs);
    for (std::uint8_t& a : r.action) a = static_cast<std::uint8_t>(rng.below(2));
  }
  return g;
}

inline TernaryRuleList to_rule_list(const TernaryRuleSetGenome& g) {
  TernaryRuleList list;
  list.rules = g.rules;
  for (int i = 0; i < g.size(); ++i) list.rules[i].cycle = i;
  return list;
}

inline IntervalRuleList to_rule_list(const IntervalRuleSetGenome& g) {
  IntervalRuleList list;
  list.rules.resize(g.rules.size());
  for (int i = 0; i < g.size(); ++i) {
    IntervalRule& r = list.rules[i];
    r.cycle = i;
    r.condition.resize(g.inputs);
    for (int k = 0; k < g.inputs; ++k) {
      const double a = g.rules[i].bounds[2 * k];
      const double b = g.rules[i].bounds[2 * k + 1];
      r.condition[k] = {std::min(a, b), std::max(a, b)};
    }
    r.action = g.rules[i].action;
  }
  return list;
}

inline bool ruleset_valid(const TernaryRuleSetGenome& g) {
  if (g.size() < kMinRules || g.size() > kMaxRules) return false;
  for (const TernaryRule& r : g.rules) {
    if (static_cast<int>(r.condition.size()) != g.inputs ||
        static_cast<int>(r.action.size()) != g.outputs)
      return false;
    for (Ternary s : r.condition)
      if (static_cast<int>(s) > 2) return false;
    for (std::uint8_t a : r.action)
      if (a > 1) return false;
  }
  return true;
}

inline bool ruleset_valid(const IntervalRuleSetGenome& g) {
  if (g.size() < kMinRules || g.size() > kMaxRules) return false;
  for (const auto& r : g.rules) {
    if (static_cast<int>(r.bounds.size()) != 2 * g.inputs ||
        static_cast<int>(r.action.size()) != g.outputs)
      return false;
    for (double v : r.bounds)
      if (!(v >= 0.0 && v <= 1.0)) return false;
    for (std::uint8_t a : r.action)
      if (a > 1) return false;
  }
  return true;
}

// Roulette-wheel selection on proportional quality; uniform when the whole
// population has quality 0. Self-selection is permitted.
template <typename Pop>
inline int select_model(const Pop& population,
                        Rng& rng) {
  long long total = 0;
  for (const auto& ind : population) total += ind.quality;
  if (total == 0) return rng.below(static_cast<int>(population.size()));
  long long pick =
      static_cast<long long>(rng.unit() * static_cast<double>(total));
  if (pick >= total) pick = total - 1;
  for (std::size_t i = 0; i < population.size(); ++i) {
    pick -= population[i].quality;
    if (pick < 0) return static_cast<int>(i);
  }
  return static_cast<int>(population.size()) - 1;
}

// Replacement cascade: higher quality wins; at equal quality the smaller
// genome wins; at equal size the smaller cycle count wins (network modes
// only); a full tie is decided by a fair coin.
inline bool prefer(int quality_v, int size_v, std::optional<int> cycles_v,
                   int quality_i, int size_i, std::optional<int> cycles_i,
                   Rng& rng) {
  if (quality_v != quality_i) return quality_v > quality_i;
  if (size_v != size_i) return size_v < size_i;
  if (cycles_v && cycles_i && *cycles_v != *cycles_i)
    return *cycles_v < *cycles_i;
  return rng.coin();
}

enum class NetworkOp { connection = 0, start_state = 1, function = 2, cycle_count = 3, size = 4 };

// One imitation operator applied to a copy of `copier`, taking values from
// `model`. Node indices are drawn from the size both genomes share; copied
// values are clamped to the copier's valid range.
inline NetworkGenome apply_network_op(const NetworkGenome& copier,
                                      const NetworkGenome& model,
                                      NetworkOp kind, bool error, Rng& rng,
                                      int min_nodes) {
  assert(copier.logic == model.logic &&
         copier.connectivity == model.connectivity);
  NetworkGenome v = copier;
  const int shared = std::min(copier.size(), model.size());
  switch (static_cast<int>(kind)) {
    case 0: {  // connection
      const int n = rng.below(shared);
      const int slot = rng.below(copier.connectivity);
      int val = model.nodes[n].connections[slot];
      if (error) val += rng.coin() ? 1 : -1;
      v.nodes[n].connections[slot] = std::clamp(val, 0, v.size() - 1);
      break;
    }
    case 1: {  // start state
      const int n = rng.below(shared);
      double s = model.nodes[n].start_state;
      if (error) {
        s = v.logic == Logic::boolean
                ? 1.0 - s
                : std::clamp(s + rng.real(-0.1, 0.1), 0.0, 1.0);
      }
      v.nodes[n].start_state = s;
      break;
    }
    case 2: {  // function
      const int n = rng.below(shared);
      int f = model.nodes[n].function_id;
      if (error) {
        const int nfun = function_count(v.functions, v.connectivity);
        int nf = rng.below(nfun - 1);
        if (nf >= f) ++nf;
        f = nf;
      }
      v.nodes[n].function_id = f;
      break;
    }
    case 3: {  // cycle count T
      int t = model.cycles;
      if (error) {
        const int dir = rng.coin() ? 1 : -1;
        t = model.cycles + dir;
        if (t < kMinCycles || t > kMaxCycles) t = model.cycles - dir;
      }
      v.cycles = t;
      break;
    }
    case 4: {  // size
      bool grow;
      if (model.size() > v.size())
        grow = true;
      else if (model.size() < v.size())
        grow = false;
      else
        grow = rng.coin();
      if (grow) {
        if (v.size() >= kMaxNodes) break;  // no-op at the bound
        // Exact growth copies the model's first extra node; the error
        // variant (and growth at equal sizes) copies a uniformly chosen one.
        int src = (!error && model.size() > v.size()) ? v.size()
                                                      : rng.below(model.size());
        NodeGene node = model.nodes[src];
        const int new_size = v.size() + 1;
        for (int& c : node.connections) {
          if (error) c += rng.coin() ? 1 : -1;
          c = std::clamp(c, 0, new_size - 1);
        }
        v.nodes.push_back(std::move(node));
        // Wire one existing node's random slot to the new node.
        const int who = rng.below(new_size - 1);
        const int slot = rng.below(v.connectivity);
        v.nodes[who].connections[slot] = new_size - 1;
      } else {
        if (v.size() <= min_nodes) break;  // no-op at the bound
        v.nodes.pop_back();
        const int removed = v.size();
        for (NodeGene& n : v.nodes)
          for (int& c : n.connections)
            if (c == removed) c = rng.below(v.size());
      }
      break;
    }
  }
  assert(genome_valid(v, std::min(min_nodes, v.size())));
  return v;
}

// One imitation event: one of the ten operator variants {connection, start
// state, function, T, size} x {exact, with error}, chosen uniformly.
inline NetworkGenome vary_network(const NetworkGenome& copier,
                                  const NetworkGenome& model, Rng& rng,
                                  int min_nodes) {
  const int op = rng.below(10);
  return apply_network_op(copier, model, static_cast<NetworkOp>(op / 2),
                          (op % 2) == 1, rng, min_nodes);
}

inline TernaryRuleSetGenome apply_ruleset_op(const TernaryRuleSetGenome& copier,
                                             const TernaryRuleSetGenome& model,
                                             bool size_op, bool error,
                                             Rng& rng) {
  TernaryRuleSetGenome v = copier;
  if (!size_op) {
    const int r = rng.below(std::min(v.size(), model.size()));
    const int slot = rng.below(v.inputs + v.outputs);
    if (slot < v.inputs) {
      Ternary s = model.rules[r].condition[slot];
      if (error) {
        int ns = rng.below(2);
        if (ns >= static_cast<int>(s)) ++ns;
        s = static_cast<Ternary>(ns);
      }
      v.rules[r].condition[slot] = s;
    } else {
      std::uint8_t a = model.rules[r].action[slot - v.inputs];
      if (error) a ^= 1;
      v.rules[r].action[slot - v.inputs] = a;
    }
    return v;
  }
  bool grow;
  if (model.size() > v.size())
    grow = true;
  else if (model.size() < v.size())
    grow = false;
  else
    grow = rng.coin();
  if (grow) {
    if (v.size() >= kMaxRules) return v;
    const int src = (!error && model.size() > v.size()) ? v.size()
                                                        : rng.below(model.size());
    TernaryRule rule = model.rules[src];
    if (error) {
      const int slot = rng.below(v.inputs + v.outputs);
      if (slot < v.inputs)
        rule.condition[slot] = static_cast<Ternary>(rng.below(3));
      else
        rule.action[slot - v.inputs] = static_cast<std::uint8_t>(rng.below(2));
    }
    v.rules.push_back(std::move(rule));
  } else {
    if (v.size() <= kMinRules) return v;
    v.rules.pop_back();
  }
  return v;
}

// One imitation event on a direct ternary ruleset: {copy component, size
// change} x {exact, with error}, chosen uniformly.
inline TernaryRuleSetGenome vary_ruleset(const TernaryRuleSetGenome& copier,
                                         const TernaryRuleSetGenome& model,
                                         Rng& rng) {
  const int op = rng.below(4);
  return apply_ruleset_op(copier, model, op >= 2, (op % 2) == 1, rng);
}

inline IntervalRuleSetGenome apply_ruleset_op(
    const IntervalRuleSetGenome& copier, const IntervalRuleSetGenome& model,
    bool size_op, bool error, Rng& rng) {
  IntervalRuleSetGenome v = copier;
  if (!size_op) {
    const int r = rng.below(std::min(v.size(), model.size()));
    const int slot = rng.below(2 * v.inputs + v.outputs);
    if (slot < 2 * v.inputs) {
      double b = model.rules[r].bounds[slot];
      if (error) b = std::clamp(b + rng.real(-0.1, 0.1), 0.0, 1.0);
      v.rules[r].bounds[slot] = b;
    } else {
      std::uint8_t a = model.rules[r].action[slot - 2 * v.inputs];
      if (error) a ^= 1;
      v.rules[r].action[slot - 2 * v.inputs] = a;
    }
    return v;
  }
  bool grow;
  if (model.size() > v.size())
    grow = true;
  else if (model.size() < v.size())
    grow = false;
  else
    grow = rng.coin();
  if (grow) {
    if (v.size() >= kMaxRules) return v;
    const int src = (!error && model.size() > v.size()) ? v.size()
                                                        : rng.below(model.size());
    IntervalRuleSetGenome::Rule rule = model.rules[src];
    if (error) {
      for (double& b : rule.bounds)
        b = std::clamp(b + rng.real(-0.1, 0.1), 0.0, 1.0);
    }
    v.rules.push_back(std::move(rule));
  } else {
    if (v.size() <= kMinRules) return v;
    v.rules.pop_back();
  }
  return v;
}

inline IntervalRuleSetGenome vary_ruleset(const IntervalRuleSetGenome& copier,
                                          const IntervalRuleSetGenome& model,
                                          Rng& rng) {
  const int op = rng.below(4);
  return apply_ruleset_op(copier, model, op >= 2, (op % 2) == 1, rng);
}

// Inputs-on-nodes baseline: per case the input bits are fed through
// connection 0 of nodes 0..I-1 on every cycle (in place of the clock), and
// after T cycles the action is read from nodes I..I+O-1.
inline Evaluation evaluate_standard_rbn(const NetworkGenome& g,
                                        const TaskSpec& task) {
  const int n_in = task.inputs();
  const int n_out = task.outputs();
  assert(g.size() >= n_in + n_out);
  Evaluation ev;
  ev.cases = task.case_count();
  std::vector<double> overrides(n_in), cur(g.size()), next(g.size());
  std::vector<std::uint8_t> bits(n_in), out(n_out), target;
  for (int c = 0; c < ev.cases; ++c) {
    for (int k = 0; k < n_in; ++k) {
      bits[k] = (c >> (n_in - 1 - k)) & 1;
      overrides[k] = bits[k];
    }
    for (int i = 0; i < g.size(); ++i) cur[i] = g.nodes[i].start_state;
    for (int t = 0; t < g.cycles; ++t) {
      step_into(g, cur, next, overrides);
      cur.swap(next);
    }
    for (int j = 0; j < n_out; ++j) out[j] = cur[n_in + j] != 0.0 ? 1 : 0;
    boolean_target(task, bits, target);
    if (out == target) ++ev.quality;
  }
  return ev;
}

struct SearchConfig {
  Representation representation = Representation::protein_rbn;
  bool clock = true;
  int mu = 50;
  int b = 2;
  long generations = 100;
  std::uint64_t seed = 1;
  // Boolean tasks stop once an individual reaches the exhaustive optimum;
  // remaining telemetry rows are carried forward unchanged.
  bool stop_at_optimum = true;
  int report_interval = 1;
};

// Minimum node count: L = 2I+O for the protein modes, I+O for the standard
// baseline.
inline int min_network_size(Representation repr, const TaskSpec& task) {
  return repr == Representation::standard_rbn
             ? task.inputs() + task.outputs()
             : task.rule_width();
}

struct GenerationRow {
  long generation = 0;
  long evaluations = 0;
  int best_quality = 0;
  double mean_quality = 0.0;
  int best_size = 0;
  int best_cycles = -1;      // T for network modes, -1 otherwise
  int best_rule_count = 0;
  double train_accuracy = -1.0;  // real tasks only
  double test_accuracy = -1.0;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<GenerationRow> rows;
  Genome best_genome;
  int final_quality = 0;
  long evals_to_optimum = -1;  // -1 when the optimum was never reached
  long total_evaluations = 0;
  double final_train_accuracy = -1.0;
  double final_test_accuracy = -1.0;
};

struct Individual {
  Genome genome;
  int quality = 0;
  int rule_count = 0;
};

inline int genome_size(const Genome& g) {
  return std::visit([](const auto& x) { return x.size(); }, g);
}

inline std::optional<int> genome_cycles(const Genome& g) {
  if (const auto* net = std::get_if<NetworkGenome>(&g))
    return net->cycles;
  return std::nullopt;
}

struct EvalOutcome {
  int quality = 0;
  int rule_count = 0;
};

// Quality of one candidate on the bound task. Real tasks are scored on the
// training set only.
inline EvalOutcome evaluate_genome(const Genome& genome,
                                   const SearchConfig& cfg,
                                   const TaskSpec& task, const Dataset* data) {
  EvalOutcome out;
  switch (cfg.representation) {
    case Representation::protein_rbn: {
      const auto& net = std::get<NetworkGenome>(genome);
      auto traj = run_trajectory(net, task.rule_width(), cfg.clock);
      auto list = build_ternary_rule_list(traj, task.inputs(), task.outputs());
      out.quality = evaluate_boolean(list, task).quality;
      out.rule_count = list.size();
      break;
    }
    case Representation::protein_fln: {
      const auto& net = std::get<NetworkGenome>(genome);
      auto traj = run_trajectory(net, task.rule_width(), cfg.clock);
      auto list = build_interval_rule_list(traj, task.inputs(), task.outputs());
      out.quality = evaluate_real(list, task, data->train).quality;
      out.rule_count = list.size();
      break;
    }
    case Representation::standard_rbn: {
      const auto& net = std::get<NetworkGenome>(genome);
      out.quality = evaluate_standard_rbn(net, task).quality;
      out.rule_count = 0;
      break;
    }
    case Representation::direct_ternary: {
      const auto& rs = std::get<TernaryRuleSetGenome>(genome);
      auto list = to_rule_list(rs);
      out.quality = evaluate_boolean(list, task).quality;
      out.rule_count = rs.size();
      break;
    }
    case Representation::direct_interval: {
      const auto& rs = std::get<IntervalRuleSetGenome>(genome);
      auto list = to_rule_list(rs);
      out.quality = evaluate_real(list, task, data->train).quality;
      out.rule_count = rs.size();
      break;
    }
  }
  return out;
}

// Test-set accuracy of a candidate (reporting only, never used by search).
inline double test_accuracy(const Genome& genome, const SearchConfig& cfg,
                            const TaskSpec& task, const Dataset* data) {
  if (task.domain != TaskDomain::real || data == nullptr ||
      data->test.empty())
    return -1.0;
  if (cfg.representation == Representation::protein_fln) {
    const auto& net = std::get<NetworkGenome>(genome);
    auto traj = run_trajectory(net, task.rule_width(), cfg.clock);
    auto list = build_interval_rule_list(traj, task.inputs(), task.outputs());
    return evaluate_real(list, task, data->test).accuracy();
  }
  const auto& rs = std::get<IntervalRuleSetGenome>(genome);
  return evaluate_real(to_rule_list(rs), task, data->test).accuracy();
}

// The imitation-programming loop: every individual persists, producing one
// variant per generation by imitating a roulette-selected model, adopting
// it per the replacement cascade.
inline RunRecord run_search(const SearchConfig& cfg, const TaskSpec& task,
                            const Dataset* data = nullptr) {
  assert(cfg.mu >= 2);
  const bool boolean_task = task.domain == TaskDomain::boolean;
  assert(boolean_task || data != nullptr);
  const int optimum = boolean_task ? task.case_count() : -1;
  const bool network_mode =
      cfg.representation == Representation::protein_rbn ||
      cfg.representation == Representation::protein_fln ||
      cfg.representation == Representation::standard_rbn;
  const int min_nodes =
      network_mode ? min_network_size(cfg.representation, task) : 0;
  const Logic logic = cfg.representation == Representation::protein_fln
                          ? Logic::fuzzy
                          : Logic::boolean;

  Rng rng(cfg.seed);
  RunRecord rec;
  rec.seed = cfg.seed;

  std::vector<Individual> pop(cfg.mu);
  long evals = 0;
  auto note_eval = [&](int quality) {
    ++evals;
    if (quality == optimum && rec.evals_to_optimum < 0)
      rec.evals_to_optimum = evals;
  };
  for (Individual& ind : pop) {
    switch (cfg.representation) {
      case Representation::protein_rbn:
      case Representation::protein_fln:
      case Representation::standard_rbn:
        ind.genome = init_random_genome(logic, min_nodes, cfg.b, rng);
        break;
      case Representation::direct_ternary:
        ind.genome =
            init_random_ternary_ruleset(task.inputs(), task.outputs(), rng);
        break;
      case Representation::direct_interval:
        ind.genome =
            init_random_interval_ruleset(task.inputs(), task.outputs(), rng);
        break;
    }
    const EvalOutcome e = evaluate_genome(ind.genome, cfg, task, data);
    ind.quality = e.quality;
    ind.rule_count = e.rule_count;
    note_eval(e.quality);
  }

  auto best_index = [&]() {
    int best = 0;
    for (int i = 1; i < cfg.mu; ++i)
      if (pop[i].quality > pop[best].quality) best = i;
    return best;
  };

  auto record_row = [&](long gen) {
    const int bi = best_index();
    GenerationRow row;
    row.generation = gen;
    row.evaluations = evals;
    row.best_quality = pop[bi].quality;
    double sum = 0;
    for (const Individual& ind : pop) sum += ind.quality;
    row.mean_quality = sum / cfg.mu;
    row.best_size = genome_size(pop[bi].genome);
    row.best_cycles = genome_cycles(pop[bi].genome).value_or(-1);
    row.best_rule_count = pop[bi].rule_count;
    if (!boolean_task) {
      row.train_accuracy =
          static_cast<double>(pop[bi].quality) / data->train.size();
      row.test_accuracy = test_accuracy(pop[bi].genome, cfg, task, data);
    }
    rec.rows.push_back(row);
  };

  record_row(0);

  bool done = boolean_task && cfg.stop_at_optimum &&
              pop[best_index()].quality == optimum;
  for (long gen = 1; gen <= cfg.generations; ++gen) {
    if (!done) {
      for (int i = 0; i < cfg.mu; ++i) {
        const int m = select_model(pop, rng);
        Genome variant;
        if (network_mode) {
          variant = vary_network(std::get<NetworkGenome>(pop[i].genome),
                                 std::get<NetworkGenome>(pop[m].genome), rng,
                                 min_nodes);
        } else if (cfg.representation == Representation::direct_ternary) {
          variant = vary_ruleset(std::get<TernaryRuleSetGenome>(pop[i].genome),
                                 std::get<TernaryRuleSetGenome>(pop[m].genome),
                                 rng);
        } else {
          variant = vary_ruleset(std::get<IntervalRuleSetGenome>(pop[i].genome),
                                 std::get<IntervalRuleSetGenome>(pop[m].genome),
                                 rng);
        }
        const EvalOutcome e = evaluate_genome(variant, cfg, task, data);
        note_eval(e.quality);
        const std::optional<int> cyc_v = genome_cycles(variant);
        const std::optional<int> cyc_i = genome_cycles(pop[i].genome);
        if (prefer(e.quality, genome_size(variant), cyc_v, pop[i].quality,
                   genome_size(pop[i].genome), cyc_i, rng)) {
          pop[i].genome = std::move(variant);
          pop[i].quality = e.quality;
          pop[i].rule_count = e.rule_count;
        }
      }
      if (boolean_task && cfg.stop_at_optimum &&
          pop[best_index()].quality == optimum)
        done = true;
    }
    if (gen % cfg.report_interval == 0 || gen == cfg.generations)
      record_row(gen);
  }

  const int bi = best_index();
  rec.best_genome = pop[bi].genome;
  rec.final_quality = pop[bi].quality;
  rec.total_evaluations = evals;
  if (!boolean_task) {
    rec.final_train_accuracy =
        static_cast<double>(pop[bi].quality) / data->train.size();
    rec.final_test_accuracy = test_accuracy(pop[bi].genome, cfg, task, data);
  }
  return rec;
}

}  // namespace grnrules
