#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "grnrules/rng.hpp"
#include "grnrules/rules.hpp"

namespace grnrules {

enum class TaskKind { mux, demux };
enum class TaskDomain { boolean, real };

// Multiplexer/demultiplexer family. For a mux, the first x bits address one
// of the 2^x data bits; the demux routes a single data bit to one of 2^x
// output lines.
struct TaskSpec {
  TaskKind kind = TaskKind::mux;
  TaskDomain domain = TaskDomain::boolean;
  int x = 2;
  double theta = 0.5;  // real domain only

  int inputs() const { return kind == TaskKind::mux ? x + (1 << x) : x + 1; }
  int outputs() const { return kind == TaskKind::mux ? 1 : 1 << x; }
  int rule_width() const { return 2 * inputs() + outputs(); }  // L
  // Exhaustive Boolean case count.
  int case_count() const { return 1 << inputs(); }
};

struct Dataset {
  std::vector<std::vector<double>> train;
  std::vector<std::vector<double>> test;
  std::uint64_t seed = 0;
};

struct Evaluation {
  int quality = 0;  // fully correct responses
  int cases = 0;

  double accuracy() const { return cases == 0 ? 0.0 : double(quality) / cases; }
};

// Address bits are the leading x bits, most significant first; data bits are
// indexed 0 from the left.
inline std::uint8_t mux_target(std::span<const std::uint8_t> bits, int x) {
  assert(static_cast<int>(bits.size()) == x + (1 << x));
  int address = 0;
  for (int k = 0; k < x; ++k) address = (address << 1) | bits[k];
  return bits[x + address];
}

// Output line `address` carries the data bit; every other line is 0.
inline std::vector<std::uint8_t> demux_target(std::span<const std::uint8_t> bits,
                                              int x) {
  assert(static_cast<int>(bits.size()) == x + 1);
  int address = 0;
  for (int k = 0; k < x; ++k) address = (address << 1) | bits[k];
  std::vector<std::uint8_t> out(1 << x, 0);
  out[address] = bits[x];
  return out;
}

// Real inputs binarize as 0 when strictly greater than theta, else 1.
inline std::uint8_t threshold_real(double v, double theta) {
  return v > theta ? 0 : 1;
}

inline void boolean_target(const TaskSpec& task,
                           std::span<const std::uint8_t> bits,
                           std::vector<std::uint8_t>& out) {
  if (task.kind == TaskKind::mux) {
    out.assign(1, mux_target(bits, task.x));
  } else {
    out = demux_target(bits, task.x);
  }
}

// Target of a real vector: threshold each component, then apply the Boolean
// oracle.
inline void real_target(const TaskSpec& task, std::span<const double> v,
                        std::vector<std::uint8_t>& out) {
  std::vector<std::uint8_t> bits(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    bits[k] = threshold_real(v[k], task.theta);
  boolean_target(task, bits, out);
}

// I.i.d. uniform vectors on [0,1]^l, deterministic under the seed.
inline Dataset generate_dataset(const TaskSpec& task, int n_train, int n_test,
                                std::uint64_t seed) {
  assert(task.domain == TaskDomain::real);
  Rng rng(seed);
  Dataset data;
  data.seed = seed;
  const int l = task.inputs();
  auto fill = [&](std::vector<std::vector<double>>& dst, int n) {
    dst.resize(n);
    for (auto& v : dst) {
      v.resize(l);
      for (double& x : v) x = rng.unit();
    }
  };
  fill(data.train, n_train);
  fill(data.test, n_test);
  return data;
}

// Enumerates all 2^l Boolean inputs; a case scores 1 only when inference
// produces an action and every output bit matches the oracle.
inline Evaluation evaluate_boolean(const TernaryRuleList& list,
                                   const TaskSpec& task) {
  const int l = task.inputs();
  Evaluation ev;
  ev.cases = 1 << l;
  std::vector<std::uint8_t> bits(l), target;
  for (int c = 0; c < ev.cases; ++c) {
    for (int k = 0; k < l; ++k) bits[k] = (c >> (l - 1 - k)) & 1;
    const TernaryRule* rule = first_match<TernaryRule, std::uint8_t>(list, bits);
    if (rule == nullptr) continue;
    boolean_target(task, bits, target);
    if (rule->action == target) ++ev.quality;
  }
  return ev;
}

// Scores an interval rule list over a dataset part (all-or-nothing per
// case, NoMatch scores 0).
inline Evaluation evaluate_real(const IntervalRuleList& list,
                                const TaskSpec& task,
                                const std::vector<std::vector<double>>& cases) {
  Evaluation ev;
  ev.cases = static_cast<int>(cases.size());
  std::vector<std::uint8_t> target;
  for (const auto& v : cases) {
    const IntervalRule* rule = first_match<IntervalRule, double>(list, v);
    if (rule == nullptr) continue;
    real_target(task, v, target);
    if (rule->action == target) ++ev.quality;
  }
  return ev;
}

}  // namespace grnrules
