#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "grnrules/rng.hpp"

namespace grnrules {

enum class Logic { boolean, fuzzy };

// Node functions available to a genome. Evolved Boolean networks draw from
// the six named gates; the dynamics-statistics mode uses full random lookup
// tables (the classical Kauffman model). The fuzzy set follows the printed
// function table; fuzzy_zadeh swaps the max/min AND/OR pair.
enum class FunctionSetKind : std::uint8_t {
  boolean_named,
  boolean_table,
  fuzzy,
  fuzzy_zadeh,
};

namespace fn {
inline constexpr int kAnd = 0;
inline constexpr int kNand = 1;
inline constexpr int kOr = 2;
inline constexpr int kNor = 3;
inline constexpr int kXor = 4;
inline constexpr int kXnor = 5;

inline constexpr int kFuzzyAndMaxMin = 0;   // max(x,y) as printed
inline constexpr int kFuzzyAndProduct = 1;  // x*y
inline constexpr int kFuzzyOrMaxMin = 2;    // min(x,y) as printed
inline constexpr int kFuzzyOrBounded = 3;   // min(1, x+y)
inline constexpr int kFuzzyNot = 4;         // 1-x
inline constexpr int kIdentity = 5;         // x
}  // namespace fn

inline int function_count(FunctionSetKind kind, int connectivity) {
  switch (kind) {
    case FunctionSetKind::boolean_named:
      return 6;
    case FunctionSetKind::boolean_table:
      return 1 << (1 << connectivity);
    case FunctionSetKind::fuzzy:
    case FunctionSetKind::fuzzy_zadeh:
      return 6;
  }
  return 0;
}

// Evaluates function `id` of the given set on the connected-node inputs.
// Named Boolean gates read inputs 0 and 1; unary fuzzy functions read input
// 0 only; lookup tables read all `connectivity` inputs as bits.
inline double eval_function(FunctionSetKind kind, int id, const double* in,
                            int connectivity) {
  switch (kind) {
    case FunctionSetKind::boolean_named: {
      const bool x = in[0] != 0.0;
      const bool y = in[1] != 0.0;
      switch (id) {
        case fn::kAnd:
          return (x && y) ? 1.0 : 0.0;
        case fn::kNand:
          return (x && y) ? 0.0 : 1.0;
        case fn::kOr:
          return (x || y) ? 1.0 : 0.0;
        case fn::kNor:
          return (x || y) ? 0.0 : 1.0;
        case fn::kXor:
          return (x != y) ? 1.0 : 0.0;
        case fn::kXnor:
          return (x != y) ? 0.0 : 1.0;
      }
      assert(false && "bad boolean function id");
      return 0.0;
    }
    case FunctionSetKind::boolean_table: {
      int idx = 0;
      for (int k = 0; k < connectivity; ++k) {
        if (in[k] != 0.0) idx |= 1 << k;
      }
      return ((id >> idx) & 1) ? 1.0 : 0.0;
    }
    case FunctionSetKind::fuzzy:
    case FunctionSetKind::fuzzy_zadeh: {
      const bool zadeh = kind == FunctionSetKind::fuzzy_zadeh;
      const double x = in[0];
      const double y = in[1];
      switch (id) {
        case fn::kFuzzyAndMaxMin:
          return zadeh ? std::min(x, y) : std::max(x, y);
        case fn::kFuzzyAndProduct:
          return x * y;
        case fn::kFuzzyOrMaxMin:
          return zadeh ? std::max(x, y) : std::min(x, y);
        case fn::kFuzzyOrBounded:
          return std::min(1.0, x + y);
        case fn::kFuzzyNot:
          return 1.0 - x;
        case fn::kIdentity:
          return x;
      }
      assert(false && "bad fuzzy function id");
      return 0.0;
    }
  }
  return 0.0;
}

struct NodeGene {
  std::vector<int> connections;  // B indices into the genome's node list
  int function_id = 0;
  double start_state = 0.0;  // {0,1} for Boolean logic, [0,1] for fuzzy
};

// Variable-length indirect encoding: the node list plus the cycle count T.
struct NetworkGenome {
  Logic logic = Logic::boolean;
  FunctionSetKind functions = FunctionSetKind::boolean_named;
  int connectivity = 2;  // B
  int cycles = 1;        // T
  std::vector<NodeGene> nodes;

  int size() const { return static_cast<int>(nodes.size()); }

  bool operator==(const NetworkGenome& o) const {
    if (logic != o.logic || functions != o.functions ||
        connectivity != o.connectivity || cycles != o.cycles ||
        nodes.size() != o.nodes.size())
      return false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].connections != o.nodes[i].connections ||
          nodes[i].function_id != o.nodes[i].function_id ||
          nodes[i].start_state != o.nodes[i].start_state)
        return false;
    }
    return true;
  }
};

inline constexpr int kMinCycles = 1;
inline constexpr int kMaxCycles = 32;
inline constexpr int kMaxNodes = 100;
inline constexpr int kClockBits = 5;

struct NetworkState {
  std::vector<double> activations;
  int cycle = 0;
};

struct AttractorReport {
  int transient_length = 0;
  int period = 1;
};

// Checks every structural invariant of a genome; used by tests and asserted
// after each variation operator in debug builds.
inline bool genome_valid(const NetworkGenome& g, int min_nodes = 1) {
  if (g.cycles < kMinCycles || g.cycles > kMaxCycles) return false;
  if (g.size() < min_nodes || g.size() > kMaxNodes) return false;
  const int nfun = function_count(g.functions, g.connectivity);
  for (const NodeGene& n : g.nodes) {
    if (static_cast<int>(n.connections.size()) != g.connectivity) return false;
    for (int c : n.connections) {
      if (c < 0 || c >= g.size()) return false;
    }
    if (n.function_id < 0 || n.function_id >= nfun) return false;
    if (g.logic == Logic::boolean) {
      if (n.start_state != 0.0 && n.start_state != 1.0) return false;
    } else {
      if (!(n.start_state >= 0.0 && n.start_state <= 1.0)) return false;
    }
  }
  return true;
}

inline NetworkGenome init_random_genome(Logic logic, int num_nodes, int b,
                                        Rng& rng) {
  NetworkGenome g;
  g.logic = logic;
  g.functions =
      logic == Logic::boolean ? FunctionSetKind::boolean_named : FunctionSetKind::fuzzy;
  g.connectivity = b;
  g.cycles = rng.range(kMinCycles, kMaxCycles);
  g.nodes.resize(num_nodes);
  const int nfun = function_count(g.functions, b);
  for (NodeGene& n : g.nodes) {
    n.connections.resize(b);
    for (int& c : n.connections) c = rng.below(num_nodes);
    n.function_id = rng.below(nfun);
    n.start_state = logic == Logic::boolean ? static_cast<double>(rng.below(2))
                                            : rng.unit();
  }
  return g;
}

// Classical Kauffman-style network: random wiring and full random lookup
// tables. Used only by the dynamics-statistics mode.
inline NetworkGenome init_random_table_genome(int num_nodes, int b, Rng& rng) {
  NetworkGenome g;
  g.logic = Logic::boolean;
  g.functions = FunctionSetKind::boolean_table;
  g.connectivity = b;
  g.cycles = 1;
  g.nodes.resize(num_nodes);
  const int nfun = function_count(g.functions, b);
  for (NodeGene& n : g.nodes) {
    n.connections.resize(b);
    for (int& c : n.connections) c = rng.below(num_nodes);
    n.function_id = rng.below(nfun);
    n.start_state = static_cast<double>(rng.below(2));
  }
  return g;
}

inline NetworkState start_state(const NetworkGenome& g) {
  NetworkState s;
  s.activations.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    s.activations[i] = g.nodes[i].start_state;
  s.cycle = 0;
  return s;
}

// One synchronous update, reading every input from `cur`. When
// `input_override` is non-empty, node i < override-count has the value fed
// through its connection 0 replaced by override[i]; the stored state of the
// source node is untouched.
inline void step_into(const NetworkGenome& g, const std::vector<double>& cur,
                      std::vector<double>& next,
                      std::span<const double> input_override = {}) {
  const int b = g.connectivity;
  const std::size_t n_override = input_override.size();
  next.resize(cur.size());
  double inputs[32];
  assert(b <= 32);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const NodeGene& node = g.nodes[i];
    for (int k = 0; k < b; ++k) inputs[k] = cur[node.connections[k]];
    if (i < n_override) inputs[0] = input_override[i];
    next[i] = eval_function(g.functions, node.function_id, inputs, b);
  }
}

inline NetworkState step(const NetworkGenome& g, const NetworkState& state,
                         std::span<const double> input_override = {}) {
  NetworkState out;
  out.cycle = state.cycle + 1;
  step_into(g, state.activations, out.activations, input_override);
  return out;
}

// Little-endian bits of the cycle counter, as input-override values for
// nodes 0..4.
inline void clock_override(int cycle, double (&bits)[kClockBits]) {
  for (int i = 0; i < kClockBits; ++i)
    bits[i] = static_cast<double>((cycle >> i) & 1);
}

// Resets to start states and runs T synchronous cycles, recording the first
// `observe_nodes` activations after each update. With the clock enabled,
// cycle t (counted from 0) feeds its 5-bit pattern into nodes 0..4.
inline std::vector<std::vector<double>> run_trajectory(const NetworkGenome& g,
                                                       int observe_nodes,
                                                       bool clock_enabled) {
  assert(observe_nodes <= g.size());
  std::vector<std::vector<double>> observations;
  observations.reserve(g.cycles);
  std::vector<double> cur(g.size()), next(g.size());
  for (int i = 0; i < g.size(); ++i) cur[i] = g.nodes[i].start_state;
  for (int t = 0; t < g.cycles; ++t) {
    if (clock_enabled) {
      double bits[kClockBits];
      clock_override(t, bits);
      step_into(g, cur, next, bits);
    } else {
      step_into(g, cur, next);
    }
    cur.swap(next);
    observations.emplace_back(cur.begin(), cur.begin() + observe_nodes);
  }
  return observations;
}

// Simulates from the start state until an exact state repeat, Boolean logic
// only. The first revisited state fixes the transient (its first occurrence
// index) and the period (the gap).
inline std::optional<AttractorReport> find_attractor(const NetworkGenome& g,
                                                     int max_steps) {
  assert(g.logic == Logic::boolean);
  const int r = g.size();
  const int words = (r + 63) / 64;

  auto pack = [&](const std::vector<double>& s, std::vector<std::uint64_t>& out) {
    out.assign(words, 0);
    for (int i = 0; i < r; ++i)
      if (s[i] != 0.0) out[i / 64] |= std::uint64_t{1} << (i % 64);
  };

  struct PackedHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
      std::size_t h = 0xcbf29ce484222325ull;
      for (std::uint64_t w : v) {
        h ^= w;
        h *= 0x100000001b3ull;
      }
      return h;
    }
  };

  std::unordered_map<std::vector<std::uint64_t>, int, PackedHash> seen;
  std::vector<double> cur(r), next(r);
  for (int i = 0; i < r; ++i) cur[i] = g.nodes[i].start_state;
  std::vector<std::uint64_t> key;
  for (int t = 0; t <= max_steps; ++t) {
    pack(cur, key);
    auto [it, inserted] = seen.emplace(key, t);
    if (!inserted)
      return AttractorReport{it->second, t - it->second};
    step_into(g, cur, next);
    cur.swap(next);
  }
  return std::nullopt;
}

struct CycleStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Fraction-of-nodes-changed statistics for classical random-table networks:
// `samples` networks of R nodes are run for `cycles` updates from random
// initial states; entry t-1 aggregates the fraction of nodes whose state
// changed on update t.
inline std::vector<CycleStats> dynamics_stats(int r, int b, int cycles,
                                              int samples, Rng& rng) {
  std::vector<CycleStats> stats(cycles);
  for (CycleStats& c : stats) {
    c.min = 1.0;
    c.max = 0.0;
  }
  std::vector<double> cur(r), next(r);
  for (int s = 0; s < samples; ++s) {
    NetworkGenome g = init_random_table_genome(r, b, rng);
    for (int i = 0; i < r; ++i) cur[i] = g.nodes[i].start_state;
    for (int t = 0; t < cycles; ++t) {
      step_into(g, cur, next);
      int changed = 0;
      for (int i = 0; i < r; ++i)
        if (cur[i] != next[i]) ++changed;
      const double frac = static_cast<double>(changed) / r;
      stats[t].mean += frac;
      stats[t].min = std::min(stats[t].min, frac);
      stats[t].max = std::max(stats[t].max, frac);
      cur.swap(next);
    }
  }
  for (CycleStats& c : stats) c.mean /= samples;
  return stats;
}

}  // namespace grnrules
