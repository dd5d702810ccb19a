#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace grnrules {

// Ternary condition symbols. '#' matches either input bit.
enum class Ternary : std::uint8_t { zero = 0, one = 1, any = 2 };

inline char ternary_char(Ternary t) {
  switch (t) {
    case Ternary::zero:
      return '0';
    case Ternary::one:
      return '1';
    case Ternary::any:
      return '#';
  }
  return '?';
}

// One production rule read off a Boolean trajectory: I ternary condition
// symbols, O action bits, and the network cycle that produced it.
struct TernaryRule {
  std::vector<Ternary> condition;
  std::vector<std::uint8_t> action;
  int cycle = 0;

  bool operator==(const TernaryRule&) const = default;
};

struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  bool operator==(const Interval&) const = default;
};

// Real-valued counterpart: per-variable closed [lower, upper] bounds.
struct IntervalRule {
  std::vector<Interval> condition;
  std::vector<std::uint8_t> action;
  int cycle = 0;

  bool operator==(const IntervalRule&) const = default;
};

// Rules sorted ascending by originating cycle; inference takes the first
// match in that order.
template <typename Rule>
struct RuleList {
  std::vector<Rule> rules;

  int size() const { return static_cast<int>(rules.size()); }
};

using TernaryRuleList = RuleList<TernaryRule>;
using IntervalRuleList = RuleList<IntervalRule>;

// Condition symbol k comes from observation bits (2k, 2k+1): equal bits
// give that bit value, mixed bits give '#'. The last O bits are the action.
inline TernaryRule decode_ternary(std::span<const std::uint8_t> observation,
                                  int inputs, int outputs, int cycle = 0) {
  assert(static_cast<int>(observation.size()) == 2 * inputs + outputs);
  TernaryRule rule;
  rule.cycle = cycle;
  rule.condition.resize(inputs);
  for (int k = 0; k < inputs; ++k) {
    const std::uint8_t a = observation[2 * k];
    const std::uint8_t b = observation[2 * k + 1];
    rule.condition[k] = a == b ? static_cast<Ternary>(a) : Ternary::any;
  }
  rule.action.assign(observation.begin() + 2 * inputs, observation.end());
  return rule;
}

// Bound pair k is (min, max) of observation values (2k, 2k+1), so any
// observation decodes to a valid interval. Action values threshold at 0.5,
// ties to 1.
inline IntervalRule decode_interval(std::span<const double> observation,
                                    int inputs, int outputs, int cycle = 0) {
  assert(static_cast<int>(observation.size()) == 2 * inputs + outputs);
  IntervalRule rule;
  rule.cycle = cycle;
  rule.condition.resize(inputs);
  for (int k = 0; k < inputs; ++k) {
    const double a = observation[2 * k];
    const double b = observation[2 * k + 1];
    rule.condition[k] = {std::min(a, b), std::max(a, b)};
  }
  rule.action.resize(outputs);
  for (int j = 0; j < outputs; ++j)
    rule.action[j] = observation[2 * inputs + j] >= 0.5 ? 1 : 0;
  return rule;
}

inline bool matches(const TernaryRule& rule,
                    std::span<const std::uint8_t> input) {
  assert(input.size() == rule.condition.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    const Ternary sym = rule.condition[k];
    if (sym != Ternary::any && static_cast<std::uint8_t>(sym) != input[k])
      return false;
  }
  return true;
}

inline bool matches(const IntervalRule& rule, std::span<const double> input) {
  assert(input.size() == rule.condition.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    if (input[k] < rule.condition[k].lower || input[k] > rule.condition[k].upper)
      return false;
  }
  return true;
}

// First-match inference in cycle order; the list is already sorted.
template <typename Rule, typename Input>
inline const Rule* first_match(const RuleList<Rule>& list,
                               std::span<const Input> input) {
  for (const Rule& rule : list.rules) {
    if (matches(rule, input)) return &rule;
  }
  return nullptr;
}

template <typename Rule, typename Input>
inline std::optional<std::vector<std::uint8_t>> infer(
    const RuleList<Rule>& list, std::span<const Input> input) {
  const Rule* rule = first_match(list, input);
  if (rule == nullptr) return std::nullopt;
  return rule->action;
}

// Rule t of the list is decoded from observation t; duplicates are kept,
// ordering makes them harmless.
inline TernaryRuleList build_ternary_rule_list(
    const std::vector<std::vector<double>>& trajectory, int inputs,
    int outputs) {
  TernaryRuleList list;
  list.rules.reserve(trajectory.size());
  std::vector<std::uint8_t> bits;
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    bits.resize(trajectory[t].size());
    for (std::size_t i = 0; i < bits.size(); ++i)
      bits[i] = trajectory[t][i] != 0.0 ? 1 : 0;
    list.rules.push_back(
        decode_ternary(bits, inputs, outputs, static_cast<int>(t)));
  }
  return list;
}

inline IntervalRuleList build_interval_rule_list(
    const std::vector<std::vector<double>>& trajectory, int inputs,
    int outputs) {
  IntervalRuleList list;
  list.rules.reserve(trajectory.size());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    list.rules.push_back(
        decode_interval(trajectory[t], inputs, outputs, static_cast<int>(t)));
  }
  return list;
}

}  // namespace grnrules
