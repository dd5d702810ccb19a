#include <catch2/catch_amalgamated.hpp>

#include "grnrules/rng.hpp"
#include "grnrules/rules.hpp"

using namespace grnrules;

namespace {

std::vector<Ternary> cond(std::string_view s) {
  std::vector<Ternary> out;
  for (char c : s)
    out.push_back(c == '#' ? Ternary::any
                           : (c == '1' ? Ternary::one : Ternary::zero));
  return out;
}

// Independent inference oracle: collect every matching rule, then take the
// smallest cycle.
template <typename Rule, typename Input>
std::optional<std::vector<std::uint8_t>> infer_oracle(
    const RuleList<Rule>& list, std::span<const Input> input) {
  const Rule* best = nullptr;
  for (const Rule& r : list.rules) {
    bool ok = true;
    for (std::size_t k = 0; k < input.size(); ++k) {
      if constexpr (std::is_same_v<Rule, TernaryRule>) {
        if (r.condition[k] == Ternary::zero && input[k] != 0) ok = false;
        if (r.condition[k] == Ternary::one && input[k] != 1) ok = false;
      } else {
        if (!(r.condition[k].lower <= input[k] &&
              input[k] <= r.condition[k].upper))
          ok = false;
      }
    }
    if (ok && (best == nullptr || r.cycle < best->cycle)) best = &r;
  }
  if (best == nullptr) return std::nullopt;
  return best->action;
}

}  // namespace

TEST_CASE("decode_ternary examples") {
  std::vector<std::uint8_t> obs = {1, 1, 0, 0, 1};
  TernaryRule r = decode_ternary(obs, 2, 1);
  CHECK(r.condition == cond("10"));
  CHECK(r.action == std::vector<std::uint8_t>{1});

  obs = {1, 0, 0, 1, 0};
  r = decode_ternary(obs, 2, 1);
  CHECK(r.condition == cond("##"));
  CHECK(r.action == std::vector<std::uint8_t>{0});

  obs = {0, 0, 1, 1, 0, 1, 1};
  r = decode_ternary(obs, 3, 1);
  CHECK(r.condition == cond("01#"));
  CHECK(r.action == std::vector<std::uint8_t>{1});
}

TEST_CASE("decode_ternary wildcard iff pair bits differ") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int inputs = rng.range(1, 6);
    const int outputs = rng.range(1, 4);
    std::vector<std::uint8_t> obs(2 * inputs + outputs);
    for (auto& b : obs) b = static_cast<std::uint8_t>(rng.below(2));
    TernaryRule r = decode_ternary(obs, inputs, outputs);
    for (int k = 0; k < inputs; ++k) {
      if (obs[2 * k] != obs[2 * k + 1])
        REQUIRE(r.condition[k] == Ternary::any);
      else
        REQUIRE(static_cast<std::uint8_t>(r.condition[k]) == obs[2 * k]);
    }
  }
}

TEST_CASE("decode_interval examples") {
  std::vector<double> obs = {0.3, 0.7, 0.6};
  IntervalRule r = decode_interval(obs, 1, 1);
  CHECK(r.condition == std::vector<Interval>{{0.3, 0.7}});
  CHECK(r.action == std::vector<std::uint8_t>{1});

  obs = {0.8, 0.2, 0.4};
  r = decode_interval(obs, 1, 1);
  CHECK(r.condition == std::vector<Interval>{{0.2, 0.8}});
  CHECK(r.action == std::vector<std::uint8_t>{0});

  obs = {0.5, 0.5, 0.5};
  r = decode_interval(obs, 1, 1);
  CHECK(r.condition == std::vector<Interval>{{0.5, 0.5}});
  CHECK(r.action == std::vector<std::uint8_t>{1});  // >= threshold goes to 1
}

TEST_CASE("decode_interval always yields ordered bounds") {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int inputs = rng.range(1, 6);
    std::vector<double> obs(2 * inputs + 1);
    for (double& v : obs) v = rng.unit();
    IntervalRule r = decode_interval(obs, inputs, 1);
    for (const Interval& iv : r.condition) REQUIRE(iv.lower <= iv.upper);
  }
}

TEST_CASE("matches examples") {
  TernaryRule t{cond("1#0"), {1}, 0};
  CHECK(matches(t, std::vector<std::uint8_t>{1, 1, 0}));
  CHECK_FALSE(matches(t, std::vector<std::uint8_t>{0, 1, 0}));

  IntervalRule iv{{{0.2, 0.8}}, {1}, 0};
  CHECK(matches(iv, std::vector<double>{0.8}));  // closed upper bound
  CHECK(matches(iv, std::vector<double>{0.2}));
  CHECK_FALSE(matches(iv, std::vector<double>{0.81}));
}

TEST_CASE("infer takes the smallest matching cycle") {
  TernaryRuleList list;
  list.rules = {TernaryRule{cond("0#"), {0}, 2}, TernaryRule{cond("01"), {1}, 5}};
  std::vector<std::uint8_t> in = {0, 1};
  auto out = infer<TernaryRule, std::uint8_t>(list, in);
  REQUIRE(out);
  CHECK(*out == std::vector<std::uint8_t>{0});

  TernaryRuleList empty;
  CHECK_FALSE(infer<TernaryRule, std::uint8_t>(empty, in).has_value());

  TernaryRuleList nomatch;
  nomatch.rules = {TernaryRule{cond("11"), {1}, 0}};
  std::vector<std::uint8_t> zeros = {0, 0};
  CHECK_FALSE(infer<TernaryRule, std::uint8_t>(nomatch, zeros).has_value());
}

TEST_CASE("infer agrees with the brute-force oracle") {
  Rng rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const int inputs = rng.range(1, 5);
    TernaryRuleList list;
    const int n = rng.range(0, 8);
    for (int i = 0; i < n; ++i) {
      TernaryRule r;
      for (int k = 0; k < inputs; ++k)
        r.condition.push_back(static_cast<Ternary>(rng.below(3)));
      r.action = {static_cast<std::uint8_t>(rng.below(2))};
      r.cycle = i;
      list.rules.push_back(r);
    }
    std::vector<std::uint8_t> in(inputs);
    for (auto& b : in) b = static_cast<std::uint8_t>(rng.below(2));
    REQUIRE(infer<TernaryRule, std::uint8_t>(list, in) ==
            infer_oracle<TernaryRule, std::uint8_t>(list, in));
  }
  for (int trial = 0; trial < 2000; ++trial) {
    const int inputs = rng.range(1, 4);
    IntervalRuleList list;
    const int n = rng.range(0, 8);
    for (int i = 0; i < n; ++i) {
      IntervalRule r;
      for (int k = 0; k < inputs; ++k) {
        double a = rng.unit(), b = rng.unit();
        r.condition.push_back({std::min(a, b), std::max(a, b)});
      }
      r.action = {static_cast<std::uint8_t>(rng.below(2))};
      r.cycle = i;
      list.rules.push_back(r);
    }
    std::vector<double> in(inputs);
    for (double& v : in) v = rng.unit();
    REQUIRE(infer<IntervalRule, double>(list, in) ==
            infer_oracle<IntervalRule, double>(list, in));
  }
}

TEST_CASE("build_rule_list produces one rule per cycle") {
  std::vector<std::vector<double>> traj = {{1, 1, 0, 0, 1}};
  auto single = build_ternary_rule_list(traj, 2, 1);
  REQUIRE(single.size() == 1);
  CHECK(single.rules[0].cycle == 0);

  traj.assign(20, {1, 0, 1, 0, 0});
  auto list = build_ternary_rule_list(traj, 2, 1);
  REQUIRE(list.size() == 20);
  for (int t = 0; t < 20; ++t) REQUIRE(list.rules[t].cycle == t);

  // Identical observations: inference resolves to cycle 0's action.
  std::vector<std::uint8_t> in = {1, 1};
  auto out = infer<TernaryRule, std::uint8_t>(list, in);
  REQUIRE(out);
  CHECK(*out == list.rules[0].action);
}

TEST_CASE("all-wildcard and full-interval rules match everything") {
  Rng rng(14);
  TernaryRule t{cond("#####"), {1}, 0};
  IntervalRule iv{{{0, 1}, {0, 1}, {0, 1}}, {1}, 0};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> bits(5);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    REQUIRE(matches(t, bits));
    std::vector<double> v(3);
    for (double& x : v) x = rng.unit();
    REQUIRE(matches(iv, v));
  }
}
