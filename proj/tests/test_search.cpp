#include <catch2/catch_amalgamated.hpp>

#include "grnrules/search.hpp"

using namespace grnrules;

namespace {

NodeGene node(int c0, int c1, int fid, double start) {
  return NodeGene{{c0, c1}, fid, start};
}

std::vector<Individual> pop_with_qualities(std::vector<int> qs) {
  std::vector<Individual> pop(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) pop[i].quality = qs[i];
  return pop;
}

}  // namespace

TEST_CASE("select_model: proportional, with uniform zero-sum fallback") {
  Rng rng(1);
  auto sure = pop_with_qualities({10, 0});
  for (int i = 0; i < 100; ++i) REQUIRE(select_model(sure, rng) == 0);

  auto zeros = pop_with_qualities({0, 0, 0});
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) ++counts[select_model(zeros, rng)];
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }

  // Empirical 3:1 split, chi-squared against the stated distribution.
  auto biased = pop_with_qualities({30, 10});
  const int n = 100000;
  int first = 0;
  for (int i = 0; i < n; ++i)
    if (select_model(biased, rng) == 0) ++first;
  const double exp0 = 0.75 * n, exp1 = 0.25 * n;
  const double chi2 = (first - exp0) * (first - exp0) / exp0 +
                      (n - first - exp1) * (n - first - exp1) / exp1;
  CHECK(chi2 < 10.83);  // p = 0.001 critical value, 1 dof
}

TEST_CASE("prefer: quality, then size, then cycles, then coin") {
  Rng rng(2);
  CHECK(prefer(10, 9, 30, 8, 5, 3, rng));
  CHECK(prefer(10, 7, 12, 10, 9, 3, rng));
  CHECK_FALSE(prefer(9, 1, 1, 10, 9, 9, rng));
  CHECK_FALSE(prefer(10, 9, 1, 10, 7, 12, rng));
  CHECK(prefer(10, 7, 3, 10, 7, 12, rng));
  CHECK_FALSE(prefer(10, 7, 12, 10, 7, 3, rng));
  // Full tie: fair coin over seeded repetitions.
  int adopted = 0;
  for (int i = 0; i < 10000; ++i)
    if (prefer(10, 7, 12, 10, 7, 12, rng)) ++adopted;
  CHECK(adopted > 4700);
  CHECK(adopted < 5300);
  // Ruleset modes: no cycles tier, equal size goes to the coin.
  adopted = 0;
  for (int i = 0; i < 10000; ++i)
    if (prefer(5, 3, std::nullopt, 5, 3, std::nullopt, rng)) ++adopted;
  CHECK(adopted > 4700);
  CHECK(adopted < 5300);
}

TEST_CASE("network connection copy, exact and with error") {
  Rng seed_rng(3);
  NetworkGenome copier = init_random_genome(Logic::boolean, 10, 2, seed_rng);
  NetworkGenome model = init_random_genome(Logic::boolean, 10, 2, seed_rng);
  copier.nodes[3].connections[1] = 7;
  model.nodes[3].connections[1] = 2;

  // Exact copy lands the model's value at the drawn node/slot.
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(trial);
    NetworkGenome v = apply_network_op(copier, model, NetworkOp::connection,
                                       false, rng, 5);
    for (int i = 0; i < 10; ++i)
      for (int s = 0; s < 2; ++s)
        if (v.nodes[i].connections[s] != copier.nodes[i].connections[s])
          REQUIRE(v.nodes[i].connections[s] ==
                  std::clamp(model.nodes[i].connections[s], 0, 9));
  }

  // Error variant: next or previous node, both observed, nothing else.
  bool saw_up = false, saw_down = false;
  for (int trial = 0; trial < 400; ++trial) {
    Rng rng(trial);
    NetworkGenome v =
        apply_network_op(copier, model, NetworkOp::connection, true, rng, 5);
    if (v.nodes[3].connections[1] != copier.nodes[3].connections[1]) {
      REQUIRE((v.nodes[3].connections[1] == 1 ||
               v.nodes[3].connections[1] == 3));
      saw_up |= v.nodes[3].connections[1] == 3;
      saw_down |= v.nodes[3].connections[1] == 1;
    }
  }
  CHECK(saw_up);
  CHECK(saw_down);
}

TEST_CASE("network size growth copies the model's first extra node") {
  Rng seed_rng(4);
  NetworkGenome copier = init_random_genome(Logic::boolean, 5, 2, seed_rng);
  NetworkGenome model = init_random_genome(Logic::boolean, 9, 2, seed_rng);
  Rng rng(5);
  NetworkGenome v =
      apply_network_op(copier, model, NetworkOp::size, false, rng, 5);
  REQUIRE(v.size() == 6);
  CHECK(v.nodes[5].function_id == model.nodes[5].function_id);
  CHECK(v.nodes[5].start_state == model.nodes[5].start_state);
  for (int s = 0; s < 2; ++s)
    CHECK(v.nodes[5].connections[s] ==
          std::clamp(model.nodes[5].connections[s], 0, 5));
  // One pre-existing node was rewired to the new node.
  int rewired = 0;
  for (int i = 0; i < 5; ++i)
    for (int s = 0; s < 2; ++s)
      if (v.nodes[i].connections[s] == 5) ++rewired;
  CHECK(rewired >= 1);
}

TEST_CASE("network size shrink removes the last node and rewires") {
  Rng seed_rng(6);
  NetworkGenome copier = init_random_genome(Logic::boolean, 8, 2, seed_rng);
  NetworkGenome model = init_random_genome(Logic::boolean, 5, 2, seed_rng);
  Rng rng(7);
  NetworkGenome v =
      apply_network_op(copier, model, NetworkOp::size, false, rng, 5);
  REQUIRE(v.size() == 7);
  for (const NodeGene& n : v.nodes)
    for (int c : n.connections) {
      REQUIRE(c >= 0);
      REQUIRE(c < 7);
    }
}

TEST_CASE("size operator is a no-op at the bounds") {
  Rng seed_rng(8);
  NetworkGenome small = init_random_genome(Logic::boolean, 5, 2, seed_rng);
  NetworkGenome smaller = init_random_genome(Logic::boolean, 5, 2, seed_rng);
  NetworkGenome big = init_random_genome(Logic::boolean, 100, 2, seed_rng);
  Rng rng(9);
  // At min size with an equal-size model, deletion must not happen.
  for (int trial = 0; trial < 50; ++trial) {
    NetworkGenome v =
        apply_network_op(small, smaller, NetworkOp::size, false, rng, 5);
    REQUIRE(v.size() >= 5);
  }
  NetworkGenome v = apply_network_op(big, big, NetworkOp::size, false, rng, 5);
  REQUIRE(v.size() <= 100);
}

TEST_CASE("T copy steps the other way at the range edge") {
  Rng seed_rng(10);
  NetworkGenome copier = init_random_genome(Logic::boolean, 5, 2, seed_rng);
  NetworkGenome model = copier;
  model.cycles = 32;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(trial);
    NetworkGenome v =
        apply_network_op(copier, model, NetworkOp::cycle_count, true, rng, 5);
    REQUIRE(v.cycles == 31);
  }
  model.cycles = 1;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(trial);
    NetworkGenome v =
        apply_network_op(copier, model, NetworkOp::cycle_count, true, rng, 5);
    REQUIRE(v.cycles == 2);
  }
}

TEST_CASE("fuzzy start-state error stays in range and within 0.1") {
  Rng seed_rng(11);
  NetworkGenome copier = init_random_genome(Logic::fuzzy, 6, 2, seed_rng);
  NetworkGenome model = init_random_genome(Logic::fuzzy, 6, 2, seed_rng);
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng(trial);
    NetworkGenome v =
        apply_network_op(copier, model, NetworkOp::start_state, true, rng, 6);
    for (int i = 0; i < 6; ++i) {
      const double s = v.nodes[i].start_state;
      REQUIRE(s >= 0.0);
      REQUIRE(s <= 1.0);
      if (s != copier.nodes[i].start_state)
        REQUIRE(std::abs(s - model.nodes[i].start_state) <= 0.1 + 1e-12);
    }
  }
}

TEST_CASE("self-imitation without error is near-identity") {
  Rng seed_rng(12);
  NetworkGenome g = init_random_genome(Logic::boolean, 10, 2, seed_rng);
  int identical = 0;
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(trial);
    NetworkGenome v = vary_network(g, g, rng, 5);
    if (v == g) {
      ++identical;
    } else {
      // Only size change (or an error variant) may alter the genome.
      REQUIRE((v.size() == g.size() - 1 || v.size() == g.size() + 1 ||
               v.size() == g.size()));
    }
  }
  // The four exact non-size operators (4/10 of draws) are exact identities.
  CHECK(identical > trials / 4);
}

TEST_CASE("ternary ruleset component copy and error") {
  Rng seed_rng(13);
  TernaryRuleSetGenome copier = init_random_ternary_ruleset(4, 1, seed_rng);
  TernaryRuleSetGenome model = init_random_ternary_ruleset(4, 1, seed_rng);
  copier.rules.resize(3, copier.rules[0]);
  model.rules.resize(3, model.rules[0]);
  model.rules[2].condition[1] = Ternary::any;

  for (int trial = 0; trial < 300; ++trial) {
    Rng rng(trial);
    TernaryRuleSetGenome v = apply_ruleset_op(copier, model, false, false, rng);
    REQUIRE(v.size() == 3);
    // Every changed component equals the model's value.
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 4; ++k)
        if (v.rules[r].condition[k] != copier.rules[r].condition[k])
          REQUIRE(v.rules[r].condition[k] == model.rules[r].condition[k]);
      if (v.rules[r].action[0] != copier.rules[r].action[0])
        REQUIRE(v.rules[r].action[0] == model.rules[r].action[0]);
    }
  }

  // Error on a '1' symbol yields 0 or '#', both observed.
  copier.rules[0].condition[0] = Ternary::zero;
  model.rules[0].condition.assign(4, Ternary::one);
  bool saw_zero = false, saw_any = false;
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng(trial);
    TernaryRuleSetGenome v = apply_ruleset_op(copier, model, false, true, rng);
    for (int k = 0; k < 4; ++k) {
      const Ternary s = v.rules[0].condition[k];
      if (s != copier.rules[0].condition[k]) {
        REQUIRE(s != Ternary::one);
        saw_zero |= s == Ternary::zero;
        saw_any |= s == Ternary::any;
      }
    }
  }
  CHECK(saw_zero);
  CHECK(saw_any);
}

TEST_CASE("ruleset size change mirrors the network rule") {
  Rng seed_rng(14);
  TernaryRuleSetGenome copier = init_random_ternary_ruleset(3, 1, seed_rng);
  TernaryRuleSetGenome model = init_random_ternary_ruleset(3, 1, seed_rng);
  copier.rules.resize(3, copier.rules[0]);
  model.rules.resize(1);
  Rng rng(15);
  TernaryRuleSetGenome v = apply_ruleset_op(copier, model, true, false, rng);
  REQUIRE(v.size() == 2);
  for (int r = 0; r < 2; ++r) REQUIRE(v.rules[r] == copier.rules[r]);

  // Growth appends the model's first extra rule.
  model.rules = copier.rules;
  model.rules.push_back(model.rules[0]);
  model.rules[3].action[0] ^= 1;
  TernaryRuleSetGenome grown = apply_ruleset_op(copier, model, true, false, rng);
  REQUIRE(grown.size() == 4);
  REQUIRE(grown.rules[3] == model.rules[3]);
}

TEST_CASE("interval ruleset ops keep bounds in [0,1]") {
  Rng seed_rng(16);
  IntervalRuleSetGenome copier = init_random_interval_ruleset(3, 2, seed_rng);
  IntervalRuleSetGenome model = init_random_interval_ruleset(3, 2, seed_rng);
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng(trial);
    IntervalRuleSetGenome v =
        apply_ruleset_op(copier, model, trial % 2 == 0, true, rng);
    REQUIRE(ruleset_valid(v));
  }
}

TEST_CASE("randomized variation preserves genome invariants") {
  Rng rng(17);
  NetworkGenome a = init_random_genome(Logic::boolean, 5, 2, rng);
  NetworkGenome b = init_random_genome(Logic::boolean, 5, 2, rng);
  for (int trial = 0; trial < 20000; ++trial) {
    NetworkGenome v = vary_network(a, b, rng, 5);
    REQUIRE(genome_valid(v, 5));
    b = a;
    a = std::move(v);
  }
  NetworkGenome fa = init_random_genome(Logic::fuzzy, 5, 2, rng);
  NetworkGenome fb = init_random_genome(Logic::fuzzy, 5, 2, rng);
  for (int trial = 0; trial < 20000; ++trial) {
    NetworkGenome v = vary_network(fa, fb, rng, 5);
    REQUIRE(genome_valid(v, 5));
    fb = fa;
    fa = std::move(v);
  }
}

TEST_CASE("standard-RBN baseline: constant output node") {
  TaskSpec task{TaskKind::mux, TaskDomain::boolean, 2};
  // Node 6 (the output) is a self-connected XNOR: constant 1 after one step.
  NetworkGenome g;
  g.cycles = 3;
  for (int i = 0; i < 6; ++i) g.nodes.push_back(node(0, 0, fn::kOr, 0.0));
  g.nodes.push_back(node(6, 6, fn::kXnor, 0.0));
  Evaluation ev = evaluate_standard_rbn(g, task);
  CHECK(ev.cases == 64);
  CHECK(ev.quality == 32);

  Evaluation again = evaluate_standard_rbn(g, task);
  CHECK(again.quality == ev.quality);
}

TEST_CASE("standard-RBN baseline: all-AND net with zero starts outputs 0") {
  TaskSpec task{TaskKind::mux, TaskDomain::boolean, 2};
  NetworkGenome g;
  g.cycles = 1;
  for (int i = 0; i < 7; ++i) g.nodes.push_back(node(0, 1, fn::kAnd, 0.0));
  Evaluation ev = evaluate_standard_rbn(g, task);
  // Output is 0 for every case; half the mux targets are 0.
  CHECK(ev.quality == 32);
}

TEST_CASE("run_search: zero budget reports initialization only") {
  TaskSpec task{TaskKind::mux, TaskDomain::boolean, 2};
  SearchConfig cfg;
  cfg.representation = Representation::direct_ternary;
  cfg.generations = 0;
  cfg.seed = 5;
  RunRecord rec = run_search(cfg, task);
  REQUIRE(rec.rows.size() == 1);
  CHECK(rec.rows[0].generation == 0);
  CHECK(rec.rows[0].evaluations == cfg.mu);
  CHECK(rec.rows[0].best_quality == rec.final_quality);
}

TEST_CASE("run_search is deterministic under a fixed seed") {
  TaskSpec task{TaskKind::mux, TaskDomain::boolean, 2};
  SearchConfig cfg;
  cfg.representation = Representation::protein_rbn;
  cfg.generations = 30;
  cfg.seed = 99;
  cfg.stop_at_optimum = false;
  RunRecord a = run_search(cfg, task);
  RunRecord b = run_search(cfg, task);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].evaluations == b.rows[i].evaluations);
    CHECK(a.rows[i].best_quality == b.rows[i].best_quality);
    CHECK(a.rows[i].mean_quality == b.rows[i].mean_quality);
    CHECK(a.rows[i].best_size == b.rows[i].best_size);
    CHECK(a.rows[i].best_cycles == b.rows[i].best_cycles);
  }
  CHECK(a.best_genome == b.best_genome);
  CHECK(a.final_quality == b.final_quality);
}

TEST_CASE("run_search telemetry: mu evaluations per generation, "
          "monotone best quality") {
  TaskSpec task{TaskKind::demux, TaskDomain::boolean, 2};
  SearchConfig cfg;
  cfg.representation = Representation::protein_rbn;
  cfg.generations = 40;
  cfg.seed = 3;
  cfg.stop_at_optimum = false;
  RunRecord rec = run_search(cfg, task);
  REQUIRE(rec.rows.size() == 41);
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    CHECK(rec.rows[i].evaluations ==
          static_cast<long>(cfg.mu) * static_cast<long>(i + 1));
    if (i > 0)
      CHECK(rec.rows[i].best_quality >= rec.rows[i - 1].best_quality);
  }
}

TEST_CASE("run_search on real tasks tracks train and test accuracy") {
  TaskSpec task{TaskKind::mux, TaskDomain::real, 2};
  Dataset data = generate_dataset(task, 200, 200, 77);
  SearchConfig cfg;
  cfg.representation = Representation::direct_interval;
  cfg.generations = 20;
  cfg.seed = 12;
  RunRecord rec = run_search(cfg, task, &data);
  REQUIRE(rec.final_train_accuracy >= 0.0);
  REQUIRE(rec.final_test_accuracy >= 0.0);
  CHECK(rec.final_train_accuracy ==
        static_cast<double>(rec.final_quality) / 200.0);
}
