#include <doctest.h>

#include <algorithm>

#include "cfsem/errors.hpp"
#include "support/testutil.hpp"

using namespace cfsem;
using namespace cfsem::test;

namespace {

std::set<std::pair<std::string, std::string>> named_pairs(const CausalGraph& graph,
                                                          const DependencyRelation& rel) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [from, to] : rel.pairs)
    out.emplace(graph.var(from).name, graph.var(to).name);
  return out;
}

const std::set<std::pair<std::string, std::string>> kOriginalDeps = {
    {"C", "X"}, {"C", "Y"}, {"C", "D"}, {"X", "D"}, {"Y", "D"}};

}  // namespace

TEST_CASE("dependency relation of the squad model matches in both modes") {
  ProbabilisticModel m = execution_model();
  for (auto mode : {DependenceMode::Probabilistic, DependenceMode::Structural}) {
    DependencyRelation rel = dependencies(m, mode);
    CHECK(rel.universe_size() == 12);
    CHECK(rel.pairs.size() == 5);
    CHECK(named_pairs(m.graph, rel) == kOriginalDeps);
  }
}

TEST_CASE("submodel dependency columns match in both modes") {
  ProbabilisticModel m = execution_model();
  const std::set<std::pair<std::string, std::string>> x0_deps = {
      {"C", "Y"}, {"C", "D"}, {"X", "D"}, {"Y", "D"}};
  const std::set<std::pair<std::string, std::string>> y0_deps = {
      {"C", "X"}, {"C", "D"}, {"X", "D"}, {"Y", "D"}};
  const std::set<std::pair<std::string, std::string>> xy_deps = {{"X", "D"}, {"Y", "D"}};

  for (auto mode : {DependenceMode::Probabilistic, DependenceMode::Structural}) {
    CHECK(named_pairs(m.graph, dependencies(apply_probabilistic(m, do_of(m, "X=0")), mode)) ==
          x0_deps);
    CHECK(named_pairs(m.graph, dependencies(apply_probabilistic(m, do_of(m, "Y=0")), mode)) ==
          y0_deps);
    CHECK(named_pairs(m.graph,
                      dependencies(apply_probabilistic(m, do_of(m, "X=0 & Y=0")), mode)) ==
          xy_deps);
  }
}

TEST_CASE("an edgeless model has no dependencies") {
  ModelSpec spec;
  spec.variables = {{"A", {0, 1}}, {"B", {0, 1}}};
  spec.cpt_rows = {{"A", {}, {{0, rat("0.5")}, {1, rat("0.5")}}},
                   {"B", {}, {{0, rat("0.3")}, {1, rat("0.7")}}}};
  ProbabilisticModel m = to_probabilistic(spec);
  CHECK(dependencies(m).pairs.empty());
  CHECK(dependencies(m, DependenceMode::Structural).pairs.empty());
}

TEST_CASE("distances on the squad submodels") {
  ProbabilisticModel m = execution_model();
  CHECK(distance(m, apply_probabilistic(m, do_of(m, "X=0"))) == Rational(1, 12));
  CHECK(distance(m, apply_probabilistic(m, do_of(m, "Y=0"))) == Rational(1, 12));
  CHECK(distance(m, apply_probabilistic(m, do_of(m, "X=0 & Y=0"))) == Rational(3, 12));
  CHECK(distance(m, m) == Rational(0));

  ModelSpec other;
  other.variables = {{"A", {0, 1}}};
  other.cpt_rows = {{"A", {}, {{0, rat("0.5")}, {1, rat("0.5")}}}};
  CHECK_THROWS_AS(distance(m, to_probabilistic(other)), UsageError);
}

TEST_CASE("inverse-distance weights for the disjunctive antecedent") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet tms = truthmakers(parse_formula("X=0 | Y=0"), m.graph);
  WeightedSubmodels ws = weights(m, tms, WeightingStrategy::InverseDistance);
  REQUIRE(ws.items.size() == 3);
  CHECK_FALSE(ws.zero_distance_rule_applied);

  Rational sum = 0;
  for (const auto& item : ws.items) {
    sum += item.weight;
    if (item.intervention.size() == 2) {
      CHECK(item.distance == Rational(1, 4));
      CHECK(item.weight == Rational(1, 7));
    } else {
      CHECK(item.distance == Rational(1, 12));
      CHECK(item.weight == Rational(3, 7));
    }
  }
  CHECK(sum == Rational(1));
}

TEST_CASE("zero-distance members absorb all weight") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet tms = truthmakers(parse_formula("C=0 | X=0"), m.graph);
  REQUIRE(tms.size() == 3);
  WeightedSubmodels ws = weights(m, tms, WeightingStrategy::InverseDistance);
  CHECK(ws.zero_distance_rule_applied);
  for (const auto& item : ws.items) {
    if (item.intervention == do_of(m, "C=0")) {
      CHECK(item.distance == Rational(0));  // no edge removed: C is exogenous
      CHECK(item.weight == Rational(1));
    } else {
      CHECK(item.distance == Rational(1, 12));
      CHECK(item.weight == Rational(0));
    }
  }
}

TEST_CASE("weighting strategies") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet tms = truthmakers(parse_formula("X=0 | Y=0"), m.graph);

  WeightedSubmodels uniform = weights(m, tms, WeightingStrategy::Uniform);
  for (const auto& item : uniform.items) CHECK(item.weight == Rational(1, 3));

  WeightedSubmodels nearest = weights(m, tms, WeightingStrategy::NearestOnly);
  for (const auto& item : nearest.items)
    CHECK(item.weight == (item.intervention.size() == 1 ? Rational(1, 2) : Rational(0)));

  TruthmakerSet single = truthmakers(parse_formula("X=0"), m.graph);
  for (auto strategy : {WeightingStrategy::InverseDistance, WeightingStrategy::Uniform,
                        WeightingStrategy::NearestOnly})
    CHECK(weights(m, single, strategy).items.front().weight == Rational(1));

  TruthmakerSet empty = truthmakers(parse_formula("X=0 & X=1"), m.graph);
  CHECK_THROWS_AS(weights(m, empty, WeightingStrategy::Uniform), SemanticError);
}

TEST_CASE("weighted counterfactual on the squad model") {
  ProbabilisticModel m = execution_model();
  Evidence d1 = evidence(m, "D=1");
  CounterfactualQuery q = parse_query("(X=0 | Y=0) => D=0");

  CfProbabilityResult inv = cf_probability(m, q, d1);
  CHECK(inv.value == Rational(801, 1250));  // 0.6408
  CHECK(inv.lower_bound == Rational(747, 1250));
  CHECK(inv.upper_bound == Rational(9, 10));
  CHECK_FALSE(inv.convexity_violated());
  REQUIRE(inv.breakdown.size() == 3);

  CfProbabilityResult uni = cf_probability(m, q, d1, WeightingStrategy::Uniform);
  CHECK(uni.value == Rational(873, 1250));  // 0.6984

  CfProbabilityResult nearest = cf_probability(m, q, d1, WeightingStrategy::NearestOnly);
  CHECK(nearest.value == Rational(747, 1250));  // both nearest submodels agree

  // structural dependence reproduces the same weights here
  CfProbabilityResult structural =
      cf_probability(m, q, d1, WeightingStrategy::InverseDistance, DependenceMode::Structural);
  CHECK(structural.value == inv.value);
}

TEST_CASE("atomic and conjunctive antecedents reduce to the three-step value") {
  ProbabilisticModel m = execution_model();
  Evidence d1 = evidence(m, "D=1");
  for (auto strategy : {WeightingStrategy::InverseDistance, WeightingStrategy::Uniform,
                        WeightingStrategy::NearestOnly}) {
    CHECK(cf_probability(m, parse_query("X=0 => D=0"), d1, strategy).value ==
          pearl_counterfactual(m, parse_formula("X=0"), parse_formula("D=0"), d1));
    CHECK(cf_probability(m, parse_query("X=0 & Y=0 => D=0"), d1, strategy).value ==
          pearl_counterfactual(m, parse_formula("X=0 & Y=0"), parse_formula("D=0"), d1));
  }
}

TEST_CASE("error paths of the weighted counterfactual") {
  ProbabilisticModel m = execution_model();
  CHECK_THROWS_AS(cf_probability(m, parse_query("X=0 & X=1 => D=0"), Evidence{}),
                  SemanticError);
  ProbabilisticModel forced = apply_probabilistic(m, do_of(m, "D=0"));
  CHECK_THROWS_AS(
      cf_probability(forced, parse_query("X=0 => D=0"), evidence(forced, "D=1")),
      SemanticError);
  CHECK_THROWS_AS(cf_probability(m, parse_query("Q=0 => D=0"), Evidence{}), BindingError);
}

TEST_CASE("breakdown is independent of truthmaker enumeration order") {
  // same antecedent written in different clause orders
  ProbabilisticModel m = execution_model();
  Evidence d1 = evidence(m, "D=1");
  CfProbabilityResult a = cf_probability(m, parse_query("(X=0 | Y=0) => D=0"), d1);
  CfProbabilityResult b = cf_probability(m, parse_query("(Y=0 | X=0) => D=0"), d1);
  CHECK(a.value == b.value);
  CHECK(a.lower_bound == b.lower_bound);
  CHECK(a.upper_bound == b.upper_bound);
}

TEST_CASE("relevance: a disconnected mechanism cannot move the value") {
  // squad model plus an isolated variable Z; perturbing Z's marginal must
  // leave every weighted counterfactual over C,X,Y,D unchanged
  auto build = [](const char* z_prob) {
    ModelSpec spec = load_model_file(fixture_path("execution.cm"));
    spec.variables.push_back(Variable{"Z", {0, 1}});
    ModelSpec::RawCptRow row;
    row.child = "Z";
    row.entries = {{0, rat(z_prob)}, {1, 1 - rat(z_prob)}};
    spec.cpt_rows.push_back(row);
    return to_probabilistic(spec);
  };
  ProbabilisticModel m1 = build("0.5");
  ProbabilisticModel m2 = build("0.125");
  CounterfactualQuery q = parse_query("(X=0 | Y=0) => D=0");
  Evidence e1 = evidence(m1, "D=1");
  Evidence e2 = evidence(m2, "D=1");
  for (auto strategy : {WeightingStrategy::InverseDistance, WeightingStrategy::Uniform,
                        WeightingStrategy::NearestOnly}) {
    CfProbabilityResult r1 = cf_probability(m1, q, e1, strategy);
    CfProbabilityResult r2 = cf_probability(m2, q, e2, strategy);
    CHECK(r1.value == r2.value);
    CHECK(r1.value == cf_probability(execution_model(), q,
                                     evidence(execution_model(), "D=1"), strategy)
                          .value);
  }
}

TEST_CASE("convexity holds on random models under every strategy") {
  Rng rng(6060);
  int checked = 0;
  while (checked < 120) {
    ProbabilisticModel m = random_binary_model(rng, 4);
    Formula antecedent = random_formula(rng, m.graph, 3);
    Formula consequent = random_formula(rng, m.graph, 2);
    TruthmakerSet tms = truthmakers(antecedent, m.graph);
    if (tms.empty()) continue;
    for (auto strategy : {WeightingStrategy::InverseDistance, WeightingStrategy::Uniform,
                          WeightingStrategy::NearestOnly}) {
      CfProbabilityResult r = cf_probability(m, {antecedent, consequent}, Evidence{}, strategy);
      CHECK(r.lower_bound <= r.value);
      CHECK(r.value <= r.upper_bound);
      Rational sum = 0;
      for (const auto& row : r.breakdown) sum += row.weight;
      CHECK(sum == Rational(1));
    }
    ++checked;
  }
}

TEST_CASE("two-truthmaker biconditional antecedent averages its submodels") {
  // binary A and B with child C
  ModelSpec spec;
  spec.variables = {{"A", {0, 1}}, {"B", {0, 1}}, {"C", {0, 1}}};
  spec.parents = {{"C", {"A", "B"}}};
  spec.cpt_rows = {
      {"A", {}, {{0, rat("0.4")}, {1, rat("0.6")}}},
      {"B", {}, {{0, rat("0.7")}, {1, rat("0.3")}}},
      {"C", {{"A", 0}, {"B", 0}}, {{0, rat("0.9")}, {1, rat("0.1")}}},
      {"C", {{"A", 0}, {"B", 1}}, {{0, rat("0.6")}, {1, rat("0.4")}}},
      {"C", {{"A", 1}, {"B", 0}}, {{0, rat("0.3")}, {1, rat("0.7")}}},
      {"C", {{"A", 1}, {"B", 1}}, {{0, rat("0.2")}, {1, rat("0.8")}}},
  };
  ProbabilisticModel m = to_probabilistic(spec);

  CounterfactualQuery q = parse_query("((A=1 & B=1) | (A=0 & B=0)) => C=1");
  CfProbabilityResult r = cf_probability(m, q, Evidence{});
  REQUIRE(r.breakdown.size() == 2);
  CHECK(r.breakdown[0].weight == Rational(1, 2));
  CHECK(r.breakdown[1].weight == Rational(1, 2));

  Rational p11 = do_prob(m, do_of(m, "A=1 & B=1"), parse_formula("C=1"));
  Rational p00 = do_prob(m, do_of(m, "A=0 & B=0"), parse_formula("C=1"));
  CHECK(r.value == (p11 + p00) / 2);
  CHECK(r.value == Rational(8, 10) / 2 + Rational(1, 10) / 2);
}

TEST_CASE("multi-valued variables work end to end") {
  // ternary signal feeding a binary outcome
  ModelSpec spec;
  spec.variables = {{"S", {0, 1, 2}}, {"O", {0, 1}}};
  spec.parents = {{"O", {"S"}}};
  spec.cpt_rows = {
      {"S", {}, {{0, rat("0.2")}, {1, rat("0.3")}, {2, rat("0.5")}}},
      {"O", {{"S", 0}}, {{0, rat("0.9")}, {1, rat("0.1")}}},
      {"O", {{"S", 1}}, {{0, rat("0.5")}, {1, rat("0.5")}}},
      {"O", {{"S", 2}}, {{0, rat("0.1")}, {1, rat("0.9")}}},
  };
  ProbabilisticModel m = to_probabilistic(spec);

  TruthmakerSet tms = truthmakers(parse_formula("S=0 | S=1"), m.graph);
  CHECK(tms.size() == 2);  // the fusion of the two is inconsistent
  TruthmakerSet fm = falsemakers(parse_formula("S=0"), m.graph);
  CHECK(fm.size() == 2);  // do(S=1), do(S=2)

  CfProbabilityResult r = cf_probability(m, parse_query("(S=0 | S=1) => O=1"), Evidence{});
  REQUIRE(r.breakdown.size() == 2);
  // both truthmakers intervene on S alone: identical distances, equal weights
  CHECK(r.breakdown[0].weight == Rational(1, 2));
  CHECK(r.value == (Rational(1, 10) + Rational(1, 2)) / 2);
  CHECK(r.lower_bound <= r.value);
  CHECK(r.value <= r.upper_bound);
}

TEST_CASE("counterfactual truth at the deterministic model") {
  DeterministicModel m = execution_det_model();
  CHECK_FALSE(briggs_truth(m, parse_query("(X=0 | Y=0) => D=0")));
  CHECK(briggs_truth(m, parse_query("(X=0 & Y=0) => D=0")));
  CHECK(briggs_truth(m, parse_query("X=0 => X=0")));
  CHECK(briggs_truth(m, parse_query("C=0 => D=0")));
  CHECK_FALSE(briggs_truth(m, parse_query("X=0 => D=0")));
  CHECK_THROWS_AS(briggs_truth(m, parse_query("X=0 & X=1 => D=0")), SemanticError);
}
