#include <doctest.h>

#include "cfsem/errors.hpp"
#include "support/testutil.hpp"

using namespace cfsem;
using namespace cfsem::test;

TEST_CASE("fusion unions consistent assignments") {
  ProbabilisticModel m = execution_model();
  Intervention x0 = do_of(m, "X=0");
  Intervention y0 = do_of(m, "Y=0");
  Intervention both = do_of(m, "X=0 & Y=0");

  CHECK(fuse(x0, y0) == both);
  CHECK(fuse(x0, x0) == x0);
  CHECK_THROWS_AS(fuse(do_of(m, "X=0"), do_of(m, "X=1")), SemanticError);
  CHECK_FALSE(try_fuse(do_of(m, "X=0"), do_of(m, "X=1")).has_value());
}

TEST_CASE("fusion is a partial commutative monoid with unit do()") {
  ProbabilisticModel m = execution_model();
  Intervention unit;
  Intervention a = do_of(m, "X=0");
  Intervention b = do_of(m, "Y=0");
  Intervention c = do_of(m, "C=1");
  CHECK(fuse(a, unit) == a);
  CHECK(fuse(unit, a) == a);
  CHECK(fuse(a, b) == fuse(b, a));
  CHECK(fuse(fuse(a, b), c) == fuse(a, fuse(b, c)));
  CHECK(fuse(a, a) == a);
}

TEST_CASE("deterministic submodels recompute downstream values") {
  DeterministicModel m = execution_det_model();

  DeterministicModel saved = m;
  DeterministicModel sub = apply_deterministic(m, do_of(execution_model(), "X=0 & Y=0"));
  CHECK(m == saved);  // input untouched
  CHECK(eval_static(sub, parse_formula("D=0")));
  CHECK(eval_static(sub, parse_formula("C=1")));

  // do(C=0) propagates through every mechanism
  DeterministicModel c0 = apply_deterministic(m, do_of(execution_model(), "C=0"));
  CHECK(eval_static(c0, parse_formula("X=0 & Y=0 & D=0")));

  // empty intervention is the identity
  CHECK(apply_deterministic(m, Intervention{}) == m);

  // a single soldier is not enough to save the prisoner
  DeterministicModel x0 = apply_deterministic(m, do_of(execution_model(), "X=0"));
  CHECK(eval_static(x0, parse_formula("D=1")));
  CHECK_FALSE(x0.equations[x0.graph.require("X")].has_value());
}

TEST_CASE("probabilistic submodels cut edges and force point masses") {
  ProbabilisticModel m = execution_model();
  ProbabilisticModel sub = apply_probabilistic(m, do_of(m, "X=0"));

  std::size_t x = sub.graph.require("X");
  CHECK(sub.graph.parents(x).empty());
  CHECK(sub.cpts[x].rows.size() == 1);
  CHECK(sub.cpts[x].rows[0][0] == Rational(1));
  CHECK(sub.cpts[x].rows[0][1] == Rational(0));
  // D's mechanism intact
  std::size_t d = sub.graph.require("D");
  CHECK(sub.cpts[d] == m.cpts[d]);
  CHECK(sub.graph.parents(d) == m.graph.parents(d));

  CHECK(apply_probabilistic(m, Intervention{}) == m);

  ProbabilisticModel both = apply_probabilistic(m, do_of(m, "X=0 & Y=0"));
  CHECK(both.graph.parents(both.graph.require("Y")).empty());
  CHECK(both.cpts[d] == m.cpts[d]);

  CHECK_THROWS_AS(apply_probabilistic(m, do_of(m, "X=0 & X=1")), SemanticError);
}

TEST_CASE("out-of-range forcing is a hard error") {
  ProbabilisticModel m = execution_model();
  Assignment a;
  a.bind(m.graph.require("X"), 7);
  CHECK_THROWS_AS(apply_probabilistic(m, Intervention(a)), BindingError);
  CHECK_THROWS_AS(apply_deterministic(execution_det_model(), Intervention(a)), BindingError);
}

TEST_CASE("intervening on an exogenous variable deletes no edges") {
  ProbabilisticModel m = execution_model();
  ProbabilisticModel sub = apply_probabilistic(m, do_of(m, "C=0"));
  CHECK(sub.graph == m.graph);  // C had no incoming edges; children keep theirs
  std::size_t c = sub.graph.require("C");
  CHECK(sub.cpts[c].rows[0][0] == Rational(1));
}

TEST_CASE("applying a fusion equals applying the parts in sequence") {
  Rng rng(314);
  for (int iter = 0; iter < 40; ++iter) {
    ProbabilisticModel m = random_binary_model(rng, 4);
    Formula c1 = random_conjunction(rng, m.graph);
    Formula c2 = random_conjunction(rng, m.graph);
    Intervention i1 = intervention_from_conjunction(c1, m.graph);
    Intervention i2 = intervention_from_conjunction(c2, m.graph);
    auto fused = try_fuse(i1, i2);
    if (!fused) continue;
    CHECK(apply_probabilistic(m, *fused) ==
          apply_probabilistic(apply_probabilistic(m, i1), i2));
  }

  DeterministicModel dm = execution_det_model();
  ProbabilisticModel pm = execution_model();
  for (const char* a : {"X=0", "C=0", "Y=1"})
    for (const char* b : {"Y=0", "D=1", "C=0"}) {
      auto fused = try_fuse(do_of(pm, a), do_of(pm, b));
      if (!fused) continue;
      CHECK(apply_deterministic(dm, *fused) ==
            apply_deterministic(apply_deterministic(dm, do_of(pm, a)), do_of(pm, b)));
    }
}

TEST_CASE("submodel Cpt rows stay normalized") {
  Rng rng(2718);
  for (int iter = 0; iter < 40; ++iter) {
    ProbabilisticModel m = random_binary_model(rng, 4);
    Intervention i = intervention_from_conjunction(random_conjunction(rng, m.graph), m.graph);
    ProbabilisticModel sub = apply_probabilistic(m, i);
    for (const auto& cpt : sub.cpts)
      for (const auto& row : cpt.rows) {
        Rational sum = 0;
        for (const auto& p : row) sum += p;
        CHECK(sum == Rational(1));
      }
  }
}
