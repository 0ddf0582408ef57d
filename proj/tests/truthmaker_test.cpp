#include <doctest.h>

#include <algorithm>

#include "cfsem/errors.hpp"
#include "cfsem/truthmaker.hpp"
#include "support/testutil.hpp"

using namespace cfsem;
using namespace cfsem::test;

namespace {

bool has_member(const TruthmakerSet& tms, const Intervention& i) {
  return std::find(tms.members.begin(), tms.members.end(), i) != tms.members.end();
}

}  // namespace

TEST_CASE("disjunction keeps the conjunctive truthmaker") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet tms = truthmakers(parse_formula("X=0 | Y=0"), m.graph);
  CHECK(tms.size() == 3);
  CHECK(has_member(tms, do_of(m, "X=0")));
  CHECK(has_member(tms, do_of(m, "Y=0")));
  CHECK(has_member(tms, do_of(m, "X=0 & Y=0")));
}

TEST_CASE("atoms and biconditional-style antecedents") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet atom = truthmakers(parse_formula("X=0"), m.graph);
  CHECK(atom.size() == 1);
  CHECK(atom.members.front() == do_of(m, "X=0"));

  // A=B expressed as its two-sided expansion over X and Y
  TruthmakerSet eq = truthmakers(parse_formula("(X=1 & Y=1) | (X=0 & Y=0)"), m.graph);
  CHECK(eq.size() == 2);
  CHECK(has_member(eq, do_of(m, "X=1 & Y=1")));
  CHECK(has_member(eq, do_of(m, "X=0 & Y=0")));
}

TEST_CASE("falsemaker clauses") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet fm = falsemakers(parse_formula("X=0"), m.graph);
  CHECK(fm.size() == 1);
  CHECK(fm.members.front() == do_of(m, "X=1"));

  TruthmakerSet fm_or = falsemakers(parse_formula("X=0 | Y=0"), m.graph);
  CHECK(fm_or.size() == 1);
  CHECK(fm_or.members.front() == do_of(m, "X=1 & Y=1"));

  TruthmakerSet dn = truthmakers(parse_formula("!(X=0)"), m.graph);
  CHECK(dn.size() == 1);
  CHECK(dn.members.front() == do_of(m, "X=1"));
}

TEST_CASE("multi-valued falsemakers follow the clause literally") {
  CausalGraph graph;
  graph.add_variable("V", {0, 1, 2});
  graph.add_variable("W", {0, 1});
  TruthmakerSet fm = falsemakers(parse_formula("V=1"), graph);
  CHECK(fm.size() == 2);  // do(V=0) and do(V=2)
}

TEST_CASE("tautologies and contradictions") {
  ProbabilisticModel m = execution_model();
  TruthmakerSet taut = truthmakers(parse_formula("X=0 | X=1"), m.graph);
  CHECK(taut.size() == 2);  // inconsistent fusion silently dropped
  CHECK(has_member(taut, do_of(m, "X=0")));
  CHECK(has_member(taut, do_of(m, "X=1")));

  TruthmakerSet contra = truthmakers(parse_formula("X=0 & X=1"), m.graph);
  CHECK(contra.empty());

  // no member is ever the empty intervention
  for (const auto& i : taut.members) CHECK_FALSE(i.empty());
}

TEST_CASE("unknown variables are binding errors") {
  ProbabilisticModel m = execution_model();
  CHECK_THROWS_AS(truthmakers(parse_formula("Q=0"), m.graph), BindingError);
  CHECK_THROWS_AS(falsemakers(parse_formula("X=9"), m.graph), BindingError);
}

TEST_CASE("duality holds on random formulas") {
  Rng rng(1001);
  int checked = 0;
  while (checked < 500) {
    ProbabilisticModel m = random_binary_model(rng, 4);
    Formula f = random_formula(rng, m.graph, 4);
    TruthmakerSet tm_not = truthmakers(Formula::negation(f), m.graph);
    TruthmakerSet fm = falsemakers(f, m.graph);
    CHECK(tm_not.members == fm.members);
    TruthmakerSet fm_not = falsemakers(Formula::negation(f), m.graph);
    TruthmakerSet tm = truthmakers(f, m.graph);
    CHECK(fm_not.members == tm.members);
    ++checked;
  }
}

TEST_CASE("every truthmaker forces its formula on the deterministic model") {
  Rng rng(555);
  DeterministicModel det = execution_det_model();
  int checked = 0;
  while (checked < 300) {
    Formula f = random_formula(rng, det.graph, 4);
    TruthmakerSet tms = truthmakers(f, det.graph);
    for (const auto& i : tms.members) {
      CHECK(eval_static(apply_deterministic(det, i), f));
      ++checked;
    }
    if (tms.empty()) ++checked;  // unsatisfiable draws still make progress
  }
}

TEST_CASE("members are admissible and deduplicated") {
  Rng rng(808);
  for (int iter = 0; iter < 100; ++iter) {
    ProbabilisticModel m = random_binary_model(rng, 4);
    Formula f = random_formula(rng, m.graph, 4);
    TruthmakerSet tms = truthmakers(f, m.graph);
    for (std::size_t a = 0; a < tms.size(); ++a) {
      CHECK_NOTHROW(check_intervention(tms.members[a], m.graph));
      for (std::size_t b = a + 1; b < tms.size(); ++b)
        CHECK_FALSE(tms.members[a] == tms.members[b]);
    }
  }
}
