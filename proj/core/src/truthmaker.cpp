#include "cfsem/truthmaker.hpp"

#include <algorithm>
#include <set>

#include "cfsem/errors.hpp"

namespace cfsem {

namespace {

using InterventionSet = std::set<Intervention>;

InterventionSet truthmakers_rec(const Formula& f, const CausalGraph& graph);
InterventionSet falsemakers_rec(const Formula& f, const CausalGraph& graph);

InterventionSet fusions(const InterventionSet& a, const InterventionSet& b) {
  InterventionSet out;
  for (const auto& t : a)
    for (const auto& u : b)
      if (auto fused = try_fuse(t, u)) out.insert(*std::move(fused));
  return out;
}

InterventionSet unite(InterventionSet a, const InterventionSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

InterventionSet truthmakers_rec(const Formula& f, const CausalGraph& graph) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::size_t var = graph.require(f.var());
      if (!graph.var(var).value_index(f.value()))
        throw BindingError("value " + std::to_string(f.value()) + " outside the range of '" +
                           f.var() + "'");
      Assignment a;
      a.bind(var, f.value());
      return {Intervention(std::move(a))};
    }
    case Formula::Kind::Not:
      return falsemakers_rec(f.child(), graph);
    case Formula::Kind::And:
      return fusions(truthmakers_rec(f.left(), graph), truthmakers_rec(f.right(), graph));
    case Formula::Kind::Or: {
      InterventionSet lhs = truthmakers_rec(f.left(), graph);
      InterventionSet rhs = truthmakers_rec(f.right(), graph);
      InterventionSet both = fusions(lhs, rhs);
      return unite(unite(std::move(lhs), rhs), both);
    }
  }
  return {};
}

InterventionSet falsemakers_rec(const Formula& f, const CausalGraph& graph) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::size_t var = graph.require(f.var());
      const Variable& v = graph.var(var);
      if (!v.value_index(f.value()))
        throw BindingError("value " + std::to_string(f.value()) + " outside the range of '" +
                           f.var() + "'");
      InterventionSet out;
      for (int other : v.range) {
        if (other == f.value()) continue;
        Assignment a;
        a.bind(var, other);
        out.insert(Intervention(std::move(a)));
      }
      return out;
    }
    case Formula::Kind::Not:
      return truthmakers_rec(f.child(), graph);
    case Formula::Kind::And: {
      InterventionSet lhs = falsemakers_rec(f.left(), graph);
      InterventionSet rhs = falsemakers_rec(f.right(), graph);
      InterventionSet both = fusions(lhs, rhs);
      return unite(unite(std::move(lhs), rhs), both);
    }
    case Formula::Kind::Or:
      return fusions(falsemakers_rec(f.left(), graph), falsemakers_rec(f.right(), graph));
  }
  return {};
}

TruthmakerSet pack(const Formula& f, InterventionSet members) {
  TruthmakerSet out{f, {}};
  out.members.assign(members.begin(), members.end());
  // smaller interventions first, then assignment order
  std::sort(out.members.begin(), out.members.end(),
            [](const Intervention& a, const Intervention& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return out;
}

}  // namespace

TruthmakerSet truthmakers(const Formula& f, const CausalGraph& graph) {
  return pack(f, truthmakers_rec(f, graph));
}

TruthmakerSet falsemakers(const Formula& f, const CausalGraph& graph) {
  return pack(f, falsemakers_rec(f, graph));
}

}  // namespace cfsem
