#include "cfsem/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "cfsem/errors.hpp"

namespace cfsem {

bool is_valid_variable_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::optional<std::size_t> Variable::value_index(int value) const {
  auto it = std::find(range.begin(), range.end(), value);
  if (it == range.end()) return std::nullopt;
  return static_cast<std::size_t>(it - range.begin());
}

std::size_t CausalGraph::add_variable(std::string name, std::vector<int> range) {
  std::size_t idx = variables_.size();
  index_.emplace(name, idx);
  variables_.push_back(Variable{std::move(name), std::move(range)});
  parents_.emplace_back();
  return idx;
}

void CausalGraph::set_parents(std::size_t child, std::vector<std::size_t> parents) {
  parents_.at(child) = std::move(parents);
}

std::optional<std::size_t> CausalGraph::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CausalGraph::require(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) throw BindingError("unknown variable '" + std::string(name) + "'");
  return *idx;
}

std::set<std::size_t> CausalGraph::descendants(std::size_t v) const {
  if (v >= size()) throw BindingError("variable index out of range");
  // children adjacency from parent lists
  std::set<std::size_t> out;
  std::deque<std::size_t> frontier{v};
  while (!frontier.empty()) {
    std::size_t cur = frontier.front();
    frontier.pop_front();
    for (std::size_t child = 0; child < size(); ++child) {
      const auto& ps = parents_[child];
      if (std::find(ps.begin(), ps.end(), cur) == ps.end()) continue;
      if (out.insert(child).second) frontier.push_back(child);
    }
  }
  return out;
}

std::set<std::size_t> CausalGraph::descendants_of(const std::set<std::size_t>& vs) const {
  std::set<std::size_t> out;
  for (std::size_t v : vs) {
    auto d = descendants(v);
    out.insert(d.begin(), d.end());
  }
  return out;
}

std::optional<std::vector<std::size_t>> CausalGraph::topological_order() const {
  std::vector<std::size_t> indegree(size(), 0);
  for (std::size_t v = 0; v < size(); ++v) indegree[v] = parents_[v].size();
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::vector<std::size_t> order;
  order.reserve(size());
  while (!ready.empty()) {
    std::size_t cur = ready.front();
    ready.pop_front();
    order.push_back(cur);
    for (std::size_t child = 0; child < size(); ++child) {
      const auto& ps = parents_[child];
      std::size_t count = std::count(ps.begin(), ps.end(), cur);
      if (count == 0) continue;
      indegree[child] -= count;
      if (indegree[child] == 0) ready.push_back(child);
    }
  }
  if (order.size() != size()) return std::nullopt;
  return order;
}

std::size_t CausalGraph::assignment_count() const {
  std::size_t n = 1;
  for (const auto& v : variables_) n *= v.range.size();
  return n;
}

std::set<std::string> descendants(const CausalGraph& graph, std::string_view name) {
  std::set<std::string> out;
  for (std::size_t i : graph.descendants(graph.require(name))) out.insert(graph.var(i).name);
  return out;
}

void Assignment::bind(std::size_t var, int value) {
  auto [it, inserted] = bindings_.emplace(var, value);
  if (!inserted && it->second != value)
    throw std::logic_error("conflicting rebind of variable in assignment");
}

std::optional<int> Assignment::get(std::size_t var) const {
  auto it = bindings_.find(var);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

bool Assignment::consistent_with(const Assignment& other) const {
  const auto& small = bindings_.size() <= other.bindings_.size() ? bindings_ : other.bindings_;
  const auto& large = bindings_.size() <= other.bindings_.size() ? other.bindings_ : bindings_;
  for (const auto& [var, value] : small) {
    auto it = large.find(var);
    if (it != large.end() && it->second != value) return false;
  }
  return true;
}

bool Assignment::satisfied_by(const std::vector<int>& world) const {
  for (const auto& [var, value] : bindings_)
    if (world.at(var) != value) return false;
  return true;
}

std::size_t parent_rank(const CausalGraph& graph, std::size_t child,
                        const std::vector<int>& world) {
  std::size_t rank = 0;
  for (std::size_t p : graph.parents(child)) {
    const Variable& pv = graph.var(p);
    auto vi = pv.value_index(world.at(p));
    if (!vi) throw BindingError("value of '" + pv.name + "' outside its range");
    rank = rank * pv.range.size() + *vi;
  }
  return rank;
}

std::size_t parent_assignment_count(const CausalGraph& graph, std::size_t child) {
  std::size_t n = 1;
  for (std::size_t p : graph.parents(child)) n *= graph.var(p).range.size();
  return n;
}

std::vector<int> forward_evaluate(const CausalGraph& graph,
                                  const std::vector<std::optional<StructuralEquation>>& equations,
                                  const std::vector<int>& actual) {
  auto order = graph.topological_order();
  if (!order) throw UsageError("graph has a cycle; cannot evaluate equations");
  std::vector<int> world = actual;
  for (std::size_t v : *order) {
    if (v < equations.size() && equations[v])
      world[v] = equations[v]->outputs.at(parent_rank(graph, v, world));
  }
  return world;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::string condition_string(const std::vector<std::pair<std::string, int>>& condition) {
  std::ostringstream out;
  for (std::size_t i = 0; i < condition.size(); ++i) {
    if (i) out << ",";
    out << condition[i].first << "=" << condition[i].second;
  }
  return out.str();
}

// Builds the graph a ModelSpec describes; only usable once names, ranges and
// parent references have been validated.
CausalGraph build_graph(const ModelSpec& spec) {
  CausalGraph graph;
  for (const auto& v : spec.variables) graph.add_variable(v.name, v.range);
  for (const auto& [child, parent_names] : spec.parents) {
    std::vector<std::size_t> ps;
    ps.reserve(parent_names.size());
    for (const auto& p : parent_names) ps.push_back(*graph.index_of(p));
    graph.set_parents(*graph.index_of(child), std::move(ps));
  }
  return graph;
}

// Rank of a row condition among the child's parent assignments, or nullopt if
// the condition does not list exactly the declared parents with in-range
// values.
std::optional<std::size_t> condition_rank(const CausalGraph& graph, std::size_t child,
                                          const std::vector<std::pair<std::string, int>>& cond) {
  const auto& parents = graph.parents(child);
  if (cond.size() != parents.size()) return std::nullopt;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    const Variable& pv = graph.var(parents[k]);
    if (cond[k].first != pv.name) return std::nullopt;
    auto vi = pv.value_index(cond[k].second);
    if (!vi) return std::nullopt;
    rank = rank * pv.range.size() + *vi;
  }
  return rank;
}

}  // namespace

ValidationReport validate_model(const ModelSpec& spec) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  // Variable names and ranges.
  std::set<std::string> seen;
  for (const auto& v : spec.variables) {
    if (!is_valid_variable_name(v.name)) fail("invalid variable name '" + v.name + "'");
    if (!seen.insert(v.name).second) fail("duplicate variable '" + v.name + "'");
    if (v.range.size() < 2) fail("variable '" + v.name + "': range must have at least 2 values");
    std::set<int> distinct(v.range.begin(), v.range.end());
    if (distinct.size() != v.range.size())
      fail("variable '" + v.name + "': duplicate value in range");
  }
  if (spec.variables.empty()) fail("model declares no variables");
  if (!report.ok()) return report;  // later checks need a usable symbol table

  CausalGraph graph;
  for (const auto& v : spec.variables) graph.add_variable(v.name, v.range);

  // Parent declarations.
  std::set<std::string> parent_decls;
  bool parents_ok = true;
  for (const auto& [child, parent_names] : spec.parents) {
    if (!graph.index_of(child)) {
      fail("parents declared for unknown variable '" + child + "'");
      parents_ok = false;
      continue;
    }
    if (!parent_decls.insert(child).second)
      fail("duplicate parents declaration for '" + child + "'");
    std::set<std::string> dedupe;
    for (const auto& p : parent_names) {
      if (!graph.index_of(p)) {
        fail("variable '" + child + "': parent '" + p + "' is not declared");
        parents_ok = false;
      }
      if (!dedupe.insert(p).second)
        fail("variable '" + child + "': parent '" + p + "' listed twice");
    }
  }
  if (!parents_ok) return report;

  graph = build_graph(spec);
  if (!graph.topological_order()) {
    fail("cycle: the parent relation has a directed cycle");
    return report;
  }

  if (!spec.cpt_rows.empty() && !spec.eq_rows.empty())
    fail("model mixes cpt and eq mechanisms; it must be fully probabilistic or fully "
         "deterministic");

  if (spec.is_probabilistic()) {
    // Group rows by child, check each against the parent product.
    std::vector<std::map<std::size_t, const ModelSpec::RawCptRow*>> by_child(graph.size());
    for (const auto& row : spec.cpt_rows) {
      auto child = graph.index_of(row.child);
      if (!child) {
        fail("cpt for unknown variable '" + row.child + "'");
        continue;
      }
      auto rank = condition_rank(graph, *child, row.condition);
      if (!rank) {
        fail("cpt " + row.child + " | " + condition_string(row.condition) +
             ": condition does not match the declared parents");
        continue;
      }
      if (!by_child[*child].emplace(*rank, &row).second)
        fail("cpt " + row.child + " | " + condition_string(row.condition) + ": duplicate row");
    }
    for (std::size_t v = 0; v < graph.size(); ++v) {
      const Variable& var = graph.var(v);
      std::size_t expect = parent_assignment_count(graph, v);
      if (by_child[v].size() < expect)
        fail("cpt " + var.name + ": " + std::to_string(by_child[v].size()) + " of " +
             std::to_string(expect) + " rows present");
      for (const auto& [rank, row] : by_child[v]) {
        Rational sum = 0;
        std::set<int> values;
        bool entries_ok = true;
        for (const auto& [value, p] : row->entries) {
          if (!var.value_index(value)) {
            fail("cpt " + var.name + ": entry value " + std::to_string(value) +
                 " outside the range");
            entries_ok = false;
          }
          if (!values.insert(value).second)
            fail("cpt " + var.name + ": duplicate entry for value " + std::to_string(value));
          if (p < 0 || p > 1) {
            fail("cpt " + var.name + ": probability " + format_fraction(p) + " outside [0,1]");
            entries_ok = false;
          }
          sum += p;
        }
        if (entries_ok && sum != 1)
          fail("cpt " + var.name + " | " + condition_string(row->condition) +
               ": row does not sum to 1 (sum = " + format_fraction(sum) + ")");
      }
    }
    if (!spec.actuals.empty())
      fail("probabilistic model must not declare actual values");
  } else {
    // Deterministic: equations for every variable with parents, total rows,
    // outputs in range, actuals total and consistent.
    std::vector<std::map<std::size_t, const ModelSpec::RawEqRow*>> by_child(graph.size());
    for (const auto& row : spec.eq_rows) {
      auto child = graph.index_of(row.child);
      if (!child) {
        fail("eq for unknown variable '" + row.child + "'");
        continue;
      }
      auto rank = condition_rank(graph, *child, row.condition);
      if (!rank) {
        fail("eq " + row.child + " | " + condition_string(row.condition) +
             ": condition does not match the declared parents");
        continue;
      }
      if (!by_child[*child].emplace(*rank, &row).second)
        fail("eq " + row.child + " | " + condition_string(row.condition) + ": duplicate row");
      if (!graph.var(*child).value_index(row.output))
        fail("eq " + row.child + ": output " + std::to_string(row.output) +
             " outside the range");
    }
    for (std::size_t v = 0; v < graph.size(); ++v) {
      if (by_child[v].empty()) {
        if (!graph.is_exogenous(v))
          fail("variable '" + graph.var(v).name + "' has parents but no equation");
        continue;
      }
      std::size_t expect = parent_assignment_count(graph, v);
      if (by_child[v].size() < expect)
        fail("eq " + graph.var(v).name + ": " + std::to_string(by_child[v].size()) + " of " +
             std::to_string(expect) + " rows present");
    }

    std::map<std::string, int> actual;
    for (const auto& [name, value] : spec.actuals) {
      if (!graph.index_of(name)) {
        fail("actual value for unknown variable '" + name + "'");
        continue;
      }
      if (!actual.emplace(name, value).second && actual[name] != value)
        fail("conflicting actual values for '" + name + "'");
      if (!graph.var(*graph.index_of(name)).value_index(value))
        fail("actual " + name + "=" + std::to_string(value) + " outside the range");
    }
    bool total = true;
    for (std::size_t v = 0; v < graph.size(); ++v)
      if (!actual.count(graph.var(v).name)) {
        fail("no actual value for variable '" + graph.var(v).name + "'");
        total = false;
      }

    if (report.ok() && total) {
      std::vector<std::optional<StructuralEquation>> eqs(graph.size());
      for (std::size_t v = 0; v < graph.size(); ++v) {
        if (by_child[v].empty()) continue;
        StructuralEquation eq{v, std::vector<int>(parent_assignment_count(graph, v), 0)};
        for (const auto& [rank, row] : by_child[v]) eq.outputs[rank] = row->output;
        eqs[v] = std::move(eq);
      }
      std::vector<int> declared(graph.size());
      for (std::size_t v = 0; v < graph.size(); ++v) declared[v] = actual[graph.var(v).name];
      std::vector<int> solved = forward_evaluate(graph, eqs, declared);
      for (std::size_t v = 0; v < graph.size(); ++v)
        if (solved[v] != declared[v])
          fail("actual " + graph.var(v).name + "=" + std::to_string(declared[v]) +
               " contradicts its equation (expected " + std::to_string(solved[v]) + ")");
    }
  }

  return report;
}

namespace {

void require_valid(const ModelSpec& spec) {
  ValidationReport report = validate_model(spec);
  if (!report.ok())
    throw UsageError("invalid model: " + report.violations.front());
}

}  // namespace

ProbabilisticModel to_probabilistic(const ModelSpec& spec) {
  if (!spec.is_probabilistic()) throw UsageError("model is deterministic; expected cpt rows");
  require_valid(spec);
  ProbabilisticModel m;
  m.graph = build_graph(spec);
  m.cpts.resize(m.graph.size());
  for (std::size_t v = 0; v < m.graph.size(); ++v) {
    m.cpts[v].child = v;
    m.cpts[v].rows.assign(parent_assignment_count(m.graph, v),
                          std::vector<Rational>(m.graph.var(v).range.size(), 0));
  }
  for (const auto& row : spec.cpt_rows) {
    std::size_t child = *m.graph.index_of(row.child);
    std::size_t rank = *condition_rank(m.graph, child, row.condition);
    for (const auto& [value, p] : row.entries)
      m.cpts[child].rows[rank][*m.graph.var(child).value_index(value)] = p;
  }
  return m;
}

DeterministicModel to_deterministic(const ModelSpec& spec) {
  if (spec.is_probabilistic()) throw UsageError("model is probabilistic; expected eq rows");
  require_valid(spec);
  DeterministicModel m;
  m.graph = build_graph(spec);
  m.equations.resize(m.graph.size());
  std::map<std::size_t, std::map<std::size_t, int>> rows;
  for (const auto& row : spec.eq_rows) {
    std::size_t child = *m.graph.index_of(row.child);
    rows[child][*condition_rank(m.graph, child, row.condition)] = row.output;
  }
  for (const auto& [child, outputs] : rows) {
    StructuralEquation eq{child, std::vector<int>(parent_assignment_count(m.graph, child), 0)};
    for (const auto& [rank, value] : outputs) eq.outputs[rank] = value;
    m.equations[child] = std::move(eq);
  }
  m.actual.resize(m.graph.size());
  for (const auto& [name, value] : spec.actuals) m.actual[*m.graph.index_of(name)] = value;
  return m;
}

}  // namespace cfsem
