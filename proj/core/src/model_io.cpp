#include "cfsem/model_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cfsem/errors.hpp"

namespace cfsem {

namespace {

// Cursor over one logical line.
struct LineScanner {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t lineno = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("line " + std::to_string(lineno) + ": " + message, lineno, true);
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected identifier");
    return std::string(text.substr(start, pos - start));
  }
  int integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(
                                                 text[start]))))
      fail("expected integer");
    return std::stoi(std::string(text.substr(start, pos - start)));
  }
  // number token for probabilities: digits, '.', '/', optional sign
  std::string number_token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == '/' || text[pos] == '-' || text[pos] == '+'))
      ++pos;
    if (pos == start) fail("expected probability");
    return std::string(text.substr(start, pos - start));
  }
};

std::vector<std::pair<std::string, int>> parse_condition(LineScanner& s) {
  // P1=v,P2=v ... up to ':'
  std::vector<std::pair<std::string, int>> cond;
  while (true) {
    std::string name = s.ident();
    s.expect('=');
    int value = s.integer();
    cond.emplace_back(std::move(name), value);
    if (!s.accept(',')) break;
  }
  return cond;
}

}  // namespace

ModelSpec parse_model_text(std::string_view text) {
  ModelSpec spec;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    LineScanner s{raw, 0, lineno};
    if (s.done()) continue;
    std::string keyword = s.ident();

    if (keyword == "var") {
      std::string name = s.ident();
      s.expect(':');
      s.expect('{');
      std::vector<int> range;
      if (!s.accept('}')) {
        while (true) {
          range.push_back(s.integer());
          if (s.accept('}')) break;
          s.expect(',');
        }
      }
      if (!s.done()) s.fail("trailing text after range");
      spec.variables.push_back(Variable{std::move(name), std::move(range)});
    } else if (keyword == "parents") {
      std::string child = s.ident();
      s.expect(':');
      std::vector<std::string> ps;
      while (!s.done()) ps.push_back(s.ident());
      spec.parents.emplace_back(std::move(child), std::move(ps));
    } else if (keyword == "cpt") {
      ModelSpec::RawCptRow row;
      row.child = s.ident();
      if (s.accept('|')) row.condition = parse_condition(s);
      s.expect(':');
      while (!s.done()) {
        int value = s.integer();
        s.expect(':');
        row.entries.emplace_back(value, parse_rational(s.number_token()));
      }
      if (row.entries.empty()) s.fail("cpt row has no entries");
      spec.cpt_rows.push_back(std::move(row));
    } else if (keyword == "eq") {
      ModelSpec::RawEqRow row;
      row.child = s.ident();
      if (s.accept('|')) row.condition = parse_condition(s);
      s.expect(':');
      row.output = s.integer();
      if (!s.done()) s.fail("trailing text after equation output");
      spec.eq_rows.push_back(std::move(row));
    } else if (keyword == "actual") {
      while (!s.done()) {
        std::string name = s.ident();
        s.expect('=');
        spec.actuals.emplace_back(std::move(name), s.integer());
      }
    } else {
      s.fail("unknown keyword '" + keyword + "'");
    }
  }
  if (!spec.cpt_rows.empty() && !spec.eq_rows.empty())
    throw ParseError("model mixes cpt and eq lines", 0, true);
  return spec;
}

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

std::string print_model(const ModelSpec& spec) {
  std::ostringstream out;
  for (const auto& v : spec.variables) {
    out << "var " << v.name << " : {";
    for (std::size_t i = 0; i < v.range.size(); ++i) out << (i ? "," : "") << v.range[i];
    out << "}\n";
  }
  for (const auto& [child, ps] : spec.parents) {
    if (ps.empty()) continue;
    out << "parents " << child << " :";
    for (const auto& p : ps) out << " " << p;
    out << "\n";
  }
  auto condition = [&](const std::vector<std::pair<std::string, int>>& cond) {
    std::ostringstream c;
    for (std::size_t i = 0; i < cond.size(); ++i)
      c << (i ? "," : "") << cond[i].first << "=" << cond[i].second;
    return c.str();
  };
  for (const auto& row : spec.cpt_rows) {
    out << "cpt " << row.child;
    if (!row.condition.empty()) out << " | " << condition(row.condition);
    out << " :";
    for (const auto& [value, p] : row.entries)
      out << " " << value << ":" << format_fraction(p);
    out << "\n";
  }
  for (const auto& row : spec.eq_rows) {
    out << "eq " << row.child;
    if (!row.condition.empty()) out << " | " << condition(row.condition);
    out << " : " << row.output << "\n";
  }
  if (!spec.actuals.empty()) {
    out << "actual";
    for (const auto& [name, value] : spec.actuals) out << " " << name << "=" << value;
    out << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::pair<std::string, int>> row_condition(const CausalGraph& graph,
                                                       std::size_t child, std::size_t rank) {
  const auto& parents = graph.parents(child);
  std::vector<std::pair<std::string, int>> cond(parents.size());
  for (std::size_t k = parents.size(); k-- > 0;) {
    const Variable& pv = graph.var(parents[k]);
    cond[k] = {pv.name, pv.range[rank % pv.range.size()]};
    rank /= pv.range.size();
  }
  return cond;
}

void spec_graph(const CausalGraph& graph, ModelSpec& spec) {
  for (const auto& v : graph.variables()) spec.variables.push_back(v);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (graph.parents(v).empty()) continue;
    std::vector<std::string> ps;
    for (std::size_t p : graph.parents(v)) ps.push_back(graph.var(p).name);
    spec.parents.emplace_back(graph.var(v).name, std::move(ps));
  }
}

}  // namespace

ModelSpec to_spec(const ProbabilisticModel& m) {
  ModelSpec spec;
  spec_graph(m.graph, spec);
  for (std::size_t v = 0; v < m.graph.size(); ++v) {
    for (std::size_t rank = 0; rank < m.cpts[v].rows.size(); ++rank) {
      ModelSpec::RawCptRow row;
      row.child = m.graph.var(v).name;
      row.condition = row_condition(m.graph, v, rank);
      const auto& range = m.graph.var(v).range;
      for (std::size_t k = 0; k < range.size(); ++k)
        row.entries.emplace_back(range[k], m.cpts[v].rows[rank][k]);
      spec.cpt_rows.push_back(std::move(row));
    }
  }
  return spec;
}

ModelSpec to_spec(const DeterministicModel& m) {
  ModelSpec spec;
  spec_graph(m.graph, spec);
  for (std::size_t v = 0; v < m.graph.size(); ++v) {
    if (!m.equations[v]) continue;
    for (std::size_t rank = 0; rank < m.equations[v]->outputs.size(); ++rank) {
      ModelSpec::RawEqRow row;
      row.child = m.graph.var(v).name;
      row.condition = row_condition(m.graph, v, rank);
      row.output = m.equations[v]->outputs[rank];
      spec.eq_rows.push_back(std::move(row));
    }
  }
  for (std::size_t v = 0; v < m.graph.size(); ++v)
    spec.actuals.emplace_back(m.graph.var(v).name, m.actual[v]);
  return spec;
}

}  // namespace cfsem
