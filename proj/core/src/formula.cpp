#include "cfsem/formula.hpp"

#include <cctype>
#include <set>

#include "cfsem/errors.hpp"

namespace cfsem {

struct Formula::Node {
  Kind kind;
  std::string var;  // Atom
  int value = 0;    // Atom
  std::shared_ptr<const Node> lhs, rhs;
};

Formula Formula::atom(std::string var, int value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Atom;
  node->var = std::move(var);
  node->value = value;
  return Formula(std::move(node));
}

Formula Formula::negation(Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->lhs = std::move(f.node_);
  return Formula(std::move(node));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::And;
  node->lhs = std::move(lhs.node_);
  node->rhs = std::move(rhs.node_);
  return Formula(std::move(node));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Or;
  node->lhs = std::move(lhs.node_);
  node->rhs = std::move(rhs.node_);
  return Formula(std::move(node));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::var() const { return node_->var; }
int Formula::value() const { return node_->value; }
Formula Formula::child() const { return Formula(node_->lhs); }
Formula Formula::left() const { return Formula(node_->lhs); }
Formula Formula::right() const { return Formula(node_->rhs); }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Atom:
      return node_->var == other.node_->var && node_->value == other.node_->value;
    case Kind::Not:
      return child() == other.child();
    case Kind::And:
    case Kind::Or:
      return left() == other.left() && right() == other.right();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Int, Eq, Not, And, Or, LParen, RParen, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Tok::End, "", start};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_ = {Tok::Ident, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Tok::Int, std::string(text_.substr(start, pos_ - start)), start};
      return;
    }
    switch (c) {
      case '=':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          current_ = {Tok::Arrow, "=>", start};
        } else {
          ++pos_;
          current_ = {Tok::Eq, "=", start};
        }
        return;
      case '!': ++pos_; current_ = {Tok::Not, "!", start}; return;
      case '&': ++pos_; current_ = {Tok::And, "&", start}; return;
      case '|': ++pos_; current_ = {Tok::Or, "|", start}; return;
      case '(': ++pos_; current_ = {Tok::LParen, "(", start}; return;
      case ')': ++pos_; current_ = {Tok::RParen, ")", start}; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : lexer_(text) {}

  Formula parse_full() {
    Formula f = parse_or();
    expect_end();
    return f;
  }

  CounterfactualQuery parse_query_full() {
    Formula antecedent = parse_or();
    if (lexer_.peek().kind != Tok::Arrow)
      throw ParseError("expected '=>' between antecedent and consequent", lexer_.peek().pos);
    lexer_.take();
    Formula consequent = parse_or();
    expect_end();
    return {std::move(antecedent), std::move(consequent)};
  }

 private:
  void expect_end() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::Arrow)
      throw ParseError("nested counterfactual: '=>' may appear once, at the top level", t.pos);
    if (t.kind != Tok::End)
      throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lexer_.peek().kind == Tok::Or) {
      lexer_.take();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lexer_.peek().kind == Tok::And) {
      lexer_.take();
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (lexer_.peek().kind == Tok::Not) {
      lexer_.take();
      return Formula::negation(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    Token t = lexer_.peek();
    if (t.kind == Tok::LParen) {
      lexer_.take();
      Formula f = parse_or();
      if (lexer_.peek().kind == Tok::Arrow)
        throw ParseError("nested counterfactual: '=>' may appear once, at the top level",
                         lexer_.peek().pos);
      if (lexer_.peek().kind != Tok::RParen)
        throw ParseError("expected ')'", lexer_.peek().pos);
      lexer_.take();
      return f;
    }
    if (t.kind == Tok::Ident) {
      lexer_.take();
      if (lexer_.peek().kind != Tok::Eq)
        throw ParseError("expected '=' after variable '" + t.text + "'", lexer_.peek().pos);
      lexer_.take();
      Token v = lexer_.peek();
      if (v.kind != Tok::Int)
        throw ParseError("expected integer value after '='", v.pos);
      lexer_.take();
      return Formula::atom(t.text, std::stoi(v.text));
    }
    throw ParseError("expected atom, '!' or '('", t.pos);
  }

  Lexer lexer_;
};

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Or: return 0;
    case Formula::Kind::And: return 1;
    case Formula::Kind::Not: return 2;
    case Formula::Kind::Atom: return 3;
  }
  return 3;
}

void print_into(const Formula& f, std::string& out, int min_prec) {
  int prec = precedence(f.kind());
  bool parens = prec < min_prec;
  if (parens) out += "(";
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.var() + "=" + std::to_string(f.value());
      break;
    case Formula::Kind::Not:
      out += "!";
      print_into(f.child(), out, precedence(Formula::Kind::Not));
      break;
    case Formula::Kind::And:
      print_into(f.left(), out, prec);
      out += " & ";
      print_into(f.right(), out, prec + 1);
      break;
    case Formula::Kind::Or:
      print_into(f.left(), out, prec);
      out += " | ";
      print_into(f.right(), out, prec + 1);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse_full(); }

CounterfactualQuery parse_query(std::string_view text) {
  return FormulaParser(text).parse_query_full();
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, out, 0);
  return out;
}

std::string print_query(const CounterfactualQuery& q) {
  auto side = [](const Formula& f) {
    std::string s = print_formula(f);
    if (f.kind() == Formula::Kind::Atom) return s;
    return "(" + s + ")";
  };
  return side(q.antecedent) + " => " + side(q.consequent);
}

void bind_check(const Formula& f, const CausalGraph& graph) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::size_t idx = graph.require(f.var());
      if (!graph.var(idx).value_index(f.value()))
        throw BindingError("value " + std::to_string(f.value()) + " outside the range of '" +
                           f.var() + "'");
      return;
    }
    case Formula::Kind::Not:
      bind_check(f.child(), graph);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      bind_check(f.left(), graph);
      bind_check(f.right(), graph);
      return;
  }
}

bool eval_formula(const Formula& f, const CausalGraph& graph, const std::vector<int>& world) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::size_t idx = graph.require(f.var());
      if (!graph.var(idx).value_index(f.value()))
        throw BindingError("value " + std::to_string(f.value()) + " outside the range of '" +
                           f.var() + "'");
      return world.at(idx) == f.value();
    }
    case Formula::Kind::Not:
      return !eval_formula(f.child(), graph, world);
    case Formula::Kind::And:
      return eval_formula(f.left(), graph, world) && eval_formula(f.right(), graph, world);
    case Formula::Kind::Or:
      return eval_formula(f.left(), graph, world) || eval_formula(f.right(), graph, world);
  }
  return false;
}

bool eval_static(const DeterministicModel& model, const Formula& f) {
  return eval_formula(f, model.graph, model.actual);
}

namespace {

void collect_variables(const Formula& f, std::set<std::string>& seen,
                       std::vector<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (seen.insert(f.var()).second) out.push_back(f.var());
      return;
    case Formula::Kind::Not:
      collect_variables(f.child(), seen, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_variables(f.left(), seen, out);
      collect_variables(f.right(), seen, out);
      return;
  }
}

bool collect_atoms(const Formula& f, std::vector<std::pair<std::string, int>>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out.emplace_back(f.var(), f.value());
      return true;
    case Formula::Kind::And:
      return collect_atoms(f.left(), out) && collect_atoms(f.right(), out);
    default:
      return false;
  }
}

}  // namespace

std::vector<std::string> formula_variables(const Formula& f) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  collect_variables(f, seen, out);
  return out;
}

std::optional<std::vector<std::pair<std::string, int>>> as_atom_conjunction(const Formula& f) {
  std::vector<std::pair<std::string, int>> atoms;
  if (!collect_atoms(f, atoms)) return std::nullopt;
  return atoms;
}

}  // namespace cfsem
