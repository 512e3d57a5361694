#include "metrika/formula.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "metrika/error.hpp"

namespace metrika {

namespace {

std::shared_ptr<Formula::Node> make_node(NodeKind kind) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  return n;
}

void check_unit(const Rational& q, const char* what) {
  if (!in_unit_interval(q))
    throw Error(ErrorCode::ConstantOutOfRange, std::string(what) + " " + q.to_string() + " is outside [0,1]");
}

}  // namespace

Formula Formula::constant(const Rational& q) {
  check_unit(q, "constant");
  auto n = make_node(NodeKind::Const);
  n->q = q;
  return Formula(std::move(n));
}

Formula Formula::atom(const Signature& sig, const std::string& relation, std::vector<std::string> args) {
  const auto index = sig.find(relation);
  if (!index) throw Error(ErrorCode::UnknownRelation, "relation '" + relation + "' is not in the signature");
  return atom(sig, *index, std::move(args));
}

Formula Formula::atom(const Signature& sig, std::size_t relation, std::vector<std::string> args) {
  if (relation >= sig.size()) throw Error(ErrorCode::UnknownRelation, "relation index out of range");
  const auto& symbol = sig.relation(relation);
  if (args.size() != symbol.arity)
    throw Error(ErrorCode::ArityMismatch, "relation '" + symbol.name + "' expects " + std::to_string(symbol.arity) +
                                              " arguments, got " + std::to_string(args.size()));
  auto n = make_node(NodeKind::Atom);
  n->relation = relation;
  n->name = symbol.name;
  n->args = std::move(args);
  return Formula(std::move(n));
}

#define METRIKA_BINARY_BUILDER(fn, KIND)            \
  Formula Formula::fn(Formula a, Formula b) {       \
    auto n = make_node(NodeKind::KIND);             \
    n->children = {std::move(a), std::move(b)};     \
    return Formula(std::move(n));                   \
  }

METRIKA_BINARY_BUILDER(min, Min)
METRIKA_BINARY_BUILDER(max, Max)
METRIKA_BINARY_BUILDER(dot_minus, DotMinus)
METRIKA_BINARY_BUILDER(trunc_plus, TruncPlus)
METRIKA_BINARY_BUILDER(abs_diff, AbsDiff)

#undef METRIKA_BINARY_BUILDER

Formula Formula::scale(const Rational& q, Formula f) {
  check_unit(q, "scale factor");
  auto n = make_node(NodeKind::Scale);
  n->q = q;
  n->children = {std::move(f)};
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = make_node(NodeKind::Neg);
  n->children = {std::move(f)};
  return Formula(std::move(n));
}

Formula Formula::inf(std::string var, Formula body) {
  auto n = make_node(NodeKind::Inf);
  n->name = std::move(var);
  n->children = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::sup(std::string var, Formula body) {
  auto n = make_node(NodeKind::Sup);
  n->name = std::move(var);
  n->children = {std::move(body)};
  return Formula(std::move(n));
}

NodeKind Formula::kind() const noexcept { return node_->kind; }

const Rational& Formula::value() const { return node_->q; }
std::size_t Formula::relation() const { return node_->relation; }
const std::string& Formula::relation_name() const { return node_->name; }
const std::vector<std::string>& Formula::arguments() const { return node_->args; }
const std::string& Formula::bound_variable() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }

bool Formula::is_binary() const noexcept {
  switch (node_->kind) {
    case NodeKind::Min:
    case NodeKind::Max:
    case NodeKind::DotMinus:
    case NodeKind::TruncPlus:
    case NodeKind::AbsDiff: return true;
    default: return false;
  }
}

bool Formula::is_quantifier() const noexcept { return node_->kind == NodeKind::Inf || node_->kind == NodeKind::Sup; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.q == y.q && x.relation == y.relation && x.name == y.name && x.args == y.args &&
         x.children == y.children;
}

namespace {

std::string print_formula(const Formula& f);
std::string print_term(const Formula& f);

std::string print_atomic(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Atom: {
      std::string out = f.relation_name() + "(";
      for (std::size_t i = 0; i < f.arguments().size(); ++i) {
        if (i) out += ",";
        out += f.arguments()[i];
      }
      return out + ")";
    }
    case NodeKind::Min: return "min(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case NodeKind::Max: return "max(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case NodeKind::AbsDiff: return "absdiff(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case NodeKind::Neg: return "not(" + print_formula(f.lhs()) + ")";
    default: return "(" + print_formula(f) + ")";
  }
}

std::string print_term(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Const: return f.value().to_string();
    case NodeKind::Scale: return f.value().to_string() + "*" + print_atomic(f.lhs());
    default: return print_atomic(f);
  }
}

std::string print_body(const Formula& f) {
  if (f.kind() == NodeKind::DotMinus) return print_body(f.lhs()) + " -. " + print_term(f.rhs());
  if (f.kind() == NodeKind::TruncPlus) return print_body(f.lhs()) + " +. " + print_term(f.rhs());
  return print_term(f);
}

std::string print_formula(const Formula& f) {
  if (f.kind() == NodeKind::Inf) return "inf " + f.bound_variable() + ". " + print_formula(f.body());
  if (f.kind() == NodeKind::Sup) return "sup " + f.bound_variable() + ". " + print_formula(f.body());
  return print_body(f);
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  switch (f.kind()) {
    case NodeKind::Const: return;
    case NodeKind::Atom:
      for (const auto& v : f.arguments()) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
      return;
    case NodeKind::Inf:
    case NodeKind::Sup:
      bound.push_back(f.bound_variable());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
    default:
      collect_free(f.lhs(), bound, out);
      if (f.is_binary()) collect_free(f.rhs(), bound, out);
      return;
  }
}

bool contains_quantifier(const Formula& f) {
  if (f.is_quantifier()) return true;
  switch (f.kind()) {
    case NodeKind::Const:
    case NodeKind::Atom: return false;
    default: return contains_quantifier(f.lhs()) || (f.is_binary() && contains_quantifier(f.rhs()));
  }
}

}  // namespace

std::string to_string(const Formula& f) { return print_formula(f); }

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_quantifier_free(const Formula& f) { return !contains_quantifier(f); }

std::size_t node_count(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Const:
    case NodeKind::Atom: return 1;
    default: return 1 + node_count(f.lhs()) + (f.is_binary() ? node_count(f.rhs()) : 0);
  }
}

std::string to_string(const HierarchyClass& c) {
  switch (c.tag) {
    case HierarchyClass::Tag::QF: return "QF";
    case HierarchyClass::Tag::Sigma: return "Sigma(" + std::to_string(c.level) + ")";
    case HierarchyClass::Tag::Pi: return "Pi(" + std::to_string(c.level) + ")";
    case HierarchyClass::Tag::NotPrenex: return "NotPrenex";
  }
  return "?";
}

PrenexSplit split_prefix(const Formula& f) {
  PrenexSplit out{{}, f};
  while (out.matrix.is_quantifier()) {
    out.prefix.emplace_back(out.matrix.kind() == NodeKind::Sup, out.matrix.bound_variable());
    Formula next = out.matrix.body();
    out.matrix = next;
  }
  return out;
}

HierarchyClass quantifier_class(const Formula& f) {
  const PrenexSplit split = split_prefix(f);
  if (contains_quantifier(split.matrix)) return HierarchyClass::not_prenex();
  if (split.prefix.empty()) return HierarchyClass::qf();
  unsigned blocks = 1;
  for (std::size_t i = 1; i < split.prefix.size(); ++i)
    if (split.prefix[i].first != split.prefix[i - 1].first) ++blocks;
  return split.prefix.front().first ? HierarchyClass::pi(blocks) : HierarchyClass::sigma(blocks);
}

}  // namespace metrika
