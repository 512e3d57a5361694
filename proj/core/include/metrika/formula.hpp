#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "metrika/rational.hpp"
#include "metrika/signature.hpp"

namespace metrika {

enum class NodeKind : std::uint8_t {
  Const,
  Atom,
  Min,
  Max,
  Scale,      // q * f
  Neg,        // 1 - f
  DotMinus,   // max(f - g, 0)
  TruncPlus,  // min(f + g, 1)
  AbsDiff,    // |f - g|
  Inf,
  Sup,
};

/// The [0,1]-valued connectives on exact rationals.
namespace connective {
inline Rational neg(const Rational& x) { return Rational::one() - x; }
inline Rational dot_minus(const Rational& x, const Rational& y) { return y < x ? x - y : Rational::zero(); }
inline Rational trunc_plus(const Rational& x, const Rational& y) { return min(x + y, Rational::one()); }
inline Rational abs_diff(const Rational& x, const Rational& y) { return y < x ? x - y : y - x; }
inline Rational scale(const Rational& q, const Rational& x) { return q * x; }
}  // namespace connective

/// Immutable continuous first-order formula over a relational signature.
/// Copies share structure.
class Formula {
 public:
  struct Node;

  static Formula constant(const Rational& q);
  /// Resolves `relation` in `sig` and checks the argument count.
  static Formula atom(const Signature& sig, const std::string& relation, std::vector<std::string> args);
  static Formula atom(const Signature& sig, std::size_t relation, std::vector<std::string> args);
  static Formula min(Formula a, Formula b);
  static Formula max(Formula a, Formula b);
  static Formula scale(const Rational& q, Formula f);
  static Formula neg(Formula f);
  static Formula dot_minus(Formula a, Formula b);
  static Formula trunc_plus(Formula a, Formula b);
  static Formula abs_diff(Formula a, Formula b);
  static Formula inf(std::string var, Formula body);
  static Formula sup(std::string var, Formula body);

  NodeKind kind() const noexcept;
  /// Constant value (Const) or scale factor (Scale).
  const Rational& value() const;
  std::size_t relation() const;
  const std::string& relation_name() const;
  const std::vector<std::string>& arguments() const;
  const std::string& bound_variable() const;
  /// Left operand of a binary node, the operand of Scale/Neg, or a quantifier body.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const { return lhs(); }

  bool is_binary() const noexcept;
  bool is_quantifier() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  NodeKind kind = NodeKind::Const;
  Rational q;
  std::size_t relation = 0;
  std::string name;  // relation name or bound variable
  std::vector<std::string> args;
  std::vector<Formula> children;
};

/// Canonical textual form; parses back to an equal formula.
std::string to_string(const Formula& f);

/// Free variables in order of first occurrence (left to right).
std::vector<std::string> free_variables(const Formula& f);
bool is_quantifier_free(const Formula& f);
inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }
std::size_t node_count(const Formula& f);

struct HierarchyClass {
  enum class Tag { QF, Sigma, Pi, NotPrenex };
  Tag tag = Tag::QF;
  unsigned level = 0;

  static HierarchyClass qf() { return {Tag::QF, 0}; }
  static HierarchyClass sigma(unsigned n) { return {Tag::Sigma, n}; }
  static HierarchyClass pi(unsigned n) { return {Tag::Pi, n}; }
  static HierarchyClass not_prenex() { return {Tag::NotPrenex, 0}; }

  friend bool operator==(const HierarchyClass&, const HierarchyClass&) = default;
};

std::string to_string(const HierarchyClass& c);

/// Least prenex class: each maximal block of like quantifiers is one level.
HierarchyClass quantifier_class(const Formula& f);
inline bool is_prenex(const Formula& f) { return quantifier_class(f).tag != HierarchyClass::Tag::NotPrenex; }

/// Strips the leading quantifier prefix. Each entry is (is_sup, variable).
struct PrenexSplit {
  std::vector<std::pair<bool, std::string>> prefix;
  Formula matrix;
};
PrenexSplit split_prefix(const Formula& f);

}  // namespace metrika
