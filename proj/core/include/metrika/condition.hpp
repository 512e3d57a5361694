#pragma once

#include <string>
#include <string_view>

#include "metrika/formula.hpp"
#include "metrika/rational.hpp"
#include "metrika/signature.hpp"

namespace metrika {

enum class Comparison { LessEqual, Less, Equal };

std::string_view to_string(Comparison c) noexcept;

/// A statement `sentence <= q`, `sentence < q`, or `sentence = q`.
/// Strict comparisons are open conditions; the other two are closed.
class Condition {
 public:
  /// Throws FreeVariableInCondition if `formula` is not a sentence and
  /// ConstantOutOfRange if `bound` is outside [0,1].
  Condition(Formula formula, Comparison relation, Rational bound);

  const Formula& formula() const noexcept { return formula_; }
  Comparison relation() const noexcept { return relation_; }
  const Rational& bound() const noexcept { return bound_; }

  bool is_open() const noexcept { return relation_ == Comparison::Less; }
  bool is_closed() const noexcept { return !is_open(); }

  /// Whether `value` satisfies the comparison.
  bool satisfied_by(const Rational& value) const;

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  Formula formula_;
  Comparison relation_;
  Rational bound_;
};

std::string to_string(const Condition& c);

/// Parses the formula grammar:
///
///   formula  := quant | body
///   quant    := ("inf" | "sup") ident "." formula
///   body     := term (("-." | "+.") term)*
///   term     := rational | rational "*" atomic | atomic
///   atomic   := ident "(" ident ("," ident)* ")"
///             | "min(" formula "," formula ")" | "max(" formula "," formula ")"
///             | "not(" formula ")" | "absdiff(" formula "," formula ")"
///             | "(" formula ")"
///   rational := integer "/" positive-integer | integer
///
/// Throws ParseError carrying SyntaxError, UnknownRelation, ArityMismatch or
/// ConstantOutOfRange.
Formula parse_formula(std::string_view text, const Signature& sig);

/// `condition := formula ("<=" | "<" | "=") rational`
Condition parse_condition(std::string_view text, const Signature& sig);

/// [sup_x̄ φ = 0] or [sup_x̄ φ <= 0] with φ quantifier free.
bool is_universal(const Condition& c);

/// Open condition [sup_x̄ inf_ȳ φ < ε] with φ quantifier free (either
/// block may be empty).
bool is_pi2_open(const Condition& c);

}  // namespace metrika
