#include "metrika/condition.hpp"

#include "metrika/error.hpp"

namespace metrika {

std::string_view to_string(Comparison c) noexcept {
  switch (c) {
    case Comparison::LessEqual: return "<=";
    case Comparison::Less: return "<";
    case Comparison::Equal: return "=";
  }
  return "?";
}

Condition::Condition(Formula formula, Comparison relation, Rational bound)
    : formula_(std::move(formula)), relation_(relation), bound_(std::move(bound)) {
  if (!is_sentence(formula_))
    throw Error(ErrorCode::FreeVariableInCondition, "condition formula '" + metrika::to_string(formula_) +
                                                        "' is not a sentence");
  if (!in_unit_interval(bound_))
    throw Error(ErrorCode::ConstantOutOfRange, "bound " + bound_.to_string() + " is outside [0,1]");
}

bool Condition::satisfied_by(const Rational& value) const {
  switch (relation_) {
    case Comparison::LessEqual: return value <= bound_;
    case Comparison::Less: return value < bound_;
    case Comparison::Equal: return value == bound_;
  }
  return false;
}

std::string to_string(const Condition& c) {
  return to_string(c.formula()) + " " + std::string(to_string(c.relation())) + " " + c.bound().to_string();
}

bool is_universal(const Condition& c) {
  if (c.is_open() || !c.bound().is_zero()) return false;
  const PrenexSplit split = split_prefix(c.formula());
  for (const auto& [is_sup, var] : split.prefix)
    if (!is_sup) return false;
  return is_quantifier_free(split.matrix);
}

bool is_pi2_open(const Condition& c) {
  if (!c.is_open()) return false;
  const HierarchyClass k = quantifier_class(c.formula());
  switch (k.tag) {
    case HierarchyClass::Tag::QF: return true;
    case HierarchyClass::Tag::Sigma: return k.level <= 1;
    case HierarchyClass::Tag::Pi: return k.level <= 2;
    case HierarchyClass::Tag::NotPrenex: return false;
  }
  return false;
}

}  // namespace metrika
