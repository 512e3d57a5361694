#include "metrika/eval.hpp"

#include <algorithm>

#include "metrika/error.hpp"

namespace metrika {

CompiledFormula::CompiledFormula(const Formula& f) : free_(metrika::free_variables(f)) {
  std::vector<std::pair<std::string, std::size_t>> scope;
  for (std::size_t i = 0; i < free_.size(); ++i) scope.emplace_back(free_[i], i);
  slot_count_ = free_.size();
  root_ = lower(f, scope);
}

int CompiledFormula::lower(const Formula& f, std::vector<std::pair<std::string, std::size_t>>& scope) {
  Op op{f.kind(), {}, 0, {}, 0, -1, -1};
  switch (f.kind()) {
    case NodeKind::Const: op.q = f.value(); break;
    case NodeKind::Atom:
      op.relation = f.relation();
      for (const auto& v : f.arguments()) {
        auto it = std::find_if(scope.rbegin(), scope.rend(), [&](const auto& e) { return e.first == v; });
        op.arg_slots.push_back(it->second);  // every variable is free or bound
      }
      break;
    case NodeKind::Inf:
    case NodeKind::Sup:
      op.slot = slot_count_++;
      scope.emplace_back(f.bound_variable(), op.slot);
      op.lhs = lower(f.body(), scope);
      scope.pop_back();
      break;
    case NodeKind::Scale:
      op.q = f.value();
      op.lhs = lower(f.lhs(), scope);
      break;
    case NodeKind::Neg: op.lhs = lower(f.lhs(), scope); break;
    default:
      op.lhs = lower(f.lhs(), scope);
      op.rhs = lower(f.rhs(), scope);
      break;
  }
  ops_.push_back(std::move(op));
  return static_cast<int>(ops_.size() - 1);
}

Rational CompiledFormula::evaluate(const PresentedStructure& m, std::span<const std::size_t> points) const {
  if (points.size() != free_.size())
    throw Error(ErrorCode::UnboundVariable, "expected " + std::to_string(free_.size()) + " free-variable values");
  std::vector<std::size_t> slots(slot_count_, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "point " + std::to_string(points[i]) + " is outside the prefix");
    slots[i] = points[i];
  }
  return eval(root_, m, slots);
}

Rational CompiledFormula::eval(int index, const PresentedStructure& m, std::vector<std::size_t>& slots) const {
  const Op& op = ops_[static_cast<std::size_t>(index)];
  switch (op.kind) {
    case NodeKind::Const: return op.q;
    case NodeKind::Atom: {
      if (op.arg_slots.size() == 2) {
        const std::size_t t[2] = {slots[op.arg_slots[0]], slots[op.arg_slots[1]]};
        return m.value(op.relation, t);
      }
      std::vector<std::size_t> t(op.arg_slots.size());
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = slots[op.arg_slots[i]];
      return m.value(op.relation, t);
    }
    case NodeKind::Min: {
      Rational a = eval(op.lhs, m, slots);
      if (a.is_zero()) return a;
      return min(a, eval(op.rhs, m, slots));
    }
    case NodeKind::Max: {
      Rational a = eval(op.lhs, m, slots);
      if (a == Rational::one()) return a;
      return max(a, eval(op.rhs, m, slots));
    }
    case NodeKind::Scale: return connective::scale(op.q, eval(op.lhs, m, slots));
    case NodeKind::Neg: return connective::neg(eval(op.lhs, m, slots));
    case NodeKind::DotMinus: return connective::dot_minus(eval(op.lhs, m, slots), eval(op.rhs, m, slots));
    case NodeKind::TruncPlus: return connective::trunc_plus(eval(op.lhs, m, slots), eval(op.rhs, m, slots));
    case NodeKind::AbsDiff: return connective::abs_diff(eval(op.lhs, m, slots), eval(op.rhs, m, slots));
    case NodeKind::Inf: {
      Rational best = Rational::one();
      for (std::size_t p = 0; p < m.size(); ++p) {
        slots[op.slot] = p;
        Rational v = eval(op.lhs, m, slots);
        if (v < best) best = std::move(v);
        if (best.is_zero()) break;
      }
      return best;
    }
    case NodeKind::Sup: {
      Rational best = Rational::zero();
      for (std::size_t p = 0; p < m.size(); ++p) {
        slots[op.slot] = p;
        Rational v = eval(op.lhs, m, slots);
        if (best < v) best = std::move(v);
        if (best == Rational::one()) break;
      }
      return best;
    }
  }
  return Rational::zero();
}

ValueInterval CompiledFormula::bounds(const PresentedStructure& m, std::span<const std::size_t> points) const {
  if (points.size() != free_.size())
    throw Error(ErrorCode::UnboundVariable, "expected " + std::to_string(free_.size()) + " free-variable values");
  std::vector<std::size_t> slots(slot_count_, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "point " + std::to_string(points[i]) + " is outside the prefix");
    slots[i] = points[i];
  }
  std::size_t next_unknown = m.size();
  return eval_bounds(root_, m, slots, next_unknown);
}

ValueInterval CompiledFormula::eval_bounds(int index, const PresentedStructure& m, std::vector<std::size_t>& slots,
                                           std::size_t& next_unknown) const {
  const Op& op = ops_[static_cast<std::size_t>(index)];
  auto both = [&]() {
    return std::pair{eval_bounds(op.lhs, m, slots, next_unknown), eval_bounds(op.rhs, m, slots, next_unknown)};
  };
  switch (op.kind) {
    case NodeKind::Const: return {op.q, op.q};
    case NodeKind::Atom: {
      std::vector<std::size_t> t(op.arg_slots.size());
      bool unseen = false;
      for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = slots[op.arg_slots[i]];
        unseen = unseen || t[i] >= m.size();
      }
      if (!unseen) {
        const Rational& v = m.value(op.relation, t);
        return {v, v};
      }
      if (op.relation == Signature::kMetric && t[0] == t[1]) return {Rational::zero(), Rational::zero()};
      return {Rational::zero(), Rational::one()};
    }
    case NodeKind::Min: {
      auto [a, b] = both();
      return {min(a.lo, b.lo), min(a.hi, b.hi)};
    }
    case NodeKind::Max: {
      auto [a, b] = both();
      return {max(a.lo, b.lo), max(a.hi, b.hi)};
    }
    case NodeKind::Scale: {
      const ValueInterval a = eval_bounds(op.lhs, m, slots, next_unknown);
      return {op.q * a.lo, op.q * a.hi};
    }
    case NodeKind::Neg: {
      const ValueInterval a = eval_bounds(op.lhs, m, slots, next_unknown);
      return {connective::neg(a.hi), connective::neg(a.lo)};
    }
    case NodeKind::DotMinus: {
      auto [a, b] = both();
      return {connective::dot_minus(a.lo, b.hi), connective::dot_minus(a.hi, b.lo)};
    }
    case NodeKind::TruncPlus: {
      auto [a, b] = both();
      return {connective::trunc_plus(a.lo, b.lo), connective::trunc_plus(a.hi, b.hi)};
    }
    case NodeKind::AbsDiff: {
      auto [a, b] = both();
      Rational lo = Rational::zero();
      if (a.hi < b.lo)
        lo = b.lo - a.hi;
      else if (b.hi < a.lo)
        lo = a.lo - b.hi;
      return {std::move(lo), max(connective::dot_minus(a.hi, b.lo), connective::dot_minus(b.hi, a.lo))};
    }
    case NodeKind::Inf:
    case NodeKind::Sup: {
      const bool is_inf = op.kind == NodeKind::Inf;
      // Observed points give the witnessed side; the generic unseen point
      // bounds the other side.
      Rational witnessed = is_inf ? Rational::one() : Rational::zero();
      Rational open_side = witnessed;
      for (std::size_t p = 0; p < m.size(); ++p) {
        slots[op.slot] = p;
        const ValueInterval v = eval_bounds(op.lhs, m, slots, next_unknown);
        if (is_inf) {
          witnessed = min(witnessed, v.hi);
          open_side = min(open_side, v.lo);
        } else {
          witnessed = max(witnessed, v.lo);
          open_side = max(open_side, v.hi);
        }
      }
      slots[op.slot] = next_unknown++;
      const ValueInterval u = eval_bounds(op.lhs, m, slots, next_unknown);
      --next_unknown;
      if (is_inf) return {min(open_side, u.lo), std::move(witnessed)};
      return {std::move(witnessed), max(open_side, u.hi)};
    }
  }
  return {Rational::zero(), Rational::one()};
}

namespace {

std::vector<std::size_t> bind(const CompiledFormula& cf, const PresentedStructure& m, const Assignment& asg) {
  std::vector<std::size_t> points;
  for (const auto& v : cf.free_variables()) {
    auto it = asg.find(v);
    if (it == asg.end()) throw Error(ErrorCode::UnboundVariable, "free variable '" + v + "' is not assigned");
    if (it->second >= m.size())
      throw Error(ErrorCode::PointsOutOfPrefix, "variable '" + v + "' names point " + std::to_string(it->second) +
                                                    " outside the prefix");
    points.push_back(it->second);
  }
  return points;
}

}  // namespace

Rational evaluate(const Formula& f, const PresentedStructure& m, const Assignment& asg) {
  const CompiledFormula cf(f);
  return cf.evaluate(m, bind(cf, m, asg));
}

ValueInterval evaluate_prefix_bounds(const Formula& f, const PresentedStructure& m, const Assignment& asg) {
  if (!is_prenex(f)) throw Error(ErrorCode::NotPrenexUnsupported, "prefix bounds need a prenex formula");
  const CompiledFormula cf(f);
  return cf.bounds(m, bind(cf, m, asg));
}

std::string to_string(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::Holds: return "holds";
    case CheckResult::Status::Fails: return "fails";
    case CheckResult::Status::Unknown: return "unknown";
  }
  return "?";
}

CheckResult check_condition(const Condition& c, const PresentedStructure& m, CheckMode mode) {
  using Status = CheckResult::Status;
  CheckResult out;
  if (mode == CheckMode::Finite) {
    const Rational v = evaluate(c.formula(), m);
    out.interval = {v, v};
    out.status = c.satisfied_by(v) ? Status::Holds : Status::Fails;
    return out;
  }
  if (!is_prenex(c.formula())) {
    out.interval = {Rational::zero(), Rational::one()};
    out.status = Status::Unknown;
    return out;
  }
  out.interval = evaluate_prefix_bounds(c.formula(), m);
  const Rational& lo = out.interval.lo;
  const Rational& hi = out.interval.hi;
  const Rational& b = c.bound();
  switch (c.relation()) {
    case Comparison::LessEqual: out.status = hi <= b ? Status::Holds : (lo > b ? Status::Fails : Status::Unknown); break;
    case Comparison::Less: out.status = hi < b ? Status::Holds : (lo >= b ? Status::Fails : Status::Unknown); break;
    case Comparison::Equal:
      out.status = (lo == b && hi == b) ? Status::Holds : ((b < lo || hi < b) ? Status::Fails : Status::Unknown);
      break;
  }
  return out;
}

}  // namespace metrika
