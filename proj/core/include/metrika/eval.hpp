#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "metrika/condition.hpp"
#include "metrika/formula.hpp"
#include "metrika/rational.hpp"
#include "metrika/structure.hpp"

namespace metrika {

using Assignment = std::map<std::string, std::size_t, std::less<>>;

struct ValueInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool within(const ValueInterval& outer) const { return outer.lo <= lo && hi <= outer.hi; }
  bool is_point() const { return lo == hi; }

  friend bool operator==(const ValueInterval&, const ValueInterval&) = default;
};

/// A formula lowered to slot-addressed form for repeated evaluation.
///
/// Free variables occupy slots 0..k-1 in free_variables() order; every
/// quantifier gets a slot of its own, so shadowing is handled statically.
class CompiledFormula {
 public:
  explicit CompiledFormula(const Formula& f);

  const std::vector<std::string>& free_variables() const noexcept { return free_; }

  /// Exact value with the free variables bound to `points` (in
  /// free_variables() order). Quantifiers range over every point of `m`;
  /// over an empty structure inf is 1 and sup is 0.
  Rational evaluate(const PresentedStructure& m, std::span<const std::size_t> points) const;

  /// Bounds valid in every structure whose dense presentation extends `m`.
  ValueInterval bounds(const PresentedStructure& m, std::span<const std::size_t> points) const;

 private:
  struct Op {
    NodeKind kind;
    Rational q;
    std::size_t relation = 0;
    std::vector<std::size_t> arg_slots;
    std::size_t slot = 0;  // bound slot for quantifiers
    int lhs = -1;
    int rhs = -1;
  };

  int lower(const Formula& f, std::vector<std::pair<std::string, std::size_t>>& scope);
  Rational eval(int op, const PresentedStructure& m, std::vector<std::size_t>& slots) const;
  ValueInterval eval_bounds(int op, const PresentedStructure& m, std::vector<std::size_t>& slots,
                            std::size_t& next_unknown) const;

  std::vector<Op> ops_;
  std::vector<std::string> free_;
  std::size_t slot_count_ = 0;
  int root_ = -1;
};

/// Exact value with Inf/Sup ranging over the points of `m`.
/// Throws UnboundVariable when `asg` misses a free variable and
/// PointsOutOfPrefix when it names a point outside `m`.
Rational evaluate(const Formula& f, const PresentedStructure& m, const Assignment& asg = {});

/// Interval containing the value of the prenex formula `f` in any structure
/// whose presentation extends `m`. Quantifier-free parts are exact; a
/// quantifier ranges over the prefix plus one generic unseen point whose
/// atoms are only known to lie in [0,1]. Throws NotPrenexUnsupported.
ValueInterval evaluate_prefix_bounds(const Formula& f, const PresentedStructure& m, const Assignment& asg = {});

enum class CheckMode { Finite, Prefix };

struct CheckResult {
  enum class Status { Holds, Fails, Unknown };
  Status status = Status::Unknown;
  ValueInterval interval;

  bool holds() const noexcept { return status == Status::Holds; }
};

std::string to_string(CheckResult::Status s);

/// Finite mode treats `m` as the whole structure; prefix mode uses
/// evaluate_prefix_bounds and answers Unknown when the interval straddles
/// the bound (non-prenex conditions are always Unknown in prefix mode).
CheckResult check_condition(const Condition& c, const PresentedStructure& m, CheckMode mode = CheckMode::Finite);

}  // namespace metrika
