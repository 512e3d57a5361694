#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metrika/condition.hpp"
#include "metrika/formula.hpp"
#include "metrika/rational.hpp"
#include "metrika/structure.hpp"

namespace metrika {

/// Version tag of the coordinate enumeration shared by every code.
inline constexpr const char* kCodeIndexOrder = "metrika/index-order/max-relation-lex/v1";

/// Coordinates of X = [0,1]^(disjoint union of N^k_i). Coordinate order:
/// by largest point mentioned, then relation index, then lexicographic
/// tuple. The coordinates naming points < n are exactly the first
/// code_length(sig, n).
struct CodeIndex {
  std::size_t relation = 0;
  std::vector<std::size_t> tuple;

  friend bool operator==(const CodeIndex&, const CodeIndex&) = default;
};

struct Code {
  std::vector<std::size_t> arities;
  std::vector<Rational> values;

  friend bool operator==(const Code&, const Code&) = default;
};

std::size_t code_length(const Signature& sig, std::size_t n);

/// The k-th coordinate of the enumeration for the given relation arities.
CodeIndex code_index(const std::vector<std::size_t>& arities, std::size_t k);

/// First K coordinates of the encoding of `m`. Throws IndexOutOfPrefix when
/// the K-th coordinate names a point outside the prefix.
Code encode(const PresentedStructure& m, std::size_t K);
inline Code encode(const PresentedStructure& m) { return encode(m, code_length(m.signature(), m.size())); }

/// sum_k 2^-(k+1) |u_k - v_k|. Throws LengthMismatch.
Rational encoded_distance(const Code& u, const Code& v);

/// U = { M : phi^M(points) < eps } with phi quantifier free. `points` binds
/// the free variables of phi in order of first occurrence.
class BasicOpen {
 public:
  BasicOpen(Formula phi, std::vector<std::size_t> points, Rational eps);

  const Formula& formula() const noexcept { return phi_; }
  const std::vector<std::size_t>& points() const noexcept { return points_; }
  const Rational& eps() const noexcept { return eps_; }

 private:
  Formula phi_;
  std::vector<std::size_t> points_;
  Rational eps_;
};

/// Exact: quantifier-free values are fixed by the prefix. Throws PointsOutOfPrefix.
bool basic_open_membership(const PresentedStructure& m, const BasicOpen& u);

/// The open condition [sup_x̄ inf_ȳ phi < eps] as the intersection over
/// outer tuples b̄ of the unions over witness tuples ā of U_{phi(b̄,ā),eps}.
/// Both families are enumerated in tuple order, which dovetails them.
class BorelPi2 {
 public:
  explicit BorelPi2(const Condition& c);  // throws NotPi2Condition

  const std::vector<std::string>& outer_variables() const noexcept { return outer_; }
  const std::vector<std::string>& witness_variables() const noexcept { return inner_; }
  const Formula& matrix() const noexcept { return matrix_; }
  const Rational& eps() const noexcept { return eps_; }

  /// The basic open U_{phi(b̄,ā),eps}.
  BasicOpen basic_open(const std::vector<std::size_t>& outer, const std::vector<std::size_t>& witness) const;

 private:
  std::vector<std::string> outer_;
  std::vector<std::string> inner_;
  Formula matrix_;
  Rational eps_;
};

enum class ClosureMode {
  /// Only the prefix is known; a missing witness is never a refutation.
  Prefix,
  /// The caller asserts `m` is closed under the relevant witnesses.
  Finite,
};

struct Pi2Membership {
  enum class Status { Consistent, RefutedAt, Unknown };
  Status status = Status::Consistent;
  std::vector<std::size_t> outer;  // the unwitnessed b̄ for RefutedAt / Unknown
  std::size_t examined = 0;
};

std::string to_string(Pi2Membership::Status s);

/// Examines the first `depth` outer tuples inside the prefix and searches
/// the prefix for witnesses.
Pi2Membership pi2_depth_membership(const PresentedStructure& m, const BorelPi2& b, std::size_t depth,
                                   ClosureMode mode = ClosureMode::Prefix);

}  // namespace metrika
