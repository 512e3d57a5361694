#include "metrika/polish.hpp"

#include <algorithm>

#include "metrika/error.hpp"
#include "metrika/eval.hpp"
#include "metrika/tuple_order.hpp"

namespace metrika {

namespace {

std::vector<std::size_t> arities_of(const Signature& sig) {
  std::vector<std::size_t> out;
  for (const auto& r : sig.relations()) out.push_back(r.arity);
  return out;
}

std::size_t block_size(std::size_t arity, std::size_t m) { return tuple_count(arity, m + 1) - tuple_count(arity, m); }

}  // namespace

std::size_t code_length(const Signature& sig, std::size_t n) {
  std::size_t total = 0;
  for (const auto& r : sig.relations()) total += tuple_count(r.arity, n);
  return total;
}

CodeIndex code_index(const std::vector<std::size_t>& arities, std::size_t k) {
  if (arities.empty()) throw Error(ErrorCode::InvalidArgument, "empty signature");
  for (std::size_t m = 0;; ++m) {
    for (std::size_t r = 0; r < arities.size(); ++r) {
      const std::size_t block = block_size(arities[r], m);
      if (k < block) return {r, tuple_at(arities[r], tuple_count(arities[r], m) + k)};
      k -= block;
    }
  }
}

Code encode(const PresentedStructure& m, std::size_t K) {
  const Signature& sig = m.signature();
  const std::size_t available = code_length(sig, m.size());
  if (K > available)
    throw Error(ErrorCode::IndexOutOfPrefix, "coordinate " + std::to_string(available) + " names point " +
                                                 std::to_string(m.size()) + " outside the prefix");
  Code code{arities_of(sig), {}};
  code.values.reserve(K);
  for (std::size_t mx = 0; code.values.size() < K; ++mx) {
    for (std::size_t r = 0; r < sig.size() && code.values.size() < K; ++r) {
      const auto& table = m.table(r);
      const std::size_t from = tuple_count(sig.relation(r).arity, mx);
      const std::size_t to = tuple_count(sig.relation(r).arity, mx + 1);
      for (std::size_t i = from; i < to && code.values.size() < K; ++i) code.values.push_back(table[i]);
    }
  }
  return code;
}

Rational encoded_distance(const Code& u, const Code& v) {
  if (u.arities != v.arities) throw Error(ErrorCode::LengthMismatch, "codes use different index orders");
  if (u.values.size() != v.values.size())
    throw Error(ErrorCode::LengthMismatch, "code lengths " + std::to_string(u.values.size()) + " and " +
                                               std::to_string(v.values.size()) + " differ");
  Rational total;
  Rational weight(1, 2);
  const Rational half(1, 2);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (u.values[k] != v.values[k]) total += weight * abs(u.values[k] - v.values[k]);
    weight *= half;
  }
  return total;
}

BasicOpen::BasicOpen(Formula phi, std::vector<std::size_t> points, Rational eps)
    : phi_(std::move(phi)), points_(std::move(points)), eps_(std::move(eps)) {
  if (!is_quantifier_free(phi_)) throw Error(ErrorCode::InvalidArgument, "basic open formula must be quantifier free");
  if (eps_.sign() <= 0 || eps_ > Rational::one())
    throw Error(ErrorCode::InvalidArgument, "basic open radius must lie in (0,1]");
  if (points_.size() != free_variables(phi_).size())
    throw Error(ErrorCode::SizeMismatch, "basic open needs one point per free variable");
}

bool basic_open_membership(const PresentedStructure& m, const BasicOpen& u) {
  for (std::size_t p : u.points())
    if (p >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "point " + std::to_string(p) + " is outside the prefix");
  const CompiledFormula cf(u.formula());
  return cf.evaluate(m, u.points()) < u.eps();
}

BorelPi2::BorelPi2(const Condition& c) : matrix_(c.formula()), eps_(c.bound()) {
  if (!c.is_open()) throw Error(ErrorCode::NotPi2Condition, "condition is not open");
  const PrenexSplit split = split_prefix(c.formula());
  std::size_t i = 0;
  for (; i < split.prefix.size() && split.prefix[i].first; ++i) outer_.push_back(split.prefix[i].second);
  for (; i < split.prefix.size() && !split.prefix[i].first; ++i) inner_.push_back(split.prefix[i].second);
  if (i != split.prefix.size() || !is_quantifier_free(split.matrix))
    throw Error(ErrorCode::NotPi2Condition, "expected sup-block, inf-block, quantifier-free matrix");
  auto dup = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  std::vector<std::string> all = outer_;
  all.insert(all.end(), inner_.begin(), inner_.end());
  if (dup(all)) throw Error(ErrorCode::NotPi2Condition, "quantified variables must be distinct");
  if (eps_.sign() <= 0) throw Error(ErrorCode::NotPi2Condition, "bound must be positive");
  matrix_ = split.matrix;
}

BasicOpen BorelPi2::basic_open(const std::vector<std::size_t>& outer, const std::vector<std::size_t>& witness) const {
  if (outer.size() != outer_.size() || witness.size() != inner_.size())
    throw Error(ErrorCode::SizeMismatch, "tuple sizes do not match the quantifier blocks");
  std::vector<std::size_t> points;
  for (const auto& v : free_variables(matrix_)) {
    auto it = std::find(outer_.begin(), outer_.end(), v);
    if (it != outer_.end()) {
      points.push_back(outer[static_cast<std::size_t>(it - outer_.begin())]);
      continue;
    }
    it = std::find(inner_.begin(), inner_.end(), v);
    points.push_back(witness[static_cast<std::size_t>(it - inner_.begin())]);
  }
  return BasicOpen(matrix_, std::move(points), eps_);
}

std::string to_string(Pi2Membership::Status s) {
  switch (s) {
    case Pi2Membership::Status::Consistent: return "consistent";
    case Pi2Membership::Status::RefutedAt: return "refuted_at";
    case Pi2Membership::Status::Unknown: return "unknown";
  }
  return "?";
}

Pi2Membership pi2_depth_membership(const PresentedStructure& m, const BorelPi2& b, std::size_t depth,
                                   ClosureMode mode) {
  Pi2Membership out;
  const std::size_t n = m.size();
  const std::size_t outer_total = tuple_count(b.outer_variables().size(), n);
  const std::size_t inner_total = tuple_count(b.witness_variables().size(), n);
  const std::size_t examine = std::min(depth, outer_total);

  // Matrix variables in the order outer ++ witness.
  std::vector<std::string> order = b.outer_variables();
  order.insert(order.end(), b.witness_variables().begin(), b.witness_variables().end());
  const CompiledFormula cf(b.matrix());
  std::vector<std::size_t> position;
  for (const auto& v : cf.free_variables())
    position.push_back(static_cast<std::size_t>(std::find(order.begin(), order.end(), v) - order.begin()));

  std::vector<std::size_t> outer(b.outer_variables().size(), 0);
  std::vector<std::size_t> full(order.size(), 0);
  std::vector<std::size_t> points(position.size(), 0);
  for (std::size_t i = 0; i < examine; ++i, next_tuple(outer)) {
    ++out.examined;
    std::copy(outer.begin(), outer.end(), full.begin());
    bool witnessed = false;
    std::vector<std::size_t> witness(b.witness_variables().size(), 0);
    for (std::size_t j = 0; j < inner_total && !witnessed; ++j, next_tuple(witness)) {
      std::copy(witness.begin(), witness.end(), full.begin() + static_cast<std::ptrdiff_t>(outer.size()));
      for (std::size_t p = 0; p < position.size(); ++p) points[p] = full[position[p]];
      witnessed = cf.evaluate(m, points) < b.eps();
    }
    if (!witnessed) {
      out.outer = outer;
      out.status = mode == ClosureMode::Finite ? Pi2Membership::Status::RefutedAt : Pi2Membership::Status::Unknown;
      return out;
    }
  }
  return out;
}

}  // namespace metrika
