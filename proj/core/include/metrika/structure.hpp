#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metrika/error.hpp"
#include "metrika/rational.hpp"
#include "metrika/signature.hpp"
#include "metrika/tuple_order.hpp"

namespace metrika {

struct ExtensionRecord {
  std::size_t point = 0;
  std::string source;

  friend bool operator==(const ExtensionRecord&, const ExtensionRecord&) = default;
};

/// A finite prefix 0..n-1 of a countable dense presentation, with exact
/// interpretation tables for every relation of the signature.
///
/// Tables are stored in tuple_order, so the tuples over a prefix of points
/// are an initial segment of each table and extension only appends.
class PresentedStructure {
 public:
  using Tuple = std::vector<std::size_t>;

  explicit PresentedStructure(Signature sig = Signature());

  /// Takes tables already laid out in tuple_order (one per relation, each of
  /// length n^arity). Shape is checked; the axioms are not (see validate).
  PresentedStructure(Signature sig, std::size_t n, std::vector<std::vector<Rational>> tables,
                     std::vector<ExtensionRecord> provenance = {});

  /// Builds an n-point structure from a value function.
  static PresentedStructure tabulate(Signature sig, std::size_t n,
                                     const std::function<Rational(std::size_t relation, std::span<const std::size_t>)>& fn);

  /// Pure metric structure from a symmetric n×n matrix.
  static PresentedStructure from_distances(const std::vector<std::vector<Rational>>& d);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return n_; }

  const Rational& value(std::size_t relation, std::span<const std::size_t> tuple) const {
    return tables_[relation][tuple_index(tuple)];
  }
  const Rational& value(std::size_t relation, std::initializer_list<std::size_t> tuple) const {
    return value(relation, std::span<const std::size_t>(tuple.begin(), tuple.size()));
  }
  const Rational& distance(std::size_t i, std::size_t j) const {
    const std::size_t t[2] = {i, j};
    return tables_[Signature::kMetric][tuple_index(t)];
  }
  /// Raw table in tuple_order.
  const std::vector<Rational>& table(std::size_t relation) const { return tables_.at(relation); }
  const std::vector<ExtensionRecord>& provenance() const noexcept { return provenance_; }

  /// Same signature, size and tables (provenance is ignored).
  bool same_tables(const PresentedStructure& other) const;

 private:
  Signature sig_;
  std::size_t n_ = 0;
  std::vector<std::vector<Rational>> tables_;
  std::vector<ExtensionRecord> provenance_;
};

/// Values of every relation on the tuples that mention the new point n,
/// laid out per relation in the order of tuples_with_max(arity, n + 1).
struct ExtensionRows {
  std::vector<std::vector<Rational>> rows;

  /// Metric-only rows: d(new, i) = d(i, new) = s[i], d(new, new) = 0.
  static ExtensionRows metric(std::span<const Rational> s);

  /// Rows for every relation from a value function over full tuples.
  static ExtensionRows tabulate(const PresentedStructure& m,
                                const std::function<Rational(std::size_t relation, std::span<const std::size_t>)>& fn);
};

struct Violation {
  std::string axiom;
  std::vector<std::size_t> witness;
  Rational lhs;
  Rational rhs;
};

struct ValidationReport {
  bool ok = true;
  bool is_metric = true;
  std::vector<Violation> violations;
};

std::string describe(const Violation& v);

/// Exhaustive check of range, d(i,i) = 0, symmetry, triangle inequality and
/// the per-argument Lipschitz bounds |R(..x..) - R(..y..)| <= L d(x, y).
ValidationReport validate(const PresentedStructure& m);

class ExtensionError : public Error {
 public:
  explicit ExtensionError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Appends point n. Only the tuples that mention n are checked; the old
/// prefix is copied unchanged. Throws ExtensionError.
PresentedStructure extend_point(const PresentedStructure& m, const ExtensionRows& rows,
                                std::string source = "extend_point");

/// Report for the tuples that mention the would-be point n.
ValidationReport validate_extension(const PresentedStructure& m, const ExtensionRows& rows);

/// Identifies points at distance 0 (representative = least index).
/// Throws QuotientIllDefined if some relation separates a zero-distance class.
PresentedStructure metric_quotient(const PresentedStructure& m);

/// Restriction to the points 0..p-1.
PresentedStructure prefix(const PresentedStructure& m, std::size_t p);

/// Whether `m` is (table-wise) the restriction of `ext` to its first m.size() points.
bool is_prefix_of(const PresentedStructure& m, const PresentedStructure& ext);

}  // namespace metrika
