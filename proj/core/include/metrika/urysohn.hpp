#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "metrika/condition.hpp"
#include "metrika/formula.hpp"
#include "metrika/rational.hpp"
#include "metrika/structure.hpp"

namespace metrika {

/// Distance matrix of a finite pseudometric space of diameter <= 1.
class DistanceConfiguration {
 public:
  DistanceConfiguration() = default;
  /// Throws InvalidConfiguration unless `r` is square, symmetric, has zero
  /// diagonal, entries in [0,1] and satisfies the triangle inequality.
  explicit DistanceConfiguration(std::vector<std::vector<Rational>> r);

  std::size_t size() const noexcept { return r_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return r_[i][j]; }
  const std::vector<std::vector<Rational>>& matrix() const noexcept { return r_; }

  /// Distances from the last point to the others (s_k = r_{k,n}).
  std::vector<Rational> last_column() const;

  friend bool operator==(const DistanceConfiguration&, const DistanceConfiguration&) = default;

 private:
  std::vector<std::vector<Rational>> r_;
};

/// Top-left (n-1)x(n-1) block. Requires size() >= 1.
DistanceConfiguration restrict(const DistanceConfiguration& theta);

/// max over i<j of |d(x_i, x_j) - r_ij| as a formula in `vars`
/// (default x1..xn). The constant 0 when n <= 1.
Formula config_formula(const DistanceConfiguration& theta, const std::vector<std::string>& vars = {});

/// max over i<j of |d(pts_i, pts_j) - r_ij|. Throws SizeMismatch and PointsOutOfPrefix.
Rational config_error(const DistanceConfiguration& theta, const PresentedStructure& m, std::span<const std::size_t> pts);

/// Distance vectors s of a new point over a base configuration:
/// |s_i - s_j| <= r_ij <= s_i + s_j, s in [0,1]^n.
class AdmissiblePolytope {
 public:
  explicit AdmissiblePolytope(DistanceConfiguration base) : base_(std::move(base)) {}
  const DistanceConfiguration& base() const noexcept { return base_; }
  bool contains(std::span<const Rational> s) const;

 private:
  DistanceConfiguration base_;
};

struct RationalInterval {
  Rational lo;
  Rational hi;
  friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

/// Feasible range of s_i given s_1..s_{i-1}. Throws PartialInfeasible when
/// the partial vector already violates a constraint or is too long.
RationalInterval admissible_bounds(const DistanceConfiguration& base, std::span<const Rational> partial);

/// The distances of points of `m` as a configuration (no validation beyond
/// the configuration invariants).
DistanceConfiguration configuration_of(const PresentedStructure& m, std::span<const std::size_t> pts);
DistanceConfiguration configuration_of(const PresentedStructure& m);

/// 2 eps / 3. Throws InvalidArgument unless eps in (0,1].
Rational delta_for(const Rational& eps);

/// Distances from a new point to every point of `m`:
/// h(x) = min(1, min_k (s_k + 3 delta / 2 + d(x, pts_k))), s = last column of theta.
/// Throws PreconditionViolated when config_error(restrict(theta), m, pts) > delta.
std::vector<Rational> katetov_witness(const PresentedStructure& m, const DistanceConfiguration& theta,
                                      std::span<const std::size_t> pts, const Rational& delta);

/// sup_x1..xn inf_y ( c (1 - theta|n) min theta(x,y) ) <= eps with c = eps/(1-delta).
/// When c > 1 the equivalent min(eps (1 - theta|n), (1-delta) theta) <= eps (1-delta)
/// is returned instead. Throws InvalidArgument unless eps, delta in (0,1).
Condition axiom_instance(const DistanceConfiguration& theta, const Rational& eps, const Rational& delta);

/// Every n-point configuration with entries in {0, 1/q, ..., 1}, in
/// lexicographic order of the upper triangle.
std::vector<DistanceConfiguration> grid_configurations(std::size_t n, std::size_t q);

struct ExtensionFailure {
  std::size_t theta_id = 0;
  std::vector<std::size_t> tuple;
  friend bool operator==(const ExtensionFailure&, const ExtensionFailure&) = default;
};

struct ExtensionReport {
  std::size_t satisfied = 0;
  std::size_t total = 0;
  std::vector<ExtensionFailure> failures;

  bool all_satisfied() const noexcept { return satisfied == total; }
};

/// For every theta in `configs` and every tuple of prefix points (repeats
/// allowed) whose restriction error is <= delta_for(eps): is there y in the
/// prefix with config_error(theta, tuple + y) <= eps?
ExtensionReport extension_property_report(const PresentedStructure& m, const Rational& eps,
                                          const std::vector<DistanceConfiguration>& configs, unsigned jobs = 1);

}  // namespace metrika
