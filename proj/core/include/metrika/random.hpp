#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metrika/formula.hpp"
#include "metrika/rational.hpp"
#include "metrika/structure.hpp"
#include "metrika/urysohn.hpp"

namespace metrika {

enum class SamplerKind {
  /// s_i uniform on the admissible interval given s_1..s_{i-1}.
  SequentialUniform,
  /// Uniform proposals accepted only when they form a valid configuration.
  RejectionUniform,
};

std::string to_string(SamplerKind k);
SamplerKind sampler_kind_from_string(const std::string& s);  // throws InvalidArgument

struct MeasureSpec {
  SamplerKind kind = SamplerKind::SequentialUniform;
  /// Values live on {0, g, 2g, ..., 1}; g must be 1/q. Defaults to 2^-20.
  std::optional<Rational> grid;
  std::uint64_t seed = 0;
  /// Proposals per draw before RejectionBudgetExceeded.
  std::size_t rejection_cap = 1'000'000;
};

using Rng = std::mt19937_64;

/// Independent stream for (master seed, stream id, trial index).
Rng trial_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t trial);

/// Adds one point to a metric prefix. Sequential draws from
/// admissible_bounds in index order (uniform on the grid points of the
/// interval when its ends are on the grid, otherwise on a uniform
/// subdivision of it); rejection draws the whole vector and retries.
PresentedStructure sample_one_point(const PresentedStructure& m, const MeasureSpec& spec, Rng& rng);

/// n-point metric space. The rejection kind draws the whole distance
/// matrix at once, so its law is invariant under relabeling.
PresentedStructure sample_space(std::size_t n, const MeasureSpec& spec, Rng& rng);

struct TupleFrequency {
  std::vector<std::size_t> tuple;
  std::size_t hits = 0;
};

struct InvarianceReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::vector<TupleFrequency> frequencies;
  /// Largest |f_a - f_b| over injective tuples a, b.
  double max_gap = 0;
  /// Largest gap measured in units of its binomial standard deviation.
  double max_gap_sigmas = 0;
  bool gaps_within_3sigma = true;
  double chi_square = 0;
  std::size_t dof = 0;
  double p_value = 1;
  double alpha = 0.01;
  /// p_value < alpha.
  bool flagged = false;
};

/// Frequency of phi(a) < eps for every injective tuple a over {0..n-1}.
InvarianceReport invariance_audit(const MeasureSpec& spec, std::size_t n, std::size_t trials, const Formula& phi,
                                  const Rational& eps, double alpha = 0.01, unsigned jobs = 1);

struct CurvePoint {
  std::size_t n = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  Rational frequency;
  /// Binomial standard deviation of the frequency estimate.
  double sigma = 0;
};

/// For each n, the fraction of sampled spaces in which theta passes
/// extension_property_report at eps.
std::vector<CurvePoint> genericity_frequency(const MeasureSpec& spec, const DistanceConfiguration& theta,
                                             const Rational& eps, const std::vector<std::size_t>& n_values,
                                             std::size_t trials, unsigned jobs = 1);

/// f(n_{i+1}) >= f(n_i) - z sqrt(sigma_i^2 + sigma_{i+1}^2) for consecutive points.
bool nondecreasing_within(const std::vector<CurvePoint>& curve, double z = 3.0);

}  // namespace metrika
