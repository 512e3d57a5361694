#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "metrika/condition.hpp"
#include "metrika/formula.hpp"
#include "metrika/rational.hpp"
#include "metrika/structure.hpp"
#include "metrika/urysohn.hpp"

namespace metrika {

/// Realize theta on params + y within eps.
struct ConfigRealization {
  std::size_t config_id = 0;
  DistanceConfiguration theta;
  Rational eps;
};

/// Find z with phi(z, params) < eps. phi is quantifier free; its first free
/// variable is the witness and the rest bind to params in order.
struct InfRealization {
  Formula phi;
  Rational eps;
  /// Graph extension tasks list required neighbours first: params[0..adjacent)
  /// must be adjacent to z, the remaining params non-adjacent.
  std::size_t adjacent = 0;
};

enum class TaskStatus { Pending, Realized, Unrealizable };

struct ExtensionTask {
  std::variant<ConfigRealization, InfRealization> goal;
  std::vector<std::size_t> params;
  TaskStatus status = TaskStatus::Pending;
  std::optional<std::size_t> witness;

  const Rational& eps() const;
  std::string describe() const;
};

/// Fair stream of tasks. Each point added to the structure is announced and
/// spawns a batch of tasks over tuples whose largest element is that point;
/// batches are served first in, first out.
class TaskStream {
 public:
  virtual ~TaskStream() = default;
  virtual void announce(std::size_t point) = 0;
  /// Next applicable task, or nullopt when the queue is empty.
  virtual std::optional<ExtensionTask> next(const PresentedStructure& m) = 0;
};

/// max(R(z,a)..., 1-R(z,b)..., 1-d(z,a)..., 1-d(z,b)...) over variables
/// z, a1..ak, b1..bl. Under the 0 = true reading its inf is 0 exactly when
/// some z is adjacent to every a, to no b, and distinct from all of them.
Formula graph_task_formula(std::size_t adjacent, std::size_t non_adjacent);

/// All disjoint (A, B) with 1 <= |A u B| <= max_size, as InfRealization
/// tasks with eps = 1/2. Throws InvalidArgument when max_size == 0.
std::unique_ptr<TaskStream> graph_tasks(std::size_t max_size);

/// Every theta of the corpus applied to every tuple whose restriction error
/// is <= delta_for(eps); inapplicable tuples are skipped. The order of the
/// corpus inside each batch is shuffled with `rng_seed`.
std::unique_ptr<TaskStream> config_tasks(std::vector<DistanceConfiguration> corpus, const Rational& eps,
                                         std::uint64_t rng_seed);

enum class TheoryKind { EmptyMetric, Graph, Custom };

std::string to_string(TheoryKind k);
TheoryKind theory_kind_from_string(const std::string& s);  // throws InvalidTheory

struct TheorySpec {
  TheoryKind kind = TheoryKind::EmptyMetric;
  Signature signature;
  std::vector<Condition> universal_conditions;
  /// Configuration corpus: sizes 2..max_config_size on the 1/config_denominator grid.
  std::size_t max_config_size = 3;
  std::size_t config_denominator = 4;
  Rational eps = Rational(1, 8);
  /// Graph extension axioms with |A u B| <= graph_max_size.
  std::size_t graph_max_size = 3;

  static TheorySpec empty_metric(std::size_t max_config_size = 3, std::size_t config_denominator = 4,
                                 Rational eps = Rational(1, 8));
  static TheorySpec graph(std::size_t max_size = 3);
  /// Metric-only signature; every condition must be universal.
  static TheorySpec custom(std::vector<Condition> conditions, std::size_t max_config_size = 3,
                           std::size_t config_denominator = 4, Rational eps = Rational(1, 8));

  /// Throws InvalidTheory.
  void check() const;
  std::vector<DistanceConfiguration> corpus() const;
};

/// The universal conditions of a simple graph under the 0 = true reading:
/// symmetric, irreflexive, {0,1}-valued R and discrete d.
std::vector<Condition> graph_axioms();

struct SynthStats {
  std::size_t tasks = 0;
  std::size_t realized_existing = 0;
  std::size_t realized_new = 0;
  std::size_t unrealizable = 0;
};

struct SynthResult {
  PresentedStructure structure;
  SynthStats stats;
  /// The queue was exhausted before the budget.
  bool saturated = false;
};

/// Finite-budget e.c. chain construction. The seed is preserved as a prefix;
/// each dequeued task is realized by an existing point when possible,
/// otherwise by a new point that keeps every universal condition.
/// Throws SeedViolatesTheory and InvalidTheory (eps < grid / 2).
SynthResult ec_close_run(const PresentedStructure& seed, const TheorySpec& spec, std::size_t budget,
                         const Rational& grid = Rational(1, 8), std::uint64_t rng_seed = 0);

inline PresentedStructure ec_close(const PresentedStructure& seed, const TheorySpec& spec, std::size_t budget,
                                   const Rational& grid = Rational(1, 8), std::uint64_t rng_seed = 0) {
  return ec_close_run(seed, spec, budget, grid, rng_seed).structure;
}

/// Whether `task` has a witness among the points of `m`.
std::optional<std::size_t> find_witness(const PresentedStructure& m, const ExtensionTask& task);

struct WitnessCheck {
  bool passes = true;
  Rational inf_m;
  Rational inf_ext;
  /// inf over m minus inf over the extension.
  Rational gap;
};

/// Compares inf_x phi(x, params) over m and over n_ext. The first free
/// variable of phi is the witness. Throws NotAPrefix and PointsOutOfPrefix.
WitnessCheck ec_witness_check(const PresentedStructure& m, const PresentedStructure& n_ext, const Formula& phi,
                              const std::vector<std::size_t>& params, const Rational& tol);

/// Whether every universal condition holds on the tuples that mention `point`.
bool universal_conditions_hold_at(const std::vector<Condition>& conditions, const PresentedStructure& m,
                                  std::size_t point);

}  // namespace metrika
