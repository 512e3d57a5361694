#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "metrika/rational.hpp"
#include "metrika/structure.hpp"

namespace metrika {

using PointPairs = std::vector<std::pair<std::size_t, std::size_t>>;

struct PartialCorrespondence {
  PointPairs pairs;
  Rational distortion;
};

/// max over relations R and tuples i over the paired points of
/// |R^M(i) - R^N(j)|, j the image of i. Throws InvalidArgument when the
/// pairs are not injective or the signatures differ, PointsOutOfPrefix
/// for points outside either structure.
Rational distortion(const PointPairs& pairs, const PresentedStructure& m, const PresentedStructure& n);

struct BackAndForthResult {
  enum class Status { Success, Failure, BudgetExhausted };
  Status status = Status::Failure;
  /// Success: the correspondence found. Otherwise the deepest one reached.
  PartialCorrespondence correspondence;
  std::size_t nodes_explored = 0;
};

std::string to_string(BackAndForthResult::Status s);

/// Depth-first back-and-forth: step t picks the least unmatched point of M
/// (t even) or N (t odd) and tries partners on the other side in order of
/// increasing distortion, keeping it <= eps. Each candidate tried costs one
/// node. Failure means the search space was exhausted. The first argument
/// moves first, so swapping m and n can change the outcome.
BackAndForthResult back_and_forth(const PresentedStructure& m, const PresentedStructure& n, const Rational& eps,
                                  std::size_t depth, std::size_t node_budget = 1'000'000);

}  // namespace metrika
