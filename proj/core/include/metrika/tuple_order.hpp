#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace metrika {

// Enumeration of N^k by largest coordinate, then lexicographically. All
// tuples over {0..n-1} come first (exactly n^k of them), so the tuples of a
// prefix of points always form an initial segment.

/// n^k, the number of k-tuples over n points.
std::size_t tuple_count(std::size_t k, std::size_t n);

/// Position of `tuple` in the enumeration of N^k, k = tuple.size().
std::size_t tuple_index(std::span<const std::size_t> tuple);

/// Inverse of tuple_index.
std::vector<std::size_t> tuple_at(std::size_t k, std::size_t index);

/// Advances `tuple` to its successor in the enumeration.
void next_tuple(std::vector<std::size_t>& tuple);

/// All k-tuples over {0..n-1} whose largest coordinate is exactly n-1, in
/// enumeration order. For n = 0 the result is empty (or {()} when k = 0).
std::vector<std::vector<std::size_t>> tuples_with_max(std::size_t k, std::size_t n);

}  // namespace metrika
