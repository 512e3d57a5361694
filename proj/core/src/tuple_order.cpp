#include "metrika/tuple_order.hpp"

#include <algorithm>

namespace metrika {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

}  // namespace

std::size_t tuple_count(std::size_t k, std::size_t n) { return ipow(n, k); }

std::size_t tuple_index(std::span<const std::size_t> t) {
  const std::size_t k = t.size();
  if (k == 0) return 0;
  if (k == 2) {
    const std::size_t a = t[0];
    const std::size_t b = t[1];
    const std::size_t m = std::max(a, b);
    return m * m + (a < m ? a : m + b);
  }
  const std::size_t m = *std::max_element(t.begin(), t.end());
  std::size_t index = ipow(m, k);
  bool seen_max = false;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t rest = k - j - 1;
    const std::size_t all = ipow(m + 1, rest);
    const std::size_t without = ipow(m, rest);
    // Smaller values at position j; completions must still reach max m.
    for (std::size_t v = 0; v < t[j]; ++v) index += (seen_max || v == m) ? all : all - without;
    if (t[j] == m) seen_max = true;
  }
  return index;
}

std::vector<std::size_t> tuple_at(std::size_t k, std::size_t index) {
  std::vector<std::size_t> t(k, 0);
  if (k == 0) return t;
  std::size_t m = 0;
  while (ipow(m + 1, k) <= index) ++m;
  index -= ipow(m, k);
  bool seen_max = false;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t rest = k - j - 1;
    const std::size_t all = ipow(m + 1, rest);
    const std::size_t without = ipow(m, rest);
    for (std::size_t v = 0; v <= m; ++v) {
      const std::size_t block = (seen_max || v == m) ? all : all - without;
      if (index < block) {
        t[j] = v;
        if (v == m) seen_max = true;
        break;
      }
      index -= block;
    }
  }
  return t;
}

void next_tuple(std::vector<std::size_t>& t) {
  if (t.empty()) return;
  t = tuple_at(t.size(), tuple_index(t) + 1);
}

std::vector<std::vector<std::size_t>> tuples_with_max(std::size_t k, std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  if (k == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  if (n == 0) return out;
  const std::size_t m = n - 1;
  // Lexicographic walk over {0..m}^k keeping tuples that contain m.
  std::vector<std::size_t> t(k, 0);
  while (true) {
    if (std::find(t.begin(), t.end(), m) != t.end()) out.push_back(t);
    std::size_t j = k;
    while (j > 0 && t[j - 1] == m) t[--j] = 0;
    if (j == 0) break;
    ++t[j - 1];
  }
  return out;
}

}  // namespace metrika
