#include "metrika/compare.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "metrika/error.hpp"
#include "metrika/tuple_order.hpp"

namespace metrika {

namespace {

void check_pairs(const PointPairs& pairs, const PresentedStructure& m, const PresentedStructure& n) {
  if (m.signature() != n.signature()) throw Error(ErrorCode::InvalidArgument, "structures have different signatures");
  std::vector<std::size_t> left, right;
  for (const auto& [a, b] : pairs) {
    if (a >= m.size() || b >= n.size())
      throw Error(ErrorCode::PointsOutOfPrefix, "pair (" + std::to_string(a) + "," + std::to_string(b) + ") is outside the structures");
    left.push_back(a);
    right.push_back(b);
  }
  auto injective = [](std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!injective(left) || !injective(right)) throw Error(ErrorCode::InvalidArgument, "pairs are not injective");
}

// Worst gap over tuples of pair indices whose largest index is `last`.
Rational gap_with(const PointPairs& pairs, std::size_t last, const PresentedStructure& m, const PresentedStructure& n,
                  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<std::size_t>>>& cache) {
  Rational worst;
  const Signature& sig = m.signature();
  std::vector<std::size_t> u, v;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    auto key = std::make_pair(k, last + 1);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, tuples_with_max(k, last + 1)).first;
    for (const auto& t : it->second) {
      u.resize(k);
      v.resize(k);
      for (std::size_t i = 0; i < k; ++i) {
        u[i] = pairs[t[i]].first;
        v[i] = pairs[t[i]].second;
      }
      const Rational& x = m.value(r, u);
      const Rational& y = n.value(r, v);
      if (x != y) {
        Rational g = abs(x - y);
        if (worst < g) worst = std::move(g);
      }
    }
  }
  return worst;
}

class Search {
 public:
  Search(const PresentedStructure& m, const PresentedStructure& n, const Rational& eps, std::size_t depth,
         std::size_t budget)
      : m_(m), n_(n), eps_(eps), depth_(depth), budget_(budget), used_m_(m.size(), false), used_n_(n.size(), false) {}

  BackAndForthResult run() {
    BackAndForthResult out;
    bool ok = false;
    try {
      ok = step(Rational::zero());
      out.status = ok ? BackAndForthResult::Status::Success : BackAndForthResult::Status::Failure;
    } catch (const Exhausted&) {
      out.status = BackAndForthResult::Status::BudgetExhausted;
    }
    out.correspondence = ok ? PartialCorrespondence{pairs_, current_} : deepest_;
    out.nodes_explored = nodes_;
    return out;
  }

 private:
  struct Exhausted {};

  bool step(const Rational& dist) {
    current_ = dist;
    if (pairs_.size() > deepest_.pairs.size() || deepest_.pairs.empty()) deepest_ = {pairs_, dist};
    if (pairs_.size() == depth_) return true;
    const bool from_m = pairs_.size() % 2 == 0;
    const std::vector<bool>& used_src = from_m ? used_m_ : used_n_;
    const std::vector<bool>& used_dst = from_m ? used_n_ : used_m_;
    const auto src = std::find(used_src.begin(), used_src.end(), false);
    if (src == used_src.end()) return false;
    const std::size_t x = static_cast<std::size_t>(src - used_src.begin());

    std::vector<std::pair<Rational, std::size_t>> candidates;
    for (std::size_t y = 0; y < used_dst.size(); ++y) {
      if (used_dst[y]) continue;
      if (nodes_ == budget_) throw Exhausted{};
      ++nodes_;
      pairs_.push_back(from_m ? std::make_pair(x, y) : std::make_pair(y, x));
      Rational d = max(dist, gap_with(pairs_, pairs_.size() - 1, m_, n_, cache_));
      pairs_.pop_back();
      if (d <= eps_) candidates.emplace_back(std::move(d), y);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [d, y] : candidates) {
      pairs_.push_back(from_m ? std::make_pair(x, y) : std::make_pair(y, x));
      (from_m ? used_m_ : used_n_)[x] = true;
      (from_m ? used_n_ : used_m_)[y] = true;
      if (step(d)) return true;
      (from_m ? used_m_ : used_n_)[x] = false;
      (from_m ? used_n_ : used_m_)[y] = false;
      pairs_.pop_back();
    }
    return false;
  }

  const PresentedStructure& m_;
  const PresentedStructure& n_;
  const Rational& eps_;
  std::size_t depth_;
  std::size_t budget_;
  std::vector<bool> used_m_;
  std::vector<bool> used_n_;
  PointPairs pairs_;
  Rational current_;
  PartialCorrespondence deepest_;
  std::size_t nodes_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<std::size_t>>> cache_;
};

}  // namespace

Rational distortion(const PointPairs& pairs, const PresentedStructure& m, const PresentedStructure& n) {
  check_pairs(pairs, m, n);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<std::size_t>>> cache;
  Rational worst;
  for (std::size_t last = 0; last < pairs.size(); ++last) worst = max(worst, gap_with(pairs, last, m, n, cache));
  return worst;
}

std::string to_string(BackAndForthResult::Status s) {
  switch (s) {
    case BackAndForthResult::Status::Success: return "success";
    case BackAndForthResult::Status::Failure: return "failure";
    case BackAndForthResult::Status::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

BackAndForthResult back_and_forth(const PresentedStructure& m, const PresentedStructure& n, const Rational& eps,
                                  std::size_t depth, std::size_t node_budget) {
  if (m.signature() != n.signature()) throw Error(ErrorCode::InvalidArgument, "structures have different signatures");
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");
  return Search(m, n, eps, depth, node_budget).run();
}

}  // namespace metrika
