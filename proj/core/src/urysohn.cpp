#include "metrika/urysohn.hpp"

#include <algorithm>
#include <thread>

#include "metrika/error.hpp"

namespace metrika {

namespace {

std::string pos(std::size_t i, std::size_t j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

DistanceConfiguration::DistanceConfiguration(std::vector<std::vector<Rational>> r) : r_(std::move(r)) {
  const std::size_t n = r_.size();
  for (const auto& row : r_)
    if (row.size() != n) throw Error(ErrorCode::InvalidConfiguration, "configuration matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (!r_[i][i].is_zero()) throw Error(ErrorCode::InvalidConfiguration, "nonzero diagonal at " + pos(i, i));
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_unit_interval(r_[i][j]))
        throw Error(ErrorCode::InvalidConfiguration, "entry " + pos(i, j) + " outside [0,1]");
      if (r_[i][j] != r_[j][i]) throw Error(ErrorCode::InvalidConfiguration, "asymmetric at " + pos(i, j));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (r_[i][k] > r_[i][j] + r_[j][k])
          throw Error(ErrorCode::InvalidConfiguration,
                      "triangle inequality fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                          std::to_string(k) + ")");
}

std::vector<Rational> DistanceConfiguration::last_column() const {
  std::vector<Rational> s;
  if (r_.empty()) return s;
  for (std::size_t k = 0; k + 1 < r_.size(); ++k) s.push_back(r_[k].back());
  return s;
}

DistanceConfiguration restrict(const DistanceConfiguration& theta) {
  if (theta.size() == 0) throw Error(ErrorCode::InvalidArgument, "cannot restrict the empty configuration");
  const std::size_t n = theta.size() - 1;
  std::vector<std::vector<Rational>> r(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = theta(i, j);
  return DistanceConfiguration(std::move(r));
}

Formula config_formula(const DistanceConfiguration& theta, const std::vector<std::string>& vars) {
  const std::size_t n = theta.size();
  std::vector<std::string> names = vars;
  if (names.empty())
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  if (names.size() != n) throw Error(ErrorCode::SizeMismatch, "one variable per configuration point is required");
  const Signature sig;
  std::optional<Formula> out;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      Formula term = Formula::abs_diff(Formula::atom(sig, Signature::kMetric, {names[i], names[j]}),
                                       Formula::constant(theta(i, j)));
      out = out ? Formula::max(*out, term) : term;
    }
  return out ? *out : Formula::constant(Rational::zero());
}

Rational config_error(const DistanceConfiguration& theta, const PresentedStructure& m, std::span<const std::size_t> pts) {
  if (pts.size() != theta.size())
    throw Error(ErrorCode::SizeMismatch, "configuration has " + std::to_string(theta.size()) + " points, tuple has " +
                                             std::to_string(pts.size()));
  for (std::size_t p : pts)
    if (p >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "point " + std::to_string(p) + " is outside the prefix");
  Rational worst;
  for (std::size_t j = 1; j < pts.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      Rational e = abs(m.distance(pts[i], pts[j]) - theta(i, j));
      if (worst < e) worst = std::move(e);
    }
  return worst;
}

bool AdmissiblePolytope::contains(std::span<const Rational> s) const {
  if (s.size() != base_.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!in_unit_interval(s[i])) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (abs(s[i] - s[j]) > base_(i, j)) return false;
      if (base_(i, j) > s[i] + s[j]) return false;
    }
  }
  return true;
}

RationalInterval admissible_bounds(const DistanceConfiguration& base, std::span<const Rational> partial) {
  const std::size_t i = partial.size();
  if (i >= base.size())
    throw Error(ErrorCode::PartialInfeasible, "partial vector already has " + std::to_string(i) + " of " +
                                                  std::to_string(base.size()) + " coordinates");
  for (std::size_t a = 0; a < i; ++a) {
    if (!in_unit_interval(partial[a])) throw Error(ErrorCode::PartialInfeasible, "coordinate outside [0,1]");
    for (std::size_t b = 0; b < a; ++b)
      if (abs(partial[a] - partial[b]) > base(a, b) || base(a, b) > partial[a] + partial[b])
        throw Error(ErrorCode::PartialInfeasible,
                    "coordinates " + std::to_string(a) + " and " + std::to_string(b) + " are inconsistent");
  }
  RationalInterval out{Rational::zero(), Rational::one()};
  for (std::size_t j = 0; j < i; ++j) {
    out.lo = max(out.lo, abs(partial[j] - base(i, j)));
    out.hi = min(out.hi, partial[j] + base(i, j));
  }
  return out;
}

DistanceConfiguration configuration_of(const PresentedStructure& m, std::span<const std::size_t> pts) {
  std::vector<std::vector<Rational>> r(pts.size(), std::vector<Rational>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) r[i][j] = m.distance(pts[i], pts[j]);
  return DistanceConfiguration(std::move(r));
}

DistanceConfiguration configuration_of(const PresentedStructure& m) {
  std::vector<std::size_t> all(m.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return configuration_of(m, all);
}

Rational delta_for(const Rational& eps) {
  if (eps.sign() <= 0 || eps > Rational::one()) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1]");
  return eps * Rational(2, 3);
}

std::vector<Rational> katetov_witness(const PresentedStructure& m, const DistanceConfiguration& theta,
                                      std::span<const std::size_t> pts, const Rational& delta) {
  if (theta.size() != pts.size() + 1)
    throw Error(ErrorCode::SizeMismatch, "configuration must have one more point than the tuple");
  if (delta.sign() < 0) throw Error(ErrorCode::InvalidArgument, "delta must be nonnegative");
  const Rational err = config_error(restrict(theta), m, pts);
  if (err > delta)
    throw Error(ErrorCode::PreconditionViolated,
                "restriction error " + err.to_string() + " exceeds delta " + delta.to_string());
  const std::vector<Rational> s = theta.last_column();
  const Rational slack = delta * Rational(3, 2);
  std::vector<Rational> h(m.size(), Rational::one());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Rational v = s[k] + slack + m.distance(x, pts[k]);
      if (v < h[x]) h[x] = std::move(v);
    }
  return h;
}

Condition axiom_instance(const DistanceConfiguration& theta, const Rational& eps, const Rational& delta) {
  if (theta.size() == 0) throw Error(ErrorCode::InvalidArgument, "configuration must be nonempty");
  if (eps.sign() <= 0 || eps >= Rational::one()) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  if (delta.sign() <= 0 || delta >= Rational::one()) throw Error(ErrorCode::InvalidArgument, "delta must lie in (0,1)");
  const std::size_t n = theta.size() - 1;
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back("x" + std::to_string(i + 1));
  std::vector<std::string> all = xs;
  all.push_back("y");
  const Formula restricted = config_formula(restrict(theta), xs);
  const Formula full = config_formula(theta, all);
  const Rational c = eps / (Rational::one() - delta);

  Formula body = Formula::constant(Rational::zero());
  Rational bound = eps;
  if (c <= Rational::one()) {
    body = Formula::min(Formula::scale(c, Formula::neg(restricted)), full);
  } else {
    body = Formula::min(Formula::scale(eps, Formula::neg(restricted)),
                        Formula::scale(Rational::one() - delta, full));
    bound = eps * (Rational::one() - delta);
  }
  Formula f = Formula::inf("y", body);
  for (std::size_t i = n; i-- > 0;) f = Formula::sup(xs[i], f);
  return Condition(f, Comparison::LessEqual, bound);
}

std::vector<DistanceConfiguration> grid_configurations(std::size_t n, std::size_t q) {
  if (q == 0) throw Error(ErrorCode::InvalidArgument, "grid denominator must be positive");
  std::vector<DistanceConfiguration> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  // Integer numerators; filled column by column, each column checked once complete.
  std::vector<std::vector<std::size_t>> r(n, std::vector<std::size_t>(n, 0));
  auto column_ok = [&](std::size_t j) {
    for (std::size_t a = 0; a <= j; ++a)
      for (std::size_t b = 0; b <= j; ++b)
        for (std::size_t c = 0; c <= j; ++c)
          if ((a == j || b == j || c == j) && r[a][c] > r[a][b] + r[b][c]) return false;
    return true;
  };
  auto emit = [&]() {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m[i][j] = Rational(static_cast<std::int64_t>(r[i][j]), static_cast<std::int64_t>(q));
    out.emplace_back(std::move(m));
  };
  auto fill = [&](auto&& self, std::size_t j, std::size_t i) -> void {
    if (j == n) {
      emit();
      return;
    }
    if (i == j) {
      if (column_ok(j)) self(self, j + 1, 0);
      return;
    }
    for (std::size_t v = 0; v <= q; ++v) {
      r[i][j] = r[j][i] = v;
      self(self, j, i + 1);
    }
    r[i][j] = r[j][i] = 0;
  };
  fill(fill, 1, 0);
  return out;
}

namespace {

struct Chunk {
  std::size_t satisfied = 0;
  std::size_t total = 0;
  std::vector<ExtensionFailure> failures;
};

// Tuples of theta-restriction shape whose first coordinate is `first`.
void report_first(const std::vector<std::vector<Rational>>& d, const DistanceConfiguration& theta, std::size_t theta_id,
                  const Rational& eps, const Rational& delta, std::size_t first, Chunk& out) {
  const std::size_t n = d.size();
  const std::size_t k = theta.size() - 1;
  const std::vector<Rational> s = theta.last_column();
  std::vector<Rational> lo(k), hi(k);
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = s[i] - eps;
    hi[i] = s[i] + eps;
  }
  std::vector<std::size_t> t(k, 0);
  auto witnessed = [&]() {
    for (std::size_t y = 0; y < n; ++y) {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = lo[i] <= d[t[i]][y] && d[t[i]][y] <= hi[i];
      if (ok) return true;
    }
    return false;
  };
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == k) {
      ++out.total;
      if (witnessed())
        ++out.satisfied;
      else
        out.failures.push_back({theta_id, t});
      return;
    }
    const std::size_t from = j == 0 ? first : 0;
    const std::size_t to = j == 0 ? first + 1 : n;
    for (std::size_t p = from; p < to; ++p) {
      t[j] = p;
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) ok = abs(d[t[i]][p] - theta(i, j)) <= delta;
      if (ok) self(self, j + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

ExtensionReport extension_property_report(const PresentedStructure& m, const Rational& eps,
                                          const std::vector<DistanceConfiguration>& configs, unsigned jobs) {
  const Rational delta = delta_for(eps);
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = m.distance(i, j);

  // Work items: (theta, first coordinate); a size-1 theta has one item.
  std::vector<std::pair<std::size_t, std::size_t>> items;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    if (configs[c].size() == 0) throw Error(ErrorCode::InvalidArgument, "configurations must be nonempty");
    if (configs[c].size() == 1)
      items.emplace_back(c, 0);
    else
      for (std::size_t p = 0; p < n; ++p) items.emplace_back(c, p);
  }
  std::vector<Chunk> chunks(items.size());
  auto work = [&](std::size_t idx) {
    const auto [c, p] = items[idx];
    if (configs[c].size() == 1) {
      chunks[idx].total = 1;
      if (n > 0)
        chunks[idx].satisfied = 1;
      else
        chunks[idx].failures.push_back({c, {}});
      return;
    }
    report_first(d, configs[c], c, eps, delta, p, chunks[idx]);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < items.size(); i += workers) work(i);
      });
  }
  ExtensionReport out;
  for (auto& c : chunks) {
    out.satisfied += c.satisfied;
    out.total += c.total;
    for (auto& f : c.failures) out.failures.push_back(std::move(f));
  }
  return out;
}

}  // namespace metrika
