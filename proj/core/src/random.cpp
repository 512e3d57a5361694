#include "metrika/random.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "metrika/error.hpp"
#include "metrika/eval.hpp"

namespace metrika {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Number of grid steps q, grid = 1/q.
std::int64_t grid_steps(const MeasureSpec& spec) {
  if (!spec.grid) return std::int64_t{1} << 20;
  const Rational& g = *spec.grid;
  if (g.sign() <= 0 || g > Rational::one() || !g.is_small() || g.to_mpq().get_num() != 1)
    throw Error(ErrorCode::InvalidArgument, "grid must be of the form 1/q");
  const mpz_class q = g.denominator();
  if (!q.fits_slong_p()) throw Error(ErrorCode::InvalidArgument, "grid is too fine");
  return q.get_si();
}

Rational uniform_on(const Rational& lo, const Rational& hi, std::int64_t q, Rng& rng) {
  if (lo == hi) return lo;
  const Rational a = lo * Rational(q);
  const Rational b = hi * Rational(q);
  if (a.is_integer() && b.is_integer()) {
    std::uniform_int_distribution<std::int64_t> pick(a.numerator().get_si(), b.numerator().get_si());
    return Rational(pick(rng), q);
  }
  std::uniform_int_distribution<std::int64_t> pick(0, q);
  return lo + (hi - lo) * Rational(pick(rng), q);
}

template <class F>
void parallel_trials(std::size_t trials, unsigned jobs, F&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < trials; t += workers) body(t);
    });
}

}  // namespace

std::string to_string(SamplerKind k) {
  return k == SamplerKind::SequentialUniform ? "sequential-uniform" : "rejection-uniform";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
  if (s == "sequential-uniform" || s == "sequential") return SamplerKind::SequentialUniform;
  if (s == "rejection-uniform" || s == "rejection") return SamplerKind::RejectionUniform;
  throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + s + "'");
}

Rng trial_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t trial) {
  const std::uint64_t s = splitmix64(master ^ splitmix64(stream ^ splitmix64(trial)));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

PresentedStructure sample_one_point(const PresentedStructure& m, const MeasureSpec& spec, Rng& rng) {
  if (m.signature().size() != 1) throw Error(ErrorCode::InvalidArgument, "sampling needs the metric signature");
  const std::int64_t q = grid_steps(spec);
  const DistanceConfiguration base = configuration_of(m);
  std::vector<Rational> s;
  if (spec.kind == SamplerKind::SequentialUniform) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const RationalInterval iv = admissible_bounds(base, s);
      s.push_back(uniform_on(iv.lo, iv.hi, q, rng));
    }
  } else {
    const AdmissiblePolytope poly(base);
    std::uniform_int_distribution<std::int64_t> pick(0, q);
    std::size_t attempts = 0;
    while (true) {
      if (attempts++ >= spec.rejection_cap)
        throw Error(ErrorCode::RejectionBudgetExceeded, "no admissible proposal in " + std::to_string(spec.rejection_cap) + " draws");
      s.clear();
      for (std::size_t i = 0; i < m.size(); ++i) s.push_back(Rational(pick(rng), q));
      if (poly.contains(s)) break;
    }
  }
  return extend_point(m, ExtensionRows::metric(s), "sample:" + to_string(spec.kind));
}

PresentedStructure sample_space(std::size_t n, const MeasureSpec& spec, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample_space needs n >= 1");
  if (spec.kind == SamplerKind::SequentialUniform) {
    PresentedStructure m;
    for (std::size_t i = 0; i < n; ++i) m = sample_one_point(m, spec, rng);
    return m;
  }
  const std::int64_t q = grid_steps(spec);
  std::uniform_int_distribution<std::int64_t> pick(0, q);
  std::vector<std::vector<std::int64_t>> r(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t attempts = 0;; ++attempts) {
    if (attempts >= spec.rejection_cap)
      throw Error(ErrorCode::RejectionBudgetExceeded, "no metric proposal in " + std::to_string(spec.rejection_cap) + " draws");
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) r[i][j] = r[j][i] = pick(rng);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        for (std::size_t k = 0; k < n && ok; ++k) ok = r[i][k] <= r[i][j] + r[j][k];
    if (ok) break;
  }
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = Rational(r[i][j], q);
  return PresentedStructure::from_distances(d);
}

InvarianceReport invariance_audit(const MeasureSpec& spec, std::size_t n, std::size_t trials, const Formula& phi,
                                  const Rational& eps, double alpha, unsigned jobs) {
  if (!is_quantifier_free(phi)) throw Error(ErrorCode::InvalidArgument, "audit formula must be quantifier free");
  const CompiledFormula cf(phi);
  const std::size_t k = cf.free_variables().size();
  if (k > n) throw Error(ErrorCode::InvalidArgument, "formula has more variables than points");

  InvarianceReport out;
  out.n = n;
  out.trials = trials;
  out.alpha = alpha;
  std::vector<std::size_t> t(k, 0);
  for (std::size_t i = 0; i < tuple_count(k, n); ++i, next_tuple(t)) {
    std::vector<std::size_t> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) out.frequencies.push_back({t, 0});
  }
  std::vector<std::vector<char>> hit(trials, std::vector<char>(out.frequencies.size(), 0));
  parallel_trials(trials, jobs, [&](std::size_t trial) {
    Rng rng = trial_rng(spec.seed, n, trial);
    const PresentedStructure m = sample_space(n, spec, rng);
    for (std::size_t a = 0; a < out.frequencies.size(); ++a)
      hit[trial][a] = cf.evaluate(m, out.frequencies[a].tuple) < eps;
  });
  for (const auto& row : hit)
    for (std::size_t a = 0; a < row.size(); ++a) out.frequencies[a].hits += static_cast<std::size_t>(row[a]);

  const double T = static_cast<double>(std::max<std::size_t>(trials, 1));
  for (std::size_t a = 0; a < out.frequencies.size(); ++a)
    for (std::size_t b = a + 1; b < out.frequencies.size(); ++b) {
      const double pa = static_cast<double>(out.frequencies[a].hits) / T;
      const double pb = static_cast<double>(out.frequencies[b].hits) / T;
      const double gap = std::abs(pa - pb);
      const double sigma = std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / T);
      out.max_gap = std::max(out.max_gap, gap);
      const double units = sigma > 0 ? gap / sigma : (gap > 0 ? INFINITY : 0.0);
      out.max_gap_sigmas = std::max(out.max_gap_sigmas, units);
    }
  out.gaps_within_3sigma = out.max_gap_sigmas <= 3.0;

  // Homogeneity of hit rates across tuples: a tuples x {hit, miss} table.
  const std::size_t cells = out.frequencies.size();
  if (cells >= 2 && trials > 0) {
    double total_hits = 0;
    for (const auto& f : out.frequencies) total_hits += static_cast<double>(f.hits);
    const double p = total_hits / (T * static_cast<double>(cells));
    if (p > 0 && p < 1) {
      for (const auto& f : out.frequencies) {
        const double h = static_cast<double>(f.hits);
        out.chi_square += (h - T * p) * (h - T * p) / (T * p) + ((T - h) - T * (1 - p)) * ((T - h) - T * (1 - p)) / (T * (1 - p));
      }
      out.dof = cells - 1;
      boost::math::chi_squared dist(static_cast<double>(out.dof));
      out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));
    }
  }
  out.flagged = out.p_value < alpha;
  return out;
}

std::vector<CurvePoint> genericity_frequency(const MeasureSpec& spec, const DistanceConfiguration& theta,
                                             const Rational& eps, const std::vector<std::size_t>& n_values,
                                             std::size_t trials, unsigned jobs) {
  if (theta.size() == 0) throw Error(ErrorCode::InvalidArgument, "configuration must be nonempty");
  for (std::size_t n : n_values)
    if (n < theta.size()) throw Error(ErrorCode::InvalidArgument, "every n must be at least the configuration size");
  const std::vector<DistanceConfiguration> configs{theta};
  std::vector<CurvePoint> curve;
  for (std::size_t n : n_values) {
    std::vector<char> ok(trials, 0);
    parallel_trials(trials, jobs, [&](std::size_t trial) {
      Rng rng = trial_rng(spec.seed, n, trial);
      const PresentedStructure m = sample_space(n, spec, rng);
      ok[trial] = extension_property_report(m, eps, configs).all_satisfied();
    });
    CurvePoint c;
    c.n = n;
    c.trials = trials;
    c.successes = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    c.frequency = trials ? Rational(static_cast<std::int64_t>(c.successes), static_cast<std::int64_t>(trials)) : Rational();
    const double p = c.frequency.to_double();
    c.sigma = trials ? std::sqrt(p * (1 - p) / static_cast<double>(trials)) : 0.0;
    curve.push_back(std::move(c));
  }
  return curve;
}

bool nondecreasing_within(const std::vector<CurvePoint>& curve, double z) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double band = z * std::sqrt(curve[i - 1].sigma * curve[i - 1].sigma + curve[i].sigma * curve[i].sigma);
    if (curve[i].frequency.to_double() < curve[i - 1].frequency.to_double() - band) return false;
  }
  return true;
}

}  // namespace metrika
