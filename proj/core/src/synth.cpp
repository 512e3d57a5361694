#include "metrika/synth.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <random>

#include "metrika/error.hpp"
#include "metrika/eval.hpp"
#include "metrika/tuple_order.hpp"

namespace metrika {

namespace {

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// Restriction error of theta on t (the last point of theta is left out).
bool restriction_within(const PresentedStructure& m, const DistanceConfiguration& theta,
                        const std::vector<std::size_t>& t, const Rational& delta) {
  for (std::size_t j = 1; j < t.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (abs(m.distance(t[i], t[j]) - theta(i, j)) > delta) return false;
  return true;
}

// Whether y realizes the last point of theta over params within eps,
// assuming the restriction part is already within eps.
bool realizes_last(const PresentedStructure& m, const DistanceConfiguration& theta,
                   const std::vector<std::size_t>& params, std::size_t y, const Rational& eps) {
  const std::size_t k = params.size();
  for (std::size_t i = 0; i < k; ++i)
    if (abs(m.distance(params[i], y) - theta(i, k)) > eps) return false;
  return true;
}

class GraphTaskStream final : public TaskStream {
 public:
  explicit GraphTaskStream(std::size_t max_size) : max_size_(max_size) {}

  void announce(std::size_t point) override { pending_.push_back(point); }

  std::optional<ExtensionTask> next(const PresentedStructure&) override {
    while (true) {
      if (!active_) {
        if (pending_.empty()) return std::nullopt;
        start(pending_.front());
        pending_.pop_front();
      }
      if (active_) {
        ExtensionTask t = current();
        advance();
        return t;
      }
    }
  }

 private:
  void start(std::size_t p) {
    p_ = p;
    size_ = 1;
    others_.clear();
    mask_ = 0;
    active_ = true;
  }

  ExtensionTask current() {
    std::vector<std::size_t> members = others_;
    members.push_back(p_);
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < members.size(); ++i) ((mask_ >> i) & 1u ? a : b).push_back(members[i]);
    const auto key = std::make_pair(a.size(), b.size());
    auto it = shapes_.find(key);
    if (it == shapes_.end()) it = shapes_.emplace(key, graph_task_formula(a.size(), b.size())).first;
    ExtensionTask t{InfRealization{it->second, Rational(1, 2), a.size()}, a, TaskStatus::Pending, std::nullopt};
    t.params.insert(t.params.end(), b.begin(), b.end());
    return t;
  }

  void advance() {
    if (++mask_ < (1u << size_)) return;
    mask_ = 0;
    if (next_combination()) return;
    ++size_;
    if (size_ > max_size_ || size_ > p_ + 1) {
      active_ = false;
      return;
    }
    others_.resize(size_ - 1);
    for (std::size_t i = 0; i < others_.size(); ++i) others_[i] = i;
  }

  // Next (size_-1)-subset of {0..p_-1} in lexicographic order.
  bool next_combination() {
    const std::size_t k = others_.size();
    for (std::size_t i = k; i-- > 0;) {
      if (others_[i] < p_ - (k - i)) {
        ++others_[i];
        for (std::size_t j = i + 1; j < k; ++j) others_[j] = others_[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  std::size_t max_size_;
  std::deque<std::size_t> pending_;
  bool active_ = false;
  std::size_t p_ = 0;
  std::size_t size_ = 1;
  std::vector<std::size_t> others_;
  unsigned mask_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, Formula> shapes_;
};

class ConfigTaskStream final : public TaskStream {
 public:
  ConfigTaskStream(std::vector<DistanceConfiguration> corpus, Rational eps, std::uint64_t seed)
      : corpus_(std::move(corpus)), eps_(std::move(eps)), delta_(delta_for(eps_)), rng_(seed) {
    for (const auto& c : corpus_)
      if (c.size() < 2) throw Error(ErrorCode::InvalidTheory, "corpus configurations need at least two points");
  }

  void announce(std::size_t point) override { pending_.push_back(point); }

  std::optional<ExtensionTask> next(const PresentedStructure& m) override {
    while (true) {
      if (!active_) {
        if (pending_.empty()) return std::nullopt;
        start(pending_.front());
        pending_.pop_front();
      }
      while (config_pos_ < order_.size()) {
        const std::size_t id = order_[config_pos_];
        const DistanceConfiguration& theta = corpus_[id];
        const auto& tuples = tuples_for(theta.size() - 1);
        while (tuple_pos_ < tuples.size()) {
          const auto& t = tuples[tuple_pos_++];
          if (restriction_within(m, theta, t, delta_))
            return ExtensionTask{ConfigRealization{id, theta, eps_}, t, TaskStatus::Pending, std::nullopt};
        }
        ++config_pos_;
        tuple_pos_ = 0;
      }
      active_ = false;
    }
  }

 private:
  void start(std::size_t p) {
    p_ = p;
    order_.resize(corpus_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::shuffle(order_.begin(), order_.end(), rng_);
    config_pos_ = 0;
    tuple_pos_ = 0;
    tuples_.clear();
    active_ = true;
  }

  const std::vector<std::vector<std::size_t>>& tuples_for(std::size_t k) {
    auto it = tuples_.find(k);
    if (it == tuples_.end()) it = tuples_.emplace(k, tuples_with_max(k, p_ + 1)).first;
    return it->second;
  }

  std::vector<DistanceConfiguration> corpus_;
  Rational eps_;
  Rational delta_;
  std::mt19937_64 rng_;
  std::deque<std::size_t> pending_;
  bool active_ = false;
  std::size_t p_ = 0;
  std::vector<std::size_t> order_;
  std::size_t config_pos_ = 0;
  std::size_t tuple_pos_ = 0;
  std::map<std::size_t, std::vector<std::vector<std::size_t>>> tuples_;
};

}  // namespace

const Rational& ExtensionTask::eps() const {
  return std::visit([](const auto& g) -> const Rational& { return g.eps; }, goal);
}

std::string ExtensionTask::describe() const {
  if (const auto* c = std::get_if<ConfigRealization>(&goal))
    return "config " + std::to_string(c->config_id) + " over (" + join(params) + ")";
  const auto& inf = std::get<InfRealization>(goal);
  if (inf.adjacent <= params.size() && inf.phi == graph_task_formula(inf.adjacent, params.size() - inf.adjacent)) {
    const std::vector<std::size_t> a(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(inf.adjacent));
    const std::vector<std::size_t> b(params.begin() + static_cast<std::ptrdiff_t>(inf.adjacent), params.end());
    return "graph A={" + join(a) + "} B={" + join(b) + "}";
  }
  return "inf " + to_string(inf.phi) + " over (" + join(params) + ")";
}

Formula graph_task_formula(std::size_t adjacent, std::size_t non_adjacent) {
  const Signature sig = Signature::graph();
  std::vector<std::string> a, b;
  for (std::size_t i = 0; i < adjacent; ++i) a.push_back("a" + std::to_string(i + 1));
  for (std::size_t i = 0; i < non_adjacent; ++i) b.push_back("b" + std::to_string(i + 1));
  std::vector<Formula> terms;
  for (const auto& v : a) terms.push_back(Formula::atom(sig, 1, {"z", v}));
  for (const auto& v : b) terms.push_back(Formula::neg(Formula::atom(sig, 1, {"z", v})));
  for (const auto& v : a) terms.push_back(Formula::neg(Formula::atom(sig, Signature::kMetric, {"z", v})));
  for (const auto& v : b) terms.push_back(Formula::neg(Formula::atom(sig, Signature::kMetric, {"z", v})));
  if (terms.empty()) return Formula::constant(Rational::zero());
  Formula f = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) f = Formula::max(f, terms[i]);
  return f;
}

std::unique_ptr<TaskStream> graph_tasks(std::size_t max_size) {
  if (max_size == 0) throw Error(ErrorCode::InvalidArgument, "max_size must be at least 1");
  if (max_size > 16) throw Error(ErrorCode::InvalidArgument, "max_size above 16 is not supported");
  return std::make_unique<GraphTaskStream>(max_size);
}

std::unique_ptr<TaskStream> config_tasks(std::vector<DistanceConfiguration> corpus, const Rational& eps,
                                         std::uint64_t rng_seed) {
  return std::make_unique<ConfigTaskStream>(std::move(corpus), eps, rng_seed);
}

std::string to_string(TheoryKind k) {
  switch (k) {
    case TheoryKind::EmptyMetric: return "empty-metric";
    case TheoryKind::Graph: return "graph";
    case TheoryKind::Custom: return "custom";
  }
  return "?";
}

TheoryKind theory_kind_from_string(const std::string& s) {
  if (s == "empty-metric") return TheoryKind::EmptyMetric;
  if (s == "graph") return TheoryKind::Graph;
  if (s == "custom") return TheoryKind::Custom;
  throw Error(ErrorCode::InvalidTheory, "unknown theory '" + s + "'");
}

std::vector<Condition> graph_axioms() {
  const Signature sig = Signature::graph();
  return {
      parse_condition("sup x. sup y. absdiff(R(x,y), R(y,x)) = 0", sig),
      parse_condition("sup x. not(R(x,x)) = 0", sig),
      parse_condition("sup x. sup y. min(R(x,y), not(R(x,y))) = 0", sig),
      parse_condition("sup x. sup y. min(d(x,y), not(d(x,y))) = 0", sig),
  };
}

TheorySpec TheorySpec::empty_metric(std::size_t max_config_size, std::size_t config_denominator, Rational eps) {
  TheorySpec s;
  s.kind = TheoryKind::EmptyMetric;
  s.max_config_size = max_config_size;
  s.config_denominator = config_denominator;
  s.eps = std::move(eps);
  return s;
}

TheorySpec TheorySpec::graph(std::size_t max_size) {
  TheorySpec s;
  s.kind = TheoryKind::Graph;
  s.signature = Signature::graph();
  s.universal_conditions = graph_axioms();
  s.graph_max_size = max_size;
  s.eps = Rational(1, 2);
  return s;
}

TheorySpec TheorySpec::custom(std::vector<Condition> conditions, std::size_t max_config_size,
                              std::size_t config_denominator, Rational eps) {
  TheorySpec s = empty_metric(max_config_size, config_denominator, std::move(eps));
  s.kind = TheoryKind::Custom;
  s.universal_conditions = std::move(conditions);
  return s;
}

void TheorySpec::check() const {
  for (const auto& c : universal_conditions)
    if (!is_universal(c)) throw Error(ErrorCode::InvalidTheory, "not a universal condition: " + to_string(c));
  switch (kind) {
    case TheoryKind::Graph:
      if (signature != Signature::graph()) throw Error(ErrorCode::InvalidTheory, "graph theory needs the {d, R} signature");
      if (graph_max_size == 0) throw Error(ErrorCode::InvalidTheory, "graph max_size must be at least 1");
      break;
    case TheoryKind::EmptyMetric:
      if (!universal_conditions.empty()) throw Error(ErrorCode::InvalidTheory, "the empty theory has no conditions");
      [[fallthrough]];
    case TheoryKind::Custom:
      if (signature.size() != 1) throw Error(ErrorCode::InvalidTheory, "only the metric signature is supported");
      if (max_config_size < 2) throw Error(ErrorCode::InvalidTheory, "max_config_size must be at least 2");
      if (config_denominator == 0) throw Error(ErrorCode::InvalidTheory, "config grid must be positive");
      if (eps.sign() <= 0 || eps > Rational::one()) throw Error(ErrorCode::InvalidTheory, "eps must lie in (0,1]");
      break;
  }
}

std::vector<DistanceConfiguration> TheorySpec::corpus() const {
  std::vector<DistanceConfiguration> out;
  if (kind == TheoryKind::Graph) return out;
  for (std::size_t n = 2; n <= max_config_size; ++n)
    for (auto& c : grid_configurations(n, config_denominator)) out.push_back(std::move(c));
  return out;
}

bool universal_conditions_hold_at(const std::vector<Condition>& conditions, const PresentedStructure& m,
                                  std::size_t point) {
  if (point >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "point " + std::to_string(point) + " is outside the prefix");
  for (const auto& c : conditions) {
    const PrenexSplit split = split_prefix(c.formula());
    const CompiledFormula cf(split.matrix);
    // Innermost quantifier binding each matrix variable.
    std::vector<std::size_t> pos;
    for (const auto& v : cf.free_variables()) {
      std::size_t best = 0;
      for (std::size_t j = 0; j < split.prefix.size(); ++j)
        if (split.prefix[j].second == v) best = j;
      pos.push_back(best);
    }
    const std::size_t k = split.prefix.size();
    std::vector<std::size_t> pts(pos.size());
    auto holds = [&](const std::vector<std::size_t>& t) {
      for (std::size_t i = 0; i < pos.size(); ++i) pts[i] = t[pos[i]];
      return c.satisfied_by(cf.evaluate(m, pts));
    };
    if (point + 1 == m.size()) {
      for (const auto& t : tuples_with_max(k, m.size()))
        if (!holds(t)) return false;
      continue;
    }
    std::vector<std::size_t> t(k, 0);
    const std::size_t total = tuple_count(k, m.size());
    for (std::size_t i = 0; i < total; ++i, next_tuple(t))
      if (std::find(t.begin(), t.end(), point) != t.end() && !holds(t)) return false;
  }
  return true;
}

std::optional<std::size_t> find_witness(const PresentedStructure& m, const ExtensionTask& task) {
  if (const auto* c = std::get_if<ConfigRealization>(&task.goal)) {
    if (c->theta.size() != task.params.size() + 1)
      throw Error(ErrorCode::SizeMismatch, "task parameters do not match the configuration");
    for (std::size_t p : task.params)
      if (p >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "task parameter outside the prefix");
    if (!restriction_within(m, c->theta, task.params, c->eps)) return std::nullopt;
    for (std::size_t y = 0; y < m.size(); ++y)
      if (realizes_last(m, c->theta, task.params, y, c->eps)) return y;
    return std::nullopt;
  }
  const auto& inf = std::get<InfRealization>(task.goal);
  const CompiledFormula cf(inf.phi);
  if (cf.free_variables().size() != task.params.size() + 1)
    throw Error(ErrorCode::SizeMismatch, "task parameters do not match the formula");
  std::vector<std::size_t> pts(task.params.size() + 1);
  std::copy(task.params.begin(), task.params.end(), pts.begin() + 1);
  for (std::size_t z = 0; z < m.size(); ++z) {
    pts[0] = z;
    if (cf.evaluate(m, pts) < inf.eps) return z;
  }
  return std::nullopt;
}

namespace {

class GraphIndex {
 public:
  explicit GraphIndex(const PresentedStructure& m) {
    for (std::size_t i = 0; i < m.size(); ++i) add(m, i);
  }

  void add(const PresentedStructure& m, std::size_t v) {
    const std::size_t n = v + 1;
    const std::size_t words = (n + 63) / 64;
    for (auto& row : adj_) row.resize(words, 0);
    adj_.emplace_back(words, 0);
    for (std::size_t u = 0; u < n; ++u) {
      if (m.value(1, {v, u}).is_zero()) {
        set(adj_[v], u);
        set(adj_[u], v);
      }
      if (u != v && m.distance(u, v) != Rational::one()) discrete_ = false;
    }
    n_ = n;
  }

  // Candidates adjacent to all of params[0..adjacent), to none of the rest,
  // and not in params.
  std::optional<std::size_t> search(const std::vector<std::size_t>& params, std::size_t adjacent) const {
    const std::size_t words = (n_ + 63) / 64;
    std::vector<std::uint64_t> cand(words, ~std::uint64_t{0});
    if (n_ % 64) cand.back() = (std::uint64_t{1} << (n_ % 64)) - 1;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& row = adj_[params[i]];
      for (std::size_t w = 0; w < words; ++w) cand[w] &= i < adjacent ? row[w] : ~row[w];
    }
    for (std::size_t p : params) cand[p / 64] &= ~(std::uint64_t{1} << (p % 64));
    for (std::size_t w = 0; w < words; ++w)
      if (cand[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(cand[w]));
    return std::nullopt;
  }

  bool discrete() const noexcept { return discrete_; }

 private:
  static void set(std::vector<std::uint64_t>& row, std::size_t i) { row[i / 64] |= std::uint64_t{1} << (i % 64); }

  std::vector<std::vector<std::uint64_t>> adj_;
  std::size_t n_ = 0;
  bool discrete_ = true;
};

std::vector<Rational> katetov_from(const PresentedStructure& m, const std::vector<std::size_t>& params,
                                   const std::vector<Rational>& t, bool upper) {
  std::vector<Rational> h(m.size(), upper ? Rational::one() : Rational::zero());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (upper)
        h[x] = min(h[x], t[k] + m.distance(x, params[k]));
      else
        h[x] = max(h[x], abs(t[k] - m.distance(x, params[k])));
    }
  return h;
}

// Grid vectors t with |t_k - s_k| <= eps, in lexicographic order, capped.
std::vector<std::vector<Rational>> grid_targets(const std::vector<Rational>& s, const Rational& eps,
                                                const Rational& grid, std::size_t cap) {
  std::vector<std::vector<Rational>> choices;
  for (const auto& sk : s) {
    std::vector<Rational> c;
    const Rational lo = max(Rational::zero(), sk - eps);
    const Rational hi = min(Rational::one(), sk + eps);
    // first multiple of grid >= lo
    mpz_class steps = (lo / grid).numerator();
    const mpz_class den = (lo / grid).denominator();
    mpz_cdiv_q(steps.get_mpz_t(), steps.get_mpz_t(), den.get_mpz_t());
    for (Rational v = Rational(mpq_class(steps)) * grid; v <= hi; v += grid) c.push_back(v);
    choices.push_back(std::move(c));
  }
  std::vector<std::vector<Rational>> out;
  std::vector<std::size_t> idx(s.size(), 0);
  for (const auto& c : choices)
    if (c.empty()) return out;
  while (out.size() < cap) {
    std::vector<Rational> t;
    for (std::size_t k = 0; k < s.size(); ++k) t.push_back(choices[k][idx[k]]);
    out.push_back(std::move(t));
    std::size_t k = s.size();
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (s.empty()) break;
  }
  return out;
}

// Grid points k*grid in [lo, hi], split by parity of k.
void grid_points(const Rational& lo, const Rational& hi, const Rational& grid, std::vector<Rational>& odd,
                 std::vector<Rational>& even) {
  odd.clear();
  even.clear();
  const Rational a = lo / grid;
  const Rational b = hi / grid;
  mpz_class first = a.numerator();
  mpz_cdiv_q(first.get_mpz_t(), first.get_mpz_t(), a.denominator().get_mpz_t());
  mpz_class last = b.numerator();
  mpz_fdiv_q(last.get_mpz_t(), last.get_mpz_t(), b.denominator().get_mpz_t());
  for (long k = first.get_si(); k <= last.get_si(); ++k) (k % 2 ? odd : even).push_back(Rational(k) * grid);
}

// A one-point extension realizing t exactly on params. The remaining
// distances are drawn from the grid points of their admissible interval in
// index order, odd multiples of the grid preferred: those pairs sit off the
// coarser corpus lattice and spawn no new tasks, which lets the closure
// saturate. Nullopt when t is not admissible over params.
std::optional<std::vector<Rational>> random_extension(const PresentedStructure& m, const std::vector<std::size_t>& params,
                                                      const std::vector<Rational>& t, const Rational& grid,
                                                      std::mt19937_64& rng) {
  const std::size_t n = m.size();
  std::vector<std::optional<Rational>> h(n);
  std::vector<std::size_t> assigned;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& slot = h[params[k]];
    if (slot && *slot != t[k]) return std::nullopt;
    if (!in_unit_interval(t[k])) return std::nullopt;
    if (!slot) assigned.push_back(params[k]);
    slot = t[k];
  }
  for (std::size_t a : assigned)
    for (std::size_t b : assigned)
      if (abs(*h[a] - *h[b]) > m.distance(a, b) || m.distance(a, b) > *h[a] + *h[b]) return std::nullopt;
  std::vector<Rational> odd, even;
  for (std::size_t x = 0; x < n; ++x) {
    if (h[x]) continue;
    Rational lo = Rational::zero();
    Rational hi = Rational::one();
    for (std::size_t j : assigned) {
      lo = max(lo, abs(*h[j] - m.distance(x, j)));
      hi = min(hi, *h[j] + m.distance(x, j));
    }
    grid_points(lo, hi, grid, odd, even);
    const auto& pool = odd.empty() ? even : odd;
    if (pool.empty()) {
      h[x] = lo;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      h[x] = pool[pick(rng)];
    }
    assigned.push_back(x);
  }
  std::vector<Rational> out;
  for (auto& v : h) out.push_back(std::move(*v));
  return out;
}

}  // namespace

SynthResult ec_close_run(const PresentedStructure& seed, const TheorySpec& spec, std::size_t budget,
                         const Rational& grid, std::uint64_t rng_seed) {
  spec.check();
  if (seed.signature() != spec.signature)
    throw Error(ErrorCode::InvalidTheory, "seed signature differs from the theory signature");
  if (grid.sign() <= 0 || grid > Rational::one()) throw Error(ErrorCode::InvalidTheory, "grid must lie in (0,1]");
  if (spec.kind != TheoryKind::Graph && spec.eps < grid * Rational(1, 2))
    throw Error(ErrorCode::InvalidTheory, "task eps " + spec.eps.to_string() + " is below grid/2");
  for (const auto& c : spec.universal_conditions)
    if (!check_condition(c, seed, CheckMode::Finite).holds())
      throw Error(ErrorCode::SeedViolatesTheory, "seed violates " + to_string(c));

  SynthResult result{seed, {}, false};
  if (budget == 0) return result;

  PresentedStructure& m = result.structure;
  std::unique_ptr<TaskStream> stream = spec.kind == TheoryKind::Graph
                                           ? graph_tasks(spec.graph_max_size)
                                           : config_tasks(spec.corpus(), spec.eps, rng_seed);
  std::mt19937_64 rng(rng_seed ^ 0x9e3779b97f4a7c15ULL);
  std::optional<GraphIndex> graph;
  if (spec.kind == TheoryKind::Graph) graph.emplace(m);
  for (std::size_t p = 0; p < m.size(); ++p) stream->announce(p);

  while (result.stats.tasks < budget) {
    std::optional<ExtensionTask> task = stream->next(m);
    if (!task) {
      result.saturated = true;
      break;
    }
    ++result.stats.tasks;

    std::optional<std::size_t> witness;
    if (graph && graph->discrete()) {
      witness = graph->search(task->params, std::get<InfRealization>(task->goal).adjacent);
    } else {
      witness = find_witness(m, *task);
    }
    if (witness) {
      ++result.stats.realized_existing;
      continue;
    }

    std::vector<ExtensionRows> candidates;
    const std::size_t n = m.size();
    if (spec.kind == TheoryKind::Graph) {
      const auto& inf = std::get<InfRealization>(task->goal);
      std::vector<int> edge(n, -1);
      for (std::size_t i = 0; i < task->params.size(); ++i) edge[task->params[i]] = i < inf.adjacent ? 1 : 0;
      std::bernoulli_distribution coin(0.5);
      for (auto& e : edge)
        if (e < 0) e = coin(rng) ? 1 : 0;
      candidates.push_back(ExtensionRows::tabulate(m, [&](std::size_t r, std::span<const std::size_t> t) {
        if (t[0] == t[1]) return r == 0 ? Rational::zero() : Rational::one();
        if (r == 0) return Rational::one();
        const std::size_t other = t[0] == n ? t[1] : t[0];
        return edge[other] ? Rational::zero() : Rational::one();
      }));
    } else {
      const auto& cr = std::get<ConfigRealization>(task->goal);
      if (auto h = random_extension(m, task->params, cr.theta.last_column(), grid, rng))
        candidates.push_back(ExtensionRows::metric(*h));
      candidates.push_back(ExtensionRows::metric(katetov_witness(m, cr.theta, task->params, delta_for(cr.eps))));
      if (spec.kind == TheoryKind::Custom) {
        for (const auto& t : grid_targets(cr.theta.last_column(), cr.eps, grid, 256)) {
          candidates.push_back(ExtensionRows::metric(katetov_from(m, task->params, t, true)));
          candidates.push_back(ExtensionRows::metric(katetov_from(m, task->params, t, false)));
        }
      }
    }

    bool done = false;
    for (const auto& rows : candidates) {
      if (!validate_extension(m, rows).ok) continue;
      PresentedStructure next = extend_point(m, rows, task->describe());
      if (!spec.universal_conditions.empty() &&
          !universal_conditions_hold_at(spec.universal_conditions, next, n))
        continue;
      ExtensionTask probe = *task;
      const PresentedStructure& probe_m = next;
      bool realized = false;
      if (const auto* cr = std::get_if<ConfigRealization>(&probe.goal)) {
        realized = realizes_last(probe_m, cr->theta, probe.params, n, cr->eps);
      } else {
        const auto& inf = std::get<InfRealization>(probe.goal);
        std::vector<std::size_t> pts{n};
        pts.insert(pts.end(), probe.params.begin(), probe.params.end());
        realized = CompiledFormula(inf.phi).evaluate(probe_m, pts) < inf.eps;
      }
      if (!realized) continue;
      m = std::move(next);
      if (graph) graph->add(m, n);
      stream->announce(n);
      ++result.stats.realized_new;
      done = true;
      break;
    }
    if (!done) ++result.stats.unrealizable;
  }
  return result;
}

WitnessCheck ec_witness_check(const PresentedStructure& m, const PresentedStructure& n_ext, const Formula& phi,
                              const std::vector<std::size_t>& params, const Rational& tol) {
  if (!is_prefix_of(m, n_ext)) throw Error(ErrorCode::NotAPrefix, "first structure is not a prefix of the second");
  if (!is_quantifier_free(phi)) throw Error(ErrorCode::InvalidArgument, "formula must be quantifier free");
  for (std::size_t p : params)
    if (p >= m.size()) throw Error(ErrorCode::PointsOutOfPrefix, "parameter " + std::to_string(p) + " is outside the prefix");
  const CompiledFormula cf(phi);
  if (cf.free_variables().size() != params.size() + 1)
    throw Error(ErrorCode::SizeMismatch, "formula needs one witness variable and one variable per parameter");
  std::vector<std::size_t> pts(params.size() + 1);
  std::copy(params.begin(), params.end(), pts.begin() + 1);
  WitnessCheck out{true, Rational::one(), Rational::one(), Rational::zero()};
  for (std::size_t z = 0; z < n_ext.size(); ++z) {
    pts[0] = z;
    Rational v = cf.evaluate(n_ext, pts);
    if (z < m.size() && v < out.inf_m) out.inf_m = v;
    if (v < out.inf_ext) out.inf_ext = std::move(v);
  }
  out.gap = out.inf_m - out.inf_ext;
  out.passes = out.inf_m <= out.inf_ext + tol;
  return out;
}

}  // namespace metrika
