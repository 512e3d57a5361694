#include <algorithm>
#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "metrika/condition.hpp"
#include "metrika/error.hpp"
#include "metrika/eval.hpp"
#include "metrika/polish.hpp"
#include "metrika/synth.hpp"
#include "metrika/urysohn.hpp"

using namespace metrika;

namespace {

const Rational E8(1, 8);

PresentedStructure point() { return PresentedStructure::from_distances({{Rational(0)}}); }

PresentedStructure vertex() {
  return PresentedStructure::tabulate(Signature::graph(), 1, [](std::size_t r, std::span<const std::size_t>) {
    return r == 0 ? Rational(0) : Rational(1);
  });
}

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

bool adjacent(const PresentedStructure& g, std::size_t a, std::size_t b) { return g.value(1, {a, b}).is_zero(); }

// Every disjoint (A, B) over the vertices with |A u B| <= k has a vertex
// outside A u B adjacent to all of A and none of B.
bool extension_axioms_hold(const PresentedStructure& g, std::size_t k) {
  const std::size_t n = g.size();
  std::vector<std::size_t> label(n, 0);  // 0 unused, 1 in A, 2 in B
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) -> bool {
    if (i == n) {
      if (used == 0) return true;
      for (std::size_t z = 0; z < n; ++z) {
        if (label[z] != 0) continue;
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v)
          if (label[v] == 1) ok = adjacent(g, z, v);
          else if (label[v] == 2) ok = !adjacent(g, z, v);
        if (ok) return true;
      }
      return false;
    }
    for (std::size_t l = 0; l <= 2; ++l) {
      if (l && used == k) break;
      label[i] = l;
      if (!rec(i + 1, used + (l ? 1 : 0))) return false;
    }
    label[i] = 0;
    return true;
  };
  return rec(0, 0);
}

// Configuration with the last point moved to the front, so that in its
// formula the witness is the first free variable.
DistanceConfiguration witness_first(const DistanceConfiguration& theta) {
  const std::size_t n = theta.size();
  std::vector<std::size_t> order{n - 1};
  for (std::size_t i = 0; i + 1 < n; ++i) order.push_back(i);
  std::vector<std::vector<Rational>> r(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = theta(order[i], order[j]);
  return DistanceConfiguration(r);
}

}  // namespace

TEST(Theory, Kinds) {
  for (TheoryKind k : {TheoryKind::EmptyMetric, TheoryKind::Graph, TheoryKind::Custom})
    EXPECT_EQ(theory_kind_from_string(to_string(k)), k);
  EXPECT_EQ(error_of([] { (void)theory_kind_from_string("groups"); }), ErrorCode::InvalidTheory);
  const TheorySpec em = TheorySpec::empty_metric();
  EXPECT_EQ(em.corpus().size(), grid_configurations(2, 4).size() + grid_configurations(3, 4).size());
  EXPECT_EQ(TheorySpec::graph().universal_conditions.size(), graph_axioms().size());
  for (const Condition& c : graph_axioms()) EXPECT_TRUE(is_universal(c)) << to_string(c);
  EXPECT_EQ(error_of([] {
              TheorySpec::custom({parse_condition("sup x. inf y. d(x,y) = 0", Signature())}).check();
            }),
            ErrorCode::InvalidTheory);
}

TEST(GraphTasks, Shapes) {
  auto stream = graph_tasks(1);
  stream->announce(0);
  const PresentedStructure g = vertex();
  std::set<std::pair<std::size_t, std::size_t>> shapes;
  while (auto t = stream->next(g)) {
    const auto& inf = std::get<InfRealization>(t->goal);
    shapes.insert({inf.adjacent, t->params.size() - inf.adjacent});
    EXPECT_EQ(inf.eps, Rational(1, 2));
  }
  EXPECT_EQ(shapes, (std::set<std::pair<std::size_t, std::size_t>>{{1, 0}, {0, 1}}));
  EXPECT_EQ(error_of([] { (void)graph_tasks(0); }), ErrorCode::InvalidArgument);
}

TEST(GraphTasks, FormulaForOneAndOne) {
  const Signature sig = Signature::graph();
  const Formula f = graph_task_formula(1, 1);
  EXPECT_EQ(free_variables(f).size(), 3u);
  // Same function as max(R(z,a), 1-R(z,b), 1-d(z,a), 1-d(z,b)) on every
  // assignment of a small graph.
  const Formula g = parse_formula("max(max(R(z,a), not(R(z,b))), max(not(d(z,a)), not(d(z,b))))", sig);
  gen::Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const PresentedStructure m = gen::graph(rng, 4);
    for (std::size_t z = 0; z < 4; ++z)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
          const std::vector<std::string> fv = free_variables(f);
          Assignment fa{{fv[0], z}, {fv[1], a}, {fv[2], b}};
          ASSERT_EQ(evaluate(f, m, fa), evaluate(g, m, {{"z", z}, {"a", a}, {"b", b}}));
        }
  }
}

// The stream lists each disjoint (A, B) exactly once, as a set-based
// enumeration does.
TEST(GraphTasks, MatchesSetOracle) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::size_t n = 6;
    auto stream = graph_tasks(k);
    for (std::size_t p = 0; p < n; ++p) stream->announce(p);
    gen::Rng rng(2);
    const PresentedStructure g = gen::graph(rng, n);
    std::set<std::pair<std::set<std::size_t>, std::set<std::size_t>>> got;
    std::size_t count = 0;
    while (auto t = stream->next(g)) {
      const auto& inf = std::get<InfRealization>(t->goal);
      std::set<std::size_t> a(t->params.begin(), t->params.begin() + static_cast<std::ptrdiff_t>(inf.adjacent));
      std::set<std::size_t> b(t->params.begin() + static_cast<std::ptrdiff_t>(inf.adjacent), t->params.end());
      ASSERT_EQ(a.size() + b.size(), t->params.size());
      got.insert({a, b});
      ++count;
    }
    std::set<std::pair<std::set<std::size_t>, std::set<std::size_t>>> want;
    std::vector<std::size_t> label(n, 0);
    for (std::size_t code = 0; code < 729; ++code) {  // 3^6 labelings
      std::size_t c = code;
      std::set<std::size_t> a, b;
      for (std::size_t v = 0; v < n; ++v, c /= 3) {
        if (c % 3 == 1) a.insert(v);
        if (c % 3 == 2) b.insert(v);
      }
      const std::size_t size = a.size() + b.size();
      if (size >= 1 && size <= k) want.insert({a, b});
    }
    EXPECT_EQ(count, want.size()) << k;
    EXPECT_EQ(got, want) << k;
  }
}

TEST(ConfigTasks, ApplicableAndDeterministic) {
  const PresentedStructure m = PresentedStructure::from_distances({{0, Rational(1, 2)}, {Rational(1, 2), 0}});
  const std::vector<DistanceConfiguration> corpus = TheorySpec::empty_metric().corpus();
  auto drain = [&](std::uint64_t seed) {
    auto stream = config_tasks(corpus, E8, seed);
    stream->announce(0);
    stream->announce(1);
    std::vector<std::string> out;
    while (auto t = stream->next(m)) {
      const auto& cr = std::get<ConfigRealization>(t->goal);
      EXPECT_LE(config_error(restrict(cr.theta), m, t->params), delta_for(E8));
      out.push_back(t->describe());
    }
    return out;
  };
  const auto a = drain(5), b = drain(5);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
  std::vector<std::string> sa = a, sc = drain(6);
  std::sort(sa.begin(), sa.end());
  std::sort(sc.begin(), sc.end());
  EXPECT_EQ(sa, sc);
}

TEST(EcClose, BudgetZeroReturnsSeed) {
  const PresentedStructure s = point();
  const SynthResult r = ec_close_run(s, TheorySpec::empty_metric(), 0);
  EXPECT_TRUE(r.structure.same_tables(s));
  EXPECT_EQ(r.stats.tasks, 0u);
}

TEST(EcClose, Errors) {
  const PresentedStructure loop = PresentedStructure::tabulate(
      Signature::graph(), 1, [](std::size_t, std::span<const std::size_t>) { return Rational(0); });
  EXPECT_EQ(error_of([&] { (void)ec_close(loop, TheorySpec::graph(), 10); }), ErrorCode::SeedViolatesTheory);
  EXPECT_EQ(error_of([] { (void)ec_close(point(), TheorySpec::empty_metric(3, 4, Rational(1, 32)), 10); }),
            ErrorCode::InvalidTheory);
  EXPECT_EQ(error_of([] { (void)ec_close(vertex(), TheorySpec::empty_metric(), 10); }), ErrorCode::InvalidTheory);
  const TheorySpec bounded =
      TheorySpec::custom({parse_condition("sup x. sup y. (d(x,y) -. 1/2) = 0", Signature())});
  EXPECT_EQ(error_of([&] {
              (void)ec_close(PresentedStructure::from_distances({{0, 1}, {1, 0}}), bounded, 10);
            }),
            ErrorCode::SeedViolatesTheory);
}

TEST(EcClose, UrysohnApproximant) {
  const TheorySpec spec = TheorySpec::empty_metric();
  const SynthResult r = ec_close_run(point(), spec, 100000, E8, 1);
  ASSERT_TRUE(r.saturated);
  EXPECT_TRUE(is_prefix_of(point(), r.structure));
  EXPECT_TRUE(validate(r.structure).ok);
  const ExtensionReport rep = extension_property_report(r.structure, E8, spec.corpus(), 4);
  EXPECT_TRUE(rep.all_satisfied()) << rep.satisfied << "/" << rep.total;
  EXPECT_GT(rep.total, 0u);
  EXPECT_EQ(r.structure.provenance().size(), r.structure.size() - 1);

  // Saturated: another pass realizes everything in place.
  const SynthResult again = ec_close_run(r.structure, spec, 100000, E8, 1);
  EXPECT_TRUE(again.saturated);
  EXPECT_EQ(again.stats.realized_new, 0u);
  EXPECT_TRUE(again.structure.same_tables(r.structure));
}

TEST(EcClose, RandomGraph) {
  const SynthResult r = ec_close_run(vertex(), TheorySpec::graph(3), 2000000, E8, 1);
  ASSERT_TRUE(r.saturated);
  EXPECT_TRUE(extension_axioms_hold(r.structure, 3));
  for (const Condition& c : graph_axioms()) EXPECT_TRUE(check_condition(c, r.structure).holds()) << to_string(c);
  EXPECT_EQ(r.stats.unrealizable, 0u);
}

TEST(EcClose, Deterministic) {
  const SynthResult a = ec_close_run(point(), TheorySpec::empty_metric(), 3000, E8, 9);
  const SynthResult b = ec_close_run(point(), TheorySpec::empty_metric(), 3000, E8, 9);
  EXPECT_TRUE(a.structure.same_tables(b.structure));
  EXPECT_EQ(a.structure.provenance(), b.structure.provenance());
  const SynthResult c = ec_close_run(point(), TheorySpec::empty_metric(), 3000, E8, 10);
  EXPECT_FALSE(a.structure.same_tables(c.structure));
}

TEST(EcClose, FairnessBudgetCounts) {
  const SynthResult r = ec_close_run(point(), TheorySpec::empty_metric(), 500, E8, 7);
  EXPECT_FALSE(r.saturated);
  EXPECT_EQ(r.stats.tasks, 500u);
  EXPECT_EQ(r.stats.realized_existing + r.stats.realized_new + r.stats.unrealizable, r.stats.tasks);
}

TEST(EcClose, CustomTheoryKept) {
  const Condition bound = parse_condition("sup x. sup y. (d(x,y) -. 1/2) = 0", Signature());
  const TheorySpec spec = TheorySpec::custom({bound}, 3, 4, E8);
  const SynthResult r = ec_close_run(point(), spec, 3000, E8, 3);
  EXPECT_GT(r.structure.size(), 1u);
  EXPECT_TRUE(check_condition(bound, r.structure).holds());
  EXPECT_TRUE(validate(r.structure).ok);
  EXPECT_GT(r.stats.unrealizable, 0u);  // configurations with distance 1 cannot be realized
}

TEST(WitnessCheck, Examples) {
  gen::Rng rng(4);
  const PresentedStructure m = gen::metric_space(rng, 3, 8);
  const Formula phi = parse_formula("absdiff(d(y,a), 1/2)", Signature());
  const WitnessCheck same = ec_witness_check(m, m, phi, {0}, Rational(0));
  EXPECT_TRUE(same.passes);
  EXPECT_EQ(same.gap, Rational(0));

  // One vertex b, then a neighbour: inf_x R(x,b) drops from 1 to 0.
  const PresentedStructure b = vertex();
  const PresentedStructure both = extend_point(b, ExtensionRows::tabulate(b, [](std::size_t r, std::span<const std::size_t> t) {
    if (t[0] == t[1]) return r == 0 ? Rational(0) : Rational(1);
    return r == 0 ? Rational(1) : Rational(0);
  }));
  const WitnessCheck w = ec_witness_check(b, both, parse_formula("R(x,b)", Signature::graph()), {0}, Rational(0));
  EXPECT_FALSE(w.passes);
  EXPECT_EQ(w.gap, Rational(1));
  EXPECT_EQ(w.inf_m, Rational(1));
  EXPECT_EQ(w.inf_ext, Rational(0));

  const PresentedStructure other = gen::metric_space(rng, 4, 8, true);
  EXPECT_EQ(error_of([&] { (void)ec_witness_check(m, other, phi, {0}, Rational(0)); }), ErrorCode::NotAPrefix);
}

// Random one-point extensions of a closure cannot beat it by more than eps
// on any task formula.
TEST(WitnessCheck, UrysohnFalsificationCampaign) {
  const TheorySpec spec = TheorySpec::empty_metric();
  const PresentedStructure u = ec_close_run(point(), spec, 100000, E8, 2).structure;
  gen::Rng rng(5);
  const std::vector<DistanceConfiguration> corpus = spec.corpus();
  const DistanceConfiguration base = configuration_of(u);
  auto pick = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi)(rng); };
  std::size_t checked = 0;
  for (int i = 0; i < 400; ++i) {
    const DistanceConfiguration& theta = corpus[pick(corpus.size() - 1)];
    std::vector<std::size_t> params;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      params.clear();
      for (std::size_t k = 0; k + 1 < theta.size(); ++k) params.push_back(pick(u.size() - 1));
      if (config_error(restrict(theta), u, params) <= delta_for(E8)) break;
    }
    if (config_error(restrict(theta), u, params) > delta_for(E8)) continue;
    std::vector<Rational> s;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const RationalInterval iv = admissible_bounds(base, s);
      s.push_back(iv.lo + (iv.hi - iv.lo) * gen::grid_value(rng, 8));
    }
    const PresentedStructure ext = extend_point(u, ExtensionRows::metric(s));
    const Formula phi = config_formula(witness_first(theta));
    const WitnessCheck w = ec_witness_check(u, ext, phi, params, E8);
    ASSERT_TRUE(w.passes) << i << " gap " << w.gap;
    ++checked;
  }
  EXPECT_GT(checked, 300u);
}

TEST(SynthProperty, SeedIsPrefix) {
  gen::Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    const PresentedStructure seed = gen::metric_space(rng, 1 + i % 4, 8, true);
    const PresentedStructure out = ec_close(seed, TheorySpec::empty_metric(), 300, E8, i);
    const std::size_t K = code_length(seed.signature(), seed.size());
    EXPECT_EQ(encode(out, K), encode(seed));
    EXPECT_TRUE(validate(out).ok);
  }
  for (int i = 0; i < 5; ++i) {
    const PresentedStructure seed = gen::graph(rng, 1 + i);
    const PresentedStructure out = ec_close(seed, TheorySpec::graph(2), 300, E8, i);
    EXPECT_TRUE(is_prefix_of(seed, out));
    for (std::size_t p = 1; p <= out.size(); ++p)
      for (const Condition& c : graph_axioms()) ASSERT_TRUE(check_condition(c, prefix(out, p)).holds());
  }
}
