#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "gen.hpp"
#include "metrika/compare.hpp"
#include "metrika/condition.hpp"
#include "metrika/eval.hpp"
#include "metrika/io.hpp"
#include "metrika/polish.hpp"
#include "metrika/random.hpp"
#include "metrika/synth.hpp"
#include "metrika/urysohn.hpp"

using namespace metrika;
using io::Json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("metrika_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
    ::unsetenv("METRIKA_SEED");
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    io::write_text_file(path(name), text);
    return path(name);
  }
  std::string write(const std::string& name, const PresentedStructure& m) const {
    return write(name, io::to_json(m).dump());
  }

  std::filesystem::path dir_;
};

const Rational H(1, 2), Q(1, 4);

}  // namespace

TEST_F(Cli, EvalSelfPair) {
  gen::Rng rng(1);
  const std::string m = write("m.json", gen::metric_space(rng, 4, 8, true));
  const Outcome r = run_cli({"eval", "--structure", m, "--formula", "inf x. inf y. d(x,y)"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0/1\n");
}

TEST_F(Cli, EvalMatchesModule) {
  gen::Rng rng(2);
  const Signature sig;
  for (int i = 0; i < 40; ++i) {
    const PresentedStructure m = gen::metric_space(rng, 1 + i % 4, 8);
    const std::string file = write("m.json", m);
    const Formula f = gen::prenex_formula(rng, sig, i % 3, {"a"}, 3);
    const std::string text = to_string(f);
    const std::string a = std::to_string(i % m.size());
    const Outcome r = run_cli({"eval", "--structure", file, "--formula", text, "--assign", "a=" + a});
    ASSERT_EQ(r.code, 0) << r.err;
    const Assignment asg{{"a", i % m.size()}};
    ASSERT_EQ(r.out, io::fraction(evaluate(f, m, asg)) + "\n") << text;
    const Outcome p = run_cli({"eval", "--structure", file, "--formula", text, "--assign", "a=" + a, "--prefix"});
    const ValueInterval v = evaluate_prefix_bounds(f, m, asg);
    ASSERT_EQ(p.out, "[" + io::fraction(v.lo) + ", " + io::fraction(v.hi) + "]\n");
  }
  EXPECT_EQ(run_cli({"eval", "--structure", write("m.json", gen::metric_space(rng, 2, 8)), "--formula", "d(x,y)"}).code,
            cli::kDomain);
}

TEST_F(Cli, CheckExitCodes) {
  const PresentedStructure two = PresentedStructure::from_distances({{0, H}, {H, 0}});
  const std::string m = write("m.json", two);
  const Outcome holds = run_cli({"check", "--structure", m, "--condition", "sup x. sup y. d(x,y) <= 1/2"});
  EXPECT_EQ(holds.code, cli::kOk);
  EXPECT_EQ(holds.json()["status"], "holds");
  EXPECT_EQ(holds.json()["schema"], "metrika/check/v1");
  EXPECT_EQ(holds.json()["inputs"]["structure"]["hash"], io::content_hash(io::read_text_file(m)));

  const Outcome fails = run_cli({"check", "--structure", m, "--condition", "sup x. sup y. d(x,y) < 1/2"});
  EXPECT_EQ(fails.code, cli::kNotHolds);
  EXPECT_EQ(fails.json()["status"], "fails");

  const Outcome unknown = run_cli({"check", "--structure", m, "--condition", "sup x. sup y. d(x,y) < 3/4", "--prefix"});
  EXPECT_EQ(unknown.code, cli::kNotHolds);
  const CheckResult direct = check_condition(parse_condition("sup x. sup y. d(x,y) < 3/4", Signature()), two, CheckMode::Prefix);
  EXPECT_EQ(unknown.json()["status"], to_string(direct.status));
  EXPECT_EQ(unknown.json()["interval"]["lo"], io::fraction(direct.interval.lo));
  EXPECT_EQ(unknown.json()["interval"]["hi"], io::fraction(direct.interval.hi));
}

TEST_F(Cli, ValidateMatchesModule) {
  const PresentedStructure bad = PresentedStructure::from_distances({{0, 1, H}, {1, 0, Q}, {H, Q, 0}});
  const Outcome r = run_cli({"validate", "--structure", write("bad.json", bad)});
  EXPECT_EQ(r.code, 0);
  const ValidationReport direct = validate(bad);
  const Json j = r.json();
  EXPECT_EQ(j["ok"], direct.ok);
  EXPECT_EQ(j["is_metric"], direct.is_metric);
  ASSERT_EQ(j["violations"].size(), direct.violations.size());
  for (std::size_t i = 0; i < direct.violations.size(); ++i) {
    EXPECT_EQ(j["violations"][i]["axiom"], direct.violations[i].axiom);
    EXPECT_EQ(j["violations"][i]["witness"], Json(direct.violations[i].witness));
    EXPECT_EQ(j["violations"][i]["lhs"], io::fraction(direct.violations[i].lhs));
  }
}

TEST_F(Cli, SynthMatchesModuleAndIsDeterministic) {
  const std::string out1 = path("u1.json"), out2 = path("u2.json");
  const std::vector<std::string> args{"synth", "--theory", "empty-metric", "--budget", "500", "--grid", "1/8", "--seed", "7"};
  auto with_out = [&](std::string p) {
    auto a = args;
    a.push_back("--out");
    a.push_back(p);
    return a;
  };
  const Outcome a = run_cli(with_out(out1));
  const Outcome b = run_cli(with_out(out1));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const std::string text = io::read_text_file(out1);

  const SynthResult direct = ec_close_run(PresentedStructure::from_distances({{Rational(0)}}), TheorySpec::empty_metric(),
                                          500, Rational(1, 8), 7);
  EXPECT_EQ(text, io::to_json(direct.structure).dump(2) + "\n");
  EXPECT_EQ(a.json()["points"], direct.structure.size());
  EXPECT_EQ(a.json()["tasks"], direct.stats.tasks);
  EXPECT_EQ(a.json()["saturated"], direct.saturated);
  EXPECT_EQ(a.json()["output"]["hash"], io::content_hash(text));

  // METRIKA_SEED stands in for --seed.
  ::setenv("METRIKA_SEED", "7", 1);
  const Outcome env = run_cli({"synth", "--theory", "empty-metric", "--budget", "500", "--grid", "1/8", "--out", out2});
  ::unsetenv("METRIKA_SEED");
  EXPECT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(io::read_text_file(out2), text);

  const Outcome no_seed = run_cli({"synth", "--theory", "empty-metric", "--budget", "500", "--out", out2});
  EXPECT_EQ(no_seed.code, cli::kUsage);
  EXPECT_EQ(run_cli({"synth", "--theory", "groups", "--budget", "5", "--seed", "1"}).code, cli::kDomain);
}

TEST_F(Cli, SynthGraphAndTheoryFile) {
  const std::string theory = write("graph.json", R"({"name":"graph","max_size":2,"budget":300})");
  const Outcome r = run_cli({"synth", "--theory", theory, "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  TheorySpec spec = TheorySpec::graph(2);
  const PresentedStructure seed = PresentedStructure::tabulate(
      Signature::graph(), 1, [](std::size_t rel, std::span<const std::size_t>) { return rel == 0 ? Rational(0) : Rational(1); });
  const PresentedStructure direct = ec_close(seed, spec, 300, Rational(1, 8), 3);
  EXPECT_TRUE(io::structure_from_json(r.json()).same_tables(direct));
}

// synth then report on the 3-point 1/4-grid configurations at eps 1/8.
TEST_F(Cli, SynthThenReport) {
  Json list = Json::array();
  for (const auto& c : grid_configurations(3, 4)) list.push_back(io::to_json(c));
  const std::string e3 = write("e3.json", list.dump());
  for (const std::string budget : {"500", "100000"}) {
    const std::string u = path("u" + budget + ".json");
    ASSERT_EQ(run_cli({"synth", "--theory", "empty-metric", "--budget", budget, "--grid", "1/8", "--seed", "7", "--out", u}).code, 0);
    const Outcome r = run_cli({"report", "--structure", u, "--configs", e3, "--eps", "1/8"});
    ASSERT_EQ(r.code, 0) << r.err;
    const ExtensionReport direct = extension_property_report(io::structure_from_json(io::read_json_file(u)), Rational(1, 8),
                                                             grid_configurations(3, 4));
    const Json j = r.json();
    EXPECT_EQ(j["schema"], "metrika/extension-report/v1");
    EXPECT_EQ(j["satisfied"], direct.satisfied);
    EXPECT_EQ(j["total"], direct.total);
    EXPECT_EQ(j["all_satisfied"], direct.all_satisfied());
    EXPECT_EQ(j["failures"].size(), direct.failures.size());
    // A saturated closure passes every configuration.
    if (budget == "100000") EXPECT_TRUE(j["all_satisfied"].get<bool>());
  }
}

TEST_F(Cli, SampleMatchesModule) {
  for (const std::string sampler : {"sequential-uniform", "rejection-uniform"}) {
    const Outcome r = run_cli({"sample", "--n", "5", "--sampler", sampler, "--grid", "1/16", "--seed", "11"});
    ASSERT_EQ(r.code, 0) << r.err;
    MeasureSpec spec;
    spec.kind = sampler_kind_from_string(sampler);
    spec.grid = Rational(1, 16);
    spec.seed = 11;
    Rng rng = trial_rng(11, 0, 0);
    EXPECT_TRUE(io::structure_from_json(r.json()).same_tables(sample_space(5, spec, rng)));
    EXPECT_EQ(r.out, run_cli({"sample", "--n", "5", "--sampler", sampler, "--grid", "1/16", "--seed", "11"}).out);
  }
  EXPECT_EQ(run_cli({"sample", "--n", "5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"sample", "--n", "5", "--seed", "x"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"sample", "--n", "3", "--grid", "2/3", "--seed", "1"}).code, cli::kDomain);
}

TEST_F(Cli, AuditMatchesModule) {
  const Outcome r = run_cli({"audit", "--n", "4", "--trials", "2000", "--formula", "d(x,y)", "--eps", "1/2", "--sampler",
                         "rejection", "--seed", "5", "--jobs", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  MeasureSpec spec;
  spec.kind = SamplerKind::RejectionUniform;
  spec.seed = 5;
  const InvarianceReport direct =
      invariance_audit(spec, 4, 2000, parse_formula("d(x,y)", Signature()), H, 0.01, 1);
  const Json j = r.json();
  ASSERT_EQ(j["frequencies"].size(), direct.frequencies.size());
  for (std::size_t i = 0; i < direct.frequencies.size(); ++i) EXPECT_EQ(j["frequencies"][i]["hits"], direct.frequencies[i].hits);
  EXPECT_EQ(j["gaps_within_3sigma"], direct.gaps_within_3sigma);
  EXPECT_EQ(j["dof"], direct.dof);
  EXPECT_EQ(j["eps"], "1/2");
}

TEST_F(Cli, GenericityAndCsvReport) {
  write("theta.json", R"([["0","1/2"],["1/2","0"]])");
  const std::string campaign =
      write("c.json", R"({"spec":{"kind":"sequential-uniform"},"n_values":[3,5],"trials":200,"eps":"1/4","theta":"theta.json"})");
  const std::string csv = path("curve.csv");
  const Outcome r = run_cli({"genericity", "--campaign", campaign, "--seed", "9", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  MeasureSpec spec;
  spec.seed = 9;
  const DistanceConfiguration theta({{0, H}, {H, 0}});
  const auto direct = genericity_frequency(spec, theta, Q, {3, 5}, 200);
  const Json j = r.json();
  ASSERT_EQ(j["curve"].size(), 2u);
  std::string expected_csv = "n,frequency\n";
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(j["curve"][i]["successes"], direct[i].successes);
    EXPECT_EQ(j["curve"][i]["frequency"], io::fraction(direct[i].frequency));
    expected_csv += std::to_string(direct[i].n) + "," + io::decimal(direct[i].frequency) + "\n";
  }
  EXPECT_EQ(io::read_text_file(csv), expected_csv);

  const std::string g = write("g.json", r.out);
  const Outcome merged = run_cli({"report", "--format", "csv", g, g});
  EXPECT_EQ(merged.code, 0) << merged.err;
  EXPECT_EQ(merged.out, expected_csv + expected_csv.substr(expected_csv.find('\n') + 1));
}

TEST_F(Cli, CompareMatchesModule) {
  gen::Rng rng(4);
  const PresentedStructure a = gen::metric_space(rng, 5, 8);
  const PresentedStructure b = gen::metric_space(rng, 5, 8);
  const std::string fa = write("a.json", a), fb = write("b.json", b);
  for (const std::string eps : {"1/4", "1/2", "1"}) {
    const Outcome r = run_cli({"compare", "--a", fa, "--b", fb, "--eps", eps, "--depth", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const BackAndForthResult direct = back_and_forth(a, b, Rational::parse(eps), 4);
    const Json j = r.json();
    EXPECT_EQ(j["status"], to_string(direct.status));
    EXPECT_EQ(j["distortion"], io::fraction(direct.correspondence.distortion));
    EXPECT_EQ(j["nodes_explored"], direct.nodes_explored);
    EXPECT_EQ(j["inputs"]["a"]["hash"], io::content_hash(io::read_text_file(fa)));
  }
  const Outcome same = run_cli({"compare", "--a", fa, "--b", fa, "--eps", "1/4", "--depth", "5"});
  EXPECT_EQ(same.json()["status"], "success");
  const Outcome budget = run_cli({"compare", "--a", fa, "--b", fb, "--eps", "0", "--depth", "5", "--budget", "2"});
  EXPECT_EQ(budget.code, cli::kDomain);
  EXPECT_EQ(budget.json()["status"], "budget_exhausted");
  EXPECT_EQ(run_cli({"compare", "--a", fa, "--b", fb, "--eps", "a/b", "--depth", "5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"compare", "--a", fa, "--b", fb, "--eps", "0.25", "--depth", "0"}).code, cli::kUsage);
}

TEST_F(Cli, EncodeMatchesModule) {
  gen::Rng rng(5);
  const PresentedStructure g = gen::graph(rng, 3);
  const std::string f = write("g.json", g);
  const Outcome r = run_cli({"encode", "--structure", f});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::code_from_json(r.json()), encode(g));
  EXPECT_EQ(r.json()["schema"], "metrika/code/v1");
  EXPECT_EQ(io::code_from_json(run_cli({"encode", "--structure", f, "--length", "7"}).json()), encode(g, 7));
  EXPECT_EQ(run_cli({"encode", "--structure", f, "--length", "99"}).code, cli::kDomain);
}

TEST_F(Cli, ReportMerging) {
  const Outcome empty = run_cli({"report"});
  EXPECT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(empty.json(), Json::parse(R"({"schema":"metrika/report/v1","artifacts":[]})"));

  const std::string v1 = write("v1.json", R"({"schema":"metrika/compare/v1","status":"success"})");
  const std::string v2 = write("v2.json", R"({"schema":"metrika/compare/v2","status":"success"})");
  const Outcome ok = run_cli({"report", v1, v1});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.json()["artifacts"].size(), 2u);
  EXPECT_EQ(ok.json()["artifacts"][0]["content"]["status"], "success");
  EXPECT_EQ(run_cli({"report", v1, v2}).code, cli::kFileFormat);
  EXPECT_EQ(run_cli({"report", "--format", "csv", v1}).code, cli::kFileFormat);
  EXPECT_EQ(run_cli({"report", write("x.json", R"({"a":1})")}).code, cli::kFileFormat);
  EXPECT_EQ(run_cli({"report", "--eps", "1/8"}).code, cli::kUsage);
}

TEST_F(Cli, ErrorsMapToExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"eval", "--formula", "0"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"eval", "--structure", path("missing.json"), "--formula", "0"}).code, cli::kFileFormat);
  EXPECT_EQ(run_cli({"eval", "--structure", write("bad.json", "{"), "--formula", "0"}).code, cli::kFileFormat);
  const std::string m = write("m.json", PresentedStructure::from_distances({{Rational(0)}}));
  EXPECT_EQ(run_cli({"eval", "--structure", m, "--formula", "d(x,"}).code, cli::kDomain);
  EXPECT_EQ(run_cli({"eval", "--structure", m, "--formula", "d(x,x)", "--assign", "x"}).code, cli::kUsage);
  const Outcome help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("synth"), std::string::npos);
}
