#include <unistd.h>

#include <filesystem>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "metrika/error.hpp"
#include "metrika/io.hpp"

using namespace metrika;
using io::Json;

namespace {

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

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / ("metrika_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Fraction, Format) {
  EXPECT_EQ(io::fraction(Rational(0)), "0/1");
  EXPECT_EQ(io::fraction(Rational(1)), "1/1");
  EXPECT_EQ(io::fraction(Rational(-3, 6)), "-1/2");
  EXPECT_EQ(io::rational_from_json(Json("0.125")), Rational(1, 8));
  EXPECT_EQ(io::rational_from_json(Json("3/9")), Rational(1, 3));
  EXPECT_EQ(io::rational_from_json(Json(1)), Rational(1));
  // Binary floats are not exact rationals.
  EXPECT_EQ(error_of([] { (void)io::rational_from_json(Json(0.1)); }), ErrorCode::FormatError);
  EXPECT_EQ(error_of([] { (void)io::rational_from_json(Json("1/0")); }), ErrorCode::FormatError);
  EXPECT_EQ(error_of([] { (void)io::rational_from_json(Json::array()); }), ErrorCode::FormatError);
}

TEST(StructureJson, Shape) {
  const Rational h(1, 2);
  const PresentedStructure m = PresentedStructure::from_distances({{0, h}, {h, 0}});
  const Json j = io::to_json(m);
  EXPECT_EQ(j["points"], 2);
  EXPECT_EQ(j["tables"]["d"], Json::parse(R"([["0/1","1/2"],["1/2","0/1"]])"));
  EXPECT_EQ(j["signature"]["relations"][0]["name"], "d");
  EXPECT_TRUE(io::structure_from_json(j).same_tables(m));

  Json bad = j;
  bad["tables"]["d"][1] = Json::array({"1/2"});
  EXPECT_EQ(error_of([&] { (void)io::structure_from_json(bad); }), ErrorCode::FormatError);
  bad = j;
  bad.erase("points");
  EXPECT_EQ(error_of([&] { (void)io::structure_from_json(bad); }), ErrorCode::FormatError);
  bad = j;
  // Loading does not validate: an asymmetric table is read as is.
  bad["tables"]["d"][0][1] = "2/3";
  EXPECT_FALSE(validate(io::structure_from_json(bad)).ok);
}

TEST(StructureJson, RoundTrip) {
  gen::Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    const PresentedStructure m = i % 2 ? gen::graph(rng, i % 6) : gen::metric_space(rng, 1 + i % 6, 1 + i % 12);
    const std::string text = io::to_json(m).dump();
    const PresentedStructure back = io::structure_from_json(Json::parse(text));
    ASSERT_TRUE(back.same_tables(m));
    ASSERT_EQ(back.signature(), m.signature());
    ASSERT_EQ(io::to_json(back).dump(), text);
  }
}

TEST(ConfigurationJson, Forms) {
  const Json one = Json::parse(R"([["0","1/4"],["1/4","0"]])");
  const auto a = io::configurations_from_json(one);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].size(), 2u);
  const Json many = Json::array({one, Json::parse(R"([["0"]])")});
  EXPECT_EQ(io::configurations_from_json(many).size(), 2u);
  EXPECT_EQ(io::configurations_from_json(Json{{"configs", many}}).size(), 2u);
  EXPECT_EQ(io::to_json(a[0]), Json::parse(R"([["0/1","1/4"],["1/4","0/1"]])"));
  EXPECT_EQ(error_of([] { (void)io::configurations_from_json(Json{{"other", 1}}); }), ErrorCode::FormatError);
  EXPECT_THROW((void)io::configuration_from_json(Json::parse(R"([["0","1"],["1/2","0"]])")), Error);
}

TEST(CodeJson, RoundTripAndSchema) {
  gen::Rng rng(2);
  const Code c = encode(gen::metric_space(rng, 3, 8));
  const Json j = io::to_json(c);
  EXPECT_EQ(io::code_from_json(j), c);
  Json other = j;
  other["index_order"] = "weight-lex";
  EXPECT_EQ(error_of([&] { (void)io::code_from_json(other); }), ErrorCode::SchemaMismatch);
}

TEST(Reports, Json) {
  ExtensionReport r;
  r.satisfied = 3;
  r.total = 4;
  r.failures.push_back({1, {0, 2}});
  EXPECT_EQ(io::to_json(r).dump(), R"({"satisfied":3,"total":4,"failures":[{"theta_id":1,"tuple":[0,2]}]})");

  BackAndForthResult b;
  b.status = BackAndForthResult::Status::Success;
  b.correspondence = {{{0, 1}}, Rational(1, 4)};
  b.nodes_explored = 2;
  EXPECT_EQ(io::to_json(b).dump(), R"({"status":"success","pairs":[[0,1]],"distortion":"1/4","nodes_explored":2})");

  CurvePoint p;
  p.n = 3;
  p.successes = 1;
  p.trials = 4;
  p.frequency = Rational(1, 4);
  EXPECT_EQ(io::to_json(std::vector<CurvePoint>{p})[0]["frequency"], "1/4");
}

TEST(TheoryJson, Parse) {
  const auto em = io::theory_from_json(Json::parse(R"({"name":"empty-metric","grid":"1/8","budget":500})"));
  EXPECT_EQ(em.spec.kind, TheoryKind::EmptyMetric);
  EXPECT_EQ(em.grid, Rational(1, 8));
  EXPECT_EQ(em.budget, 500u);
  const auto g = io::theory_from_json(Json::parse(R"({"name":"graph","max_size":2})"));
  EXPECT_EQ(g.spec.graph_max_size, 2u);
  EXPECT_FALSE(g.grid.has_value());
  const auto c = io::theory_from_json(Json::parse(R"({"name":"custom","conditions":["sup x. sup y. (d(x,y) -. 1/2) <= 0"]})"));
  EXPECT_EQ(c.spec.universal_conditions.size(), 1u);
  EXPECT_EQ(error_of([] { (void)io::theory_from_json(Json::parse(R"({"name":"groups"})")); }), ErrorCode::InvalidTheory);
  EXPECT_EQ(error_of([] { (void)io::theory_from_json(Json::parse(R"({"name":"graph","conditions":["sup x. d(x,x) <= 0"]})")); }),
            ErrorCode::InvalidTheory);
  EXPECT_EQ(error_of([] { (void)io::theory_from_json(Json::parse(R"({"grid":"1/8"})")); }), ErrorCode::FormatError);
}

TEST(CampaignJson, ThetaInlineAndFromFile) {
  const auto dir = scratch_dir();
  io::write_text_file(dir / "theta.json", R"([["0","1/2"],["1/2","0"]])");
  const Json j = Json::parse(R"({"spec":{"kind":"sequential-uniform","grid":"1/64"},"n_values":[3,5],
                                "trials":100,"eps":"1/4","theta":"theta.json"})");
  const io::CampaignFile c = io::campaign_from_json(j, dir);
  EXPECT_EQ(c.spec.kind, SamplerKind::SequentialUniform);
  EXPECT_EQ(c.spec.grid, Rational(1, 64));
  EXPECT_EQ(c.n_values, (std::vector<std::size_t>{3, 5}));
  EXPECT_EQ(c.trials, 100u);
  EXPECT_EQ(c.eps, Rational(1, 4));
  EXPECT_EQ(c.theta.matrix()[0][1], Rational(1, 2));

  Json inline_theta = j;
  inline_theta["theta"] = Json::parse(R"([["0","1/2"],["1/2","0"]])");
  inline_theta["spec"] = "rejection";
  const io::CampaignFile d = io::campaign_from_json(inline_theta, "/nonexistent");
  EXPECT_EQ(d.spec.kind, SamplerKind::RejectionUniform);
  EXPECT_EQ(d.theta.matrix(), c.theta.matrix());

  Json missing = j;
  missing["theta"] = "nope.json";
  EXPECT_EQ(error_of([&] { (void)io::campaign_from_json(missing, dir); }), ErrorCode::FormatError);
  std::filesystem::remove_all(dir);
}

TEST(Files, ReadWriteAndHash) {
  const auto dir = scratch_dir();
  io::write_text_file(dir / "a.json", "{\"x\": 1}");
  EXPECT_EQ(io::read_json_file(dir / "a.json")["x"], 1);
  io::write_text_file(dir / "b.json", "{not json");
  EXPECT_EQ(error_of([&] { (void)io::read_json_file(dir / "b.json"); }), ErrorCode::FormatError);
  EXPECT_EQ(error_of([&] { (void)io::read_text_file(dir / "missing"); }), ErrorCode::FormatError);
  std::filesystem::remove_all(dir);

  // FNV-1a reference values.
  EXPECT_EQ(io::content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(io::content_hash("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(io::content_hash("foobar"), "85944171f73967e8");
}

TEST(Fraction, Decimal) {
  EXPECT_EQ(io::decimal(Rational(1, 8)), "0.125000");
  EXPECT_EQ(io::decimal(Rational(2, 3), 4), "0.6667");
  EXPECT_EQ(io::decimal(Rational(1, 2), 0), "1");
  EXPECT_EQ(io::decimal(Rational(-1, 3), 2), "-0.33");
  EXPECT_EQ(io::decimal(Rational(-1, 1000), 2), "0.00");
  EXPECT_EQ(io::decimal(Rational(1), 3), "1.000");
  EXPECT_EQ(io::decimal(Rational(12345, 100), 1), "123.5");
}
