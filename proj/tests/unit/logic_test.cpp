#include <random>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "metrika/condition.hpp"
#include "metrika/error.hpp"
#include "metrika/formula.hpp"

using namespace metrika;

namespace {

ErrorCode parse_error_code(std::string_view text, const Signature& sig = Signature()) {
  try {
    (void)parse_formula(text, sig);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed '" << text << "'";
  return ErrorCode::InvalidArgument;
}

ErrorCode condition_error_code(std::string_view text, const Signature& sig = Signature()) {
  try {
    (void)parse_condition(text, sig);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed '" << text << "'";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Signature, MetricAlwaysFirst) {
  const Signature s({RelationSymbol{"P", 1, Rational(1)}, RelationSymbol{"d", 2, Rational(1)}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.relation(0).name, "d");
  EXPECT_EQ(s.relation(1).name, "P");
  EXPECT_EQ(Signature::graph().relation(1).name, "R");
  EXPECT_EQ(*Signature::graph().find("R"), 1u);
  EXPECT_FALSE(Signature().find("R"));
}

TEST(Signature, Rejections) {
  auto code = [](std::vector<RelationSymbol> rs) {
    try {
      Signature s(std::move(rs));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code({{"P", 1, Rational(1)}, {"P", 2, Rational(1)}}), ErrorCode::InvalidSignature);
  EXPECT_EQ(code({{"P", 0, Rational(1)}}), ErrorCode::InvalidSignature);
  EXPECT_EQ(code({{"P", 1, Rational(-1)}}), ErrorCode::InvalidSignature);
  EXPECT_EQ(code({{"inf", 1, Rational(1)}}), ErrorCode::InvalidSignature);
  EXPECT_EQ(code({{"d", 3, Rational(1)}}), ErrorCode::InvalidSignature);
  EXPECT_EQ(code({{"d", 2, Rational(2)}}), ErrorCode::InvalidSignature);
}

TEST(Parser, TriangleSentence) {
  const Formula f = parse_formula("sup x. sup y. sup z. (d(x,z) -. (d(x,y) +. d(y,z)))", Signature());
  EXPECT_EQ(f.kind(), NodeKind::Sup);
  EXPECT_TRUE(free_variables(f).empty());
  EXPECT_EQ(quantifier_class(f), HierarchyClass::pi(1));
  const Formula m = split_prefix(f).matrix;
  EXPECT_EQ(m.kind(), NodeKind::DotMinus);
  EXPECT_EQ(m.rhs().kind(), NodeKind::TruncPlus);
}

TEST(Parser, AtomAndFreeVariables) {
  const Formula f = parse_formula("d(x,y)", Signature());
  EXPECT_EQ(f.kind(), NodeKind::Atom);
  EXPECT_EQ(f.relation_name(), "d");
  EXPECT_EQ(f.arguments(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(free_variables(f), (std::vector<std::string>{"x", "y"}));
}

TEST(Parser, DotMinusOfAtoms) {
  const Formula f = parse_formula("d(x,y) -. d(y,x)", Signature());
  ASSERT_EQ(f.kind(), NodeKind::DotMinus);
  EXPECT_EQ(f.lhs().kind(), NodeKind::Atom);
  EXPECT_EQ(f.rhs().arguments(), (std::vector<std::string>{"y", "x"}));
}

TEST(Parser, Connectives) {
  const Signature sig = Signature::graph();
  const Formula f = parse_formula("max(not(R(x,y)), absdiff(1/2*d(x,y), 1/3)) +. min(0, 1)", sig);
  ASSERT_EQ(f.kind(), NodeKind::TruncPlus);
  EXPECT_EQ(f.lhs().kind(), NodeKind::Max);
  EXPECT_EQ(f.lhs().lhs().kind(), NodeKind::Neg);
  EXPECT_EQ(f.lhs().rhs().kind(), NodeKind::AbsDiff);
  EXPECT_EQ(f.lhs().rhs().lhs().kind(), NodeKind::Scale);
  EXPECT_EQ(f.lhs().rhs().lhs().value(), Rational(1, 2));
  EXPECT_EQ(f.rhs().kind(), NodeKind::Min);
  // Left associativity of the infix connectives.
  const Formula g = parse_formula("d(x,y) -. 1/4 +. 1/8", Signature());
  ASSERT_EQ(g.kind(), NodeKind::TruncPlus);
  EXPECT_EQ(g.lhs().kind(), NodeKind::DotMinus);
}

TEST(Parser, Errors) {
  EXPECT_EQ(parse_error_code("min(d(x,y), 3/2)"), ErrorCode::ConstantOutOfRange);
  EXPECT_EQ(parse_error_code("3/2*d(x,y)"), ErrorCode::ConstantOutOfRange);
  EXPECT_EQ(parse_error_code("P(x)"), ErrorCode::UnknownRelation);
  EXPECT_EQ(parse_error_code("d(x)"), ErrorCode::ArityMismatch);
  EXPECT_EQ(parse_error_code("d(x,y"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error_code("inf . d(x,x)"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error_code("d(x,y) d(x,y)"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error_code(""), ErrorCode::SyntaxError);
  try {
    (void)parse_formula("d(x,y) -. ", Signature());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_GE(e.position(), 9u);
  }
}

TEST(Conditions, Examples) {
  const Condition a = parse_condition("inf x. inf y. d(x,y) = 0", Signature());
  EXPECT_TRUE(a.is_closed());
  EXPECT_EQ(a.relation(), Comparison::Equal);
  EXPECT_EQ(condition_error_code("d(x,y) < 1/2"), ErrorCode::FreeVariableInCondition);
  const Condition c = parse_condition("sup x. d(x,x) <= 0", Signature());
  EXPECT_TRUE(c.is_closed());
  EXPECT_EQ(c.bound(), Rational(0));
  const Condition o = parse_condition("sup x. inf y. d(x,y) < 1/4", Signature());
  EXPECT_TRUE(o.is_open());
  EXPECT_EQ(condition_error_code("sup x. d(x,x) <= 2"), ErrorCode::ConstantOutOfRange);
  EXPECT_EQ(condition_error_code("sup x. d(x,x)"), ErrorCode::SyntaxError);
}

TEST(Conditions, Shapes) {
  const Signature sig;
  EXPECT_TRUE(is_universal(parse_condition("sup x. sup y. d(x,y) = 0", sig)));
  EXPECT_TRUE(is_universal(parse_condition("sup x. d(x,x) <= 0", sig)));
  EXPECT_FALSE(is_universal(parse_condition("sup x. d(x,x) <= 1/2", sig)));
  EXPECT_FALSE(is_universal(parse_condition("sup x. inf y. d(x,y) = 0", sig)));
  EXPECT_TRUE(is_pi2_open(parse_condition("sup x. inf y. d(x,y) < 1/4", sig)));
  EXPECT_TRUE(is_pi2_open(parse_condition("inf y. d(y,y) < 1/4", sig)));
  EXPECT_FALSE(is_pi2_open(parse_condition("sup x. inf y. d(x,y) <= 1/4", sig)));
  EXPECT_FALSE(is_pi2_open(parse_condition("inf y. sup x. d(x,y) < 1/4", sig)));
}

TEST(Conditions, SatisfiedBy) {
  const Condition le(Formula::constant(0), Comparison::LessEqual, Rational(1, 2));
  const Condition lt(Formula::constant(0), Comparison::Less, Rational(1, 2));
  const Condition eq(Formula::constant(0), Comparison::Equal, Rational(1, 2));
  EXPECT_TRUE(le.satisfied_by(Rational(1, 2)));
  EXPECT_FALSE(lt.satisfied_by(Rational(1, 2)));
  EXPECT_TRUE(eq.satisfied_by(Rational(1, 2)));
  EXPECT_FALSE(eq.satisfied_by(Rational(1, 3)));
}

TEST(Hierarchy, Examples) {
  const Signature sig;
  EXPECT_EQ(quantifier_class(parse_formula("d(x,y)", sig)), HierarchyClass::qf());
  EXPECT_EQ(quantifier_class(parse_formula("inf x. d(x,y)", sig)), HierarchyClass::sigma(1));
  EXPECT_EQ(quantifier_class(parse_formula("sup x. inf y. (d(x,y) -. 1/2)", sig)), HierarchyClass::pi(2));
  EXPECT_EQ(quantifier_class(parse_formula("min(inf x. d(x,y), sup z. d(z,y))", sig)), HierarchyClass::not_prenex());
  EXPECT_EQ(quantifier_class(parse_formula("inf x. inf y. sup z. d(x,z)", sig)), HierarchyClass::sigma(2));
  EXPECT_EQ(to_string(HierarchyClass::pi(2)), "Pi(2)");
}

TEST(Printer, Canonical) {
  const Signature sig;
  EXPECT_EQ(to_string(parse_formula("sup x.sup y.(d(x,y)-.1/2)", sig)), "sup x. sup y. d(x,y) -. 1/2");
  EXPECT_EQ(to_string(parse_formula("d(x,y) -. (d(x,y) -. 1/2)", sig)), "d(x,y) -. (d(x,y) -. 1/2)");
  EXPECT_EQ(to_string(parse_condition("inf x. d(x,x) < 1/3", sig)), "inf x. d(x,x) < 1/3");
}

TEST(LogicProperty, PrintParseRoundTrip) {
  gen::Rng rng(7);
  const Signature sig = Signature::graph();
  for (int i = 0; i < 3000; ++i) {
    const Formula f = gen::prenex_formula(rng, sig, i % 4, {"a", "b"}, 4);
    const std::string text = to_string(f);
    const Formula g = parse_formula(text, sig);
    ASSERT_EQ(g, f) << text;
    ASSERT_EQ(to_string(g), text);
  }
}

TEST(LogicProperty, TruncationAlgebra) {
  for (std::int64_t i = 0; i <= 12; ++i)
    for (std::int64_t j = 0; j <= 12; ++j) {
      const Rational a(i, 12), b(j, 12);
      const Rational dm = connective::dot_minus(a, b);
      EXPECT_GE(dm + b, a);
      EXPECT_EQ(dm.is_zero(), a <= b);
      EXPECT_EQ(connective::abs_diff(a, b), max(connective::dot_minus(a, b), connective::dot_minus(b, a)));
      for (const Rational& v : {dm, connective::trunc_plus(a, b), connective::abs_diff(a, b), connective::neg(a),
                                connective::scale(b, a), min(a, b), max(a, b)})
        EXPECT_TRUE(in_unit_interval(v));
    }
}

TEST(LogicProperty, HierarchyMonotone) {
  gen::Rng rng(11);
  const Signature sig;
  for (int i = 0; i < 2000; ++i) {
    const Formula f = gen::prenex_formula(rng, sig, 1 + i % 4, {"p"}, 3);
    const HierarchyClass c = quantifier_class(f);
    ASSERT_NE(c.tag, HierarchyClass::Tag::NotPrenex);
    ASSERT_NE(c.tag, HierarchyClass::Tag::QF);
    const HierarchyClass wrapped_inf = quantifier_class(Formula::inf("w", f));
    const HierarchyClass wrapped_sup = quantifier_class(Formula::sup("w", f));
    if (c.tag == HierarchyClass::Tag::Pi) {
      ASSERT_EQ(wrapped_inf, HierarchyClass::sigma(c.level + 1));
      ASSERT_EQ(wrapped_sup, c);
    } else {
      ASSERT_EQ(wrapped_sup, HierarchyClass::pi(c.level + 1));
      ASSERT_EQ(wrapped_inf, c);
    }
  }
}
