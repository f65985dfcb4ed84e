#include <gtest/gtest.h>

#include "behametric/functor.hpp"

using namespace behametric;
using E = FunctorExpr;
using S = FStructure;
using Q = Rational;

namespace {

Value q(long n, long d = 1) { return Value(Q(n, d)); }

PseudometricTable two_colours(TopBound top = TopBound::infinite()) {
  return PseudometricTable("colour", {"red", "green"}, {q(0), q(1, 2), q(1, 2), q(0)}, std::move(top));
}

}  // namespace

TEST(ProductEval, MaxAndPnorm) {
  EXPECT_EQ(ProductEval::max().combine(q(1, 3), q(1, 2)), q(1, 2));
  auto euclid = ProductEval::pnorm(2, Q(1), Q(1));
  EXPECT_EQ(euclid.combine(q(3), q(4)), q(5));
  EXPECT_TRUE(euclid.combine(q(1), Value::infinity()).is_infinite());
  auto weighted = ProductEval::pnorm(1, Q(1, 2), Q(1, 4));
  EXPECT_EQ(weighted.combine(q(1), q(2)), q(1));
}

TEST(ProductEval, RejectsBadParameters) {
  EXPECT_THROW(ProductEval::pnorm(0, Q(1), Q(1)), ConfigurationError);
  EXPECT_THROW(ProductEval::pnorm(1, Q(0), Q(1)), ConfigurationError);
  EXPECT_THROW(ProductEval::pnorm(1, Q(1), Q(3, 2)), ConfigurationError);
  EXPECT_THROW(E::id(Q(0)), ConfigurationError);
  EXPECT_THROW(E::id(Q(2)), ConfigurationError);
}

TEST(FunctorExpr, Rendering) {
  auto e = E::dist(E::coproduct(E::id(Q(9, 10)), E::constant(PseudometricTable::unit(TopBound::finite(1)))));
  EXPECT_EQ(e.to_string(), "D((Id[9/10] + Const(unit)))");
  auto p = E::product(E::finpow(E::id()), E::diag_square(E::id()), ProductEval::pnorm(2, Q(1, 2), Q(1, 2)));
  EXPECT_EQ(p.to_string(), "(Pfin(Id) x[p=2,1/2,1/2] Sq(Id))");
  EXPECT_EQ(p, E::product(E::finpow(E::id()), E::diag_square(E::id()), ProductEval::pnorm(2, Q(1, 2), Q(1, 2))));
  EXPECT_FALSE(p == E::product(E::finpow(E::id()), E::diag_square(E::id())));
}

TEST(FunctorExpr, CheckExpressionAgainstTop) {
  const auto finite = TopBound::finite(1);
  EXPECT_THROW(check_expression(E::diag_square(E::id()), finite), ConfigurationError);
  EXPECT_NO_THROW(check_expression(E::diag_square(E::id()), TopBound::infinite()));
  EXPECT_THROW(check_expression(E::product(E::id(), E::id(), ProductEval::pnorm(1, Q(1), Q(1, 2))), finite), ConfigurationError);
  EXPECT_NO_THROW(check_expression(E::product(E::id(), E::id(), ProductEval::pnorm(1, Q(1, 2), Q(1, 2))), finite));
  EXPECT_THROW(check_expression(E::constant(two_colours(TopBound::infinite())), finite), ConfigurationError);
  EXPECT_THROW(E::product(E::constant(two_colours(TopBound::infinite())), E::constant(two_colours(TopBound::finite(1)))), ConfigurationError);
}

TEST(FStructure, CanonicalForms) {
  auto d = S::distribution({{S::atom(1), q(1, 4)}, {S::atom(0), q(1, 2)}, {S::atom(1), q(1, 4)}});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.child(0), S::atom(0));
  EXPECT_EQ(d.weights()[1], q(1, 2));
  auto s = S::set({S::atom(2), S::atom(0), S::atom(2)});
  EXPECT_EQ(s, S::set({S::atom(0), S::atom(2)}));
  EXPECT_EQ(to_string(s), "{0,2}");
  EXPECT_EQ(to_string(S::tagged(Side::right, S::pair(S::atom(0), S::atom(1)))), "right((0,1))");
}

TEST(FStructure, ValidationNamesThePath) {
  auto e = E::dist(E::id());
  try {
    validate(e, 2, S::distribution({{S::atom(0), q(1, 2)}, {S::atom(1), q(1, 4)}}), "$.alpha.x");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& err) {
    EXPECT_EQ(err.path().rfind("$.alpha.x", 0), 0u);
  }
  EXPECT_THROW(validate(E::id(), 2, S::atom(2)), ValidationError);
  EXPECT_THROW(validate(E::finpow(E::id()), 2, S::atom(0)), ValidationError);
  EXPECT_THROW(validate(E::constant(two_colours()), 2, S::atom(5)), ValidationError);
  EXPECT_NO_THROW(validate(E::coproduct(E::id(), E::constant(two_colours())), 1, S::tagged(Side::right, S::atom(1))));
}

TEST(Evaluation, RecursiveEvaluationOfTestFunctions) {
  std::vector<Value> g{q(0), q(1), q(3)};
  auto t = S::distribution({{S::atom(1), q(1, 2)}, {S::atom(2), q(1, 2)}});
  EXPECT_EQ(eval_functor(E::dist(E::id(Q(1, 2))), g, t), q(1));
  EXPECT_EQ(eval_functor(E::finpow(E::id()), g, S::set({S::atom(0), S::atom(1)})), q(1));
  EXPECT_EQ(eval_functor(E::finpow(E::id()), g, S::set({})), q(0));
  EXPECT_EQ(eval_functor(E::diag_square(E::id()), g, S::pair(S::atom(1), S::atom(2))), q(4));
  auto colour = [](const PseudometricTable&, std::size_t atom) { return atom == 0 ? q(0) : q(1, 2); };
  EXPECT_EQ(eval_functor(E::product(E::constant(two_colours()), E::id()), g, S::pair(S::atom(1), S::atom(0)), colour), q(1, 2));
  EXPECT_THROW(eval_functor(E::product(E::constant(two_colours()), E::id()), g, S::pair(S::atom(1), S::atom(0))), ConfigurationError);
}

TEST(Couplings, ProjectionsRecoverTheMarginals) {
  auto t = S::distribution({{S::pair(S::atom(0), S::atom(1)), q(1, 3)}, {S::pair(S::atom(0), S::atom(0)), q(2, 3)}});
  EXPECT_EQ(project_layer(E::dist(E::id()), t, Side::left), S::distribution({{S::atom(0), q(1)}}));
  EXPECT_EQ(project_layer(E::dist(E::id()), t, Side::right), S::distribution({{S::atom(1), q(1, 3)}, {S::atom(0), q(2, 3)}}));
}

TEST(Couplings, FinitePowersetEnumeration) {
  auto a = S::set({S::atom(0), S::atom(1)});
  auto b = S::set({S::atom(2), S::atom(3)});
  // Relations on a 2x2 grid projecting onto both sides.
  EXPECT_EQ(enumerate_couplings_finpow(a, b).couplings.size(), 7u);
  EXPECT_EQ(enumerate_couplings_finpow(S::set({}), S::set({})).couplings.size(), 1u);
  EXPECT_TRUE(enumerate_couplings_finpow(S::set({}), b).couplings.empty());
  for (const auto& c : enumerate_couplings_finpow(a, b).couplings) {
    EXPECT_EQ(project_layer(E::finpow(E::id()), c, Side::left), a);
    EXPECT_EQ(project_layer(E::finpow(E::id()), c, Side::right), b);
  }
  auto big = S::set({S::atom(0), S::atom(1), S::atom(2), S::atom(3), S::atom(4)});
  EXPECT_THROW(enumerate_couplings_finpow(big, big), BudgetExceeded);
}

TEST(Couplings, SquareHasExactlyOne) {
  auto c = enumerate_couplings_diagsquare(S::pair(S::atom(0), S::atom(1)), S::pair(S::atom(1), S::atom(0)));
  ASSERT_EQ(c.couplings.size(), 1u);
  EXPECT_EQ(c.couplings[0], S::pair(S::pair(S::atom(0), S::atom(1)), S::pair(S::atom(1), S::atom(0))));
}

TEST(FStructure, ToFloatConvertsWeightsOnly) {
  auto t = S::pair(S::atom(3), S::distribution({{S::atom(0), q(1, 4)}, {S::atom(1), q(3, 4)}}));
  auto f = to_float(t);
  EXPECT_EQ(f.child(0), S::atom(3));
  EXPECT_FALSE(f.child(1).weights()[0].is_exact());
  EXPECT_DOUBLE_EQ(f.child(1).weights()[1].to_double(), 0.75);
}
