#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "behametric/lifting.hpp"
#include "behametric/sampling.hpp"

using namespace behametric;
using E = FunctorExpr;
using S = FStructure;
using Q = Rational;

namespace {

Value q(long n, long d = 1) { return Value(Q(n, d)); }

// Points 0, 1/2, 1 on the line.
PseudometricTable line(TopBound top = TopBound::infinite()) { return PseudometricTable::euclidean("L", {q(0), q(1, 2), q(1)}, std::move(top)); }

S point_mass(std::size_t a) { return S::distribution({{S::atom(a), q(1)}}); }

Value both(const E& e, const PseudometricTable& d, const S& a, const S& b, Value* k_out = nullptr) {
  Value w = lift_dist(e, d, LiftMethod::wasserstein, a, b);
  Value k = lift_dist(e, d, LiftMethod::kantorovich, a, b);
  if (k_out) *k_out = k;
  return w;
}

}  // namespace

TEST(Lifting, IdentityAndDiscount) {
  EXPECT_EQ(lift_dist(E::id(), line(), LiftMethod::wasserstein, S::atom(0), S::atom(2)), q(1));
  Value k;
  EXPECT_EQ(both(E::id(Q(1, 3)), line(), S::atom(0), S::atom(1), &k), q(1, 6));
  EXPECT_EQ(k, q(1, 6));
}

TEST(Lifting, DistributionsTransportMass) {
  auto a = S::distribution({{S::atom(0), q(1, 2)}, {S::atom(2), q(1, 2)}});
  auto b = point_mass(1);
  Value k;
  EXPECT_EQ(both(E::dist(E::id()), line(), a, b, &k), q(1, 2));
  EXPECT_EQ(k, q(1, 2));
  EXPECT_EQ(both(E::dist(E::id()), line(), point_mass(0), point_mass(2), &k), q(1));
  EXPECT_EQ(k, q(1));
  EXPECT_EQ(both(E::dist(E::id()), line(), a, a, &k), q(0));
}

TEST(Lifting, HausdorffOnFiniteSets) {
  auto a = S::set({S::atom(0)});
  auto b = S::set({S::atom(1), S::atom(2)});
  Value k;
  EXPECT_EQ(both(E::finpow(E::id()), line(), a, b, &k), q(1));
  EXPECT_EQ(k, q(1));
  EXPECT_TRUE(both(E::finpow(E::id()), line(), S::set({}), b).is_infinite());
  EXPECT_EQ(both(E::finpow(E::id()), line(TopBound::finite(1)), S::set({}), b, &k), q(1));
  EXPECT_EQ(k, q(1));
  EXPECT_EQ(both(E::finpow(E::id()), line(), S::set({}), S::set({})), q(0));
}

TEST(Lifting, ProductsAndCoproducts) {
  auto pair_a = S::pair(S::atom(0), S::atom(0));
  auto pair_b = S::pair(S::atom(1), S::atom(2));
  Value k;
  EXPECT_EQ(both(E::product(E::id(), E::id()), line(), pair_a, pair_b, &k), q(1));
  EXPECT_EQ(k, q(1));
  EXPECT_EQ(both(E::product(E::id(), E::id(), ProductEval::pnorm(1, Q(1, 2), Q(1, 2))), line(), pair_a, pair_b, &k), q(3, 4));
  EXPECT_EQ(k, q(3, 4));
  auto cop = E::coproduct(E::id(), E::id());
  EXPECT_TRUE(both(cop, line(), S::tagged(Side::left, S::atom(0)), S::tagged(Side::right, S::atom(0))).is_infinite());
  EXPECT_EQ(both(cop, line(TopBound::finite(1)), S::tagged(Side::left, S::atom(0)), S::tagged(Side::right, S::atom(0)), &k), q(1));
  EXPECT_EQ(k, q(1));
  EXPECT_EQ(both(cop, line(), S::tagged(Side::right, S::atom(0)), S::tagged(Side::right, S::atom(1))), q(1, 2));
}

TEST(Lifting, ConstantSpacesIgnoreTheGround) {
  PseudometricTable colour("colour", {"red", "green"}, {q(0), q(1, 3), q(1, 3), q(0)}, TopBound::infinite());
  Value k;
  EXPECT_EQ(both(E::constant(colour), line(), S::atom(0), S::atom(1), &k), q(1, 3));
  EXPECT_EQ(k, q(1, 3));
}

TEST(Lifting, SquareFunctorBreaksDuality) {
  PseudometricTable d("X", {"x1", "x2"}, {q(0), q(1), q(1), q(0)}, TopBound::infinite());
  auto t1 = S::pair(S::atom(0), S::atom(1));
  auto t2 = S::pair(S::atom(1), S::atom(0));
  Value k;
  EXPECT_EQ(both(E::diag_square(E::id()), d, t1, t2, &k), q(2));
  EXPECT_EQ(k, q(0));
  EXPECT_EQ(duality_gap(E::diag_square(E::id()), d, t1, t2), q(2));
}

TEST(Lifting, NestedDistributionOverCoproduct) {
  // Transitions to a state at distance 1 or termination, discount 1/2.
  PseudometricTable d("X", {"a", "b"}, {q(0), q(1), q(1), q(0)}, TopBound::finite(1));
  auto e = E::dist(E::coproduct(E::id(Q(1, 2)), E::constant(PseudometricTable::unit(TopBound::finite(1)))));
  auto t1 = S::distribution({{S::tagged(Side::left, S::atom(0)), q(1, 2)}, {S::tagged(Side::right, S::atom(0)), q(1, 2)}});
  auto t2 = S::distribution({{S::tagged(Side::left, S::atom(1)), q(1)}});
  Value k;
  // Half the mass pays 1/2 for a→b, the other half pays ⊤ = 1 for termination.
  EXPECT_EQ(both(e, d, t1, t2, &k), q(3, 4));
  EXPECT_EQ(k, q(3, 4));
}

TEST(Lifting, RejectsIllFormedInput) {
  EXPECT_THROW(lift_dist(E::id(), line(), LiftMethod::wasserstein, S::atom(0), S::atom(7)), ValidationError);
  EXPECT_THROW(lift_dist(E::diag_square(E::id()), line(TopBound::finite(1)), LiftMethod::kantorovich, S::pair(S::atom(0), S::atom(1)),
                         S::pair(S::atom(0), S::atom(1))),
               ConfigurationError);
}

TEST(Lifting, FloatModeTracksExactMode) {
  sampling::Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    const TopBound top = sampling::chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
    const std::size_t n = sampling::uniform(rng, 1, 4);
    PseudometricTable d = sampling::pseudometric(rng, n, top);
    sampling::ExprOptions eo;
    eo.allow_diag_square = top.is_infinite();
    eo.max_p = 3;
    E e = sampling::expr(rng, 2, top, eo);
    S a = sampling::structure(rng, e, n);
    S b = sampling::structure(rng, e, n);
    for (LiftMethod m : {LiftMethod::wasserstein, LiftMethod::kantorovich}) {
      Value exact = lift_dist(e, d, m, a, b);
      Value approx = lift_dist(e, d, m, to_float(a), to_float(b));
      EXPECT_TRUE(approx_equal(exact, approx, 1e-9)) << e.to_string() << " " << exact.to_string() << " vs " << approx.to_string();
    }
  }
}

TEST(Lifting, LiftedDistancesArePseudometrics) {
  sampling::Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const TopBound top = sampling::chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
    const std::size_t n = sampling::uniform(rng, 1, 4);
    PseudometricTable d = sampling::pseudometric(rng, n, top);
    sampling::ExprOptions eo;
    eo.allow_diag_square = top.is_infinite();
    E e = sampling::expr(rng, 2, top, eo);
    std::vector<S> ts;
    for (int i = 0; i < 4; ++i) ts.push_back(sampling::structure(rng, e, n));
    for (LiftMethod m : {LiftMethod::wasserstein, LiftMethod::kantorovich}) {
      Lifter lifter(d, m);
      std::vector<Value> table;
      for (const auto& a : ts) {
        for (const auto& b : ts) table.push_back(lifter.distance(e, a, b));
      }
      auto at = [&](std::size_t i, std::size_t j) -> const Value& { return table[i * ts.size() + j]; };
      auto v = find_axiom_violation(ts.size(), at, top, 0.0);
      EXPECT_FALSE(v.has_value()) << e.to_string() << ": " << v->describe();
    }
  }
}

namespace {

// Renames carrier atoms through `perm`; constant atoms stay put.
S relabel(const E& e, const S& t, const std::vector<std::size_t>& perm) {
  switch (e.kind()) {
    case NodeKind::id:
      return S::atom(perm[t.atom_index()]);
    case NodeKind::constant:
      return t;
    case NodeKind::dist: {
      std::vector<std::pair<S, Value>> entries;
      for (std::size_t i = 0; i < t.size(); ++i) entries.emplace_back(relabel(e.child(), t.child(i), perm), t.weights()[i]);
      return S::distribution(std::move(entries));
    }
    case NodeKind::finpow: {
      std::vector<S> elements;
      for (const auto& x : t.children()) elements.push_back(relabel(e.child(), x, perm));
      return S::set(std::move(elements));
    }
    case NodeKind::diag_square:
      return S::pair(relabel(e.child(), t.child(0), perm), relabel(e.child(), t.child(1), perm));
    case NodeKind::product:
      return S::pair(relabel(e.child(0), t.child(0), perm), relabel(e.child(1), t.child(1), perm));
    case NodeKind::coproduct:
      return S::tagged(t.side(), relabel(e.child(static_cast<std::size_t>(t.side())), t.child(), perm));
  }
  return t;
}

}  // namespace

TEST(Lifting, InvariantUnderBijectiveRelabeling) {
  sampling::Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const TopBound top = sampling::chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
    const std::size_t n = sampling::uniform(rng, 1, 5);
    PseudometricTable d = sampling::pseudometric(rng, n, top);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Value> moved(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) moved[perm[i] * n + perm[j]] = d.at(i, j);
    }
    PseudometricTable image("Y", d.atoms(), moved, top);
    sampling::ExprOptions eo;
    eo.allow_diag_square = top.is_infinite();
    E e = sampling::expr(rng, 2, top, eo);
    S a = sampling::structure(rng, e, n);
    S b = sampling::structure(rng, e, n);
    for (LiftMethod m : {LiftMethod::wasserstein, LiftMethod::kantorovich}) {
      EXPECT_EQ(lift_dist(e, d, m, a, b), lift_dist(e, image, m, relabel(e, a, perm), relabel(e, b, perm))) << e.to_string();
    }
  }
}
