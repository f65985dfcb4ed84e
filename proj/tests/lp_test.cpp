#include <gtest/gtest.h>

#include <random>

#include "behametric/lifting.hpp"
#include "behametric/lp.hpp"
#include "behametric/oracle.hpp"

using namespace behametric;
using lp::LinearProgram;
using lp::Relation;
using Q = Rational;

TEST(Lp, SingleBoxedVariable) {
  LinearProgram<Q> prog;
  prog.add_variable(Q(0), Q(1));
  prog.objective = {Q(1)};
  auto sol = lp::solve_max(prog);
  EXPECT_EQ(sol.value, 1);
  EXPECT_EQ(sol.witness, std::vector<Q>{Q(1)});
  EXPECT_EQ(oracle::kantorovich_vertex_oracle(prog), Q(1));
}

TEST(Lp, SumConstraint) {
  LinearProgram<Q> prog;
  prog.add_variable(Q(0), Q(1));
  prog.add_variable(Q(0), Q(1));
  prog.objective = {Q(1), Q(1)};
  prog.add_constraint({Q(1), Q(1)}, Relation::less_equal, Q(1));
  auto sol = lp::solve_max(prog);
  EXPECT_EQ(sol.value, 1);
  EXPECT_TRUE(lp::is_feasible(prog, sol.witness));
}

TEST(Lp, InfeasibleAndUnbounded) {
  LinearProgram<Q> infeasible;
  infeasible.add_variable(Q(0), Q(1));
  infeasible.objective = {Q(1)};
  infeasible.add_constraint({Q(1)}, Relation::greater_equal, Q(2));
  EXPECT_THROW(lp::solve_max(infeasible), InfeasibleError);

  LinearProgram<Q> unbounded;
  unbounded.add_variable(Q(0), std::nullopt);
  unbounded.objective = {Q(1)};
  EXPECT_THROW(lp::solve_max(unbounded), UnboundedError);
}

TEST(Lp, NegativeLowerBoundsAndMinimize) {
  LinearProgram<Q> prog;
  prog.add_variable(Q(-3), Q(2));
  prog.add_variable(Q(-1), Q(5));
  prog.objective = {Q(2), Q(-1)};
  prog.add_constraint({Q(1), Q(1)}, Relation::greater_equal, Q(-2));
  prog.add_constraint({Q(1), Q(-1)}, Relation::equal, Q(-1, 2));
  auto lo = lp::solve_min(prog);
  auto hi = lp::solve_max(prog);
  EXPECT_TRUE(lp::is_feasible(prog, lo.witness));
  EXPECT_TRUE(lp::is_feasible(prog, hi.witness));
  prog.sense = lp::Sense::minimize;
  EXPECT_EQ(lo.value, oracle::kantorovich_vertex_oracle(prog));
  prog.sense = lp::Sense::maximize;
  EXPECT_EQ(hi.value, oracle::kantorovich_vertex_oracle(prog));
}

// Kantorovich LP for P1 = {a: 1/2, b: 1/2}, P2 = {a: 1}, d(a,b) = 1/3, top 1.
// Vertex enumeration of {0 <= f <= 1, |f(a) - f(b)| <= 1/3} gives 1/6.
TEST(Lp, KantorovichTwoPoints) {
  GroundDistance<Q> d{{Q(0), Q(1, 3)}, {Q(1, 3), Q(0)}};
  std::vector<Q> coeffs{Q(1, 2) - Q(1), Q(1, 2)};
  auto prog = build_kantorovich_lp<Q>(coeffs, d, Q(1));
  Q oracle_value = oracle::kantorovich_vertex_oracle(prog);
  EXPECT_EQ(oracle_value, Q(1, 6));
  auto sol = lp::solve_max(prog);
  EXPECT_EQ(sol.value, oracle_value);
  EXPECT_TRUE(lp::is_feasible(prog, sol.witness));
}

TEST(Transportation, PointMass) {
  lp::TransportationInstance<Q> inst{{Q(1)}, {Q(1)}, {{Q(7, 3)}}};
  auto r = lp::solve_transportation(inst);
  ASSERT_TRUE(r.value);
  EXPECT_EQ(*r.value, Q(7, 3));
  EXPECT_EQ(r.plan, (std::vector<std::vector<Q>>{{Q(1)}}));
}

TEST(Transportation, ZeroCostPointMass) {
  lp::TransportationInstance<Q> inst{{Q(1)}, {Q(1)}, {{Q(0)}}};
  auto r = lp::solve_transportation(inst);
  EXPECT_EQ(*r.value, 0);
}

// Cross cost 9/10 between u and z, supplies 9/20 and 11/20 against 1/2 each.
TEST(Transportation, ProbabilisticExample) {
  lp::TransportationInstance<Q> inst{{Q(9, 20), Q(11, 20)}, {Q(1, 2), Q(1, 2)}, {{Q(0), Q(9, 10)}, {Q(9, 10), Q(0)}}};
  auto r = lp::solve_transportation(inst);
  ASSERT_TRUE(r.value);
  EXPECT_EQ(*r.value, Q(9, 200));
  EXPECT_EQ(oracle::transportation_vertex_oracle(inst), Q(9, 200));
}

TEST(Transportation, SumMismatchIsRejected) {
  lp::TransportationInstance<Q> inst{{Q(1, 2)}, {Q(1)}, {{Q(0)}}};
  EXPECT_THROW(lp::solve_transportation(inst), ValidationError);
}

TEST(Transportation, ForbiddenCells) {
  lp::TransportationInstance<Q> blocked{{Q(1)}, {Q(1)}, {{std::nullopt}}};
  EXPECT_FALSE(lp::solve_transportation(blocked).value);
  EXPECT_FALSE(oracle::transportation_vertex_oracle(blocked));
  lp::TransportationInstance<Q> detour{{Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(1, 2)}, {{std::nullopt, Q(1)}, {Q(2), std::nullopt}}};
  EXPECT_EQ(*lp::solve_transportation(detour).value, Q(3, 2));
}

namespace {

Q random_q(std::mt19937_64& rng, int max_num, int max_den) {
  Q q(std::uniform_int_distribution<int>(0, max_num)(rng), std::uniform_int_distribution<int>(1, max_den)(rng));
  q.canonicalize();
  return q;
}

std::vector<Q> random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::vector<Q> w(n);
  Q total(0);
  for (auto& x : w) {
    x = Q(std::uniform_int_distribution<int>(0, 5)(rng));
    total += x;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  for (auto& x : w) x /= total;
  return w;
}

lp::TransportationInstance<Q> random_instance(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  lp::TransportationInstance<Q> inst;
  inst.supply = random_distribution(rng, m);
  inst.demand = random_distribution(rng, n);
  inst.cost.assign(m, std::vector<std::optional<Q>>(n));
  for (auto& row : inst.cost) {
    for (auto& c : row) c = random_q(rng, 10, 4);
  }
  return inst;
}

}  // namespace

TEST(TransportationProperty, ThreeByThreeMatchesVertexOracle) {
  std::mt19937_64 rng(3);
  auto inst = random_instance(rng, 3, 3);
  EXPECT_EQ(*lp::solve_transportation(inst).value, *oracle::transportation_vertex_oracle(inst));
}

TEST(TransportationProperty, PlansAreCouplingsAndMatchOracle) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    std::size_t m = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    auto inst = random_instance(rng, m, n);
    auto r = lp::solve_transportation(inst);
    ASSERT_TRUE(r.value);
    Q cost(0);
    for (std::size_t i = 0; i < m; ++i) {
      Q row(0);
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_GE(r.plan[i][j], 0);
        row += r.plan[i][j];
        cost += r.plan[i][j] * *inst.cost[i][j];
      }
      ASSERT_EQ(row, inst.supply[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      Q col(0);
      for (std::size_t i = 0; i < m; ++i) col += r.plan[i][j];
      ASSERT_EQ(col, inst.demand[j]);
    }
    ASSERT_EQ(cost, *r.value);
    ASSERT_EQ(*r.value, *oracle::transportation_vertex_oracle(inst));
  }
}

// Value 0 iff some vertex plan lives on zero-cost cells only.
TEST(TransportationProperty, ZeroIffZeroCostPlanExists) {
  std::mt19937_64 rng(19);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t m = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    auto inst = random_instance(rng, m, n);
    for (auto& row : inst.cost) {
      for (auto& c : row) {
        if (std::uniform_int_distribution<int>(0, 1)(rng)) c = Q(0);
      }
    }
    bool zero_plan = false;
    oracle::for_each_transport_vertex<Q>(inst.supply, inst.demand, [&](const std::vector<std::vector<Q>>& plan) {
      bool ok = true;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) ok = ok && (plan[i][j] == 0 || *inst.cost[i][j] == 0);
      }
      zero_plan = zero_plan || ok;
    });
    ASSERT_EQ(*lp::solve_transportation(inst).value == 0, zero_plan);
  }
}

TEST(LpProperty, SimplexMatchesVertexEnumeration) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    LinearProgram<Q> prog;
    for (std::size_t j = 0; j < n; ++j) prog.add_variable(Q(0), random_q(rng, 6, 2) + 1);
    for (std::size_t j = 0; j < n; ++j) prog.objective[j] = random_q(rng, 8, 3) - 2;
    std::size_t rows = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Q> a(n);
      for (auto& x : a) x = random_q(rng, 6, 2) - 2;
      prog.add_constraint(a, Relation::less_equal, random_q(rng, 6, 2));
    }
    auto sol = lp::solve_max(prog);
    ASSERT_TRUE(lp::is_feasible(prog, sol.witness));
    ASSERT_EQ(sol.value, oracle::kantorovich_vertex_oracle(prog));
  }
}

TEST(LpProperty, DoubleSimplexAgreesWithExact) {
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 200; ++iter) {
    auto inst = random_instance(rng, 3, 4);
    lp::TransportationInstance<double> f;
    for (auto& s : inst.supply) f.supply.push_back(s.get_d());
    for (auto& s : inst.demand) f.demand.push_back(s.get_d());
    for (auto& row : inst.cost) {
      f.cost.emplace_back();
      for (auto& c : row) f.cost.back().push_back(c->get_d());
    }
    ASSERT_NEAR(*lp::solve_transportation(f).value, lp::solve_transportation(inst).value->get_d(), 1e-12);
  }
}
