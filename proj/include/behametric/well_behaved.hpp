#pragma once

// Sampled checks of the three well-behavedness conditions of an evaluation
// function ev: F[0,⊤] → [0,⊤].
//
//   1. F̃ is monotone: g ≤ g' pointwise implies ev(Fg(t)) ≤ ev(Fg'(t)).
//   2. d_e(ev(Fπ1 t), ev(Fπ2 t)) ≤ ev(F d_e(t)) for t ∈ F([0,⊤]²).
//   3. ev(t) = 0 iff every value in t is 0.
//
// Structures are one layer deep (the node applied to Id). Their atoms are
// indices into a value table, so the same structure serves every valuation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "behametric/functor.hpp"
#include "behametric/numerics.hpp"
#include "behametric/sampling.hpp"

namespace behametric {

/// Valuation of the atoms of a one-layer structure.
using AtomValuation = std::function<Value(std::size_t atom)>;

struct EvaluationUnderTest {
  std::string name;
  FunctorExpr shape;  // one layer over Id (Id for the carrier leaf)
  std::function<Value(const FStructure& t, const AtomValuation& g)> evaluate;
};

/// The grammar node's own evaluation on a one-layer shape.
inline EvaluationUnderTest node_evaluation(std::string name, FunctorExpr shape) {
  FunctorExpr s = shape;
  return {std::move(name), std::move(shape), [s](const FStructure& t, const AtomValuation& g) {
            if (s.kind() == NodeKind::id) return Value(s.discount()) * g(t.atom_index());
            return evaluate_layer(s, t, [&](std::size_t slot, const FStructure& a) {
              const FunctorExpr& c = s.arity() == 2 ? s.child(slot) : s.child();
              return Value(c.discount()) * g(a.atom_index());
            });
          }};
}

/// min on finite sets, with min ∅ = 0: not well-behaved.
inline EvaluationUnderTest finpow_min_evaluation() {
  return {"finpow-min", FunctorExpr::finpow(FunctorExpr::id()), [](const FStructure& t, const AtomValuation& g) {
            if (t.size() == 0) return Value();
            Value best = g(t.child(0).atom_index());
            for (const auto& e : t.children()) best = min_value(best, g(e.atom_index()));
            return best;
          }};
}

struct WellBehavedWitness {
  int condition = 0;
  std::string structure;
  std::string detail;
};

struct WellBehavedReport {
  std::string name;
  bool condition1_ok = true;
  bool condition2_ok = true;
  bool condition3_ok = true;
  std::vector<WellBehavedWitness> witnesses;  // the first failure per condition
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  bool ok() const { return condition1_ok && condition2_ok && condition3_ok; }
  const WellBehavedWitness* witness(int condition) const {
    for (const auto& w : witnesses) {
      if (w.condition == condition) return &w;
    }
    return nullptr;
  }
};

struct SamplingPlan {
  TopBound top = TopBound::infinite();
  std::uint64_t seed = 1;
  std::size_t random_points = 4;   // extra seeded values added to the grid
  std::size_t random_samples = 300;
  std::size_t max_set = 3;
  double tol = 0.0;  // 0: exact comparisons (irrational roots still use 1e-12)
};

namespace detail {

/// {0, ⊤/4, ⊤/2, 3⊤/4, ⊤} for finite ⊤; {0, 1/4, 1/2, 3/4, 1, ∞} for ⊤ = ∞.
inline std::vector<Value> value_grid(const SamplingPlan& plan, sampling::Rng& rng) {
  std::vector<Value> grid;
  const Rational unit = plan.top.is_infinite() ? Rational(1) : plan.top.finite_value();
  for (int k = 0; k <= 4; ++k) grid.push_back(Value(unit * k / 4));
  if (plan.top.is_infinite()) grid.push_back(Value::infinity());
  for (std::size_t k = 0; k < plan.random_points; ++k) {
    Rational q = sampling::rational(rng, 12, 7) * (plan.top.is_infinite() ? Rational(1) : unit) / (plan.top.is_infinite() ? 1 : 2);
    q.canonicalize();
    Value v(q);
    if (!plan.top.is_infinite()) v = min_value(v, Value::top(plan.top));
    if (std::find(grid.begin(), grid.end(), v) == grid.end()) grid.push_back(v);
  }
  return grid;
}

/// Every one-layer structure with atoms below `atoms`, up to the size limit;
/// distributions get seeded weights.
inline std::vector<FStructure> shapes(const FunctorExpr& shape, std::size_t atoms, std::size_t max_set, sampling::Rng& rng,
                                      std::size_t random_samples) {
  std::vector<FStructure> out;
  switch (shape.kind()) {
    case NodeKind::id:
    case NodeKind::constant:
      for (std::size_t a = 0; a < atoms; ++a) out.push_back(FStructure::atom(a));
      break;
    case NodeKind::finpow: {
      // All subsets of size ≤ max_set, in lexicographic order of atom lists.
      std::vector<std::size_t> pick;
      std::function<void(std::size_t)> rec = [&](std::size_t next) {
        std::vector<FStructure> elements;
        for (std::size_t a : pick) elements.push_back(FStructure::atom(a));
        out.push_back(FStructure::set(std::move(elements)));
        if (pick.size() == max_set) return;
        for (std::size_t a = next; a < atoms; ++a) {
          pick.push_back(a);
          rec(a + 1);
          pick.pop_back();
        }
      };
      rec(0);
      break;
    }
    case NodeKind::product:
    case NodeKind::diag_square:
      for (std::size_t a = 0; a < atoms; ++a) {
        for (std::size_t b = 0; b < atoms; ++b) out.push_back(FStructure::pair(FStructure::atom(a), FStructure::atom(b)));
      }
      break;
    case NodeKind::coproduct:
      for (Side side : {Side::left, Side::right}) {
        for (std::size_t a = 0; a < atoms; ++a) out.push_back(FStructure::tagged(side, FStructure::atom(a)));
      }
      break;
    case NodeKind::dist:
      for (std::size_t k = 0; k < random_samples; ++k) {
        std::size_t n = sampling::uniform(rng, 1, std::min<std::size_t>(max_set + 1, atoms));
        std::vector<std::size_t> support;
        while (support.size() < n) {
          std::size_t a = sampling::uniform(rng, 0, atoms - 1);
          if (std::find(support.begin(), support.end(), a) == support.end()) support.push_back(a);
        }
        auto w = sampling::distribution_weights(rng, n);
        std::vector<std::pair<FStructure, Value>> entries;
        for (std::size_t i = 0; i < n; ++i) entries.emplace_back(FStructure::atom(support[i]), Value(w[i]));
        out.push_back(FStructure::distribution(std::move(entries)));
      }
      break;
  }
  return out;
}

inline bool leq(const Value& a, const Value& b, double tol) {
  const bool exact = a.is_exact() && b.is_exact();
  return approx_leq(a, b, exact ? tol : std::max(tol, 1e-12));
}

}  // namespace detail

/// Explicit witnesses tried before any sampled instance, so that known
/// counterexamples are reported verbatim.
struct ExplicitWitnesses {
  std::vector<std::vector<std::pair<Value, Value>>> condition2_sets;  // sets of value pairs
  std::vector<std::vector<Value>> condition3_sets;                    // sets of values
};

inline ExplicitWitnesses finpow_witnesses() {
  return {{{{Value(0), Value(1)}, {Value(1), Value(1)}}}, {{Value(0), Value(1)}}};
}

inline WellBehavedReport check_well_behaved(const EvaluationUnderTest& ev, const SamplingPlan& plan = {},
                                            const ExplicitWitnesses& explicit_witnesses = {}) {
  WellBehavedReport report;
  report.name = ev.name;
  report.seed = plan.seed;
  sampling::Rng rng(plan.seed);
  auto fail = [&](int condition, bool& flag, std::string structure, std::string detail) {
    if (flag) report.witnesses.push_back({condition, std::move(structure), std::move(detail)});
    flag = false;
  };

  std::vector<Value> grid = detail::value_grid(plan, rng);
  auto label = [&](std::size_t a) { return grid[a].to_string(); };

  auto index_of = [&](const Value& v) {
    auto it = std::find(grid.begin(), grid.end(), v);
    if (it == grid.end()) {
      grid.push_back(v);
      return grid.size() - 1;
    }
    return static_cast<std::size_t>(it - grid.begin());
  };
  // Resolve every explicit value first so the grid stays fixed afterwards.
  const bool explicit_ok = ev.shape.kind() == NodeKind::finpow;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> w2;
  std::vector<std::vector<std::size_t>> w3;
  if (explicit_ok) {
    for (const auto& set : explicit_witnesses.condition2_sets) {
      w2.emplace_back();
      for (const auto& [a, b] : set) w2.back().emplace_back(index_of(a), index_of(b));
    }
    for (const auto& set : explicit_witnesses.condition3_sets) {
      w3.emplace_back();
      for (const auto& a : set) w3.back().push_back(index_of(a));
    }
  }

  // Condition 2 over pairs of values; atom a·G + b stands for (grid[a], grid[b]).
  const std::size_t G = grid.size();
  auto check2 = [&](const FStructure& t) {
    ++report.samples;
    AtomValuation p1 = [&](std::size_t c) { return grid[c / G]; };
    AtomValuation p2 = [&](std::size_t c) { return grid[c % G]; };
    AtomValuation de = [&](std::size_t c) { return dist_e(grid[c / G], grid[c % G]); };
    Value lhs = dist_e(ev.evaluate(t, p1), ev.evaluate(t, p2));
    Value rhs = ev.evaluate(t, de);
    if (!detail::leq(lhs, rhs, plan.tol)) {
      auto pair_label = [&](std::size_t c) { return "(" + grid[c / G].to_string() + "," + grid[c % G].to_string() + ")"; };
      fail(2, report.condition2_ok, to_string(t, pair_label), "d_e = " + lhs.to_string() + " > " + rhs.to_string());
    }
  };
  auto check3 = [&](const FStructure& t) {
    ++report.samples;
    AtomValuation g = [&](std::size_t a) { return grid[a]; };
    bool all_zero = true;
    std::function<void(const FStructure&)> scan = [&](const FStructure& s) {
      if (s.kind() == FStructure::Kind::atom) {
        all_zero = all_zero && grid[s.atom_index()].is_zero();
        return;
      }
      for (const auto& c : s.children()) scan(c);
    };
    scan(t);
    Value v = ev.evaluate(t, g);
    if (v.is_zero() != all_zero) {
      fail(3, report.condition3_ok, to_string(t, label),
           all_zero ? "all values are 0 but ev = " + v.to_string() : "ev = 0 but not all values are 0");
    }
  };

  if (explicit_ok) {
    for (const auto& set : w2) {
      std::vector<FStructure> elements;
      for (auto [a, b] : set) elements.push_back(FStructure::atom(a * G + b));
      check2(FStructure::set(std::move(elements)));
    }
    for (const auto& set : w3) {
      std::vector<FStructure> elements;
      for (auto a : set) elements.push_back(FStructure::atom(a));
      check3(FStructure::set(std::move(elements)));
    }
  }

  // Condition 1: every structure, against seeded pairs g ≤ g'.
  auto singles = detail::shapes(ev.shape, grid.size(), plan.max_set, rng, plan.random_samples);
  for (const auto& t : singles) {
    for (int k = 0; k < 4; ++k) {
      ++report.samples;
      std::vector<std::size_t> lo(grid.size()), hi(grid.size());
      for (std::size_t a = 0; a < grid.size(); ++a) {
        std::size_t x = sampling::uniform(rng, 0, grid.size() - 1);
        std::size_t y = sampling::uniform(rng, 0, grid.size() - 1);
        if (grid[y] < grid[x]) std::swap(x, y);
        lo[a] = x;
        hi[a] = y;
      }
      Value a = ev.evaluate(t, [&](std::size_t i) { return grid[lo[i]]; });
      Value b = ev.evaluate(t, [&](std::size_t i) { return grid[hi[i]]; });
      if (!detail::leq(a, b, plan.tol)) {
        fail(1, report.condition1_ok, to_string(t, [&](std::size_t i) { return grid[lo[i]].to_string() + "<=" + grid[hi[i]].to_string(); }),
             a.to_string() + " > " + b.to_string());
      }
    }
    check3(t);
  }

  // Condition 2: structures over pairs of grid values.
  auto pairs = detail::shapes(ev.shape, G * G, std::min<std::size_t>(plan.max_set, 2), rng, plan.random_samples);
  for (const auto& t : pairs) check2(t);
  if (ev.shape.kind() == NodeKind::finpow) {
    for (std::size_t k = 0; k < plan.random_samples; ++k) {
      std::size_t n = sampling::uniform(rng, 3, 4);
      std::vector<FStructure> elements;
      for (std::size_t i = 0; i < n; ++i) elements.push_back(FStructure::atom(sampling::uniform(rng, 0, G * G - 1)));
      check2(FStructure::set(std::move(elements)));
    }
  }
  return report;
}

/// The evaluation of every grammar node, one layer deep.
inline std::vector<EvaluationUnderTest> grammar_evaluations(const TopBound& top) {
  using E = FunctorExpr;
  std::vector<EvaluationUnderTest> out{
      node_evaluation("id", E::id()),
      node_evaluation("id-discounted", E::id(Rational(1, 2))),
      node_evaluation("dist-expectation", E::dist(E::id())),
      node_evaluation("finpow-max", E::finpow(E::id())),
      node_evaluation("product-max", E::product(E::id(), E::id())),
      node_evaluation("product-pnorm-1", E::product(E::id(), E::id(), ProductEval::pnorm(1, Rational(1, 2), Rational(1, 2)))),
      node_evaluation("product-pnorm-2", E::product(E::id(), E::id(), ProductEval::pnorm(2, Rational(1, 2), Rational(1, 2)))),
      node_evaluation("coproduct", E::coproduct(E::id(), E::id())),
  };
  if (top.is_infinite()) out.push_back(node_evaluation("diagsquare-sum", E::diag_square(E::id())));
  return out;
}

}  // namespace behametric
