#pragma once

// Seeded property suites: duality, K ≤ W, pseudometric axioms,
// well-behavedness, oracle equivalence, kernel = bisimilarity and
// contraction of discounted probabilistic systems.

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "behametric/coalgebra.hpp"
#include "behametric/fixpoint.hpp"
#include "behametric/functor.hpp"
#include "behametric/lifting.hpp"
#include "behametric/oracle.hpp"
#include "behametric/sampling.hpp"
#include "behametric/well_behaved.hpp"

namespace behametric {

namespace sampling {

/// Random probabilistic system with planted bisimilar states: a quotient
/// system on a few blocks is expanded, and every state splits its mass into
/// a block randomly among the block's members.
inline ProbTS prob_ts(Rng& rng, std::size_t max_states, const Rational& discount) {
  const std::size_t n = uniform(rng, 1, max_states);
  const std::size_t k = uniform(rng, std::min<std::size_t>(n, 2), std::min<std::size_t>(n, 4));
  std::vector<std::size_t> block(n);
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t s = 0; s < n; ++s) {
    block[s] = s < k ? s : uniform(rng, 0, k - 1);
    members[block[s]].push_back(s);
  }
  ProbTS p;
  p.discount = discount;
  for (std::size_t s = 0; s < n; ++s) p.states.push_back("s" + std::to_string(s));
  p.transitions.resize(n);
  p.terminate.assign(n, Rational(0));
  for (std::size_t b = 0; b < k; ++b) {
    // Block-level weights: termination plus one entry per target block.
    std::vector<Rational> w = distribution_weights(rng, k + 1);
    // Without any termination every state would be bisimilar; block 0 keeps it.
    if (b > 0 && chance(rng, 1, 2)) {
      w[k] = 0;
      Rational total(0);
      for (const auto& x : w) total += x;
      for (auto& x : w) x /= total;
    }
    for (std::size_t s : members[b]) {
      p.terminate[s] = w[k];
      for (std::size_t c = 0; c < k; ++c) {
        if (sgn(w[c]) == 0) continue;
        auto split = distribution_weights(rng, members[c].size());
        for (std::size_t i = 0; i < members[c].size(); ++i) p.transitions[s][members[c][i]] += w[c] * split[i];
      }
    }
  }
  // Sometimes break the planted structure by moving mass between blocks.
  if (n > 1 && chance(rng, 1, 3)) {
    std::size_t s = uniform(rng, 0, n - 1);
    auto& row = p.transitions[s];
    if (!row.empty()) {
      auto [from, w] = *row.begin();
      std::size_t to = uniform(rng, 0, n - 1);
      Rational moved = w / 2;
      row[from] -= moved;
      row[to] += moved;
    }
  }
  return p;
}

/// Random metric transition system over one or two Euclidean propositions.
inline MetricTS metric_ts(Rng& rng, std::size_t max_states) {
  MetricTS m;
  const std::size_t n = uniform(rng, 1, max_states);
  for (std::size_t s = 0; s < n; ++s) m.states.push_back("s" + std::to_string(s));
  const std::size_t props = uniform(rng, 1, 2);
  for (std::size_t r = 0; r < props; ++r) {
    std::vector<Value> points;
    const std::size_t size = uniform(rng, 1, 4);
    while (points.size() < size) {
      Value v(rational(rng, 8, 4));
      if (std::find(points.begin(), points.end(), v) == points.end()) points.push_back(v);
    }
    std::string name = "r" + std::to_string(r);
    m.propositions.push_back({name, PseudometricTable::euclidean(name, points, TopBound::infinite())});
  }
  m.valuation.assign(n, std::vector<std::size_t>(props));
  m.tau.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t r = 0; r < props; ++r) m.valuation[s][r] = uniform(rng, 0, m.propositions[r].space.size() - 1);
    for (std::size_t t = 0; t < n; ++t) {
      if (chance(rng, 1, 3)) m.tau[s].push_back(t);
    }
  }
  return m;
}

/// Random coalgebra for a random expression.
inline System system(Rng& rng, std::size_t max_states, const NumericMode& mode, bool allow_diag_square) {
  const TopBound top = chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
  ExprOptions eo;
  eo.allow_diag_square = allow_diag_square;
  eo.max_p = 1;
  eo.const_size = 3;
  FunctorExpr e = expr_with_root(rng, chance(rng, 1, 2) ? NodeKind::dist : NodeKind::product, 2, top, eo);
  const std::size_t n = uniform(rng, 1, max_states);
  StructureOptions so;
  so.max_support = 3;
  so.max_set = 2;
  std::vector<std::string> states;
  std::vector<FStructure> alpha;
  for (std::size_t s = 0; s < n; ++s) {
    states.push_back("s" + std::to_string(s));
    FStructure t = structure(rng, e, n, so);
    alpha.push_back(mode.is_exact() ? t : to_float(t));
  }
  return System(std::move(states), std::move(e), std::move(alpha), top, mode);
}

}  // namespace sampling

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t n = 500;
  NumericMode mode = NumericMode::exact();
  unsigned threads = 1;
};

struct SuiteResult {
  explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

  std::string name;
  bool passed = true;
  std::size_t instances = 0;
  std::vector<std::string> lines;     // one summary line per sub-check
  std::vector<std::string> failures;  // witnesses, capped

  void fail(std::string witness) {
    passed = false;
    if (failures.size() < 10) failures.push_back(std::move(witness));
  }
};

/// A single lifting instance: expression, ground table and two structures.
struct LiftInstance {
  FunctorExpr expr;
  PseudometricTable d;
  FStructure t1;
  FStructure t2;

  std::string describe() const {
    std::string table;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = i + 1; j < d.size(); ++j) table += (table.empty() ? "" : " ") + std::to_string(i) + std::to_string(j) + "=" + d.at(i, j).to_string();
    }
    return expr.to_string() + " top=" + d.top().to_string() + " d[" + table + "] t1=" + to_string(t1) + " t2=" + to_string(t2);
  }
};

/// Instance categories, one per grammar node and product evaluation.
inline const std::vector<std::string>& node_categories() {
  static const std::vector<std::string> names{"id", "const", "dist", "finpow", "product-max", "product-pnorm", "coproduct", "diagsquare"};
  return names;
}

struct InstanceOptions {
  bool allow_diag_square_below = false;
  std::size_t max_carrier = 5;
  std::size_t max_support = 4;
  std::size_t max_set = 3;
  std::size_t max_depth = 2;
  unsigned max_p = 1;
};

inline LiftInstance lift_instance(sampling::Rng& rng, const std::string& category, const NumericMode& mode, const InstanceOptions& io = {}) {
  using namespace sampling;
  const bool diag = category == "diagsquare";
  const TopBound top = !diag && chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
  const std::size_t n = io.max_carrier < 2 || chance(rng, 1, 10) ? 1 : uniform(rng, 2, io.max_carrier);
  PseudometricTable d = pseudometric(rng, n, top);
  ExprOptions eo;
  eo.allow_diag_square = io.allow_diag_square_below && top.is_infinite();
  eo.max_p = io.max_p;
  const std::size_t depth = uniform(rng, 1, io.max_depth);
  FunctorExpr e = [&] {
    if (category == "id") return expr_with_root(rng, NodeKind::id, depth, top, eo);
    if (category == "const") return expr_with_root(rng, NodeKind::constant, depth, top, eo);
    if (category == "dist") return expr_with_root(rng, NodeKind::dist, depth, top, eo);
    if (category == "finpow") return expr_with_root(rng, NodeKind::finpow, depth, top, eo);
    if (category == "coproduct") return expr_with_root(rng, NodeKind::coproduct, depth, top, eo);
    if (category == "diagsquare") return expr_with_root(rng, NodeKind::diag_square, depth, top, eo);
    auto l = expr(rng, depth - 1, top, eo);
    auto r = expr(rng, depth - 1, top, eo);
    if (category == "product-max") return FunctorExpr::product(std::move(l), std::move(r), ProductEval::max());
    ExprOptions pn = eo;
    pn.allow_pnorm = true;
    ProductEval ev = ProductEval::max();
    while (ev.kind == ProductEval::Kind::max) ev = product_eval(rng, top, pn);
    return FunctorExpr::product(std::move(l), std::move(r), ev);
  }();
  StructureOptions so;
  so.max_support = io.max_support;
  so.max_set = io.max_set;
  FStructure t1 = structure(rng, e, n, so);
  FStructure t2 = t1;
  if (!chance(rng, 1, 8)) {
    // Equal pairs are trivial; redraw a few times to keep them rare.
    for (int attempt = 0; attempt < 4 && t2 == t1; ++attempt) t2 = structure(rng, e, n, so);
  }
  if (!mode.is_exact()) {
    t1 = to_float(t1);
    t2 = to_float(t2);
  }
  return {std::move(e), std::move(d), std::move(t1), std::move(t2)};
}

namespace detail {

inline bool same(const Value& a, const Value& b, const NumericMode& mode) {
  if (mode.is_exact() && a.is_exact() && b.is_exact()) return a == b;
  return approx_equal(a, b, std::max(mode.tolerance(), 1e-9));
}

inline bool at_most(const Value& a, const Value& b, const NumericMode& mode) {
  if (mode.is_exact() && a.is_exact() && b.is_exact()) return a <= b;
  return approx_leq(a, b, std::max(mode.tolerance(), 1e-9));
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) { return seed * 0x9E3779B97F4A7C15ull + stream; }

}  // namespace detail

/// Kantorovich = Wasserstein on every node except the square functor.
inline SuiteResult duality_suite(const SuiteOptions& opt) {
  SuiteResult r("duality");
  const std::vector<std::string> cats{"id", "const", "dist", "finpow", "product-max", "product-pnorm", "coproduct"};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    sampling::Rng rng(detail::mix(opt.seed, c));
    std::size_t bad = 0;
    for (std::size_t k = 0; k < opt.n; ++k) {
      LiftInstance in = lift_instance(rng, cats[c], opt.mode);
      Value w = lift_dist(in.expr, in.d, LiftMethod::wasserstein, in.t1, in.t2);
      Value kv = lift_dist(in.expr, in.d, LiftMethod::kantorovich, in.t1, in.t2);
      ++r.instances;
      if (!detail::same(kv, w, opt.mode)) {
        ++bad;
        r.fail(cats[c] + ": K=" + kv.to_string() + " W=" + w.to_string() + " on " + in.describe());
      }
    }
    r.lines.push_back(cats[c] + ": " + std::to_string(opt.n) + " instances, " + std::to_string(bad) + " with K != W");
  }
  return r;
}

/// Kantorovich ≤ Wasserstein on every node, the square functor included.
inline SuiteResult k_le_w_suite(const SuiteOptions& opt) {
  SuiteResult r("k-le-w");
  const auto& cats = node_categories();
  InstanceOptions io;
  io.allow_diag_square_below = true;
  io.max_p = opt.mode.is_exact() ? 1 : 3;
  for (std::size_t c = 0; c < cats.size(); ++c) {
    sampling::Rng rng(detail::mix(opt.seed, 100 + c));
    std::size_t bad = 0, strict = 0;
    for (std::size_t k = 0; k < opt.n; ++k) {
      LiftInstance in = lift_instance(rng, cats[c], opt.mode, io);
      Value w = lift_dist(in.expr, in.d, LiftMethod::wasserstein, in.t1, in.t2);
      Value kv = lift_dist(in.expr, in.d, LiftMethod::kantorovich, in.t1, in.t2);
      ++r.instances;
      if (!detail::at_most(kv, w, opt.mode)) {
        ++bad;
        r.fail(cats[c] + ": K=" + kv.to_string() + " > W=" + w.to_string() + " on " + in.describe());
      } else if (!detail::same(kv, w, opt.mode)) {
        ++strict;
      }
    }
    r.lines.push_back(cats[c] + ": " + std::to_string(opt.n) + " instances, " + std::to_string(bad) + " violations, " + std::to_string(strict) +
                      " with K < W");
  }
  return r;
}

/// Every lifted table and every iterate on random systems is a pseudometric.
inline SuiteResult axioms_suite(const SuiteOptions& opt) {
  SuiteResult r("axioms");
  sampling::Rng rng(detail::mix(opt.seed, 200));
  const double tol = opt.mode.is_exact() ? 0.0 : std::max(opt.mode.tolerance(), 1e-9);
  std::size_t tables = 0, iterates = 0;
  for (std::size_t k = 0; k < opt.n; ++k) {
    // A random system, iterated with axiom checks on every iterate.
    const int kind = static_cast<int>(k % 3);
    try {
      System sys = kind == 0   ? from_metric_ts(sampling::metric_ts(rng, 5), opt.mode)
                   : kind == 1 ? from_prob_ts(sampling::prob_ts(rng, 5, Rational(1, 2)), opt.mode)
                               : sampling::system(rng, 4, opt.mode, true);
      for (LiftMethod method : {LiftMethod::wasserstein, LiftMethod::kantorovich}) {
        IterationOptions io;
        io.method = method;
        io.check_axioms = true;
        io.max_iter = opt.mode.is_exact() ? (kind == 0 ? 64 : 6) : 200;
        io.threads = opt.threads;
        DistanceMatrix m = behavioral_distances(sys, io);
        iterates += m.iterations;
        if (kind == 0 && opt.mode.is_exact() && !m.converged) r.fail("metric system did not reach an exact fixed point");
      }
    } catch (const std::logic_error& e) {
      r.fail(std::string("system ") + std::to_string(k) + ": " + e.what());
    }

    // A lifted table over random structures of a random expression.
    const TopBound top = sampling::chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
    const std::size_t n = sampling::uniform(rng, 1, 4);
    PseudometricTable d = sampling::pseudometric(rng, n, top);
    sampling::ExprOptions eo;
    eo.allow_diag_square = top.is_infinite();
    eo.max_p = 1;
    FunctorExpr e = sampling::expr(rng, 2, top, eo);
    std::vector<FStructure> ts;
    sampling::StructureOptions so;
    so.max_support = 3;
    for (int i = 0; i < 4; ++i) {
      FStructure t = sampling::structure(rng, e, n, so);
      ts.push_back(opt.mode.is_exact() ? t : to_float(t));
    }
    for (LiftMethod method : {LiftMethod::wasserstein, LiftMethod::kantorovich}) {
      Lifter lifter(d, method);
      std::vector<Value> table(ts.size() * ts.size());
      for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < ts.size(); ++j) table[i * ts.size() + j] = lifter.distance(e, ts[i], ts[j]);
      }
      ++tables;
      auto at = [&](std::size_t i, std::size_t j) -> const Value& { return table[i * ts.size() + j]; };
      if (auto v = find_axiom_violation(ts.size(), at, top, tol)) {
        r.fail(std::string(to_string(method)) + " table for " + e.to_string() + ": " + v->describe());
      }
    }
    ++r.instances;
  }
  r.lines.push_back(std::to_string(r.instances) + " systems, " + std::to_string(iterates) + " iterates and " + std::to_string(tables) +
                    " lifted tables checked");
  return r;
}

/// Grammar evaluations satisfy all three conditions; min on finite sets
/// fails Conditions 2 and 3 with the known witnesses.
inline SuiteResult well_behaved_suite(const SuiteOptions& opt) {
  SuiteResult r("well-behaved");
  for (const TopBound& top : {TopBound::finite(1), TopBound::infinite()}) {
    SamplingPlan plan;
    plan.top = top;
    plan.seed = detail::mix(opt.seed, 300);
    plan.random_samples = std::max<std::size_t>(opt.n / 2, 50);
    plan.tol = opt.mode.is_exact() ? 0.0 : opt.mode.tolerance();
    for (const auto& ev : grammar_evaluations(top)) {
      WellBehavedReport rep = check_well_behaved(ev, plan);
      r.instances += rep.samples;
      r.lines.push_back(ev.name + " (top " + top.to_string() + "): " + (rep.ok() ? "well-behaved" : "NOT well-behaved") + " on " +
                        std::to_string(rep.samples) + " samples");
      for (const auto& w : rep.witnesses) r.fail(ev.name + " condition " + std::to_string(w.condition) + " fails at " + w.structure + " (" + w.detail + ")");
    }
    WellBehavedReport rep = check_well_behaved(finpow_min_evaluation(), plan, finpow_witnesses());
    r.instances += rep.samples;
    const auto* w2 = rep.witness(2);
    const auto* w3 = rep.witness(3);
    std::string line = "finpow-min (top " + top.to_string() + "): condition 1 " + (rep.condition1_ok ? "holds" : "fails") + ", condition 2 " +
                       (w2 ? "fails at " + w2->structure : std::string("holds")) + ", condition 3 " +
                       (w3 ? "fails at " + w3->structure : std::string("holds"));
    r.lines.push_back(line);
    if (!w2 || w2->structure != "{(0,1),(1,1)}") r.fail("finpow-min: expected condition 2 to fail at {(0,1),(1,1)}");
    if (!w3 || w3->structure != "{0,1}") r.fail("finpow-min: expected condition 3 to fail at {0,1}");
  }
  return r;
}

/// Engine values against the exhaustive oracles.
inline SuiteResult oracle_suite(const SuiteOptions& opt) {
  SuiteResult r("oracle");
  InstanceOptions io;
  io.max_set = 4;
  io.max_depth = 1;
  {
    sampling::Rng rng(detail::mix(opt.seed, 400));
    std::size_t bad = 0;
    for (std::size_t k = 0; k < opt.n; ++k) {
      LiftInstance in = lift_instance(rng, "finpow", opt.mode, io);
      Value engine = lift_dist(in.expr, in.d, LiftMethod::wasserstein, in.t1, in.t2);
      Value brute = oracle::wasserstein_oracle(in.expr, in.d, in.t1, in.t2);
      ++r.instances;
      if (!detail::same(engine, brute, opt.mode)) {
        ++bad;
        r.fail("Hausdorff " + engine.to_string() + " vs couplings " + brute.to_string() + " on " + in.describe());
      }
    }
    r.lines.push_back("finpow: " + std::to_string(opt.n) + " instances (|X1||X2| <= 16), " + std::to_string(bad) + " discrepancies");
  }
  {
    sampling::Rng rng(detail::mix(opt.seed, 401));
    std::size_t bad = 0;
    for (std::size_t k = 0; k < opt.n; ++k) {
      LiftInstance in = lift_instance(rng, "dist", opt.mode, io);
      Value engine = lift_dist(in.expr, in.d, LiftMethod::wasserstein, in.t1, in.t2);
      Value brute = oracle::wasserstein_oracle(in.expr, in.d, in.t1, in.t2);
      ++r.instances;
      if (!detail::same(engine, brute, opt.mode)) {
        ++bad;
        r.fail("transport " + engine.to_string() + " vs vertices " + brute.to_string() + " on " + in.describe());
      }
    }
    r.lines.push_back("dist: " + std::to_string(opt.n) + " instances (supports <= 4), " + std::to_string(bad) + " discrepancies");
  }
  {
    // Kantorovich LPs of random distribution pairs on up to 6 points. Six
    // points are expensive for the oracle, so they get a smaller share.
    sampling::Rng rng(detail::mix(opt.seed, 402));
    std::size_t bad = 0, count = 0;
    const std::size_t six = std::max<std::size_t>(opt.n / 100, 2);
    for (std::size_t k = 0; k < opt.n + six; ++k) {
      const std::size_t n = k < opt.n ? sampling::uniform(rng, 1, 5) : 6;
      const TopBound top = sampling::chance(rng, 1, 2) ? TopBound::finite(1) : TopBound::infinite();
      sampling::PseudometricOptions po;
      po.infinity_chance = 0;
      PseudometricTable d = sampling::pseudometric(rng, n, top, "X", po);
      auto p1 = sampling::distribution_weights(rng, n);
      auto p2 = sampling::distribution_weights(rng, n);
      std::vector<Rational> coeffs(n);
      for (std::size_t i = 0; i < n; ++i) coeffs[i] = p1[i] - p2[i];
      GroundDistance<Rational> g(n, std::vector<std::optional<Rational>>(n));
      Rational bound = top.is_infinite() ? Rational(0) : top.finite_value();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          g[i][j] = d.at(i, j).rational();
          if (top.is_infinite() && i < j) bound += d.at(i, j).rational();
        }
      }
      auto prog = build_kantorovich_lp(coeffs, g, bound);
      Rational simplex = lp::solve_max(prog).value;
      Rational vertices = oracle::kantorovich_forest_oracle(coeffs, g, bound);
      bool ok = simplex == vertices;
      if (ok && n <= 3) ok = simplex == oracle::kantorovich_vertex_oracle(prog);
      ++count;
      ++r.instances;
      if (!ok) {
        ++bad;
        r.fail("Kantorovich LP on " + std::to_string(n) + " points: simplex " + to_string(simplex) + " vs vertices " + to_string(vertices));
      }
    }
    r.lines.push_back("kantorovich-lp: " + std::to_string(count) + " instances (<= 6 variables, " + std::to_string(six) + " with 6), " +
                      std::to_string(bad) + " discrepancies");
  }
  return r;
}

/// Shared corpus of random discounted probabilistic systems.
inline std::vector<ProbTS> prob_ts_corpus(std::uint64_t seed, std::size_t n, std::size_t max_states = 8, const Rational& c = Rational(1, 2)) {
  sampling::Rng rng(detail::mix(seed, 500));
  std::vector<ProbTS> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(sampling::prob_ts(rng, max_states, c));
  return out;
}

/// Kernel of the behavioral distance = probabilistic bisimilarity.
inline SuiteResult kernel_suite(const SuiteOptions& opt) {
  SuiteResult r("kernel");
  const NumericMode mode = opt.mode.is_exact() ? NumericMode::floating(1e-9) : opt.mode;
  std::size_t nontrivial = 0;
  for (const ProbTS& p : prob_ts_corpus(opt.seed, opt.n)) {
    IterationOptions io;
    io.threads = opt.threads;
    DistanceMatrix m = behavioral_distances(from_prob_ts(p, mode), io);
    ++r.instances;
    if (!m.converged) {
      r.fail("no convergence on a " + std::to_string(p.states.size()) + "-state system");
      continue;
    }
    Partition kernel = kernel_partition(m, mode.tolerance());
    Partition bisim = bisimilarity_partition(p);
    if (bisim.size() < p.states.size()) ++nontrivial;
    if (kernel != bisim) r.fail("kernel " + to_string(kernel, p.states) + " vs bisimilarity " + to_string(bisim, p.states));
  }
  r.lines.push_back(std::to_string(r.instances) + " systems (float, tol " + Value::approx(mode.tolerance()).to_string() + "), " + std::to_string(nontrivial) +
                    " with bisimilar distinct states");
  return r;
}

/// Δ_{i+1} ≤ c·Δ_i + 1e-12 along every iteration.
inline SuiteResult contraction_suite(const SuiteOptions& opt) {
  SuiteResult r("contraction");
  const NumericMode mode = opt.mode.is_exact() ? NumericMode::floating(1e-9) : opt.mode;
  std::size_t steps = 0;
  for (const ProbTS& p : prob_ts_corpus(opt.seed, opt.n)) {
    IterationOptions io;
    io.threads = opt.threads;
    DistanceMatrix m = behavioral_distances(from_prob_ts(p, mode), io);
    ++r.instances;
    const double c = p.discount.get_d();
    for (std::size_t i = 1; i < m.deltas.size(); ++i) {
      ++steps;
      const double prev = m.deltas[i - 1].to_double();
      const double next = m.deltas[i].to_double();
      if (!(next <= c * prev + 1e-12)) {
        r.fail("step " + std::to_string(i + 1) + ": delta " + m.deltas[i].to_string() + " > c * " + m.deltas[i - 1].to_string());
      }
    }
  }
  r.lines.push_back(std::to_string(r.instances) + " systems, " + std::to_string(steps) + " consecutive steps checked");
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"duality", "k-le-w", "axioms", "well-behaved", "oracle", "kernel", "contraction"};
  return names;
}

inline SuiteResult run_suite(std::string_view name, const SuiteOptions& opt) {
  if (name == "duality") return duality_suite(opt);
  if (name == "k-le-w") return k_le_w_suite(opt);
  if (name == "axioms") return axioms_suite(opt);
  if (name == "well-behaved") return well_behaved_suite(opt);
  if (name == "oracle") return oracle_suite(opt);
  if (name == "kernel") return kernel_suite(opt);
  if (name == "contraction") return contraction_suite(opt);
  throw ConfigurationError("unknown suite '" + std::string(name) + "'");
}

}  // namespace behametric
