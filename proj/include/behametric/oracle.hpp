#pragma once

// Exhaustive reference computations. Exponential by construction; used by
// the tests and the `check` command, never by the lifting engine.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "behametric/errors.hpp"
#include "behametric/functor.hpp"
#include "behametric/lifting.hpp"
#include "behametric/lp.hpp"

namespace behametric::oracle {

struct OracleBudget {
  std::size_t max_coupling_cells = 16;
  std::size_t max_support = 4;
  std::size_t max_lp_variables = 6;
  std::size_t max_lp_bases = 3'000'000;
};

/// Visits every basic feasible plan of a transportation polytope. Bases are
/// spanning trees of the complete bipartite supply/demand graph; the tree
/// flow is obtained by peeling leaves.
template <class S, class Visitor>
void for_each_transport_vertex(const std::vector<S>& supply, const std::vector<S>& demand, Visitor&& visit) {
  using T = lp::ScalarTraits<S>;
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (m == 0 || n == 0) return;
  const std::size_t cells = m * n;
  const std::size_t tree_size = m + n - 1;
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> parent(m + n);

  auto find = [&](std::vector<std::size_t>& p, std::size_t x) {
    while (p[x] != x) x = p[x];
    return x;
  };

  auto evaluate_tree = [&]() {
    std::vector<S> remaining(m + n);
    for (std::size_t i = 0; i < m; ++i) remaining[i] = supply[i];
    for (std::size_t j = 0; j < n; ++j) remaining[m + j] = demand[j];
    std::vector<std::vector<S>> plan(m, std::vector<S>(n, S(0)));
    std::vector<bool> used(chosen.size(), false);
    std::vector<std::size_t> degree(m + n, 0);
    for (std::size_t c : chosen) {
      ++degree[c / n];
      ++degree[m + c % n];
    }
    for (std::size_t step = 0; step < chosen.size(); ++step) {
      std::optional<std::size_t> edge;
      std::size_t leaf = 0;
      for (std::size_t e = 0; e < chosen.size() && !edge; ++e) {
        if (used[e]) continue;
        std::size_t row = chosen[e] / n;
        std::size_t col = m + chosen[e] % n;
        if (degree[row] == 1) {
          edge = e;
          leaf = row;
        } else if (degree[col] == 1) {
          edge = e;
          leaf = col;
        }
      }
      if (!edge) return;
      std::size_t row = chosen[*edge] / n;
      std::size_t col = m + chosen[*edge] % n;
      std::size_t other = leaf == row ? col : row;
      S flow = remaining[leaf];
      if (T::sign(flow) < 0) return;
      plan[row][col - m] = flow;
      remaining[leaf] = S(0);
      remaining[other] -= flow;
      used[*edge] = true;
      --degree[row];
      --degree[col];
    }
    for (const auto& r : remaining) {
      if (T::sign(r) != 0) return;
    }
    visit(plan);
  };

  std::function<void(std::size_t)> extend = [&](std::size_t next) {
    if (chosen.size() == tree_size) {
      evaluate_tree();
      return;
    }
    if (cells - next < tree_size - chosen.size()) return;
    for (std::size_t c = next; c < cells; ++c) {
      // An edge closing a cycle can never be part of a spanning tree.
      std::iota(parent.begin(), parent.end(), std::size_t{0});
      for (std::size_t e : chosen) parent[find(parent, e / n)] = find(parent, m + e % n);
      if (find(parent, c / n) == find(parent, m + c % n)) continue;
      chosen.push_back(c);
      extend(c + 1);
      chosen.pop_back();
    }
  };
  extend(0);
}

/// Minimum transportation cost over all vertices; nullopt when every plan
/// uses a forbidden cell.
template <class S>
std::optional<S> transportation_vertex_oracle(const lp::TransportationInstance<S>& inst, const OracleBudget& budget = {}) {
  inst.validate();
  if (inst.supply.size() > budget.max_support || inst.demand.size() > budget.max_support) {
    throw BudgetExceeded("transportation oracle is limited to supports of size " + std::to_string(budget.max_support));
  }
  std::optional<S> best;
  for_each_transport_vertex<S>(inst.supply, inst.demand, [&](const std::vector<std::vector<S>>& plan) {
    S total(0);
    for (std::size_t i = 0; i < plan.size(); ++i) {
      for (std::size_t j = 0; j < plan[i].size(); ++j) {
        if (lp::ScalarTraits<S>::sign(plan[i][j]) == 0) continue;
        if (!inst.cost[i][j]) return;
        total += plan[i][j] * *inst.cost[i][j];
      }
    }
    if (!best || lp::ScalarTraits<S>::sign(total - *best) < 0) best = total;
  });
  return best;
}

namespace detail {

// Solves the square system A x = b; nullopt when singular.
template <class S>
std::optional<std::vector<S>> solve_square(std::vector<std::vector<S>> a, std::vector<S> b) {
  using T = lp::ScalarTraits<S>;
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::optional<std::size_t> pivot;
    for (std::size_t r = col; r < n && !pivot; ++r) {
      if (T::sign(a[r][col]) != 0) pivot = r;
    }
    if (!pivot) return std::nullopt;
    std::swap(a[col], a[*pivot]);
    std::swap(b[col], b[*pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || T::sign(a[r][col]) == 0) continue;
      S factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<S> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace detail

/// Optimum of a box-bounded LP by enumerating every vertex: each choice of
/// n linearly independent tight constraints (rows or bounds) whose solution
/// is feasible.
template <class S>
S kantorovich_vertex_oracle(const lp::LinearProgram<S>& prog, const OracleBudget& budget = {}) {
  prog.validate();
  const std::size_t n = prog.variables.size();
  if (n > budget.max_lp_variables) {
    throw BudgetExceeded("vertex oracle is limited to " + std::to_string(budget.max_lp_variables) + " variables");
  }
  // Hyperplanes: constraint rows, then lo and hi of each variable.
  std::vector<std::vector<S>> normals;
  std::vector<S> offsets;
  for (const auto& c : prog.constraints) {
    normals.push_back(c.coefficients);
    offsets.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<S> e(n, S(0));
    e[j] = S(1);
    normals.push_back(e);
    offsets.push_back(prog.variables[j].lo);
    if (!prog.variables[j].hi) throw ConfigurationError("vertex oracle needs finite upper bounds");
    normals.push_back(std::move(e));
    offsets.push_back(*prog.variables[j].hi);
  }
  const std::size_t m = normals.size();
  double combos = 1;
  for (std::size_t k = 0; k < n; ++k) combos = combos * static_cast<double>(m - k) / static_cast<double>(k + 1);
  if (combos > static_cast<double>(budget.max_lp_bases)) {
    throw BudgetExceeded("vertex oracle would enumerate " + std::to_string(static_cast<long long>(combos)) + " bases");
  }

  auto objective = [&](const std::vector<S>& x) {
    S v(0);
    for (std::size_t j = 0; j < n; ++j) v += prog.objective[j] * x[j];
    return prog.sense == lp::Sense::maximize ? v : S(-v);
  };

  std::optional<S> best;
  if (n == 0) return S(0);
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t next) {
    if (pick.size() == n) {
      std::vector<std::vector<S>> a;
      std::vector<S> b;
      for (std::size_t k : pick) {
        a.push_back(normals[k]);
        b.push_back(offsets[k]);
      }
      auto x = detail::solve_square<S>(std::move(a), std::move(b));
      if (!x || !lp::is_feasible(prog, *x)) return;
      S v = objective(*x);
      if (!best || lp::ScalarTraits<S>::sign(v - *best) > 0) best = v;
      return;
    }
    for (std::size_t k = next; k + (n - pick.size()) <= m; ++k) {
      pick.push_back(k);
      choose(k + 1);
      pick.pop_back();
    }
  };
  choose(0);
  if (!best) throw InfeasibleError("vertex oracle found no feasible vertex");
  return prog.sense == lp::Sense::maximize ? *best : S(-*best);
}

/// Maximum of Σ coeff_i·f_i over {0 ≤ f ≤ bound, |f_i − f_j| ≤ d_ij} by
/// enumerating its vertices through their bases. n independent tight rows
/// of this polytope form a forest of difference edges with exactly one
/// bound row per tree, so every vertex arises from a parent assignment:
/// each variable hangs off 0, off `bound`, or off another variable at ±d.
template <class S>
S kantorovich_forest_oracle(const std::vector<S>& coeffs, const GroundDistance<S>& d, const S& bound,
                            const OracleBudget& budget = {}) {
  using T = lp::ScalarTraits<S>;
  const std::size_t n = coeffs.size();
  if (n > budget.max_lp_variables) {
    throw BudgetExceeded("vertex oracle is limited to " + std::to_string(budget.max_lp_variables) + " variables");
  }
  if (n == 0) return S(0);
  // parent code: -1 lower bound, -2 upper bound, 2j / 2j+1 hang off j at +d / -d.
  std::vector<std::vector<long>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    options[i] = {-1, -2};
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && d[i][j]) {
        options[i].push_back(static_cast<long>(2 * j));
        options[i].push_back(static_cast<long>(2 * j + 1));
      }
    }
  }
  std::vector<long> parent(n);
  std::vector<S> f(n);
  std::vector<char> known(n, 0);
  std::optional<S> best;

  // Fixes f for every assigned node whose parent is resolved, checking the
  // bounds and every difference row against the nodes already fixed.
  auto propagate = [&](std::size_t assigned, std::vector<std::size_t>& fixed) -> bool {
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t k = 0; k < assigned; ++k) {
        if (known[k]) continue;
        const long p = parent[k];
        if (p == -1) {
          f[k] = S(0);
        } else if (p == -2) {
          f[k] = bound;
        } else {
          const auto j = static_cast<std::size_t>(p / 2);
          if (!known[j]) continue;
          f[k] = p % 2 == 0 ? S(f[j] + *d[k][j]) : S(f[j] - *d[k][j]);
        }
        known[k] = 1;
        fixed.push_back(k);
        progress = true;
        if (T::sign(f[k]) < 0 || T::sign(S(f[k] - bound)) > 0) return false;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == k || !known[j] || !d[k][j]) continue;
          S diff = f[k] - f[j];
          if (T::sign(diff) < 0) diff = -diff;
          if (T::sign(S(diff - *d[k][j])) > 0) return false;
        }
      }
    }
    return true;
  };
  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == n) {
      S v(0);
      for (std::size_t k = 0; k < n; ++k) v += coeffs[k] * f[k];
      if (!best || T::sign(S(v - *best)) > 0) best = v;
      return;
    }
    for (long p : options[i]) {
      if (p >= 0) {
        // Parent chains run through assigned nodes only; reaching i closes a cycle.
        auto k = static_cast<std::size_t>(p / 2);
        while (k < i && parent[k] >= 0) k = static_cast<std::size_t>(parent[k] / 2);
        if (k == i) continue;
      }
      parent[i] = p;
      std::vector<std::size_t> fixed;
      if (propagate(i + 1, fixed)) assign(i + 1);
      for (std::size_t k : fixed) known[k] = 0;
    }
  };
  assign(0);
  if (!best) throw InfeasibleError("forest oracle found no feasible vertex");
  return *best;
}

namespace detail {

template <class S>
Value distribution_oracle(const FunctorExpr& expr, const FStructure& a, const FStructure& b, const SlotFunction& ground) {
  std::vector<S> supply, demand;
  for (const auto& w : a.weights()) supply.push_back(to_scalar<S>(w));
  for (const auto& w : b.weights()) demand.push_back(to_scalar<S>(w));
  std::optional<Value> best;
  for_each_transport_vertex<S>(supply, demand, [&](const std::vector<std::vector<S>>& plan) {
    std::vector<std::pair<FStructure, Value>> entries;
    for (std::size_t i = 0; i < plan.size(); ++i) {
      for (std::size_t j = 0; j < plan[i].size(); ++j) {
        if (lp::ScalarTraits<S>::sign(plan[i][j]) > 0) {
          entries.emplace_back(FStructure::pair(a.child(i), b.child(j)), from_scalar(plan[i][j]));
        }
      }
    }
    Value v = evaluate_layer(expr, FStructure::distribution(std::move(entries)), ground);
    if (!best || v < *best) best = v;
  });
  return best ? *best : Value::infinity();
}

}  // namespace detail

/// inf { F̃d(t) | t ∈ Γ(t1, t2) } for the top node of `expr`, by exhaustion.
/// Distances one level down come from the engine's Wasserstein lifting of
/// the children (or from the ground tables at leaves).
inline Value wasserstein_oracle(const FunctorExpr& expr, const PseudometricTable& d, const FStructure& t1, const FStructure& t2,
                                const OracleBudget& budget = {}) {
  check_expression(expr, d.top());
  Lifter lifter(d, LiftMethod::wasserstein);
  const Value top = Value::top(d.top());
  SlotFunction ground = [&](std::size_t slot, const FStructure& p) -> Value {
    switch (expr.kind()) {
      case NodeKind::id:
        return d.at(p.child(0).atom_index(), p.child(1).atom_index());
      case NodeKind::constant:
        return expr.space().at(p.child(0).atom_index(), p.child(1).atom_index());
      case NodeKind::product:
      case NodeKind::coproduct:
        return lifter.distance(expr.child(slot), p.child(0), p.child(1));
      default:
        return lifter.distance(expr.child(), p.child(0), p.child(1));
    }
  };

  switch (expr.kind()) {
    case NodeKind::id:
    case NodeKind::constant:
      return evaluate_layer(expr, FStructure::pair(t1, t2), ground);
    case NodeKind::product:
      return evaluate_layer(expr, FStructure::pair(FStructure::pair(t1.child(0), t2.child(0)), FStructure::pair(t1.child(1), t2.child(1))),
                            ground);
    case NodeKind::diag_square:
      return evaluate_layer(expr, enumerate_couplings_diagsquare(t1, t2).couplings.front(), ground);
    case NodeKind::coproduct:
      if (t1.side() != t2.side()) return top;  // no coupling
      return evaluate_layer(expr, FStructure::tagged(t1.side(), FStructure::pair(t1.child(), t2.child())), ground);
    case NodeKind::finpow: {
      const std::size_t n1 = t1.size();
      const std::size_t n2 = t2.size();
      std::vector<Value> cell(n1 * n2);
      for (std::size_t c = 0; c < cell.size(); ++c) {
        cell[c] = ground(0, FStructure::pair(t1.child(c / n2), t2.child(c % n2)));
      }
      std::optional<Value> best;
      for_each_finpow_coupling(n1, n2, budget.max_coupling_cells, [&](std::uint32_t mask) {
        Value v;  // max over T, max ∅ = 0
        for (std::size_t c = 0; c < cell.size(); ++c) {
          if (mask & (1u << c)) v = max_value(v, cell[c]);
        }
        if (!best || v < *best) best = v;
      });
      return best ? *best : top;
    }
    case NodeKind::dist: {
      if (t1.size() > budget.max_support || t2.size() > budget.max_support) {
        throw BudgetExceeded("distribution oracle is limited to supports of size " + std::to_string(budget.max_support));
      }
      bool exact = true;
      for (const auto* t : {&t1, &t2}) {
        for (const auto& w : t->weights()) exact = exact && w.is_exact();
      }
      return exact ? detail::distribution_oracle<Rational>(expr, t1, t2, ground) : detail::distribution_oracle<double>(expr, t1, t2, ground);
    }
  }
  throw ConfigurationError("unknown node");
}

}  // namespace behametric::oracle
