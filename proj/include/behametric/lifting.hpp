#pragma once

// Kantorovich and Wasserstein liftings of a pseudometric through a functor
// expression.
//
// Wasserstein distances are the infimum over couplings: transportation LP
// for distributions, the Hausdorff formula for finite sets, the unique
// coupling for products, coproducts, Id and the square functor.
//
// Kantorovich distances are suprema over nonexpansive test functions. For
// D and the square functor they are solved as LPs over the values of f on
// the relevant points. For every other node the supremum is attained by
// explicit test functions (f = d(t, ·) clipped to ⊤, or the distance to one
// of the two sets for Pfin), and the lifting evaluates the node at exactly
// those functions.

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "behametric/errors.hpp"
#include "behametric/functor.hpp"
#include "behametric/lp.hpp"
#include "behametric/numerics.hpp"
#include "behametric/pseudometric.hpp"

namespace behametric {

enum class LiftMethod { kantorovich, wasserstein };

inline const char* to_string(LiftMethod m) { return m == LiftMethod::kantorovich ? "kantorovich" : "wasserstein"; }

template <class S>
S to_scalar(const Value& v);

template <>
inline Rational to_scalar<Rational>(const Value& v) {
  return v.rational();
}

template <>
inline double to_scalar<double>(const Value& v) {
  return v.to_double();
}

inline Value from_scalar(const Rational& q) { return sgn(q) < 0 ? Value() : Value(q); }
inline Value from_scalar(double x) { return Value::approx(x < 0 ? 0.0 : x); }

/// Ground distances between n points; nullopt is an infinite distance.
template <class S>
using GroundDistance = std::vector<std::vector<std::optional<S>>>;

/// The LP maximizing Σ coeff_i·f_i over f with 0 ≤ f ≤ bound and
/// |f_i − f_j| ≤ d_ij. Pairs at infinite distance contribute no row.
template <class S>
lp::LinearProgram<S> build_kantorovich_lp(const std::vector<S>& coeffs, const GroundDistance<S>& d, const S& bound) {
  const std::size_t n = coeffs.size();
  lp::LinearProgram<S> prog;
  prog.sense = lp::Sense::maximize;
  for (std::size_t i = 0; i < n; ++i) prog.add_variable(S(0), bound);
  prog.objective = coeffs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!d[i][j]) continue;
      std::vector<S> row(n, S(0));
      row[i] = S(1);
      row[j] = S(-1);
      prog.add_constraint(row, lp::Relation::less_equal, *d[i][j]);
      row[i] = S(-1);
      row[j] = S(1);
      prog.add_constraint(std::move(row), lp::Relation::less_equal, *d[i][j]);
    }
  }
  return prog;
}

/// sup { Σ coeff_i·f_i | f nonexpansive into [0, ⊤] }; nullopt means ∞.
/// Under ⊤ = ∞ the value is infinite as soon as a class of points linked by
/// finite distances carries nonzero net coefficient; otherwise f can be
/// shifted so that it stays below the sum of all finite distances.
template <class S>
std::optional<S> kantorovich_sup(const std::vector<S>& coeffs, const GroundDistance<S>& d, const std::optional<S>& top) {
  using T = lp::ScalarTraits<S>;
  const std::size_t n = coeffs.size();
  if (n == 0) return S(0);
  S bound(0);
  if (top) {
    bound = *top;
  } else {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!d[i][j]) continue;
        bound += *d[i][j];
        parent[find(i)] = find(j);
      }
    }
    std::vector<S> net(n, S(0));
    for (std::size_t i = 0; i < n; ++i) net[find(i)] += coeffs[i];
    for (const auto& v : net) {
      if (T::sign(v) != 0) return std::nullopt;
    }
  }
  return lp::solve_max(build_kantorovich_lp(coeffs, d, bound)).value;
}

/// Computes lifted distances for a fixed ground pseudometric and method.
class Lifter {
 public:
  Lifter(const PseudometricTable& ground, LiftMethod method) : ground_(ground), method_(method), top_(ground.top()), top_value_(Value::top(top_)) {}

  LiftMethod method() const noexcept { return method_; }
  const TopBound& top() const noexcept { return top_; }

  Value distance(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    if (a == b) return Value();
    switch (expr.kind()) {
      case NodeKind::id:
        return Value(expr.discount()) * ground_.at(a.atom_index(), b.atom_index());
      case NodeKind::constant:
        return expr.space().at(a.atom_index(), b.atom_index());
      case NodeKind::coproduct:
        return method_ == LiftMethod::wasserstein ? coproduct_wasserstein(expr, a, b) : witness_kantorovich(expr, a, b);
      case NodeKind::product:
        return method_ == LiftMethod::wasserstein
                   ? expr.product_eval().combine(distance(expr.child(0), a.child(0), b.child(0)),
                                                 distance(expr.child(1), a.child(1), b.child(1)))
                   : witness_kantorovich(expr, a, b);
      case NodeKind::finpow:
        return method_ == LiftMethod::wasserstein ? hausdorff(expr, a, b) : witness_kantorovich(expr, a, b);
      case NodeKind::diag_square:
        return method_ == LiftMethod::wasserstein
                   ? distance(expr.child(), a.child(0), b.child(0)) + distance(expr.child(), a.child(1), b.child(1))
                   : square_kantorovich(expr, a, b);
      case NodeKind::dist:
        return method_ == LiftMethod::wasserstein ? transport(expr, a, b) : distribution_kantorovich(expr, a, b);
    }
    throw ConfigurationError("unknown node");
  }

 private:
  Value clip(const Value& v) const { return min_value(v, top_value_); }

  Value coproduct_wasserstein(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    if (a.side() != b.side()) return top_value_;
    return distance(expr.child(static_cast<std::size_t>(a.side())), a.child(), b.child());
  }

  Value hausdorff(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    if (a.size() == 0 && b.size() == 0) return Value();
    if (a.size() == 0 || b.size() == 0) return top_value_;
    std::vector<Value> row_min(a.size()), col_min(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        Value dij = distance(expr.child(), a.child(i), b.child(j));
        row_min[i] = j == 0 ? dij : min_value(row_min[i], dij);
        col_min[j] = i == 0 ? dij : min_value(col_min[j], dij);
      }
    }
    return max_value(sup_fin(row_min), sup_fin(col_min));
  }

  // Evaluates the node at the test functions that attain the supremum.
  Value witness_kantorovich(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    auto gap = [&](const SlotFunction& h) { return dist_e(evaluate_layer(expr, a, h), evaluate_layer(expr, b, h)); };
    switch (expr.kind()) {
      case NodeKind::product:
        return gap([&](std::size_t slot, const FStructure& y) { return clip(distance(expr.child(slot), a.child(slot), y)); });
      case NodeKind::coproduct: {
        const auto side_a = static_cast<std::size_t>(a.side());
        if (a.side() != b.side()) {
          return gap([&](std::size_t slot, const FStructure&) { return slot == side_a ? Value() : top_value_; });
        }
        return gap([&](std::size_t slot, const FStructure& y) {
          return slot == side_a ? clip(distance(expr.child(slot), a.child(), y)) : Value();
        });
      }
      case NodeKind::finpow: {
        Value best;
        for (const FStructure* anchor : {&a, &b}) {
          best = max_value(best, gap([&](std::size_t, const FStructure& y) {
            if (anchor->size() == 0) return top_value_;
            Value nearest = Value::infinity();
            for (const auto& e : anchor->children()) nearest = min_value(nearest, distance(expr.child(), e, y));
            return clip(nearest);
          }));
        }
        return best;
      }
      default:
        throw ConfigurationError("no test-function family for " + expr.to_string());
    }
  }

  // Union of the points of both structures, the pairwise lifted distances
  // and whether everything is exact.
  struct Points {
    std::vector<FStructure> points;
    std::vector<std::vector<Value>> d;
    bool exact = true;
  };

  Points collect(const FunctorExpr& sub, std::vector<FStructure> points) const {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    Points out;
    out.points = std::move(points);
    const std::size_t n = out.points.size();
    out.d.assign(n, std::vector<Value>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        out.d[i][j] = out.d[j][i] = distance(sub, out.points[i], out.points[j]);
        out.exact = out.exact && out.d[i][j].is_exact();
      }
    }
    return out;
  }

  template <class S>
  GroundDistance<S> ground(const std::vector<std::vector<Value>>& d) const {
    GroundDistance<S> g(d.size(), std::vector<std::optional<S>>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[i][j].is_finite()) g[i][j] = to_scalar<S>(d[i][j]);
      }
    }
    return g;
  }

  template <class S>
  std::optional<S> top_scalar() const {
    if (top_.is_infinite()) return std::nullopt;
    return to_scalar<S>(top_value_);
  }

  template <class S>
  Value distribution_kantorovich_in(const Points& pts, const FStructure& a, const FStructure& b) const {
    std::vector<S> coeffs(pts.points.size(), S(0));
    auto add = [&](const FStructure& p, int sign) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        auto it = std::lower_bound(pts.points.begin(), pts.points.end(), p.child(i));
        S w = to_scalar<S>(p.weights()[i]);
        coeffs[static_cast<std::size_t>(it - pts.points.begin())] += sign > 0 ? w : S(-w);
      }
    };
    add(a, +1);
    add(b, -1);
    auto v = kantorovich_sup<S>(coeffs, ground<S>(pts.d), top_scalar<S>());
    return v ? from_scalar(*v) : Value::infinity();
  }

  Value distribution_kantorovich(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    std::vector<FStructure> points(a.children().begin(), a.children().end());
    points.insert(points.end(), b.children().begin(), b.children().end());
    Points pts = collect(expr.child(), std::move(points));
    bool exact = pts.exact && top_value_.is_exact() && all_exact(a.weights()) && all_exact(b.weights());
    return exact ? distribution_kantorovich_in<Rational>(pts, a, b) : distribution_kantorovich_in<double>(pts, a, b);
  }

  template <class S>
  Value square_kantorovich_in(const Points& pts, const FStructure& a, const FStructure& b) const {
    std::vector<S> coeffs(pts.points.size(), S(0));
    auto index = [&](const FStructure& p) {
      return static_cast<std::size_t>(std::lower_bound(pts.points.begin(), pts.points.end(), p) - pts.points.begin());
    };
    for (std::size_t k = 0; k < 2; ++k) {
      coeffs[index(a.child(k))] += S(1);
      coeffs[index(b.child(k))] -= S(1);
    }
    // |·| is handled by solving both orientations.
    auto g = ground<S>(pts.d);
    auto forward = kantorovich_sup<S>(coeffs, g, top_scalar<S>());
    for (auto& c : coeffs) c = -c;
    auto backward = kantorovich_sup<S>(coeffs, g, top_scalar<S>());
    if (!forward || !backward) return Value::infinity();
    return max_value(from_scalar(*forward), from_scalar(*backward));
  }

  Value square_kantorovich(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    Points pts = collect(expr.child(), {a.child(0), a.child(1), b.child(0), b.child(1)});
    return pts.exact && top_value_.is_exact() ? square_kantorovich_in<Rational>(pts, a, b) : square_kantorovich_in<double>(pts, a, b);
  }

  template <class S>
  Value transport_in(const FunctorExpr& expr, const FStructure& a, const FStructure& b, const std::vector<std::vector<Value>>& cost) const {
    lp::TransportationInstance<S> inst;
    for (const auto& w : a.weights()) inst.supply.push_back(to_scalar<S>(w));
    for (const auto& w : b.weights()) inst.demand.push_back(to_scalar<S>(w));
    inst.cost.assign(a.size(), std::vector<std::optional<S>>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (cost[i][j].is_finite()) inst.cost[i][j] = to_scalar<S>(cost[i][j]);
      }
    }
    (void)expr;
    auto result = lp::solve_transportation(inst);
    return result.value ? from_scalar(*result.value) : Value::infinity();
  }

  Value transport(const FunctorExpr& expr, const FStructure& a, const FStructure& b) const {
    std::vector<std::vector<Value>> cost(a.size(), std::vector<Value>(b.size()));
    bool exact = all_exact(a.weights()) && all_exact(b.weights());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        cost[i][j] = distance(expr.child(), a.child(i), b.child(j));
        exact = exact && cost[i][j].is_exact();
      }
    }
    return exact ? transport_in<Rational>(expr, a, b, cost) : transport_in<double>(expr, a, b, cost);
  }

  static bool all_exact(std::span<const Value> values) {
    return std::all_of(values.begin(), values.end(), [](const Value& v) { return v.is_exact(); });
  }

  const PseudometricTable& ground_;
  LiftMethod method_;
  TopBound top_;
  Value top_value_;
};

/// Lifted distance of t1, t2 ∈ F(X) for the pseudometric `d` on X.
inline Value lift_dist(const FunctorExpr& expr, const PseudometricTable& d, LiftMethod method, const FStructure& t1,
                       const FStructure& t2) {
  check_expression(expr, d.top());
  validate(expr, d.size(), t1, "t1", 1e-9);
  validate(expr, d.size(), t2, "t2", 1e-9);
  return Lifter(d, method).distance(expr, t1, t2);
}

/// Wasserstein minus Kantorovich distance.
inline Value duality_gap(const FunctorExpr& expr, const PseudometricTable& d, const FStructure& t1, const FStructure& t2) {
  Value w = lift_dist(expr, d, LiftMethod::wasserstein, t1, t2);
  Value k = lift_dist(expr, d, LiftMethod::kantorovich, t1, t2);
  if (w.is_infinite()) return k.is_infinite() ? Value() : Value::infinity();
  if (w < k) {
    if (approx_equal(w, k, 1e-9) && !(w.is_exact() && k.is_exact())) return Value::approx(0.0);
    throw std::logic_error("Kantorovich distance " + k.to_string() + " exceeds Wasserstein distance " + w.to_string());
  }
  return subtract(w, k);
}

}  // namespace behametric
