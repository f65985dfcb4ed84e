#pragma once

// Seeded random generators for pseudometrics, expressions, F-structures and
// transition systems. Every generator is a pure function of the engine
// state, so equal seeds give equal instances on every platform.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "behametric/functor.hpp"
#include "behametric/numerics.hpp"
#include "behametric/pseudometric.hpp"

namespace behametric::sampling {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi]. Implemented directly on the engine output
/// because std::uniform_int_distribution is not portable across libraries.
inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} / span) * span;
  std::uint64_t x = rng();
  while (limit != 0 && x >= limit) x = rng();
  return span == 0 ? x : lo + x % span;
}

inline bool chance(Rng& rng, unsigned num, unsigned den) { return uniform(rng, 0, den - 1) < num; }

inline Rational rational(Rng& rng, unsigned max_num, unsigned max_den) {
  Rational q(static_cast<long>(uniform(rng, 0, max_num)), static_cast<unsigned long>(uniform(rng, 1, max_den)));
  q.canonicalize();
  return q;
}

/// `n` positive rationals summing to 1.
inline std::vector<Rational> distribution_weights(Rng& rng, std::size_t n) {
  std::vector<Rational> w(n);
  Rational total(0);
  for (auto& x : w) {
    x = Rational(static_cast<long>(uniform(rng, 1, 6)));
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

struct PseudometricOptions {
  unsigned max_num = 8;
  unsigned max_den = 4;
  unsigned zero_chance = 1;      // out of 8: an off-diagonal 0 (pseudometric, not metric)
  unsigned infinity_chance = 1;  // out of 8, only when top = inf
};

/// Random symmetric entries, closed under shortest paths, then clipped to ⊤.
/// Clipping a pseudometric at a constant keeps the triangle inequality.
inline PseudometricTable pseudometric(Rng& rng, std::size_t n, const TopBound& top, const std::string& name = "X",
                                      const PseudometricOptions& opt = {}) {
  std::vector<Value> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Value v;
      if (chance(rng, opt.zero_chance, 8)) {
        v = Value();
      } else if (top.is_infinite() && chance(rng, opt.infinity_chance, 8)) {
        v = Value::infinity();
      } else {
        v = Value(rational(rng, opt.max_num, opt.max_den));
      }
      d[i * n + j] = d[j * n + i] = v;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Value via = d[i * n + k] + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  }
  const Value cap = Value::top(top);
  for (auto& v : d) v = min_value(v, cap);
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(name + std::to_string(i));
  return PseudometricTable(name, std::move(atoms), std::move(d), top);
}

/// Pseudometric with every off-diagonal entry strictly positive.
inline PseudometricTable metric(Rng& rng, std::size_t n, const TopBound& top, const std::string& name = "X") {
  PseudometricOptions opt;
  opt.zero_chance = 0;
  return pseudometric(rng, n, top, name, opt);
}

struct ExprOptions {
  bool allow_diag_square = false;
  bool allow_pnorm = true;
  unsigned max_p = 1;  // p > 1 leaves exact arithmetic
  std::size_t const_size = 3;
};

/// A leaf: Id with a random discount or a random constant space.
inline FunctorExpr leaf(Rng& rng, const TopBound& top, const ExprOptions& opt = {}) {
  if (chance(rng, 2, 3)) {
    Rational c = chance(rng, 1, 2) ? Rational(1) : Rational(static_cast<long>(uniform(rng, 1, 4)), 4);
    c.canonicalize();
    return FunctorExpr::id(c);
  }
  std::size_t size = uniform(rng, 1, opt.const_size);
  return FunctorExpr::constant(pseudometric(rng, size, top, "C" + std::to_string(uniform(rng, 0, 999)), {}));
}

inline ProductEval product_eval(Rng& rng, const TopBound& top, const ExprOptions& opt) {
  if (!opt.allow_pnorm || chance(rng, 1, 2)) return ProductEval::max();
  auto p = static_cast<unsigned long>(uniform(rng, 1, std::max(1u, opt.max_p)));
  Rational c1(static_cast<long>(uniform(rng, 1, 4)), 4);
  Rational c2(static_cast<long>(uniform(rng, 1, 4)), 4);
  c1.canonicalize();
  c2.canonicalize();
  if (!top.is_infinite() && c1 + c2 > 1) c2 = 1 - c1;
  if (sgn(c2) <= 0) c2 = Rational(1, 4);
  if (!top.is_infinite() && c1 + c2 > 1) c1 = 1 - c2;
  return ProductEval::pnorm(p, c1, c2);
}

/// Expression whose top node is `kind`, with random subexpressions of the
/// given remaining depth.
inline FunctorExpr expr_with_root(Rng& rng, NodeKind kind, std::size_t depth, const TopBound& top, const ExprOptions& opt = {});

inline FunctorExpr expr(Rng& rng, std::size_t depth, const TopBound& top, const ExprOptions& opt = {}) {
  if (depth == 0 || chance(rng, 1, 3)) return leaf(rng, top, opt);
  std::vector<NodeKind> kinds{NodeKind::dist, NodeKind::finpow, NodeKind::product, NodeKind::coproduct};
  if (opt.allow_diag_square && top.is_infinite()) kinds.push_back(NodeKind::diag_square);
  return expr_with_root(rng, kinds[uniform(rng, 0, kinds.size() - 1)], depth, top, opt);
}

inline FunctorExpr expr_with_root(Rng& rng, NodeKind kind, std::size_t depth, const TopBound& top, const ExprOptions& opt) {
  const std::size_t sub = depth == 0 ? 0 : depth - 1;
  switch (kind) {
    case NodeKind::id:
      return FunctorExpr::id(chance(rng, 1, 2) ? Rational(1) : Rational(1, 2));
    case NodeKind::constant:
      return FunctorExpr::constant(pseudometric(rng, uniform(rng, 1, opt.const_size), top, "C" + std::to_string(uniform(rng, 0, 999))));
    case NodeKind::dist:
      return FunctorExpr::dist(expr(rng, sub, top, opt));
    case NodeKind::finpow:
      return FunctorExpr::finpow(expr(rng, sub, top, opt));
    case NodeKind::diag_square:
      return FunctorExpr::diag_square(expr(rng, sub, top, opt));
    case NodeKind::product: {
      auto l = expr(rng, sub, top, opt);
      auto r = expr(rng, sub, top, opt);
      return FunctorExpr::product(std::move(l), std::move(r), product_eval(rng, top, opt));
    }
    case NodeKind::coproduct: {
      auto l = expr(rng, sub, top, opt);
      auto r = expr(rng, sub, top, opt);
      return FunctorExpr::coproduct(std::move(l), std::move(r));
    }
  }
  throw ConfigurationError("unknown node");
}

struct StructureOptions {
  std::size_t max_support = 4;
  std::size_t max_set = 3;
  bool allow_empty_set = true;
};

/// A random element of F(carrier) for `expr`.
inline FStructure structure(Rng& rng, const FunctorExpr& expr, std::size_t carrier_size, const StructureOptions& opt = {}) {
  switch (expr.kind()) {
    case NodeKind::id:
      return FStructure::atom(uniform(rng, 0, carrier_size - 1));
    case NodeKind::constant:
      return FStructure::atom(uniform(rng, 0, expr.space().size() - 1));
    case NodeKind::dist: {
      // Distinct support points, so the requested support size is the real one.
      std::size_t want = uniform(rng, 1, opt.max_support);
      std::vector<FStructure> points;
      for (std::size_t tries = 0; points.size() < want && tries < 8 * want; ++tries) {
        FStructure p = structure(rng, expr.child(), carrier_size, opt);
        if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(std::move(p));
      }
      auto w = distribution_weights(rng, points.size());
      std::vector<std::pair<FStructure, Value>> entries;
      for (std::size_t i = 0; i < points.size(); ++i) entries.emplace_back(points[i], Value(w[i]));
      return FStructure::distribution(std::move(entries));
    }
    case NodeKind::finpow: {
      std::size_t n = uniform(rng, opt.allow_empty_set ? 0 : 1, opt.max_set);
      std::vector<FStructure> elements;
      for (std::size_t i = 0; i < n; ++i) elements.push_back(structure(rng, expr.child(), carrier_size, opt));
      return FStructure::set(std::move(elements));
    }
    case NodeKind::product: {
      auto l = structure(rng, expr.child(0), carrier_size, opt);
      auto r = structure(rng, expr.child(1), carrier_size, opt);
      return FStructure::pair(std::move(l), std::move(r));
    }
    case NodeKind::diag_square: {
      auto l = structure(rng, expr.child(), carrier_size, opt);
      auto r = structure(rng, expr.child(), carrier_size, opt);
      return FStructure::pair(std::move(l), std::move(r));
    }
    case NodeKind::coproduct: {
      Side side = chance(rng, 1, 2) ? Side::left : Side::right;
      return FStructure::tagged(side, structure(rng, expr.child(static_cast<std::size_t>(side)), carrier_size, opt));
    }
  }
  throw ConfigurationError("unknown node");
}

}  // namespace behametric::sampling
