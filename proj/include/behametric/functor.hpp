#pragma once

// Functor expressions, F-structures over finite carriers, layer-wise
// evaluation and coupling enumeration.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "behametric/errors.hpp"
#include "behametric/numerics.hpp"
#include "behametric/pseudometric.hpp"

namespace behametric {

enum class NodeKind { id, dist, finpow, product, coproduct, constant, diag_square };

enum class Side : std::uint8_t { left = 0, right = 1 };

/// Evaluation of a binary product: max, or (c1·x^p + c2·y^p)^(1/p).
struct ProductEval {
  enum class Kind { max, pnorm };
  Kind kind = Kind::max;
  unsigned long p = 1;
  Rational c1{1};
  Rational c2{1};

  static ProductEval max() { return {}; }
  static ProductEval pnorm(unsigned long p, Rational c1, Rational c2) {
    if (p < 1) throw ConfigurationError("p-norm exponent must be at least 1");
    auto in_unit = [](const Rational& c) { return sgn(c) > 0 && c <= 1; };
    if (!in_unit(c1) || !in_unit(c2)) throw ConfigurationError("p-norm weights must lie in (0,1]");
    return {Kind::pnorm, p, std::move(c1), std::move(c2)};
  }

  Value combine(const Value& a, const Value& b) const {
    if (kind == Kind::max) return max_value(a, b);
    if (a.is_infinite() || b.is_infinite()) return Value::infinity();
    return root(Value(c1) * power(a, p) + Value(c2) * power(b, p), p);
  }

  friend bool operator==(const ProductEval&, const ProductEval&) = default;
};

/// Immutable AST of the functor grammar. Binary products and coproducts
/// nest to express n-ary ones.
class FunctorExpr {
 public:
  static FunctorExpr id(Rational discount = Rational(1)) {
    if (sgn(discount) <= 0 || discount > 1) throw ConfigurationError("discount must lie in (0,1], got " + behametric::to_string(discount));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::id;
    n->discount = std::move(discount);
    return FunctorExpr(std::move(n));
  }
  static FunctorExpr dist(FunctorExpr sub) { return unary(NodeKind::dist, std::move(sub)); }
  static FunctorExpr finpow(FunctorExpr sub) { return unary(NodeKind::finpow, std::move(sub)); }
  static FunctorExpr diag_square(FunctorExpr sub) { return unary(NodeKind::diag_square, std::move(sub)); }
  static FunctorExpr product(FunctorExpr left, FunctorExpr right, ProductEval eval = ProductEval::max()) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::product;
    n->eval = std::move(eval);
    n->children = {std::move(left), std::move(right)};
    return FunctorExpr(merge_bounds(std::move(n)));
  }
  static FunctorExpr coproduct(FunctorExpr left, FunctorExpr right) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::coproduct;
    n->children = {std::move(left), std::move(right)};
    return FunctorExpr(merge_bounds(std::move(n)));
  }
  static FunctorExpr constant(PseudometricTable space) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->const_bound = space.top();
    n->space = std::make_shared<const PseudometricTable>(std::move(space));
    return FunctorExpr(std::move(n));
  }

  NodeKind kind() const noexcept { return node_->kind; }
  const Rational& discount() const { return node_->discount; }
  const ProductEval& product_eval() const { return node_->eval; }
  const PseudometricTable& space() const { return *node_->space; }
  std::size_t arity() const noexcept { return node_->children.size(); }
  const FunctorExpr& child(std::size_t i = 0) const { return node_->children.at(i); }
  /// Common top bound of the constant spaces below this node, if any.
  const std::optional<TopBound>& const_bound() const noexcept { return node_->const_bound; }
  bool is_leaf() const noexcept { return node_->children.empty(); }

  std::string to_string() const {
    switch (kind()) {
      case NodeKind::id:
        return discount() == 1 ? "Id" : "Id[" + behametric::to_string(discount()) + "]";
      case NodeKind::dist:
        return "D(" + child().to_string() + ")";
      case NodeKind::finpow:
        return "Pfin(" + child().to_string() + ")";
      case NodeKind::diag_square:
        return "Sq(" + child().to_string() + ")";
      case NodeKind::constant:
        return "Const(" + space().name() + ")";
      case NodeKind::coproduct:
        return "(" + child(0).to_string() + " + " + child(1).to_string() + ")";
      case NodeKind::product: {
        const auto& e = product_eval();
        std::string op = e.kind == ProductEval::Kind::max
                             ? " x "
                             : " x[p=" + std::to_string(e.p) + "," + behametric::to_string(e.c1) + "," + behametric::to_string(e.c2) + "] ";
        return "(" + child(0).to_string() + op + child(1).to_string() + ")";
      }
    }
    return "?";
  }

  friend bool operator==(const FunctorExpr& a, const FunctorExpr& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
    switch (x.kind) {
      case NodeKind::id:
        if (x.discount != y.discount) return false;
        break;
      case NodeKind::product:
        if (!(x.eval == y.eval)) return false;
        break;
      case NodeKind::constant:
        if (!(*x.space == *y.space)) return false;
        break;
      default:
        break;
    }
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      if (!(x.children[i] == y.children[i])) return false;
    }
    return true;
  }

 private:
  struct Node {
    NodeKind kind = NodeKind::id;
    Rational discount{1};
    ProductEval eval;
    std::shared_ptr<const PseudometricTable> space;
    std::vector<FunctorExpr> children;
    std::optional<TopBound> const_bound;
  };

  explicit FunctorExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static FunctorExpr unary(NodeKind kind, FunctorExpr sub) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = {std::move(sub)};
    return FunctorExpr(merge_bounds(std::move(n)));
  }

  static std::shared_ptr<Node> merge_bounds(std::shared_ptr<Node> n) {
    for (const auto& c : n->children) {
      if (!c.const_bound()) continue;
      if (n->const_bound && !(*n->const_bound == *c.const_bound())) {
        throw ConfigurationError("expression mixes top bounds " + n->const_bound->to_string() + " and " + c.const_bound()->to_string());
      }
      n->const_bound = c.const_bound();
    }
    return n;
  }

  std::shared_ptr<const Node> node_;
};

/// Rejects expressions that cannot live under `top`: constant spaces with
/// another bound, the sum evaluation of Sq under a finite ⊤, and p-norm
/// weights that could leave [0, ⊤].
inline void check_expression(const FunctorExpr& expr, const TopBound& top) {
  if (expr.const_bound() && !(*expr.const_bound() == top)) {
    throw ConfigurationError("constant spaces use top " + expr.const_bound()->to_string() + " but the expression uses " + top.to_string());
  }
  if (expr.kind() == NodeKind::diag_square && !top.is_infinite()) {
    throw ConfigurationError("the square functor's sum evaluation needs top = inf");
  }
  if (expr.kind() == NodeKind::product && expr.product_eval().kind == ProductEval::Kind::pnorm && !top.is_infinite() &&
      expr.product_eval().c1 + expr.product_eval().c2 > 1) {
    throw ConfigurationError("p-norm weights must satisfy c1 + c2 <= 1 under a finite top");
  }
  for (std::size_t i = 0; i < expr.arity(); ++i) check_expression(expr.child(i), top);
}

/// A value of F(X): atoms index the carrier (or a constant space).
class FStructure {
 public:
  enum class Kind : std::uint8_t { atom, distribution, set, pair, tagged };

  FStructure() = default;

  static FStructure atom(std::size_t index) {
    FStructure s;
    s.kind_ = Kind::atom;
    s.atom_ = index;
    return s;
  }

  /// Entries with equal support points are merged (weights added).
  static FStructure distribution(std::vector<std::pair<FStructure, Value>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    FStructure s;
    s.kind_ = Kind::distribution;
    for (auto& [point, weight] : entries) {
      if (!s.children_.empty() && s.children_.back() == point) {
        s.weights_.back() += weight;
      } else {
        s.children_.push_back(std::move(point));
        s.weights_.push_back(std::move(weight));
      }
    }
    return s;
  }

  /// Duplicates collapse.
  static FStructure set(std::vector<FStructure> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    FStructure s;
    s.kind_ = Kind::set;
    s.children_ = std::move(elements);
    return s;
  }

  static FStructure pair(FStructure first, FStructure second) {
    FStructure s;
    s.kind_ = Kind::pair;
    s.children_ = {std::move(first), std::move(second)};
    return s;
  }

  static FStructure tagged(Side side, FStructure value) {
    FStructure s;
    s.kind_ = Kind::tagged;
    s.side_ = side;
    s.children_ = {std::move(value)};
    return s;
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t atom_index() const noexcept { return atom_; }
  Side side() const noexcept { return side_; }
  std::span<const FStructure> children() const noexcept { return children_; }
  std::span<const Value> weights() const noexcept { return weights_; }
  const FStructure& child(std::size_t i = 0) const { return children_.at(i); }
  std::size_t size() const noexcept { return children_.size(); }

  friend std::strong_ordering operator<=>(const FStructure& a, const FStructure& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    switch (a.kind_) {
      case Kind::atom:
        return a.atom_ <=> b.atom_;
      case Kind::tagged:
        if (auto c = a.side_ <=> b.side_; c != 0) return c;
        break;
      default:
        break;
    }
    const std::size_t n = std::min(a.children_.size(), b.children_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a.children_[i] <=> b.children_[i]; c != 0) return c;
      if (a.kind_ == Kind::distribution) {
        if (auto c = a.weights_[i] <=> b.weights_[i]; c != 0) return c;
      }
    }
    return a.children_.size() <=> b.children_.size();
  }
  friend bool operator==(const FStructure& a, const FStructure& b) { return (a <=> b) == 0; }

 private:
  Kind kind_ = Kind::atom;
  Side side_ = Side::left;
  std::size_t atom_ = 0;
  std::vector<FStructure> children_;
  std::vector<Value> weights_;
};

/// Renders atoms through `label`: "(a,b)", "{a,b}", "{a: 1/2, b: 1/2}", "left(a)".
inline std::string to_string(const FStructure& t, const std::function<std::string(std::size_t)>& label) {
  switch (t.kind()) {
    case FStructure::Kind::atom:
      return label(t.atom_index());
    case FStructure::Kind::pair:
      return "(" + to_string(t.child(0), label) + "," + to_string(t.child(1), label) + ")";
    case FStructure::Kind::tagged:
      return std::string(t.side() == Side::left ? "left(" : "right(") + to_string(t.child(), label) + ")";
    case FStructure::Kind::set: {
      std::string out = "{";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += to_string(t.child(i), label);
      }
      return out + "}";
    }
    case FStructure::Kind::distribution: {
      std::string out = "{";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += to_string(t.child(i), label) + ": " + t.weights()[i].to_string();
      }
      return out + "}";
    }
  }
  return "?";
}

inline std::string to_string(const FStructure& t) {
  return to_string(t, [](std::size_t i) { return std::to_string(i); });
}

/// The same structure with every weight converted to float.
inline FStructure to_float(const FStructure& t) {
  switch (t.kind()) {
    case FStructure::Kind::atom:
      return t;
    case FStructure::Kind::tagged:
      return FStructure::tagged(t.side(), to_float(t.child()));
    case FStructure::Kind::pair:
      return FStructure::pair(to_float(t.child(0)), to_float(t.child(1)));
    case FStructure::Kind::set: {
      std::vector<FStructure> elements;
      for (const auto& e : t.children()) elements.push_back(to_float(e));
      return FStructure::set(std::move(elements));
    }
    case FStructure::Kind::distribution: {
      std::vector<std::pair<FStructure, Value>> entries;
      for (std::size_t i = 0; i < t.size(); ++i) entries.emplace_back(to_float(t.child(i)), t.weights()[i].to_float());
      return FStructure::distribution(std::move(entries));
    }
  }
  return t;
}

namespace detail {

inline void validate_at(const FunctorExpr& expr, std::size_t carrier_size, const FStructure& t, const std::string& path,
                        double tol) {
  auto expect = [&](FStructure::Kind kind, const char* what) {
    if (t.kind() != kind) throw ValidationError(std::string("expected ") + what + " for " + expr.to_string(), path);
  };
  switch (expr.kind()) {
    case NodeKind::id:
      expect(FStructure::Kind::atom, "a state");
      if (t.atom_index() >= carrier_size) throw ValidationError("unknown atom " + std::to_string(t.atom_index()), path);
      return;
    case NodeKind::constant:
      expect(FStructure::Kind::atom, "an atom");
      if (t.atom_index() >= expr.space().size()) {
        throw ValidationError("unknown atom " + std::to_string(t.atom_index()) + " of space '" + expr.space().name() + "'", path);
      }
      return;
    case NodeKind::dist: {
      expect(FStructure::Kind::distribution, "a distribution");
      if (t.size() == 0) throw ValidationError("empty distribution", path);
      Value total;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.weights()[i].is_zero()) throw ValidationError("non-positive weight", path + "[" + std::to_string(i) + "]");
        if (t.weights()[i].is_infinite()) throw ValidationError("infinite weight", path + "[" + std::to_string(i) + "]");
        total += t.weights()[i];
        validate_at(expr.child(), carrier_size, t.child(i), path + "[" + std::to_string(i) + "]", tol);
      }
      if (!approx_equal(total, Value(1), total.is_exact() ? 0.0 : std::max(tol, 1e-9))) {
        throw ValidationError("weights sum to " + total.to_string() + ", not 1", path);
      }
      return;
    }
    case NodeKind::finpow:
      expect(FStructure::Kind::set, "a set");
      for (std::size_t i = 0; i < t.size(); ++i) {
        validate_at(expr.child(), carrier_size, t.child(i), path + "[" + std::to_string(i) + "]", tol);
      }
      return;
    case NodeKind::product:
    case NodeKind::diag_square:
      expect(FStructure::Kind::pair, "a pair");
      for (std::size_t i = 0; i < 2; ++i) {
        const FunctorExpr& sub = expr.kind() == NodeKind::product ? expr.child(i) : expr.child();
        validate_at(sub, carrier_size, t.child(i), path + "[" + std::to_string(i) + "]", tol);
      }
      return;
    case NodeKind::coproduct:
      expect(FStructure::Kind::tagged, "a tagged value");
      validate_at(expr.child(static_cast<std::size_t>(t.side())), carrier_size, t.child(),
                  path + (t.side() == Side::left ? ".left" : ".right"), tol);
      return;
  }
}

}  // namespace detail

/// Throws ValidationError (with a path) unless `t` is an element of F(carrier).
inline void validate(const FunctorExpr& expr, std::size_t carrier_size, const FStructure& t, const std::string& path = "$",
                     double tol = 0.0) {
  detail::validate_at(expr, carrier_size, t, path, tol);
}

/// Test function on the space at child slot `slot` of a node (slot 0 for
/// unary nodes and for the carrier/constant space of a leaf).
using SlotFunction = std::function<Value(std::size_t slot, const FStructure& element)>;

/// One layer of ev_F ∘ F h: the node's evaluation applied to `t` with the
/// elements one level down mapped through `h`.
inline Value evaluate_layer(const FunctorExpr& expr, const FStructure& t, const SlotFunction& h) {
  switch (expr.kind()) {
    case NodeKind::id:
      return Value(expr.discount()) * h(0, t);
    case NodeKind::constant:
      return h(0, t);
    case NodeKind::dist: {
      Value total;
      for (std::size_t i = 0; i < t.size(); ++i) total += t.weights()[i] * h(0, t.child(i));
      return total;
    }
    case NodeKind::finpow: {
      Value best;  // max ∅ = 0
      for (const auto& e : t.children()) best = max_value(best, h(0, e));
      return best;
    }
    case NodeKind::product:
      return expr.product_eval().combine(h(0, t.child(0)), h(1, t.child(1)));
    case NodeKind::coproduct:
      return h(static_cast<std::size_t>(t.side()), t.child());
    case NodeKind::diag_square:
      return h(0, t.child(0)) + h(0, t.child(1));
  }
  throw ConfigurationError("unknown node");
}

/// Test function for constant leaves: (space, atom) ↦ value.
using ConstValuation = std::function<Value(const PseudometricTable& space, std::size_t atom)>;

/// F̃g(t) = ev_F(Fg(t)), evaluated recursively through the expression.
inline Value eval_functor(const FunctorExpr& expr, std::span<const Value> g, const FStructure& t,
                          const ConstValuation& const_g = nullptr) {
  switch (expr.kind()) {
    case NodeKind::id:
      if (t.kind() != FStructure::Kind::atom || t.atom_index() >= g.size()) throw ValidationError("shape mismatch at " + expr.to_string());
      return Value(expr.discount()) * g[t.atom_index()];
    case NodeKind::constant:
      if (!const_g) throw ConfigurationError("no valuation given for constant space '" + expr.space().name() + "'");
      return const_g(expr.space(), t.atom_index());
    default:
      break;
  }
  auto expected = [&] {
    switch (expr.kind()) {
      case NodeKind::dist: return FStructure::Kind::distribution;
      case NodeKind::finpow: return FStructure::Kind::set;
      case NodeKind::coproduct: return FStructure::Kind::tagged;
      default: return FStructure::Kind::pair;
    }
  }();
  if (t.kind() != expected) throw ValidationError("shape mismatch at " + expr.to_string());
  return evaluate_layer(expr, t, [&](std::size_t slot, const FStructure& sub) {
    const FunctorExpr& child = expr.kind() == NodeKind::product || expr.kind() == NodeKind::coproduct ? expr.child(slot) : expr.child();
    return eval_functor(child, g, sub, const_g);
  });
}

/// Projection of one layer of a coupling: every element one level down is
/// a pair (y1, y2) and gets replaced by its `side` component.
inline FStructure project_layer(const FunctorExpr& expr, const FStructure& t, Side side) {
  const std::size_t k = static_cast<std::size_t>(side);
  auto pick = [&](const FStructure& p) -> FStructure {
    if (p.kind() != FStructure::Kind::pair) throw ValidationError("coupling element is not a pair");
    return p.child(k);
  };
  switch (expr.kind()) {
    case NodeKind::id:
    case NodeKind::constant:
      return pick(t);
    case NodeKind::dist: {
      std::vector<std::pair<FStructure, Value>> entries;
      for (std::size_t i = 0; i < t.size(); ++i) entries.emplace_back(pick(t.child(i)), t.weights()[i]);
      return FStructure::distribution(std::move(entries));
    }
    case NodeKind::finpow: {
      std::vector<FStructure> elements;
      for (const auto& e : t.children()) elements.push_back(pick(e));
      return FStructure::set(std::move(elements));
    }
    case NodeKind::product:
    case NodeKind::diag_square:
      return FStructure::pair(pick(t.child(0)), pick(t.child(1)));
    case NodeKind::coproduct:
      return FStructure::tagged(t.side(), pick(t.child()));
  }
  throw ConfigurationError("unknown node");
}

/// Γ_F(t1, t2) for one node, as F-structures over pairs.
struct CouplingSet {
  std::vector<FStructure> couplings;
};

/// Visits every T ⊆ {0..n1-1}×{0..n2-1} whose projections are onto. The
/// callback receives T as a cell bitmask (cell i·n2 + j).
template <class Visitor>
void for_each_finpow_coupling(std::size_t n1, std::size_t n2, std::size_t max_cells, Visitor&& visit) {
  const std::size_t cells = n1 * n2;
  if (cells > max_cells || cells > 30) {
    throw BudgetExceeded("finite-powerset coupling enumeration over " + std::to_string(cells) + " cells exceeds the cap of " +
                         std::to_string(max_cells));
  }
  if (n1 == 0 || n2 == 0) {
    if (n1 == 0 && n2 == 0) visit(std::uint32_t{0});
    return;
  }
  std::vector<std::uint32_t> row_mask(n1, 0), col_mask(n2, 0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      row_mask[i] |= 1u << (i * n2 + j);
      col_mask[j] |= 1u << (i * n2 + j);
    }
  }
  const std::uint32_t end = 1u << cells;
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    bool onto = true;
    for (std::size_t i = 0; i < n1 && onto; ++i) onto = (mask & row_mask[i]) != 0;
    for (std::size_t j = 0; j < n2 && onto; ++j) onto = (mask & col_mask[j]) != 0;
    if (onto) visit(mask);
  }
}

/// All couplings of two finite sets: subsets T of X1×X2 projecting onto
/// both. Empty iff exactly one side is empty; {∅} when both are.
inline CouplingSet enumerate_couplings_finpow(const FStructure& x1, const FStructure& x2, std::size_t max_cells = 16) {
  if (x1.kind() != FStructure::Kind::set || x2.kind() != FStructure::Kind::set) throw ValidationError("expected two sets");
  CouplingSet out;
  const std::size_t n2 = x2.size();
  for_each_finpow_coupling(x1.size(), n2, max_cells, [&](std::uint32_t mask) {
    std::vector<FStructure> pairs;
    for (std::size_t c = 0; c < x1.size() * n2; ++c) {
      if (mask & (1u << c)) pairs.push_back(FStructure::pair(x1.child(c / n2), x2.child(c % n2)));
    }
    out.couplings.push_back(FStructure::set(std::move(pairs)));
  });
  return out;
}

/// Γ(t1, t2) for X ↦ X×X: the single element ((a1,b1),(a2,b2)).
inline CouplingSet enumerate_couplings_diagsquare(const FStructure& t1, const FStructure& t2) {
  if (t1.kind() != FStructure::Kind::pair || t2.kind() != FStructure::Kind::pair) throw ValidationError("expected two pairs");
  CouplingSet out;
  out.couplings.push_back(
      FStructure::pair(FStructure::pair(t1.child(0), t2.child(0)), FStructure::pair(t1.child(1), t2.child(1))));
  return out;
}

}  // namespace behametric
