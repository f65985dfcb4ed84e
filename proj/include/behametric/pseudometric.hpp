#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "behametric/errors.hpp"
#include "behametric/numerics.hpp"

namespace behametric {

/// A failed pseudometric axiom with the atoms involved.
struct AxiomViolation {
  std::string axiom;  // "reflexivity", "symmetry", "triangle", "bound"
  std::vector<std::size_t> atoms;
  std::string describe(const std::vector<std::string>& names = {}) const {
    std::string out = axiom + " at (";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) out += ",";
      out += atoms[i] < names.size() ? names[atoms[i]] : std::to_string(atoms[i]);
    }
    return out + ")";
  }
};

/// Checks reflexivity, symmetry, the triangle inequality and the ⊤ bound
/// of a square table given as a row-major accessor. `tol` = 0 means exact.
template <class At>
std::optional<AxiomViolation> find_axiom_violation(std::size_t n, At&& at, const TopBound& top, double tol) {
  const Value top_value = Value::top(top);
  for (std::size_t i = 0; i < n; ++i) {
    if (!approx_equal(at(i, i), Value(), tol)) return AxiomViolation{"reflexivity", {i}};
    for (std::size_t j = 0; j < n; ++j) {
      if (!approx_equal(at(i, j), at(j, i), tol)) return AxiomViolation{"symmetry", {i, j}};
      if (!approx_leq(at(i, j), top_value, tol)) return AxiomViolation{"bound", {i, j}};
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!approx_leq(at(i, k), at(i, j) + at(j, k), tol)) return AxiomViolation{"triangle", {i, j, k}};
      }
    }
  }
  return std::nullopt;
}

/// A pseudometric on a finite, ordered carrier of named atoms.
class PseudometricTable {
 public:
  PseudometricTable() : top_(TopBound::infinite()) {}

  /// Validates the axioms (exactly, or within `tol` for float entries).
  PseudometricTable(std::string name, std::vector<std::string> atoms, std::vector<Value> entries, TopBound top,
                    double tol = 0.0)
      : name_(std::move(name)), atoms_(std::move(atoms)), entries_(std::move(entries)), top_(std::move(top)) {
    const std::size_t n = atoms_.size();
    if (entries_.size() != n * n) throw ValidationError("distance table of '" + name_ + "' must be " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!index_.emplace(atoms_[i], i).second) throw ValidationError("duplicate atom '" + atoms_[i] + "' in '" + name_ + "'");
    }
    if (auto v = find_axiom_violation(n, [this](std::size_t i, std::size_t j) -> const Value& { return at(i, j); }, top_, tol)) {
      throw ValidationError("'" + name_ + "' is not a pseudometric: " + v->describe(atoms_));
    }
  }

  /// Zero pseudometric on `n` anonymous atoms.
  static PseudometricTable zero(std::size_t n, TopBound top, std::vector<std::string> atoms = {}) {
    if (atoms.empty()) {
      for (std::size_t i = 0; i < n; ++i) atoms.push_back(std::to_string(i));
    }
    return PseudometricTable("", std::move(atoms), std::vector<Value>(n * n), std::move(top));
  }

  /// Unchecked construction for tables produced by the library itself.
  static PseudometricTable trusted(std::string name, std::vector<std::string> atoms, std::vector<Value> entries, TopBound top) {
    PseudometricTable t;
    t.name_ = std::move(name);
    t.atoms_ = std::move(atoms);
    t.entries_ = std::move(entries);
    t.top_ = std::move(top);
    for (std::size_t i = 0; i < t.atoms_.size(); ++i) t.index_.emplace(t.atoms_[i], i);
    return t;
  }

  /// Singleton space {✓}.
  static PseudometricTable unit(TopBound top) { return PseudometricTable("unit", {"✓"}, {Value()}, std::move(top)); }

  /// Finite subset of [0, ⊤] with the Euclidean distance; atoms are named by the points.
  static PseudometricTable euclidean(std::string name, const std::vector<Value>& points, TopBound top) {
    std::vector<std::string> atoms;
    std::vector<Value> entries;
    for (const auto& p : points) atoms.push_back(p.to_string());
    for (const auto& p : points) {
      for (const auto& q : points) entries.push_back(dist_e(p, q));
    }
    return PseudometricTable(std::move(name), std::move(atoms), std::move(entries), std::move(top));
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  const TopBound& top() const noexcept { return top_; }

  const Value& at(std::size_t i, std::size_t j) const { return entries_[i * atoms_.size() + j]; }
  const std::vector<Value>& entries() const noexcept { return entries_; }

  std::optional<std::size_t> index_of(const std::string& atom) const {
    auto it = index_.find(atom);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<AxiomViolation> violation(double tol = 0.0) const {
    return find_axiom_violation(size(), [this](std::size_t i, std::size_t j) -> const Value& { return at(i, j); }, top_, tol);
  }

  friend bool operator==(const PseudometricTable& a, const PseudometricTable& b) {
    return a.name_ == b.name_ && a.atoms_ == b.atoms_ && a.entries_ == b.entries_ && a.top_ == b.top_;
  }

 private:
  std::string name_;
  std::vector<std::string> atoms_;
  std::vector<Value> entries_;
  TopBound top_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace behametric
