#pragma once

// Finite coalgebras α: X → FX and the two concrete system classes:
// probabilistic systems with termination and metric transition systems.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "behametric/errors.hpp"
#include "behametric/functor.hpp"
#include "behametric/numerics.hpp"
#include "behametric/pseudometric.hpp"

namespace behametric {

/// A finite coalgebra. Immutable after construction.
class System {
 public:
  System(std::vector<std::string> states, FunctorExpr expr, std::vector<FStructure> alpha, TopBound top,
         NumericMode mode = NumericMode::floating())
      : states_(std::move(states)), expr_(std::move(expr)), alpha_(std::move(alpha)), top_(std::move(top)), mode_(mode) {
    if (alpha_.size() != states_.size()) throw ValidationError("alpha must be total: " + std::to_string(alpha_.size()) + " images for " + std::to_string(states_.size()) + " states", "$.alpha");
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (!index_.emplace(states_[i], i).second) throw ValidationError("duplicate state '" + states_[i] + "'", "$.states");
    }
    try {
      check_expression(expr_, top_);
    } catch (const ConfigurationError& e) {
      throw ValidationError(e.what(), "$.functor");
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
      validate(expr_, states_.size(), alpha_[i], "$.alpha." + states_[i], mode_.tolerance());
    }
  }

  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FunctorExpr& expr() const noexcept { return expr_; }
  const std::vector<FStructure>& alpha() const noexcept { return alpha_; }
  const FStructure& alpha(std::size_t state) const { return alpha_.at(state); }
  const TopBound& top() const noexcept { return top_; }
  const NumericMode& mode() const noexcept { return mode_; }

  std::optional<std::size_t> index_of(const std::string& state) const {
    auto it = index_.find(state);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Same system under another numeric mode. Exact weights become floats
  /// when switching to float mode; float weights are kept as they are.
  System with_mode(const NumericMode& mode) const {
    System s = *this;
    s.mode_ = mode;
    if (!mode.is_exact()) {
      for (auto& a : s.alpha_) a = behametric::to_float(a);
    }
    return s;
  }

  friend bool operator==(const System& a, const System& b) {
    return a.states_ == b.states_ && a.expr_ == b.expr_ && a.alpha_ == b.alpha_ && a.top_ == b.top_;
  }

 private:
  std::vector<std::string> states_;
  FunctorExpr expr_;
  std::vector<FStructure> alpha_;
  TopBound top_;
  NumericMode mode_;
  std::map<std::string, std::size_t> index_;
};

/// Probabilistic transition system with termination and a discount c ∈ (0,1).
struct ProbTS {
  std::vector<std::string> states;
  std::vector<std::map<std::size_t, Rational>> transitions;
  std::vector<Rational> terminate;
  Rational discount{1, 2};

  void validate() const {
    if (sgn(discount) <= 0 || discount >= 1) throw ValidationError("discount must lie in (0,1), got " + to_string(discount), "$.discount");
    if (transitions.size() != states.size() || terminate.size() != states.size()) {
      throw ValidationError("transitions and termination must be given for every state", "$");
    }
    for (std::size_t s = 0; s < states.size(); ++s) {
      Rational total = terminate[s];
      if (sgn(terminate[s]) < 0) throw ValidationError("negative termination probability", "$.terminate." + states[s]);
      for (const auto& [target, w] : transitions[s]) {
        if (target >= states.size()) throw ValidationError("unknown target state", "$.transitions." + states[s]);
        if (sgn(w) < 0) throw ValidationError("negative probability", "$.transitions." + states[s] + "." + states[target]);
        total += w;
      }
      if (total != 1) throw ValidationError("probabilities of state '" + states[s] + "' sum to " + to_string(total) + ", not 1", "$.transitions." + states[s]);
    }
  }
};

/// Dist(Id[c] + Const(unit)) with ⊤ = 1.
inline FunctorExpr prob_ts_functor(const Rational& discount) {
  return FunctorExpr::dist(FunctorExpr::coproduct(FunctorExpr::id(discount), FunctorExpr::constant(PseudometricTable::unit(TopBound::finite(1)))));
}

/// Termination becomes the mass on right(✓).
inline System from_prob_ts(const ProbTS& p, const NumericMode& mode = NumericMode::exact()) {
  p.validate();
  std::vector<FStructure> alpha;
  for (std::size_t s = 0; s < p.states.size(); ++s) {
    std::vector<std::pair<FStructure, Value>> entries;
    for (const auto& [target, w] : p.transitions[s]) {
      if (sgn(w) > 0) entries.emplace_back(FStructure::tagged(Side::left, FStructure::atom(target)), Value::in_mode(w, mode));
    }
    if (sgn(p.terminate[s]) > 0) {
      entries.emplace_back(FStructure::tagged(Side::right, FStructure::atom(0)), Value::in_mode(p.terminate[s], mode));
    }
    alpha.push_back(FStructure::distribution(std::move(entries)));
  }
  return System(p.states, prob_ts_functor(p.discount), std::move(alpha), TopBound::finite(1), mode);
}

/// Metric transition system: named propositions with their value spaces, a
/// valuation per state and a finite successor set per state.
struct MetricTS {
  struct Proposition {
    std::string name;
    PseudometricTable space;
  };
  std::vector<std::string> states;
  std::vector<Proposition> propositions;
  std::vector<std::vector<std::size_t>> valuation;  // state → atom per proposition
  std::vector<std::vector<std::size_t>> tau;

  void validate() const {
    if (valuation.size() != states.size() || tau.size() != states.size()) {
      throw ValidationError("valuation and tau must be given for every state", "$");
    }
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (valuation[s].size() != propositions.size()) throw ValidationError("valuation must cover every proposition", "$.valuation." + states[s]);
      for (std::size_t r = 0; r < propositions.size(); ++r) {
        if (valuation[s][r] >= propositions[r].space.size()) {
          throw ValidationError("value outside the carrier of '" + propositions[r].name + "'", "$.valuation." + states[s] + "." + propositions[r].name);
        }
      }
      for (std::size_t t : tau[s]) {
        if (t >= states.size()) throw ValidationError("unknown successor", "$.tau." + states[s]);
      }
    }
    for (const auto& p : propositions) {
      if (!p.space.top().is_infinite()) throw ValidationError("proposition spaces must use top = inf", "$.propositions." + p.name);
    }
  }
};

/// Valuation functor: nested binary products of the proposition spaces under max.
inline FunctorExpr valuation_functor(const std::vector<MetricTS::Proposition>& props) {
  if (props.empty()) return FunctorExpr::constant(PseudometricTable::unit(TopBound::infinite()));
  FunctorExpr g = FunctorExpr::constant(props.back().space);
  for (std::size_t r = props.size() - 1; r-- > 0;) g = FunctorExpr::product(FunctorExpr::constant(props[r].space), std::move(g));
  return g;
}

inline System from_metric_ts(const MetricTS& m, const NumericMode& mode = NumericMode::exact()) {
  m.validate();
  FunctorExpr expr = FunctorExpr::product(valuation_functor(m.propositions), FunctorExpr::finpow(FunctorExpr::id()));
  std::vector<FStructure> alpha;
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    FStructure g;
    if (m.propositions.empty()) {
      g = FStructure::atom(0);
    } else {
      g = FStructure::atom(m.valuation[s].back());
      for (std::size_t r = m.propositions.size() - 1; r-- > 0;) g = FStructure::pair(FStructure::atom(m.valuation[s][r]), std::move(g));
    }
    std::vector<FStructure> succ;
    for (std::size_t t : m.tau[s]) succ.push_back(FStructure::atom(t));
    alpha.push_back(FStructure::pair(std::move(g), FStructure::set(std::move(succ))));
  }
  return System(m.states, std::move(expr), std::move(alpha), TopBound::infinite(), mode);
}

}  // namespace behametric
