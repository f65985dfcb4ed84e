#pragma once

// Dense two-phase simplex with Bland's rule, templated on the scalar
// (Rational for exact solves, double for float mode), and the
// transportation problem solved through it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "behametric/errors.hpp"
#include "behametric/rational.hpp"

namespace behametric::lp {

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static int sign(const Rational& x) { return sgn(x); }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
};

template <>
struct ScalarTraits<double> {
  static constexpr double eps = 1e-11;
  static int sign(double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); }
  static bool equal(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }
};

enum class Relation { less_equal, equal, greater_equal };
enum class Sense { maximize, minimize };

template <class S>
struct Variable {
  S lo{0};
  std::optional<S> hi;  // nullopt: unbounded above
};

template <class S>
struct Constraint {
  std::vector<S> coefficients;
  Relation relation = Relation::less_equal;
  S rhs{0};
};

template <class S>
struct LinearProgram {
  std::vector<Variable<S>> variables;
  std::vector<Constraint<S>> constraints;
  std::vector<S> objective;
  Sense sense = Sense::maximize;

  std::size_t add_variable(S lo, std::optional<S> hi) {
    variables.push_back({std::move(lo), std::move(hi)});
    objective.push_back(S(0));
    for (auto& c : constraints) c.coefficients.push_back(S(0));
    return variables.size() - 1;
  }

  void add_constraint(std::vector<S> coefficients, Relation relation, S rhs) {
    constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
  }

  void validate() const {
    if (objective.size() != variables.size()) throw ValidationError("objective length does not match variable count");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (constraints[i].coefficients.size() != variables.size()) {
        throw ValidationError("constraint " + std::to_string(i) + " length does not match variable count");
      }
    }
    for (std::size_t j = 0; j < variables.size(); ++j) {
      if (variables[j].hi && ScalarTraits<S>::sign(*variables[j].hi - variables[j].lo) < 0) {
        throw ValidationError("variable " + std::to_string(j) + " has lo > hi");
      }
    }
  }
};

template <class S>
struct Solution {
  S value;
  std::vector<S> witness;
};

namespace detail {

template <class S>
class Tableau {
  using T = ScalarTraits<S>;

 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), S(0)), basis_(rows) {}

  S& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  const S& at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  S& rhs(std::size_t r) { return at(r, cols_); }
  const S& rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    S inv = S(1) / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr || T::sign(at(r, pc)) == 0) {
        if (r != pr) at(r, pc) = S(0);
        continue;
      }
      S factor = at(r, pc);
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (T::sign(at(pr, c)) != 0) at(r, c) -= factor * at(pr, c);
      }
      at(r, pc) = S(0);
    }
    basis_[pr] = pc;
  }

  void drop_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  /// Maximizes cost·x over the current basis. Returns false when unbounded.
  bool optimize(const std::vector<S>& cost, const std::vector<bool>& allowed) {
    std::vector<S> reduced(cols_);
    for (;;) {
      // Bland: the lowest-index improving column enters.
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < cols_ && !entering; ++c) {
        if (!allowed[c]) continue;
        S rc = cost[c];
        for (std::size_t r = 0; r < rows_; ++r) {
          if (T::sign(at(r, c)) != 0) rc -= cost[basis_[r]] * at(r, c);
        }
        if (T::sign(rc) > 0) entering = c;
      }
      if (!entering) return true;
      std::size_t c = *entering;
      std::optional<std::size_t> leaving;
      S best_ratio(0);
      for (std::size_t r = 0; r < rows_; ++r) {
        if (T::sign(at(r, c)) <= 0) continue;
        S ratio = rhs(r) / at(r, c);
        if (!leaving) {
          leaving = r;
          best_ratio = ratio;
          continue;
        }
        int cmp = T::sign(ratio - best_ratio);
        // Bland: ties go to the lowest basic index.
        if (cmp < 0 || (cmp == 0 && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, c);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<S> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Solves a bounded LP exactly (Rational) or in floating point (double).
/// Throws InfeasibleError / UnboundedError.
template <class S>
Solution<S> solve(const LinearProgram<S>& lp) {
  using T = ScalarTraits<S>;
  lp.validate();
  const std::size_t n = lp.variables.size();

  // Shift x = lo + y so that y ≥ 0; finite upper bounds become rows.
  struct Row {
    std::vector<S> a;
    Relation rel;
    S b;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraints.size() + n);
  for (const auto& c : lp.constraints) {
    S b = c.rhs;
    for (std::size_t j = 0; j < n; ++j) b -= c.coefficients[j] * lp.variables[j].lo;
    rows.push_back({c.coefficients, c.relation, std::move(b)});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!lp.variables[j].hi) continue;
    std::vector<S> a(n, S(0));
    a[j] = S(1);
    rows.push_back({std::move(a), Relation::less_equal, *lp.variables[j].hi - lp.variables[j].lo});
  }
  for (auto& row : rows) {
    if (T::sign(row.b) < 0) {
      for (auto& x : row.a) x = -x;
      row.b = -row.b;
      if (row.rel == Relation::less_equal) {
        row.rel = Relation::greater_equal;
      } else if (row.rel == Relation::greater_equal) {
        row.rel = Relation::less_equal;
      }
    }
  }

  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (const auto& row : rows) {
    if (row.rel != Relation::equal) ++slack_count;
    if (row.rel != Relation::less_equal) ++artificial_count;
  }
  const std::size_t artificial_begin = n + slack_count;
  const std::size_t cols = artificial_begin + artificial_count;

  detail::Tableau<S> tab(rows.size(), cols);
  std::size_t next_slack = n;
  std::size_t next_artificial = artificial_begin;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = rows[r].a[j];
    tab.rhs(r) = rows[r].b;
    switch (rows[r].rel) {
      case Relation::less_equal:
        tab.at(r, next_slack) = S(1);
        tab.basis(r) = next_slack++;
        break;
      case Relation::greater_equal:
        tab.at(r, next_slack++) = S(-1);
        tab.at(r, next_artificial) = S(1);
        tab.basis(r) = next_artificial++;
        break;
      case Relation::equal:
        tab.at(r, next_artificial) = S(1);
        tab.basis(r) = next_artificial++;
        break;
    }
  }

  std::vector<bool> allowed(cols, true);
  if (artificial_count > 0) {
    std::vector<S> phase1(cols, S(0));
    for (std::size_t c = artificial_begin; c < cols; ++c) phase1[c] = S(-1);
    tab.optimize(phase1, allowed);
    S infeasibility(0);
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (tab.basis(r) >= artificial_begin) infeasibility += tab.rhs(r);
    }
    if (T::sign(infeasibility) > 0) throw InfeasibleError("linear program is infeasible");
    // Pivot remaining (zero-level) artificials out; rows with no candidate are redundant.
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basis(r) < artificial_begin) {
        ++r;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < artificial_begin && !col; ++c) {
        if (T::sign(tab.at(r, c)) != 0) col = c;
      }
      if (col) {
        tab.pivot(r, *col);
        ++r;
      } else {
        tab.drop_row(r);
      }
    }
    for (std::size_t c = artificial_begin; c < cols; ++c) allowed[c] = false;
  }

  std::vector<S> cost(cols, S(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = lp.sense == Sense::maximize ? lp.objective[j] : S(-lp.objective[j]);
  }
  if (!tab.optimize(cost, allowed)) throw UnboundedError("linear program is unbounded");

  Solution<S> sol;
  sol.witness.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.witness[j] = lp.variables[j].lo;
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (tab.basis(r) < n) sol.witness[tab.basis(r)] += tab.rhs(r);
  }
  sol.value = S(0);
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.witness[j];
  return sol;
}

template <class S>
Solution<S> solve_max(LinearProgram<S> lp) {
  lp.sense = Sense::maximize;
  return solve(lp);
}

template <class S>
Solution<S> solve_min(LinearProgram<S> lp) {
  lp.sense = Sense::minimize;
  return solve(lp);
}

/// Feasibility of a witness against every constraint and bound.
template <class S>
bool is_feasible(const LinearProgram<S>& lp, const std::vector<S>& x) {
  using T = ScalarTraits<S>;
  if (x.size() != lp.variables.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (T::sign(x[j] - lp.variables[j].lo) < 0) return false;
    if (lp.variables[j].hi && T::sign(*lp.variables[j].hi - x[j]) < 0) return false;
  }
  for (const auto& c : lp.constraints) {
    S lhs(0);
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coefficients[j] * x[j];
    int s = T::sign(lhs - c.rhs);
    if (c.relation == Relation::less_equal && s > 0) return false;
    if (c.relation == Relation::greater_equal && s < 0) return false;
    if (c.relation == Relation::equal && s != 0) return false;
  }
  return true;
}

/// Supply/demand distributions with a cost matrix; a cell without a cost
/// (nullopt) is forbidden, i.e. carries infinite cost.
template <class S>
struct TransportationInstance {
  std::vector<S> supply;
  std::vector<S> demand;
  std::vector<std::vector<std::optional<S>>> cost;

  void validate() const {
    using T = ScalarTraits<S>;
    if (cost.size() != supply.size()) throw ValidationError("cost matrix has wrong number of rows");
    for (const auto& row : cost) {
      if (row.size() != demand.size()) throw ValidationError("cost matrix has wrong number of columns");
      for (const auto& c : row) {
        if (c && T::sign(*c) < 0) throw ValidationError("negative transportation cost");
      }
    }
    S total_supply(0), total_demand(0);
    for (const auto& s : supply) {
      if (T::sign(s) < 0) throw ValidationError("negative supply");
      total_supply += s;
    }
    for (const auto& d : demand) {
      if (T::sign(d) < 0) throw ValidationError("negative demand");
      total_demand += d;
    }
    if (!T::equal(total_supply, total_demand)) throw ValidationError("supply and demand totals differ");
  }
};

template <class S>
struct TransportationResult {
  std::optional<S> value;  // nullopt: every plan uses a forbidden cell
  std::vector<std::vector<S>> plan;
};

template <class S>
TransportationResult<S> solve_transportation(const TransportationInstance<S>& inst) {
  inst.validate();
  const std::size_t m = inst.supply.size();
  const std::size_t k = inst.demand.size();
  TransportationResult<S> result;
  result.plan.assign(m, std::vector<S>(k, S(0)));

  LinearProgram<S> lp;
  lp.sense = Sense::minimize;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!inst.cost[i][j]) continue;
      cells.emplace_back(i, j);
      lp.variables.push_back({S(0), std::nullopt});
      lp.objective.push_back(*inst.cost[i][j]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<S> row(cells.size(), S(0));
    for (std::size_t v = 0; v < cells.size(); ++v) {
      if (cells[v].first == i) row[v] = S(1);
    }
    lp.add_constraint(std::move(row), Relation::equal, inst.supply[i]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<S> row(cells.size(), S(0));
    for (std::size_t v = 0; v < cells.size(); ++v) {
      if (cells[v].second == j) row[v] = S(1);
    }
    lp.add_constraint(std::move(row), Relation::equal, inst.demand[j]);
  }
  try {
    Solution<S> sol = solve(lp);
    for (std::size_t v = 0; v < cells.size(); ++v) result.plan[cells[v].first][cells[v].second] = sol.witness[v];
    result.value = sol.value;
  } catch (const InfeasibleError&) {
    result.value.reset();
  }
  return result;
}

}  // namespace behametric::lp
