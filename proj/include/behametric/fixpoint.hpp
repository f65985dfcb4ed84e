#pragma once

// Behavioral distances by iteration from the zero pseudometric:
// e0 = 0, e_{i+1} = lift(e_i) ∘ (α × α).

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "behametric/coalgebra.hpp"
#include "behametric/errors.hpp"
#include "behametric/lifting.hpp"
#include "behametric/numerics.hpp"
#include "behametric/pseudometric.hpp"

namespace behametric {

struct IterationOptions {
  std::size_t max_iter = 10000;
  LiftMethod method = LiftMethod::wasserstein;
  bool trace = false;
  bool check_axioms = false;  // verify every iterate is a pseudometric
  unsigned threads = 0;       // 0: hardware concurrency
};

struct DistanceMatrix {
  std::vector<std::string> states;
  std::vector<Value> entries;  // row-major, n×n
  TopBound top = TopBound::infinite();
  NumericMode mode = NumericMode::exact();
  LiftMethod method = LiftMethod::wasserstein;
  std::size_t iterations = 0;
  bool converged = false;
  Value residual;
  std::vector<Value> deltas;                 // sup-norm change of each step
  std::vector<std::vector<Value>> trace;     // e_1, e_2, ... when requested

  std::size_t size() const noexcept { return states.size(); }
  const Value& at(std::size_t i, std::size_t j) const { return entries[i * states.size() + j]; }
  PseudometricTable table() const { return PseudometricTable::trusted("bd", states, entries, top); }
};

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(k) for k in [0, jobs) on `threads` workers; rethrows the first failure.
template <class Job>
void parallel_for(std::size_t jobs, unsigned threads, Job&& job) {
  if (threads <= 1 || jobs <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; !failed && (k = next.fetch_add(1)) < jobs;) {
      try {
        job(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// One lifting step: lift(e) ∘ (α × α), computed per unordered pair.
inline std::vector<Value> lift_step(const System& sys, const std::vector<Value>& e, LiftMethod method, unsigned threads = 1) {
  const std::size_t n = sys.size();
  PseudometricTable ground = PseudometricTable::trusted("e", sys.states(), e, sys.top());
  Lifter lifter(ground, method);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<Value> next(n * n);
  detail::parallel_for(pairs.size(), detail::worker_count(threads, pairs.size()), [&](std::size_t k) {
    auto [i, j] = pairs[k];
    Value v = lifter.distance(sys.expr(), sys.alpha(i), sys.alpha(j));
    next[i * n + j] = v;
    next[j * n + i] = std::move(v);
  });
  return next;
}

/// Sup-norm distance of two tables; ∞ entries compare by d_e.
inline Value sup_difference(const std::vector<Value>& a, const std::vector<Value>& b) {
  Value best;
  for (std::size_t k = 0; k < a.size(); ++k) best = max_value(best, dist_e(a[k], b[k]));
  return best;
}

inline DistanceMatrix behavioral_distances(const System& sys, const IterationOptions& opts = {}) {
  if (opts.max_iter == 0) throw ConfigurationError("max_iter must be positive");
  const std::size_t n = sys.size();
  const double tol = sys.mode().tolerance();
  DistanceMatrix m;
  m.states = sys.states();
  m.top = sys.top();
  m.mode = sys.mode();
  m.method = opts.method;
  m.entries.assign(n * n, Value());
  if (n == 0) {
    m.converged = true;
    return m;
  }
  while (m.iterations < opts.max_iter) {
    std::vector<Value> next = lift_step(sys, m.entries, opts.method, opts.threads);
    ++m.iterations;
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (!approx_leq(m.entries[k], next[k], tol)) {
        throw std::logic_error("iteration is not monotone at entry (" + m.states[k / n] + "," + m.states[k % n] + "): " +
                               m.entries[k].to_string() + " then " + next[k].to_string());
      }
    }
    if (opts.check_axioms) {
      auto at = [&](std::size_t i, std::size_t j) -> const Value& { return next[i * n + j]; };
      if (auto v = find_axiom_violation(n, at, sys.top(), tol)) {
        throw std::logic_error("iterate " + std::to_string(m.iterations) + " is not a pseudometric: " + v->describe(m.states));
      }
    }
    m.residual = sup_difference(m.entries, next);
    m.deltas.push_back(m.residual);
    if (opts.trace) m.trace.push_back(next);
    m.entries = std::move(next);
    const bool done = sys.mode().is_exact() ? m.residual.is_zero() : m.residual < Value::approx(tol);
    if (done) {
      m.converged = true;
      break;
    }
  }
  return m;
}

using Partition = std::vector<std::vector<std::size_t>>;

/// Classes of d(x,y) = 0 (exact) or d(x,y) ≤ tol (float). Refuses
/// unconverged matrices.
inline Partition kernel_partition(const DistanceMatrix& m, double tol = -1.0) {
  if (!m.converged) throw ConfigurationError("kernel of an unconverged distance matrix");
  if (tol < 0) tol = m.mode.tolerance();
  Partition classes;
  for (std::size_t s = 0; s < m.size(); ++s) {
    bool placed = false;
    for (auto& c : classes) {
      if (approx_leq(m.at(c.front(), s), Value(), tol)) {
        c.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({s});
  }
  return classes;
}

/// Coarsest probabilistic bisimulation: equal termination probability and
/// equal mass into every block, refined until stable.
inline Partition bisimilarity_partition(const ProbTS& p) {
  p.validate();
  const std::size_t n = p.states.size();
  std::vector<std::size_t> block(n, 0);
  std::size_t blocks = n ? 1 : 0;
  while (true) {
    using Signature = std::pair<std::size_t, std::pair<Rational, std::map<std::size_t, Rational>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::map<std::size_t, Rational> mass;
      for (const auto& [t, w] : p.transitions[s]) {
        if (sgn(w) > 0) mass[block[t]] += w;
      }
      Signature sig{block[s], {p.terminate[s], std::move(mass)}};
      next[s] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    block = std::move(next);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }
  Partition classes;
  std::map<std::size_t, std::size_t> where;
  for (std::size_t s = 0; s < n; ++s) {
    auto [it, fresh] = where.emplace(block[s], classes.size());
    if (fresh) classes.emplace_back();
    classes[it->second].push_back(s);
  }
  return classes;
}

inline std::string to_string(const Partition& classes, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& c : classes) {
    out += "{";
    for (std::size_t k = 0; k < c.size(); ++k) out += (k ? "," : "") + names[c[k]];
    out += "}";
  }
  return out;
}

}  // namespace behametric
