// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "behametric/behametric.hpp"

using namespace behametric;
using Q = Rational;

namespace {

std::string data(const std::string& file) { return std::string(BEHAMETRIC_DATA_DIR) + "/" + file; }

struct Outcome {
  bool passed = true;
  std::string detail;
};

Value at(const DistanceMatrix& m, const std::string& a, const std::string& b) {
  auto i = static_cast<std::size_t>(std::find(m.states.begin(), m.states.end(), a) - m.states.begin());
  auto j = static_cast<std::size_t>(std::find(m.states.begin(), m.states.end(), b) - m.states.begin());
  return m.at(i, j);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

Outcome expect_entries(const DistanceMatrix& m, const std::vector<std::tuple<std::string, std::string, Q>>& expected) {
  Outcome o;
  for (const auto& [a, b, v] : expected) {
    Value got = at(m, a, b);
    if (got != Value(v)) {
      o.passed = false;
      o.detail += " d(" + a + "," + b + ")=" + got.to_string() + " expected " + to_string(v) + ";";
    }
  }
  return o;
}

Outcome probabilistic_example() {
  auto t0 = std::chrono::steady_clock::now();
  io::LoadOptions opts{NumericMode::exact(), {{"c", Q(9, 10)}, {"eps", Q(1, 20)}}};
  DistanceMatrix m = behavioral_distances(io::load_system_file(data("probabilistic_example.json"), opts));
  const double s = seconds_since(t0);
  Outcome o = expect_entries(m, {{"x", "y", Q(9, 200)}, {"u", "z", Q(1)}, {"x", "u", Q(99, 200)}, {"y", "u", Q(9, 20)}, {"x", "z", Q(1)},
                                 {"y", "z", Q(1)}});
  if (!m.converged || m.iterations != 3) o.passed = false;
  if (s >= 1.0) o.passed = false;
  o.detail = "d(x,y)=" + at(m, "x", "y").to_string() + ", d(u,z)=" + at(m, "u", "z").to_string() + ", " + std::to_string(m.iterations) +
             " iterations, " + fmt_seconds(s) + o.detail;
  return o;
}

Outcome metric_example() {
  auto t0 = std::chrono::steady_clock::now();
  DistanceMatrix m = behavioral_distances(io::load_system_file(data("metric_example.json"), {NumericMode::exact(), {}}));
  const double s = seconds_since(t0);
  Outcome o = expect_entries(m, {{"x1", "y1", Q(3, 10)}, {"x2", "y2", Q(1, 10)}, {"x2", "y3", Q(3, 5)}, {"x3", "y2", Q(1, 5)},
                                 {"x3", "y3", Q(3, 10)}});
  if (!m.converged || m.iterations > 4) o.passed = false;
  if (s >= 1.0) o.passed = false;
  o.detail = "d(x1,y1)=" + at(m, "x1", "y1").to_string() + ", " + std::to_string(m.iterations) + " iterations, " + fmt_seconds(s) + o.detail;
  return o;
}

Outcome counterexample() {
  io::LiftProblem p = io::parse_lift(io::read_json_file(data("counterexample.json")), {NumericMode::exact(), {}});
  Value k = lift_dist(p.expr, p.space, LiftMethod::kantorovich, p.t1, p.t2);
  Value w = lift_dist(p.expr, p.space, LiftMethod::wasserstein, p.t1, p.t2);
  return {k == Value(0) && w == Value(2), "K=" + k.to_string() + ", W=" + w.to_string()};
}

Outcome from_suites(std::initializer_list<SuiteResult> results) {
  Outcome o;
  for (const auto& r : results) {
    o.passed = o.passed && r.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += r.name + " " + std::to_string(r.instances) + " instances";
    if (!r.failures.empty()) o.detail += " (first witness: " + r.failures.front() + ")";
  }
  return o;
}

}  // namespace

int main() {
  SuiteOptions exact;
  exact.seed = 2024;
  exact.n = 500;
  exact.mode = NumericMode::exact();
  exact.threads = 1;
  SuiteOptions floating = exact;
  floating.mode = NumericMode::floating(1e-9);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"probabilistic example reproduced exactly in under 1 s", probabilistic_example},
      {"metric example reproduced exactly within 4 iterations in under 1 s", metric_example},
      {"square functor: Kantorovich 0, Wasserstein 2", counterexample},
      {"Kantorovich <= Wasserstein on every node (exact and float)",
       [&] { return from_suites({k_le_w_suite(exact), k_le_w_suite(floating)}); }},
      {"Kantorovich = Wasserstein exactly for Dist, Pfin, products, coproduct, Id, Const", [&] { return from_suites({duality_suite(exact)}); }},
      {"engine agrees with exhaustive oracles", [&] { return from_suites({oracle_suite(exact)}); }},
      {"pseudometric axioms hold on lifted tables and iterates",
       [&] {
         SuiteOptions o = exact;
         o.n = 200;
         return from_suites({axioms_suite(o)});
       }},
      {"well-behavedness: grammar passes, min on Pfin fails with known witnesses", [&] { return from_suites({well_behaved_suite(exact)}); }},
      {"kernel equals bisimilarity on random probabilistic systems",
       [&] {
         SuiteOptions o = floating;
         o.n = 100;
         return from_suites({kernel_suite(o)});
       }},
      {"iteration contracts by the discount factor",
       [&] {
         SuiteOptions o = floating;
         o.n = 100;
         return from_suites({contraction_suite(o)});
       }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " [" << o.detail << "] ("
              << fmt_seconds(seconds_since(t0)) << ")" << std::endl;
  }
  return all ? 0 : 1;
}
