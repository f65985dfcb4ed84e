#pragma once

// Command-line front end: dist, lift, check and trace.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "behametric/behametric.hpp"

namespace behametric::cli {

enum ExitCode : int { ok = 0, invalid = 1, check_failed = 2, not_converged = 3 };

inline std::optional<std::string> environment(const char* name) {
  if (const char* v = std::getenv(name)) return std::string(v);
  return std::nullopt;
}

namespace detail {

struct Settings {
  std::string file;
  bool exact = false;
  double tol = 1e-9;
  bool json = false;
  std::string out_file;
  std::vector<std::string> params;
  std::string c;
  std::string eps;
  std::string method = "wasserstein";
  std::size_t max_iter = 10000;
  bool strict = false;
  unsigned threads = 0;
  bool both = false;
  std::string t1;
  std::string t2;
  std::uint64_t seed = 1;
  std::size_t n = 500;
  std::vector<std::string> suites;

  NumericMode mode() const { return exact ? NumericMode::exact() : NumericMode::floating(tol); }

  LiftMethod lift_method() const { return method == "kantorovich" ? LiftMethod::kantorovich : LiftMethod::wasserstein; }

  io::LoadOptions load_options() const {
    io::LoadOptions o;
    o.mode = mode();
    for (const auto& p : params) {
      auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) throw ValidationError("expected NAME=VALUE, got '" + p + "'", "--param");
      o.overrides[p.substr(0, eq)] = parse_rational(p.substr(eq + 1));
    }
    if (!c.empty()) o.overrides["c"] = parse_rational(c);
    if (!eps.empty()) o.overrides["eps"] = parse_rational(eps);
    return o;
  }
};

inline void emit(const Settings& s, std::ostream& out, const std::string& text) {
  if (s.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream f(s.out_file, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + s.out_file + "'", s.out_file);
  f << text;
}

inline int report_convergence(const Settings& s, const DistanceMatrix& m, std::ostream& err) {
  if (m.converged) return ok;
  err << "warning: no convergence after " << m.iterations << " iterations (residual " << m.residual.to_string() << ")\n";
  return s.strict ? not_converged : ok;
}

inline int dist(const Settings& s, unsigned threads, std::ostream& out, std::ostream& err) {
  System sys = io::load_system_file(s.file, s.load_options());
  IterationOptions io;
  io.max_iter = s.max_iter;
  io.method = s.lift_method();
  io.threads = threads;
  DistanceMatrix m = behavioral_distances(sys, io);
  emit(s, out, s.json ? io::matrix_to_json(m).dump(2) + "\n" : io::matrix_to_csv(m));
  return report_convergence(s, m, err);
}

inline int trace(const Settings& s, unsigned threads, std::ostream& out, std::ostream& err) {
  System sys = io::load_system_file(s.file, s.load_options());
  IterationOptions io;
  io.max_iter = s.max_iter;
  io.method = s.lift_method();
  io.threads = threads;
  io.trace = true;
  DistanceMatrix m = behavioral_distances(sys, io);
  const std::size_t n = m.size();
  std::string text;
  if (s.json) {
    io::json steps = io::json::array();
    for (std::size_t k = 0; k < m.trace.size(); ++k) {
      io::json rows = io::json::array();
      for (std::size_t i = 0; i < n; ++i) {
        io::json row = io::json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(m.trace[k][i * n + j].to_string());
        rows.push_back(std::move(row));
      }
      steps.push_back({{"iteration", k + 1}, {"delta", m.deltas[k].to_string()}, {"distances", std::move(rows)}});
    }
    io::json doc = io::matrix_to_json(m);
    doc["trace"] = std::move(steps);
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "iteration,delta,state";
    for (const auto& st : m.states) csv << "," << io::csv_field(st);
    csv << "\n";
    for (std::size_t k = 0; k < m.trace.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        csv << k + 1 << "," << m.deltas[k].to_string() << "," << io::csv_field(m.states[i]);
        for (std::size_t j = 0; j < n; ++j) csv << "," << m.trace[k][i * n + j].to_string();
        csv << "\n";
      }
    }
    text = csv.str();
  }
  emit(s, out, text);
  return report_convergence(s, m, err);
}

inline std::optional<io::json> structure_arg(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    return io::json::parse(text);
  } catch (const io::json::parse_error&) {
    return io::json(text);  // a bare atom name
  }
}

inline int lift(const Settings& s, std::ostream& out) {
  io::json doc = io::read_json_file(s.file);
  auto t1 = structure_arg(s.t1);
  auto t2 = structure_arg(s.t2);
  io::LiftProblem p = io::parse_lift(doc, s.load_options(), t1 ? &*t1 : nullptr, t2 ? &*t2 : nullptr);
  std::string text;
  if (s.both) {
    Value k = lift_dist(p.expr, p.space, LiftMethod::kantorovich, p.t1, p.t2);
    Value w = lift_dist(p.expr, p.space, LiftMethod::wasserstein, p.t1, p.t2);
    Value gap = dist_e(w, k);
    if (s.json) {
      io::json j{{"kantorovich", k.to_string()}, {"wasserstein", w.to_string()}, {"gap", gap.to_string()}, {"mode", s.mode().name()}};
      text = j.dump(2) + "\n";
    } else {
      text = "kantorovich " + k.to_string() + "\nwasserstein " + w.to_string() + "\ngap " + gap.to_string() + "\n";
    }
  } else {
    Value v = lift_dist(p.expr, p.space, s.lift_method(), p.t1, p.t2);
    if (s.json) {
      io::json j{{"method", s.method}, {"value", v.to_string()}, {"mode", s.mode().name()}};
      text = j.dump(2) + "\n";
    } else {
      text = v.to_string() + "\n";
    }
  }
  emit(s, out, text);
  return ok;
}

inline int check(const Settings& s, unsigned threads, std::ostream& out) {
  std::vector<std::string> names;
  for (const auto& name : s.suites) {
    if (name == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    } else {
      names.push_back(name);
    }
  }
  SuiteOptions opt;
  opt.seed = s.seed;
  opt.n = s.n;
  opt.mode = s.mode();
  opt.threads = threads;
  bool all_passed = true;
  io::json results = io::json::array();
  std::ostringstream text;
  for (const auto& name : names) {
    SuiteResult r = run_suite(name, opt);
    all_passed = all_passed && r.passed;
    if (s.json) {
      results.push_back({{"suite", r.name},
                         {"passed", r.passed},
                         {"instances", r.instances},
                         {"seed", s.seed},
                         {"mode", opt.mode.name()},
                         {"summary", r.lines},
                         {"witnesses", r.failures}});
    } else {
      text << r.name << ": " << (r.passed ? "PASS" : "FAIL") << " (" << r.instances << " instances, seed " << s.seed << ", " << opt.mode.name()
           << ")\n";
      for (const auto& l : r.lines) text << "  " << l << "\n";
      for (const auto& w : r.failures) text << "  witness: " << w << "\n";
    }
  }
  emit(s, out, s.json ? results.dump(2) + "\n" : text.str());
  return all_passed ? ok : check_failed;
}

inline unsigned thread_count(const Settings& s, const std::optional<std::string>& env_threads) {
  if (!env_threads || env_threads->empty()) return s.threads;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(*env_threads, &used);
    if (used != env_threads->size()) throw std::invalid_argument("trailing characters");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw ValidationError("expected a non-negative integer, got '" + *env_threads + "'", "BEHAMETRIC_THREADS");
  }
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const std::optional<std::string>& env_threads = environment("BEHAMETRIC_THREADS")) {
  detail::Settings s;
  CLI::App app{"Behavioral distances of finite coalgebras via functor liftings", "behametric"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "behametric 0.1.0");

  auto add_mode = [&](CLI::App* sub) {
    auto* exact = sub->add_flag("--exact", s.exact, "Exact rational arithmetic");
    auto* flt = sub->add_option("--float", s.tol, "Floating point with the given tolerance (default 1e-9)")->check(CLI::PositiveNumber);
    exact->excludes(flt);
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("file", s.file, "Input JSON document")->required();
    sub->add_option("--param", s.params, "Parameter override, NAME=P/Q (repeatable)");
    sub->add_option("--c", s.c, "Override parameter c");
    sub->add_option("--eps", s.eps, "Override parameter eps");
    add_mode(sub);
    sub->add_flag("--json", s.json, "JSON output");
    sub->add_option("--out", s.out_file, "Write output to a file");
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", s.method, "Lifting: wasserstein or kantorovich")
        ->check(CLI::IsMember({"wasserstein", "kantorovich"}))
        ->capture_default_str();
  };
  auto add_iteration = [&](CLI::App* sub) {
    add_method(sub);
    sub->add_option("--max-iter", s.max_iter, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--strict", s.strict, "Exit 3 when the iteration does not converge");
    sub->add_option("--threads", s.threads, "Worker threads (0: available parallelism)");
  };

  CLI::App* dist = app.add_subcommand("dist", "Behavioral distance matrix of a system");
  add_input(dist);
  add_iteration(dist);

  CLI::App* trace = app.add_subcommand("trace", "Every iterate of the distance computation");
  add_input(trace);
  add_iteration(trace);

  CLI::App* lift = app.add_subcommand("lift", "Lift a ground pseudometric to two structures");
  add_input(lift);
  add_method(lift);
  lift->add_flag("--both", s.both, "Both liftings and their gap");
  lift->add_option("--t1", s.t1, "First structure (JSON), replaces the document's t1");
  lift->add_option("--t2", s.t2, "Second structure (JSON), replaces the document's t2");

  CLI::App* check = app.add_subcommand("check", "Run seeded property suites");
  check->add_option("suites", s.suites, "Suites: duality, axioms, k-le-w, well-behaved, oracle, kernel, contraction or all")
      ->required()
      ->check(CLI::IsMember([] {
        auto names = suite_names();
        names.push_back("all");
        return names;
      }()));
  check->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  check->add_option("--n", s.n, "Instances per category")->check(CLI::PositiveNumber)->capture_default_str();
  add_mode(check);
  check->add_flag("--json", s.json, "JSON output");
  check->add_option("--out", s.out_file, "Write output to a file");
  check->add_option("--threads", s.threads, "Worker threads (0: available parallelism)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; everything else is a usage error.
    return app.exit(e, out, err) == 0 ? ok : invalid;
  }

  try {
    const unsigned threads = detail::thread_count(s, env_threads);
    if (dist->parsed()) return detail::dist(s, threads, out, err);
    if (trace->parsed()) return detail::trace(s, threads, out, err);
    if (lift->parsed()) return detail::lift(s, out);
    return detail::check(s, threads, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  }
  return invalid;
}

}  // namespace behametric::cli
