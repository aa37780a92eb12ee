// Command-line front end: generate instances, solve them, check profiles and
// time the solver over seeded instance families.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jerkplan/instance.hpp"
#include "jerkplan/instance_io.hpp"
#include "jerkplan/objective.hpp"
#include "jerkplan/sca.hpp"

using namespace jerkplan;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBudget = 1;
constexpr int kExitUsage = 2;
constexpr int kReportVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance generate(const std::string& kind, std::size_t n, std::uint64_t seed) {
  if (kind == "exp1") return gen_experiment1(seed, n);
  if (kind == "exp2") return gen_experiment2(seed, n).instance;
  if (kind == "sine" || kind == "exp3") return gen_sine_path(n).instance;
  if (kind == "clothoid") return gen_clothoid_path(n).instance;
  throw UsageError("unknown instance kind '" + kind + "' (expected exp1, exp2, sine, clothoid)");
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double jerk_at(const std::vector<double>& w, double h, std::size_t i) {
  if (i == 0 || i + 1 >= w.size()) return 0.0;
  const double d = w[i - 1] - 2.0 * w[i] + w[i + 1];
  const double x = std::max(0.0, w[i - 1] + w[i + 1]);
  return d * std::sqrt(0.5 * x) / (2.0 * h * h);
}

std::string profile_csv(const Instance& inst, const std::vector<double>& w) {
  std::string out = "s,w,v,a,jerk\n";
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double a = i + 1 < inst.n ? (w[i + 1] - w[i]) / (2.0 * inst.h) : 0.0;
    out += fmt17(inst.abscissa(i)) + ',' + fmt17(w[i]) + ',' + fmt17(std::sqrt(std::max(0.0, w[i]))) +
           ',' + fmt17(a) + ',' + fmt17(jerk_at(w, inst.h, i)) + '\n';
  }
  return out;
}

std::vector<double> read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open profile '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty profile '" + path + "'");
  std::vector<double> w;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string s, wi;
    if (!std::getline(ss, s, ',') || !std::getline(ss, wi, ','))
      throw UsageError("malformed profile row: " + line);
    w.push_back(std::stod(wi));
  }
  return w;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

json report_json(const SolveReport& r, const SolverConfig& cfg) {
  json j;
  j["version"] = kReportVersion;
  j["mode"] = cfg.mode == LinearizationMode::kEta ? "eta" : "theta-beta";
  j["direction"] = cfg.direction == DirectionMethod::kLp ? "lp" : "heuristic";
  j["termination"] = to_string(r.reason);
  j["objective"] = r.objective.is_finite() ? json(r.objective.value()) : json(nullptr);
  j["kkt_residual"] = r.kkt_residual;
  j["seconds"] = r.seconds;
  j["iterations"] = r.iterations.size();
  json trail = json::array();
  for (const auto& it : r.iterations) {
    trail.push_back({{"objective", it.objective},
                     {"alpha", it.alpha},
                     {"step", it.step_norm},
                     {"kkt", it.kkt},
                     {"seconds", it.seconds},
                     {"masked_rows", it.masked_rows},
                     {"backtracked", it.backtracked},
                     {"assumption_held", it.assumption_held},
                     {"restricted", it.restricted},
                     {"trust_region_iterations", it.update.iterations},
                     {"accepted", it.update.accepted},
                     {"rejected", it.update.rejected},
                     {"polishing", it.polishing},
                     {"heuristic_failures", it.update.heuristic_failures},
                     {"lp_calls", it.update.lp_calls}});
  }
  j["trail"] = std::move(trail);
  j["w"] = r.w;
  return j;
}

int threads_from_env() {
  if (const char* env = std::getenv("JERKPLAN_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct BenchRun {
  double seconds = 0.0;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool certified = false;
};

json bench(const std::string& suite, const std::vector<std::size_t>& sizes, std::size_t repeats,
           std::uint64_t first_seed, const SolverConfig& cfg) {
  if (suite != "exp1" && suite != "exp2" && suite != "exp3")
    throw UsageError("unknown suite '" + suite + "' (expected exp1, exp2, exp3)");
  if (sizes.empty()) throw UsageError("bench needs at least one size");
  if (repeats == 0) throw UsageError("bench needs repeats >= 1");
  json out;
  out["version"] = kReportVersion;
  out["suite"] = suite;
  out["repeats"] = repeats;
  out["stop_rule"] = {{"step_tolerance", cfg.step_tolerance},
                      {"kkt_target", cfg.kkt_target},
                      {"max_iterations", cfg.max_iterations}};
  json rows = json::array();
  const int workers = threads_from_env();
  for (std::size_t n : sizes) {
    std::vector<BenchRun> runs(repeats);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next++) < repeats;) {
          try {
            const Instance inst = generate(suite, n, first_seed + k);
            const SolveReport r = solve(inst, cfg);
            runs[k] = {r.seconds, r.objective.is_finite() ? r.objective.value() : INFINITY,
                       r.iterations.size(), r.certified()};
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<double> t;
    double obj_sum = 0.0, obj_min = INFINITY, obj_max = -INFINITY;
    std::size_t certified = 0;
    for (const auto& r : runs) {
      t.push_back(r.seconds);
      obj_sum += r.objective;
      obj_min = std::min(obj_min, r.objective);
      obj_max = std::max(obj_max, r.objective);
      certified += r.certified ? 1 : 0;
    }
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double x : t) sum += x;
    const std::size_t m = sorted.size();
    const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    rows.push_back({{"n", n},
                    {"time_min", sorted.front()},
                    {"time_max", sorted.back()},
                    {"time_mean", sum / static_cast<double>(m)},
                    {"time_median", median},
                    {"objective_min", obj_min},
                    {"objective_max", obj_max},
                    {"objective_mean", obj_sum / static_cast<double>(m)},
                    {"certified", certified}});
  }
  out["sizes"] = std::move(rows);
  return out;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg, std::string& mode, std::string& dir) {
  cmd->add_option("--mode", mode, "linearization: theta-beta or eta")
      ->check(CLI::IsMember({"theta-beta", "eta"}))
      ->capture_default_str();
  cmd->add_option("--dir", dir, "direction method: heuristic or lp")
      ->check(CLI::IsMember({"heuristic", "lp"}))
      ->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon, "ACC/NAR alternation tolerance")->capture_default_str();
  cmd->add_option("--eps1", cfg.eps1, "trust-region radius floor")->capture_default_str();
  cmd->add_option("--rho", cfg.rho, "trust-region enlargement factor")->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "trust-region shrink factor")->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iterations, "outer iteration budget")->capture_default_str();
  cmd->add_option("--step-tol", cfg.step_tolerance, "relative step tolerance")->capture_default_str();
  cmd->add_option("--kkt-tol", cfg.kkt_target, "KKT residual target (<= 0 disables)")
      ->capture_default_str();
  cmd->add_option("--inexact", cfg.inexact_iterations,
                  "outer iterations whose trust-region loop stops at the first accepted step")
      ->capture_default_str();
}

void apply_modes(SolverConfig& cfg, const std::string& mode, const std::string& dir) {
  cfg.mode = mode == "eta" ? LinearizationMode::kEta : LinearizationMode::kThetaBeta;
  cfg.direction = dir == "lp" ? DirectionMethod::kLp : DirectionMethod::kHeuristic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal speed planning along a path under acceleration and jerk bounds"};
  app.require_subcommand(1);

  std::string kind, out_path;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("kind", kind, "exp1, exp2, sine or clothoid")->required();
  gen->add_option("--n", n, "number of grid points")->capture_default_str();
  gen->add_option("--seed", seed, "seed for random families")->capture_default_str();
  gen->add_option("-o,--out", out_path, "output file (default stdout)");

  SolverConfig cfg;
  std::string mode = "theta-beta", dir = "heuristic";
  std::string instance_path, csv_path, report_path;
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("instance", instance_path, "instance JSON file")->required();
  solve_cmd->add_option("--csv", csv_path, "profile CSV output (default stdout)");
  solve_cmd->add_option("--report", report_path, "report JSON output");
  add_solver_flags(solve_cmd, cfg, mode, dir);

  std::string profile_path;
  double tol = 1e-8;
  auto* check = app.add_subcommand("check", "check a profile against an instance");
  check->add_option("instance", instance_path, "instance JSON file")->required();
  check->add_option("profile", profile_path, "profile CSV file")->required();
  check->add_option("--tol", tol, "feasibility tolerance")->capture_default_str();

  std::string suite;
  std::vector<std::size_t> sizes;
  std::size_t repeats = 10;
  auto* bench_cmd = app.add_subcommand("bench", "time the solver over seeded instances");
  bench_cmd->add_option("suite", suite, "exp1, exp2 or exp3")->required();
  bench_cmd->add_option("--sizes", sizes, "grid sizes")->delimiter(',');
  bench_cmd->add_option("--repeats", repeats, "instances per size")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "first seed")->capture_default_str();
  bench_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  add_solver_flags(bench_cmd, cfg, mode, dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kExitUsage;
  }

  try {
    if (*gen) {
      const Instance inst = generate(kind, n, seed);
      write_text(out_path, instance_to_json(inst, kind) + "\n");
      return kExitOk;
    }
    if (*solve_cmd) {
      apply_modes(cfg, mode, dir);
      const Instance inst = read_instance(instance_path);
      const SolveReport report = solve(inst, cfg);
      write_text(csv_path, profile_csv(inst, report.w));
      if (!report_path.empty()) write_text(report_path, report_json(report, cfg).dump(2) + "\n");
      std::fprintf(stderr, "%s: T = %.10g s, kkt = %.3e, %zu iterations, %.3f s\n", to_string(report.reason),
                   report.objective.to_double(), report.kkt_residual, report.iterations.size(), report.seconds);
      return report.certified() ? kExitOk : kExitBudget;
    }
    if (*check) {
      const Instance inst = read_instance(instance_path);
      const std::vector<double> w = read_profile(profile_path);
      if (w.size() != inst.n) throw UsageError("profile has " + std::to_string(w.size()) +
                                               " points, instance has " + std::to_string(inst.n));
      const FeasibilityReport rep = check_feasibility(w, inst, tol);
      std::printf("%s max_violation=%.3e worst=%s@%zu T=%.10g\n", rep.feasible ? "feasible" : "infeasible",
                  rep.max_violation(), to_string(rep.worst_family), rep.worst_index,
                  travel_time(w, inst.h).to_double());
      return rep.feasible ? kExitOk : kExitBudget;
    }
    if (*bench_cmd) {
      apply_modes(cfg, mode, dir);
      write_text(out_path, bench(suite, sizes, repeats, seed, cfg).dump(2) + "\n");
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
