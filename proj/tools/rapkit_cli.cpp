// rapkit: solve, verify, transform, recover and benchmark separable resource
// allocation instances.
//
// Exit codes: 0 solved/certified, 1 not optimal or certificate failure,
// 2 infeasible, 3 malformed input.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rapkit/bench_runner.hpp"
#include "rapkit/instance_io.hpp"
#include "rapkit/laminar_solver.hpp"
#include "rapkit/oracle.hpp"
#include "rapkit/reduction.hpp"

namespace {

using namespace rapkit;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Infeasible:
    case ErrorCode::InfeasiblePoint:
      return 2;
    case ErrorCode::CertificateFailure:
      return 1;
    default:
      return 3;
  }
}

SolverChoice parse_choice(const std::string& name) {
  if (name == "auto") return SolverChoice::Auto;
  if (name == "breakpoint") return SolverChoice::Breakpoint;
  if (name == "fixing") return SolverChoice::Fixing;
  if (name == "laminar") return SolverChoice::Laminar;
  if (name == "nested-fast") return SolverChoice::NestedFast;
  fail(ErrorCode::ParseError, "unknown solver '" + name + "'");
}

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

int cmd_solve(const std::string& path, const std::string& solver, double tol) {
  Instance inst = parse_instance(read_file(path));
  double t0 = now_ms();
  Solution sol = solve_separable(inst, parse_choice(solver));
  double wall = now_ms() - t0;
  if (tol > 0.0) {
    Certificate cert = verify_condition1(inst.obj, inst.cons, sol.x, inst.dom, tol);
    sol.certified = cert.optimal;
  }
  std::cout << emit_solution(sol, wall) << "\n";
  return sol.certified ? 0 : 1;
}

int cmd_verify(const std::string& inst_path, const std::string& sol_path, double tol) {
  Instance inst = parse_instance(read_file(inst_path));
  std::vector<double> x = parse_solution_vector(read_file(sol_path));

  FeasibilityReport rep = check_feasibility(inst.cons, x);
  if (!rep.feasible) {
    std::cerr << "infeasible candidate; worst residual " << rep.violations.front().residual
              << "\n";
    return 2;
  }
  Certificate cert =
      verify_condition1(inst.obj, inst.cons, x, inst.dom, tol > 0.0 ? tol : kCertTol);
  if (cert.optimal) {
    std::cout << "certified optimal (worst normalized gap " << cert.worst_gap << ")\n";
    return 0;
  }
  std::cout << "not optimal";
  if (cert.witness)
    std::cout << "; witness pair (" << cert.witness->first + 1 << ","
              << cert.witness->second + 1 << ")";
  std::cout << " normalized gap " << cert.worst_gap << "\n";
  return 1;
}

int cmd_transform(const std::string& app, const std::string& path,
                  const std::string& recovery_path) {
  TransformResult res = transform_app(app, read_file(path));
  std::cout << emit_instance(res.inst) << "\n";
  if (!recovery_path.empty()) {
    std::ofstream out(recovery_path);
    if (!out) fail(ErrorCode::ParseError, "cannot write '" + recovery_path + "'");
    out << res.recovery_json << "\n";
  }
  return 0;
}

int cmd_recover(const std::string& recovery_path, const std::string& sol_path) {
  std::vector<double> x = parse_solution_vector(read_file(sol_path));
  std::cout << recover_app(read_file(recovery_path), x) << "\n";
  return 0;
}

int cmd_bench(const std::vector<int>& sizes, const std::vector<std::string>& kinds,
              uint64_t seed, int reps, const std::string& format) {
  BenchOptions opts;
  if (!sizes.empty()) opts.sizes = sizes;
  if (!kinds.empty()) opts.kinds = kinds;
  opts.seed = seed;
  opts.reps = reps;
  auto rows = run_bench(opts);
  if (format == "json") {
    std::cout << "[";
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      std::cout << (i ? ",\n " : "\n ") << "{\"kind\":\"" << r.kind << "\",\"n\":" << r.n
                << ",\"m\":" << r.m << ",\"solver\":\"" << r.solver
                << "\",\"wall_ms\":" << r.wall_ms
                << ",\"certified\":" << (r.certified ? "true" : "false") << "}";
    }
    std::cout << "\n]\n";
  } else {
    std::cout << bench_csv(rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separable resource allocation solver suite"};
  app.require_subcommand(1);

  std::string inst_path, sol_path, app_name, recovery_path = "recovery.json";
  std::string solver = "auto", format = "csv";
  double tol = 0.0;
  std::vector<int> sizes;
  std::vector<std::string> kinds;
  uint64_t seed = 1;
  int reps = 1;

  auto* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("instance", inst_path, "instance JSON (or - for stdin)")->required();
  solve->add_option("--solver", solver, "breakpoint|fixing|laminar|nested-fast|auto");
  solve->add_option("--tol", tol, "certificate tolerance override");

  auto* verify = app.add_subcommand("verify", "certify a candidate solution");
  verify->add_option("instance", inst_path, "instance JSON")->required();
  verify->add_option("solution", sol_path, "solution JSON with an x array")->required();
  verify->add_option("--tol", tol, "certificate tolerance override");

  auto* transform = app.add_subcommand("transform", "turn an application spec into an instance");
  transform->add_option("app", app_name, "channel|mse|storage|stratified|vessel|speedscale")
      ->required();
  transform->add_option("spec", inst_path, "application JSON")->required();
  transform->add_option("--recovery", recovery_path, "where to write the recovery descriptor");

  auto* recover = app.add_subcommand("recover", "map a solution back to application terms");
  recover->add_option("recovery", recovery_path, "recovery descriptor")->required();
  recover->add_option("solution", sol_path, "solution JSON")->required();

  auto* bench = app.add_subcommand("bench", "time solvers on seeded random instances");
  bench->add_option("--sizes", sizes, "instance sizes")->delimiter(',');
  bench->add_option("--kinds", kinds, "box|gbc|nested|laminar")->delimiter(',');
  bench->add_option("--seed", seed, "random seed");
  bench->add_option("--reps", reps, "repetitions per size");
  bench->add_option("--format", format, "csv|json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(inst_path, solver, tol);
    if (verify->parsed()) return cmd_verify(inst_path, sol_path, tol);
    if (transform->parsed()) return cmd_transform(app_name, inst_path, recovery_path);
    if (recover->parsed()) return cmd_recover(recovery_path, sol_path);
    if (bench->parsed()) return cmd_bench(sizes, kinds, seed, reps, format);
  } catch (const rapkit::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
