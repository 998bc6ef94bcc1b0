#include "rapkit/bench_runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "rapkit/generator.hpp"
#include "rapkit/laminar_solver.hpp"
#include "rapkit/qbox.hpp"
#include "rapkit/reduction.hpp"

namespace rapkit {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  for (const auto& kind : opts.kinds) {
    for (int n : opts.sizes) {
      for (int rep = 0; rep < opts.reps; ++rep) {
        uint64_t seed = opts.seed + 1000003ull * rep + 17ull * static_cast<uint64_t>(n) +
                        std::hash<std::string>{}(kind);
        BenchRow row;
        row.kind = kind;
        row.n = n;

        if (kind == "nested") {
          int m = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
          ChainInstance ci = random_chain_instance(n, m, seed);
          row.m = ci.chain.m();
          double t0 = now_ms();
          Solution sol = solve_nested_fast(ci.a, ci.b, ci.l, ci.u, ci.chain, ci.R,
                                           VariableDomain::Continuous);
          row.wall_ms = now_ms() - t0;
          row.solver = sol.solver;
          row.certified = sol.certified;
        } else {
          GenSpec gs;
          gs.n = n;
          gs.seed = seed;
          gs.dom = VariableDomain::Continuous;
          if (kind == "box") gs.kind = ConstraintKind::Box;
          else if (kind == "gbc") gs.kind = ConstraintKind::Gbc;
          else if (kind == "laminar") gs.kind = ConstraintKind::Laminar;
          else continue;
          Instance inst = random_instance(gs);
          row.m = inst.cons.num_sets();
          double t0 = now_ms();
          Solution sol = solve_quadratic(inst);
          row.wall_ms = now_ms() - t0;
          row.solver = sol.solver;
          row.certified = sol.certified;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "kind,n,m,solver,wall_ms,certified\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%s,%.3f,%s\n", r.kind.c_str(), r.n, r.m,
                  r.solver.c_str(), r.wall_ms, r.certified ? "true" : "false");
    out += buf;
  }
  return out;
}

}  // namespace rapkit
