#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rapkit {

struct BenchOptions {
  std::vector<int> sizes = {1000, 10000};
  std::vector<std::string> kinds = {"box", "nested"};  // box|gbc|nested|laminar
  uint64_t seed = 1;
  int reps = 1;
};

struct BenchRow {
  std::string kind;
  int n = 0;
  int m = 0;
  std::string solver;
  double wall_ms = 0.0;
  bool certified = false;
};

// Seeded random instances per kind/size; wall time covers the solve (which
// includes its own certificate pass). Deterministic for a fixed seed.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace rapkit
