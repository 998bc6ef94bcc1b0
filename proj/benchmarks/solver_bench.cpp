#include <benchmark/benchmark.h>

#include "rapkit/generator.hpp"
#include "rapkit/laminar_solver.hpp"
#include "rapkit/model.hpp"
#include "rapkit/qbox.hpp"
#include "rapkit/reduction.hpp"

namespace {

using namespace rapkit;

Instance box_instance(int n, uint64_t seed) {
  GenSpec gs;
  gs.kind = ConstraintKind::Box;
  gs.n = n;
  gs.seed = seed;
  return random_instance(gs);
}

void BM_QboxBreakpoint(benchmark::State& state) {
  Instance inst = box_instance(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    auto sol = solve_qbox_continuous(inst.obj.a, inst.obj.b, inst.cons.lower, inst.cons.upper,
                                     inst.cons.R);
    benchmark::DoNotOptimize(sol.x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QboxBreakpoint)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity();

void BM_QboxVariableFixing(benchmark::State& state) {
  Instance inst = box_instance(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    auto sol = solve_qbox_variable_fixing(inst.obj.a, inst.obj.b, inst.cons.lower,
                                          inst.cons.upper, inst.cons.R);
    benchmark::DoNotOptimize(sol.x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QboxVariableFixing)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_NestedFast(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  ChainInstance ci = random_chain_instance(n, std::max(1, n / 64), 11);
  for (auto _ : state) {
    auto sol = solve_nested_fast(ci.a, ci.b, ci.l, ci.u, ci.chain, ci.R,
                                 VariableDomain::Continuous);
    benchmark::DoNotOptimize(sol.x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NestedFast)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_Gbc(benchmark::State& state) {
  GenSpec gs;
  gs.kind = ConstraintKind::Gbc;
  gs.n = static_cast<int>(state.range(0));
  gs.seed = 13;
  Instance inst = random_instance(gs);
  for (auto _ : state) {
    auto sol = solve_quadratic(inst);
    benchmark::DoNotOptimize(sol.x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gbc)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Certificate(benchmark::State& state) {
  Instance inst = box_instance(static_cast<int>(state.range(0)), 7);
  auto sol = solve_qbox_continuous(inst.obj.a, inst.obj.b, inst.cons.lower, inst.cons.upper,
                                   inst.cons.R);
  for (auto _ : state) {
    auto cert = verify_condition1(inst.obj, inst.cons, sol.x, inst.dom);
    benchmark::DoNotOptimize(cert.optimal);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Certificate)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity();

void BM_QboxInteger(benchmark::State& state) {
  GenSpec gs;
  gs.kind = ConstraintKind::Box;
  gs.n = static_cast<int>(state.range(0));
  gs.seed = 23;
  gs.dom = VariableDomain::Integer;
  Instance inst = random_instance(gs);
  for (auto _ : state) {
    auto sol = solve_qbox_integer(inst.obj.a, inst.obj.b, inst.cons.lower, inst.cons.upper,
                                  inst.cons.R);
    benchmark::DoNotOptimize(sol.x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QboxInteger)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

}  // namespace

BENCHMARK_MAIN();
