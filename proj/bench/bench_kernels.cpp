// Parallel kernels against the serial reference on the same fields. Thread
// count follows OMP_NUM_THREADS.

#include "logsol/coefficients.hpp"
#include "logsol/energy.hpp"
#include "logsol/plap.hpp"
#include "logsol/reference.hpp"
#include "logsol/sampling.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace logsol;

struct Problem {
  Coefficients c;
  Field u;
};

Problem problem(int cells) {
  const Grid g(2, {cells, cells}, {4.0, 4.0}, Boundary::Periodic);
  return {make_coefficients(CoefficientDescriptor::periodic_test(), g), random_smooth_field(g, 3, 0)};
}

void BM_EnergyParallel(benchmark::State &state) {
  const Problem p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(energy(p.u, p.c).j);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.u.size()));
}

void BM_EnergyReference(benchmark::State &state) {
  const Problem p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::energy(p.u, p.c, SplitParams()).j);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.u.size()));
}

void BM_GradientParallel(benchmark::State &state) {
  const Problem p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(gradient_field(p.u, p.c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.u.size()));
}

void BM_GradientReference(benchmark::State &state) {
  const Problem p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::gradient_field(p.u, p.c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.u.size()));
}

void BM_PLapGradientParallel(benchmark::State &state) {
  const Problem p = problem(static_cast<int>(state.range(0)));
  const PLapParams pp(3.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(plap_gradient(p.u, p.c, pp));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.u.size()));
}

void BM_PLapGradientReference(benchmark::State &state) {
  const Problem p = problem(static_cast<int>(state.range(0)));
  const PLapParams pp(3.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::plap_gradient(p.u, p.c, pp));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.u.size()));
}

} // namespace

BENCHMARK(BM_EnergyParallel)->Arg(128)->Arg(512);
BENCHMARK(BM_EnergyReference)->Arg(128)->Arg(512);
BENCHMARK(BM_GradientParallel)->Arg(128)->Arg(512);
BENCHMARK(BM_GradientReference)->Arg(128)->Arg(512);
BENCHMARK(BM_PLapGradientParallel)->Arg(128)->Arg(512);
BENCHMARK(BM_PLapGradientReference)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
