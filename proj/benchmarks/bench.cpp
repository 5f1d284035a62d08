#include <benchmark/benchmark.h>

#include <vector>

#include "twocap/capacity.hpp"
#include "twocap/elliptic.hpp"
#include "twocap/homogenize.hpp"
#include "twocap/multigrid.hpp"

using namespace twocap;

namespace {

struct Setup {
  Grid grid;
  EdgeOperator op;
  GridField problem;
};

Setup make_setup(int half) {
  const Grid g = Grid::centred(half, 1.0 / half);
  auto op = EdgeOperator::assemble(g, Checkerboard(1.0, 4.0, 0.25));
  GridField f = capacity_constraints(g, {0.0625, 0.0625}, 0.1);
  return {g, std::move(op), std::move(f)};
}

}  // namespace

static void BM_Apply(benchmark::State& state) {
  const Setup s = make_setup(int(state.range(0)));
  std::vector<double> x(s.grid.size(), 1.0), y(s.grid.size());
  for (std::size_t p = 0; p < x.size(); ++p) x[p] = double(p % 17);
  for (auto _ : state) {
    s.op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(x.size()));
}
BENCHMARK(BM_Apply)->Arg(128)->Arg(512);

static void BM_VCycle(benchmark::State& state) {
  const Setup s = make_setup(int(state.range(0)));
  const MultigridPreconditioner mg(s.op, s.problem.fixed);
  std::vector<double> r(s.grid.size()), z(s.grid.size());
  for (std::size_t p = 0; p < r.size(); ++p) r[p] = s.problem.fixed[p] ? 0.0 : 1.0;
  for (auto _ : state) {
    mg.apply(r, z);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_VCycle)->Arg(128)->Arg(512);

static void BM_Solve(benchmark::State& state) {
  const Setup s = make_setup(int(state.range(0)));
  SolverOptions o;
  o.preconditioner = state.range(1) ? Preconditioner::multigrid : Preconditioner::jacobi;
  for (auto _ : state) {
    auto r = solve(s.op, s.problem, o);
    benchmark::DoNotOptimize(r.field.values.data());
  }
}
BENCHMARK(BM_Solve)->Args({128, 1})->Args({128, 0})->Args({512, 1})->Unit(benchmark::kMillisecond);

static void BM_CellProblem(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cell_problem(1.0, 4.0, int(state.range(0))).a11);
}
BENCHMARK(BM_CellProblem)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
