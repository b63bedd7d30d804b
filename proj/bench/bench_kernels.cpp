// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to the core count of interest.

#include "h2mixed/assembly.hpp"
#include "h2mixed/kernels.hpp"
#include "h2mixed/multigrid.hpp"
#include "h2mixed/patches.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace h2mixed;

namespace {

ProblemSpec case_a(int k) {
  ProblemSpec s;
  s.gamma.segments = {{"S", Gamma::G3}, {"E", Gamma::G0}, {"N", Gamma::G3}, {"W", Gamma::G0}};
  s.c1 = 1.0;
  s.k = k;
  s.exact = make_case("u1ex", 0.0, 1.0);
  return s;
}

std::shared_ptr<const Mesh2D> mesh(const ProblemSpec& s, int n) {
  return std::make_shared<const Mesh2D>(label_boundary(build_unit_square_right(n), s.gamma));
}

// systems are cached per (k, n) across benchmark runs
const BlockSystem& system(int k, int n) {
  static std::map<std::pair<int, int>, BlockSystem> cache;
  auto it = cache.find({k, n});
  if (it == cache.end()) it = cache.emplace(std::pair{k, n}, assemble_system(case_a(k), mesh(case_a(k), n))).first;
  return it->second;
}

const VankaSmoother& smoother(int k, int n) {
  static std::map<std::pair<int, int>, std::unique_ptr<VankaSmoother>> cache;
  auto& v = cache[{k, n}];
  if (!v) {
    const BlockSystem& s = system(k, n);
    v = std::make_unique<VankaSmoother>(s.K, star_patches(s.U, s.V, s.A), s.constrained);
  }
  return *v;
}

ExecPolicy policy_of(const benchmark::State& st) { return st.range(2) ? ExecPolicy::OpenMP : ExecPolicy::Serial; }

void BM_Spmv(benchmark::State& st) {
  const BlockSystem& s = system(int(st.range(0)), int(st.range(1)));
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(s.size());
  Eigen::VectorXd y(s.size());
  for (auto _ : st) {
    kernels::spmv(policy_of(st), s.K, x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * s.K.nonZeros());
}

void BM_VankaApply(benchmark::State& st) {
  const int k = int(st.range(0)), n = int(st.range(1));
  const VankaSmoother& v = smoother(k, n);
  const Eigen::VectorXd r = Eigen::VectorXd::Ones(system(k, n).size());
  Eigen::VectorXd z;
  for (auto _ : st) {
    v.apply(r, z, policy_of(st));
    benchmark::DoNotOptimize(z.data());
  }
}

void BM_Assembly(benchmark::State& st) {
  const ProblemSpec s = case_a(int(st.range(0)));
  const auto m = mesh(s, int(st.range(1)));
  AssemblyOptions opt;
  opt.policy = policy_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_system(s, m, opt).K.nonZeros());
}

// args: k, 1/h, policy (0 serial, 1 OpenMP)
void grid(benchmark::internal::Benchmark* b) {
  for (int k : {0, 2})
    for (int n : {32, 64})
      for (int p : {0, 1}) b->Args({k, n, p});
}

} // namespace

BENCHMARK(BM_Spmv)->Apply(grid);
BENCHMARK(BM_VankaApply)->Apply(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assembly)->Apply(grid)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
