// Serial vs OpenMP kernel comparison. The dispatch threshold in
// liouvillian_apply (kParallelDim) was picked from these numbers.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "polsim/dynamics.hpp"
#include "polsim/kernels.hpp"
#include "polsim/measures.hpp"
#include "polsim/oracle.hpp"

namespace {

using polsim::Complex;

struct KernelFixture {
  long dim;
  Eigen::MatrixXcd rho;
  Eigen::MatrixXcd out;
  std::vector<polsim::kernels::FiberTerm> terms;

  explicit KernelFixture(int n_sites) : dim(1L << n_sites), rho(dim, dim), out(dim, dim) {
    std::mt19937 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long c = 0; c < dim; ++c)
      for (long r = 0; r < dim; ++r) rho(r, c) = Complex(gauss(rng), gauss(rng));
    rho = 0.5 * (rho + rho.adjoint()).eval();
    terms.resize(n_sites - 1);
    for (int j = 0; j < n_sites - 1; ++j) {
      terms[j].mask_a = 1u << (n_sites - (j + 1));
      terms[j].mask_b = 1u << (n_sites - (j + 2));
      terms[j].gn = 0.2;
      terms[j].gp = 1.2;
    }
  }
};

void bm_liouvillian_serial(benchmark::State& state) {
  KernelFixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    polsim::kernels::liouvillian_serial(fx.rho.data(), fx.out.data(), fx.dim, fx.terms.data(),
                                        static_cast<int>(fx.terms.size()));
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * fx.dim * fx.dim);
}

void bm_liouvillian_parallel(benchmark::State& state) {
  KernelFixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    polsim::kernels::liouvillian_parallel(fx.rho.data(), fx.out.data(), fx.dim, fx.terms.data(),
                                          static_cast<int>(fx.terms.size()));
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * fx.dim * fx.dim);
}

void bm_rk4_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const polsim::QubitRegister reg(n);
  const polsim::DensityMatrix rho0 =
      polsim::density_from_pure(polsim::basis_state(std::string(n, 'E'), reg));
  const polsim::BathSpec bath(Eigen::VectorXd::Ones(n - 1),
                              Eigen::VectorXd::Constant(n - 1, 0.2));
  for (auto _ : state) {
    const polsim::DensityMatrix next = polsim::rk4_step(rho0, 1e-3, bath);
    benchmark::DoNotOptimize(next.mat.data());
  }
}

void bm_discord_grid(benchmark::State& state) {
  std::mt19937 rng(7);
  polsim::PairState pair;
  pair.elements = polsim::oracle::random_density(4, rng);
  const double res_deg = 1.0;
  for (auto _ : state) {
    const double d = polsim::oracle::discord_grid(pair, polsim::MeasuredSide::B, res_deg);
    benchmark::DoNotOptimize(d);
  }
}

void bm_discord_optimizer(benchmark::State& state) {
  std::mt19937 rng(7);
  polsim::PairState pair;
  pair.elements = polsim::oracle::random_density(4, rng);
  for (auto _ : state) {
    const double d = polsim::discord(pair, polsim::MeasuredSide::B).discord;
    benchmark::DoNotOptimize(d);
  }
}

}  // namespace

BENCHMARK(bm_liouvillian_serial)->Arg(5)->Arg(7)->Arg(9)->Arg(11)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_liouvillian_parallel)->Arg(5)->Arg(7)->Arg(9)->Arg(11)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_rk4_step)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_discord_grid)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_discord_optimizer)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
