#include <doctest.h>

#include "helpers.hpp"
#include "polsim/dynamics.hpp"
#include "polsim/oracle.hpp"

using namespace polsim;

namespace {

BathSpec bath2(double n) {
  return BathSpec(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, n));
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("vectorization round-trips column-major") {
  std::mt19937 rng(12);
  const Eigen::MatrixXcd m = helpers::random_matrix(4, rng);
  CHECK(helpers::max_abs_diff(oracle::unvectorize(oracle::vectorize(m)), m) == 0.0);
  // column-major convention anchor: vec stacks columns
  CHECK(oracle::vectorize(m)[1] == m(1, 0));
  CHECK(oracle::vectorize(m)[4] == m(0, 1));
}

TEST_CASE("dense Liouvillian annihilates the singlet and preserves the trace functional") {
  const auto dense = oracle::dense_liouvillian(bath2(0.0), 2);
  const Eigen::VectorXcd image = dense.matrix * oracle::vectorize(helpers::singlet_projector());
  CHECK(image.cwiseAbs().maxCoeff() < 1e-12);

  for (double n : {0.0, 0.5}) {
    const auto d = oracle::dense_liouvillian(bath2(n), 2);
    const Eigen::VectorXcd left = oracle::vectorize(Eigen::Matrix4cd::Identity());
    CHECK((left.transpose() * d.matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(oracle::dense_liouvillian(
                      BathSpec(Eigen::VectorXd::Ones(5), Eigen::VectorXd::Zero(5)), 6),
                  std::invalid_argument);
}

TEST_CASE("dense and fast paths agree on random instances") {
  std::mt19937 rng(314159);
  for (int n : {2, 3}) {
    double dev = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
      const BathSpec bath = oracle::random_bath(n - 1, rng);
      const Eigen::MatrixXcd rho = oracle::random_density(1 << n, rng);
      const auto dense = oracle::dense_liouvillian(bath, n);
      dev = std::max(dev, helpers::max_abs_diff(
                              oracle::unvectorize(dense.matrix * oracle::vectorize(rho)),
                              liouvillian_apply(rho, bath)));
    }
    CHECK(dev < 1e-12);
  }
}

TEST_CASE("exponential propagation") {
  const QubitRegister reg(2);
  const DensityMatrix ee = density_from_pure(basis_state("EE", reg));
  const auto dense = oracle::dense_liouvillian(bath2(0.0), 2);

  CHECK(helpers::max_abs_diff(oracle::expm_propagate(dense, ee, 0.0).mat, ee.mat) < 1e-15);

  const DensityMatrix dark(reg, helpers::singlet_projector());
  for (double t : {0.5, 3.0, 20.0})
    CHECK(helpers::max_abs_diff(oracle::expm_propagate(dense, dark, t).mat, dark.mat) < 1e-12);

  EvolutionConfig cfg;
  cfg.t_max = 1.0;
  cfg.record_stride = 1 << 20;
  const Trajectory traj = evolve(ee, bath2(0.0), cfg);
  CHECK(helpers::max_abs_diff(oracle::expm_propagate(dense, ee, 1.0).mat,
                              traj.states.back().mat) < 1e-9);
}

TEST_CASE("kernel of the two-site generator contains both dark directions") {
  const auto kernel0 = oracle::steady_nullspace(oracle::dense_liouvillian(bath2(0.0), 2));
  CHECK(kernel0.size() == 4);  // span{|GG><GG|, |s><s|, |GG><s|, |s><GG|}

  auto contains = [&](const std::vector<Eigen::MatrixXcd>& kernel, const Eigen::Matrix4cd& m) {
    Eigen::VectorXcd v = oracle::vectorize(m);
    Eigen::VectorXcd residual = v;
    for (const auto& k : kernel) {
      const Eigen::VectorXcd kv = oracle::vectorize(k);
      residual -= kv * (kv.adjoint() * v);
    }
    return residual.norm() < 1e-8;
  };
  Eigen::Matrix4cd gg = Eigen::Matrix4cd::Zero();
  gg(0, 0) = 1.0;
  CHECK(contains(kernel0, gg));
  CHECK(contains(kernel0, helpers::singlet_projector()));

  // the singlet is dark at any temperature, so the thermal kernel is
  // two-dimensional: singlet + the thermal attractor
  const auto kernel_thermal = oracle::steady_nullspace(oracle::dense_liouvillian(bath2(0.5), 2));
  CHECK(kernel_thermal.size() == 2);
  CHECK(contains(kernel_thermal, helpers::singlet_projector()));
}

TEST_CASE("three-site generator with hot fibers has a unique steady state") {
  const BathSpec bath(Eigen::Vector2d::Ones(), (Eigen::Vector2d() << 0.5, 0.5).finished());
  const auto kernel = oracle::steady_nullspace(oracle::dense_liouvillian(bath, 3));
  CHECK(kernel.size() == 1);

  Eigen::MatrixXcd steady = kernel[0] / kernel[0].trace();
  steady = 0.5 * (steady + steady.adjoint()).eval();
  CHECK(helpers::max_abs_diff(liouvillian_apply(steady, bath),
                              Eigen::MatrixXcd::Zero(8, 8)) < 1e-10);
}

TEST_CASE("discord grid ground truths") {
  CHECK(oracle::discord_grid(helpers::as_pair(helpers::bell_projector()), MeasuredSide::B, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-4));

  Eigen::Matrix4cd prod = Eigen::Matrix4cd::Zero();
  prod(0, 0) = 0.3;
  prod(1, 1) = 0.7;
  CHECK(oracle::discord_grid(helpers::as_pair(prod), MeasuredSide::B, 0.5) ==
        doctest::Approx(0.0).epsilon(1e-8));

  const PairState werner = helpers::as_pair(helpers::werner(0.8));
  const double opt = discord(werner, MeasuredSide::B).discord;
  CHECK(std::abs(opt - oracle::discord_grid(werner, MeasuredSide::B, 0.5)) < 1e-4);

  CHECK_THROWS_AS(oracle::discord_grid(werner, MeasuredSide::B, 2.0), std::invalid_argument);
}

TEST_CASE("squeezing scan ground truths") {
  const QubitRegister r3(3);
  CHECK(oracle::squeezing_scan(density_from_pure(basis_state("GGG", r3)), 0.1) ==
        doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::Vector2cd q;
  q << std::cos(0.4), std::polar(std::sin(0.4), 1.1);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  for (int s = 0; s < 3; ++s) {
    Eigen::VectorXcd next(amps.size() * 2);
    for (long i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * q[0];
      next[2 * i + 1] = amps[i] * q[1];
    }
    amps = next;
  }
  const DensityMatrix product = density_from_pure(PureState(r3, amps));
  CHECK(oracle::squeezing_scan(product, 0.1) == doctest::Approx(1.0).epsilon(1e-6));
}

}  // TEST_SUITE
