#include <random>

#include "polsim/oracle.hpp"
#include "polsim/scenario.hpp"
#include "polsim/squeezing.hpp"

namespace polsim {

namespace {

PairState as_pair(const Eigen::Matrix4cd& m) {
  PairState p;
  p.elements = m;
  return p;
}

Eigen::Matrix4cd bell_projector() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

Eigen::Matrix4cd werner(double p) {
  Eigen::Vector4cd s = Eigen::Vector4cd::Zero();
  s[1] = 1.0 / std::sqrt(2.0);
  s[2] = -1.0 / std::sqrt(2.0);
  return p * (s * s.adjoint()) + (1.0 - p) * 0.25 * Eigen::Matrix4cd::Identity();
}

DensityMatrix evolved_eeg_snapshot() {
  const QubitRegister reg(3);
  const BathSpec bath(Eigen::Vector2d::Ones(), Eigen::Vector2d::Zero());
  EvolutionConfig cfg;
  cfg.t_max = 2.0;
  cfg.record_stride = 2000;
  const Trajectory traj = evolve(density_from_pure(basis_state("EEG", reg)), bath, cfg);
  return traj.states.back();
}

}  // namespace

ValidationReport run_validation(double tolerance_scale) {
  ValidationReport report;
  std::mt19937 rng(987654321u);
  const auto add = [&](const std::string& name, double deviation, double tolerance) {
    tolerance *= tolerance_scale;
    report.checks.push_back({name, deviation, tolerance, deviation < tolerance});
  };

  // fast bit-arithmetic Liouvillian vs dense superoperator
  for (int n_sites : {2, 3}) {
    double dev = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
      const BathSpec bath = oracle::random_bath(n_sites - 1, rng);
      const Eigen::MatrixXcd rho = oracle::random_density(1 << n_sites, rng);
      const auto dense = oracle::dense_liouvillian(bath, n_sites);
      const Eigen::MatrixXcd ref = oracle::unvectorize(dense.matrix * oracle::vectorize(rho));
      dev = std::max(dev, (liouvillian_apply(rho, bath) - ref).cwiseAbs().maxCoeff());
    }
    add("liouvillian fast vs dense superoperator, N=" + std::to_string(n_sites), dev, 1e-12);
  }

  // RK4 vs matrix exponential on the N=3 thermal regime
  {
    const QubitRegister reg(3);
    const BathSpec bath(Eigen::Vector2d::Ones(), (Eigen::Vector2d() << 0.2, 0.0).finished());
    const DensityMatrix rho0 = density_from_pure(basis_state("GGG", reg));
    EvolutionConfig cfg;
    cfg.t_max = 1.0;
    cfg.record_stride = 1000;
    const Trajectory traj = evolve(rho0, bath, cfg);
    const DensityMatrix exact = oracle::expm_propagate(oracle::dense_liouvillian(bath, 3), rho0, 1.0);
    add("rk4 vs matrix exponential at t=1",
        (traj.states.back().mat - exact.mat).cwiseAbs().maxCoeff(), 1e-8);
  }

  // discord optimizer vs exhaustive grid
  {
    std::vector<Eigen::Matrix4cd> states = {bell_projector(), werner(0.8), werner(0.4)};
    Eigen::Matrix4cd classical = Eigen::Matrix4cd::Zero();
    classical(0, 0) = classical(3, 3) = 0.5;
    states.push_back(classical);
    for (int iter = 0; iter < 12; ++iter) states.push_back(oracle::random_density(4, rng));
    double dev = 0.0;
    for (const auto& m : states)
      for (const MeasuredSide side : {MeasuredSide::B, MeasuredSide::A}) {
        const PairState pair = as_pair(m);
        dev = std::max(dev, std::abs(discord(pair, side).discord -
                                     oracle::discord_grid(pair, side, 0.5)));
      }
    add("discord optimizer vs 0.5-degree grid", dev, 1e-4);
  }

  // squeezing eigenvalue route vs perpendicular-plane scan
  {
    std::vector<DensityMatrix> states;
    const QubitRegister reg(3);
    states.push_back(density_from_pure(basis_state("GGG", reg)));
    states.push_back(evolved_eeg_snapshot());
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int iter = 0; iter < 8; ++iter) {
      // product of identical single-qubit pure states, mean spin never vanishes
      const double theta = uni(rng) * 3.0, phi = uni(rng) * 6.28;
      Eigen::Vector2cd q;
      q << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
      Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
      for (int s = 0; s < 3; ++s) {
        Eigen::VectorXcd next(amps.size() * 2);
        for (long i = 0; i < amps.size(); ++i) {
          next[2 * i] = amps[i] * q[0];
          next[2 * i + 1] = amps[i] * q[1];
        }
        amps = next;
      }
      states.push_back(density_from_pure(PureState(reg, amps)));
    }
    double dev = 0.0;
    for (const auto& rho : states)
      dev = std::max(dev,
                     std::abs(spin_squeezing(rho).xi_squared - oracle::squeezing_scan(rho, 0.1)));
    add("squeezing eigenvalue route vs 0.1-degree scan", dev, 1e-6);
  }

  // long-time integration vs unique thermal kernel element
  {
    const QubitRegister reg(3);
    const BathSpec bath(Eigen::Vector2d::Ones(), (Eigen::Vector2d() << 0.4, 0.25).finished());
    const auto kernel = oracle::steady_nullspace(oracle::dense_liouvillian(bath, 3));
    double dev = 1.0;
    if (kernel.size() == 1) {
      Eigen::MatrixXcd candidate = kernel[0] / kernel[0].trace();
      candidate = 0.5 * (candidate + candidate.adjoint()).eval();
      const SteadyResult steady =
          steady_state(density_from_pure(basis_state("EEE", reg)), bath, 1e-10, 500.0);
      dev = (steady.state.mat - candidate).cwiseAbs().maxCoeff();
    }
    add("steady-state integration vs Liouvillian kernel, N=3", dev, 1e-7);
  }

  return report;
}

}  // namespace polsim
