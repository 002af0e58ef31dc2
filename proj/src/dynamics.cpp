#include "polsim/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "polsim/kernels.hpp"

namespace polsim {

namespace {

std::vector<kernels::FiberTerm> fiber_terms(const BathSpec& bath) {
  const int n_sites = bath.n_sites();
  std::vector<kernels::FiberTerm> terms(bath.n_fibers());
  for (int j = 0; j < bath.n_fibers(); ++j) {
    terms[j].mask_a = 1u << (n_sites - (j + 1));
    terms[j].mask_b = 1u << (n_sites - (j + 2));
    terms[j].gn = bath.gammas[j] * bath.occupations[j];
    terms[j].gp = bath.gammas[j] * (bath.occupations[j] + 1.0);
  }
  return terms;
}

void check_sizes(const Eigen::MatrixXcd& rho, const BathSpec& bath) {
  const long dim = 1L << bath.n_sites();
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("state/bath size mismatch");
}

}  // namespace

BathSpec::BathSpec(Eigen::VectorXd g, Eigen::VectorXd n)
    : gammas(std::move(g)), occupations(std::move(n)) {
  if (gammas.size() != occupations.size())
    throw std::invalid_argument("gammas/occupations length mismatch");
  if (gammas.size() > kMaxSites - 1)
    throw std::invalid_argument("bath must describe at most N-1 fibers");
  for (long j = 0; j < gammas.size(); ++j) {
    if (!std::isfinite(gammas[j]) || gammas[j] < 0.0)
      throw std::invalid_argument("gamma entries must be finite and nonnegative");
    if (!std::isfinite(occupations[j]) || occupations[j] < 0.0)
      throw std::invalid_argument("occupation entries must be finite and nonnegative");
  }
}

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.1) throw std::invalid_argument("dt must be in (0, 0.1]");
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (!(steady_tol >= 1e-12)) throw std::invalid_argument("steady_tol must be >= 1e-12");
}

Eigen::MatrixXcd liouvillian_apply(const Eigen::MatrixXcd& rho, const BathSpec& bath) {
  check_sizes(rho, bath);
  const auto terms = fiber_terms(bath);
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  if (rho.rows() >= kernels::kParallelDim)
    kernels::liouvillian_parallel(rho.data(), out.data(), rho.rows(), terms.data(),
                                  static_cast<int>(terms.size()));
  else
    kernels::liouvillian_serial(rho.data(), out.data(), rho.rows(), terms.data(),
                                static_cast<int>(terms.size()));
  return out;
}

Eigen::MatrixXcd liouvillian_apply(const DensityMatrix& rho, const BathSpec& bath) {
  return liouvillian_apply(rho.mat, bath);
}

Eigen::MatrixXcd liouvillian_apply_serial(const Eigen::MatrixXcd& rho, const BathSpec& bath) {
  check_sizes(rho, bath);
  const auto terms = fiber_terms(bath);
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  kernels::liouvillian_serial(rho.data(), out.data(), rho.rows(), terms.data(),
                              static_cast<int>(terms.size()));
  return out;
}

namespace {

// In-place RK4 with caller-provided scratch; k1 may be precomputed (steady
// detection reuses it as the norm probe).
struct Rk4Workspace {
  Eigen::MatrixXcd k1, k2, k3, k4, stage;

  explicit Rk4Workspace(long dim)
      : k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim) {}
};

void apply_l(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out,
             const std::vector<kernels::FiberTerm>& terms) {
  const long dim = in.rows();
  if (dim >= kernels::kParallelDim)
    kernels::liouvillian_parallel(in.data(), out.data(), dim, terms.data(),
                                  static_cast<int>(terms.size()));
  else
    kernels::liouvillian_serial(in.data(), out.data(), dim, terms.data(),
                                static_cast<int>(terms.size()));
}

void rk4_advance(Eigen::MatrixXcd& rho, double dt, const std::vector<kernels::FiberTerm>& terms,
                 Rk4Workspace& ws, bool k1_ready) {
  if (!k1_ready) apply_l(rho, ws.k1, terms);
  ws.stage = rho + (0.5 * dt) * ws.k1;
  apply_l(ws.stage, ws.k2, terms);
  ws.stage = rho + (0.5 * dt) * ws.k2;
  apply_l(ws.stage, ws.k3, terms);
  ws.stage = rho + dt * ws.k3;
  apply_l(ws.stage, ws.k4, terms);
  rho += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
  rho = 0.5 * (rho + rho.adjoint()).eval();
}

}  // namespace

DensityMatrix rk4_step(const DensityMatrix& rho, double dt, const BathSpec& bath) {
  check_sizes(rho.mat, bath);
  if (dt < 0.0) throw std::invalid_argument("dt must be nonnegative");
  if (dt == 0.0) return rho;
  const auto terms = fiber_terms(bath);
  Rk4Workspace ws(rho.reg.dim);
  Eigen::MatrixXcd m = rho.mat;
  rk4_advance(m, dt, terms, ws, false);
  return DensityMatrix(rho.reg, std::move(m));
}

Trajectory evolve(const DensityMatrix& rho0, const BathSpec& bath, const EvolutionConfig& config,
                  const std::vector<SampleObserver>& observers) {
  config.validate();
  check_sizes(rho0.mat, bath);
  const auto terms = fiber_terms(bath);
  const long n_steps = std::llround(config.t_max / config.dt);

  Trajectory traj;
  Rk4Workspace ws(rho0.reg.dim);
  Eigen::MatrixXcd m = rho0.mat;

  auto record = [&](long step) {
    const double t = static_cast<double>(step) * config.dt;
    DensityMatrix snap(rho0.reg, m);
    const double min_eig = snap.min_eigenvalue();
    if (min_eig < -1e-6) {
      std::ostringstream msg;
      msg << "positivity violation at t=" << t << " (min eigenvalue " << min_eig
          << "); dt likely too large";
      throw NumericalError(msg.str());
    }
    traj.times.push_back(t);
    traj.states.push_back(snap);
    for (const auto& obs : observers) obs(t, traj.states.back());
  };

  record(0);
  for (long s = 1; s <= n_steps; ++s) {
    rk4_advance(m, config.dt, terms, ws, false);
    if (s % config.record_stride == 0 || s == n_steps) record(s);
  }
  traj.states.back().check();
  return traj;
}

SteadyResult steady_state(const DensityMatrix& rho0, const BathSpec& bath, double steady_tol,
                          double t_guard, double dt) {
  if (!(steady_tol > 0.0)) throw std::invalid_argument("steady_tol must be positive");
  if (!(t_guard > 0.0)) throw std::invalid_argument("t_guard must be positive");
  if (!(dt > 0.0) || dt > 0.1) throw std::invalid_argument("dt must be in (0, 0.1]");
  check_sizes(rho0.mat, bath);
  const auto terms = fiber_terms(bath);
  const long guard_steps = std::llround(t_guard / dt);

  Rk4Workspace ws(rho0.reg.dim);
  Eigen::MatrixXcd m = rho0.mat;
  double norm = 0.0;
  for (long s = 0; s <= guard_steps; ++s) {
    apply_l(m, ws.k1, terms);
    norm = ws.k1.norm();
    if (norm < steady_tol)
      return SteadyResult{DensityMatrix(rho0.reg, std::move(m)), static_cast<double>(s) * dt,
                          norm};
    rk4_advance(m, dt, terms, ws, true);
  }
  std::ostringstream msg;
  msg << "no steady state within guard (t_guard=" << t_guard << ", last ||L[rho]||=" << norm
      << ")";
  throw NumericalError(msg.str());
}

}  // namespace polsim
