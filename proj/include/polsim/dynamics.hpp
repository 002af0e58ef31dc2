#pragma once

// Collective-dissipation master equation: Liouvillian application, fixed-step
// RK4 integration, steady-state detection.

#include <functional>
#include <vector>

#include "polsim/hilbert.hpp"

namespace polsim {

struct BathSpec {
  Eigen::VectorXd gammas;       // fiber damping rates, length N-1
  Eigen::VectorXd occupations;  // mean thermal photon numbers, length N-1

  BathSpec(Eigen::VectorXd g, Eigen::VectorXd n);

  int n_fibers() const { return static_cast<int>(gammas.size()); }
  int n_sites() const { return n_fibers() + 1; }
};

struct EvolutionConfig {
  double dt = 1e-3;
  double t_max = 50.0;
  int record_stride = 100;
  double steady_tol = 1e-9;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

// L[rho] for the fiber-chain dissipator; Hermitian and traceless for
// Hermitian input. Accepts any same-sized matrix (the integrator feeds
// intermediate stage values through it).
Eigen::MatrixXcd liouvillian_apply(const Eigen::MatrixXcd& rho, const BathSpec& bath);
Eigen::MatrixXcd liouvillian_apply(const DensityMatrix& rho, const BathSpec& bath);

// Reference implementation without OpenMP, kept for kernel-equivalence tests
// and the benchmark.
Eigen::MatrixXcd liouvillian_apply_serial(const Eigen::MatrixXcd& rho, const BathSpec& bath);

// One classical RK4 step of d(rho)/dt = L[rho]; output re-Hermitized.
DensityMatrix rk4_step(const DensityMatrix& rho, double dt, const BathSpec& bath);

using SampleObserver = std::function<void(double t, const DensityMatrix& rho)>;

// Fixed-step integration from t=0 to t_max, recording every record_stride
// steps (plus the final step). Aborts with NumericalError if a recorded
// sample's smallest eigenvalue drops below -1e-6.
Trajectory evolve(const DensityMatrix& rho0, const BathSpec& bath, const EvolutionConfig& config,
                  const std::vector<SampleObserver>& observers = {});

struct SteadyResult {
  DensityMatrix state;
  double reach_time;
  double final_norm;  // ||L[rho]||_F at the returned state
};

// Integrates until ||L[rho]||_F < steady_tol; throws NumericalError
// ("no steady state within guard ...") if the guard time is exceeded.
SteadyResult steady_state(const DensityMatrix& rho0, const BathSpec& bath, double steady_tol,
                          double t_guard, double dt = 1e-3);

}  // namespace polsim
