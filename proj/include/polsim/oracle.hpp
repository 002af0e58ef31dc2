#pragma once

// Slow, independent reference implementations backing the test suite and the
// CLI `validate` mode: dense superoperator, exact propagation, null-space
// steady states, grid-search discord, brute-force squeezing scans.

#include <random>
#include <vector>

#include "polsim/dynamics.hpp"
#include "polsim/measures.hpp"

namespace polsim::oracle {

inline constexpr int kMaxDenseSites = 5;

struct DenseLiouvillian {
  int n_sites = 0;
  Eigen::MatrixXcd matrix;  // 4^N x 4^N, acts on column-major vec(rho)
};

// Column-major vectorization and its inverse; A rho B <-> (B^T kron A) vec(rho).
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v);

// Dense single-site lowering operator built from explicit Kronecker factors
// (deliberately not the bit-arithmetic path it is used to check).
Eigen::MatrixXcd dense_lowering(int site, int n_sites);

DenseLiouvillian dense_liouvillian(const BathSpec& bath, int n_sites);

// unvec(exp(tL) vec(rho0)).
DensityMatrix expm_propagate(const DenseLiouvillian& liouv, const DensityMatrix& rho0, double t);

// Orthonormal kernel basis (singular value < 1e-10), re-matrixed.
std::vector<Eigen::MatrixXcd> steady_nullspace(const DenseLiouvillian& liouv);

// Discord with the conditional-entropy minimum taken by exhaustive (theta,
// phi) grid search at the given resolution (<= 1 degree).
double discord_grid(const PairState& pair, MeasuredSide side, double resolution_deg);

// 4 min Var(J_perp)/N scanned over the perpendicular plane at the given
// angular resolution.
double squeezing_scan(const DensityMatrix& rho, double resolution_deg);

// Deterministic random instances for cross-checks (shared by `validate` and
// the tests).
Eigen::MatrixXcd random_density(int dim, std::mt19937& rng);
BathSpec random_bath(int n_fibers, std::mt19937& rng);

}  // namespace polsim::oracle
