#pragma once

// Bipartite correlation measures on two-qubit reduced states: entropy, mutual
// information, Wootters concurrence, measurement-conditioned entropy,
// classical correlation, quantum discord. Logarithms are base 2.

#include <utility>

#include "polsim/hilbert.hpp"

namespace polsim {

// Eigenvalues in [-kClampTol, 0) are treated as numerical zeros; anything
// more negative is a hard error.
inline constexpr double kClampTol = 1e-8;

struct PairState {
  Eigen::Matrix4cd elements;
  std::pair<int, int> site_pair{1, 2};  // provenance, i < j
};

// Reduced state of sites (i, j); subsystem A is site i, B is site j.
PairState pair_state(const DensityMatrix& rho, int site_i, int site_j);

enum class MeasuredSide { A, B };

struct MeasurementBasis {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)
};

struct DiscordReport {
  double mutual_information;
  double classical_correlation;
  double discord;
  MeasurementBasis optimal_basis;
  MeasuredSide measured_side;
};

// -sum lambda log2 lambda with 0 log 0 = 0; eigenvalues in [-1e-8, 0)
// clamped, below that throws NumericalError("state not positive").
double von_neumann_entropy(const Eigen::Ref<const Eigen::MatrixXcd>& rho);

double mutual_information(const PairState& pair);

double concurrence(const PairState& pair);

// B1 = |b><b| with |b> = cos(theta/2)|E> + e^{i phi} sin(theta/2)|G>;
// B2 = I - B1.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> measurement_projectors(const MeasurementBasis& basis);

double conditional_entropy(const PairState& pair, const MeasurementBasis& basis,
                           MeasuredSide side);

// Projector-level entry point (outcome relabeling is an exact symmetry of the
// sum, which the tests exercise here).
double conditional_entropy(const PairState& pair, const Eigen::Matrix2cd& b1,
                           const Eigen::Matrix2cd& b2, MeasuredSide side);

// J = S(unmeasured marginal) - min over (theta, phi) of the conditional
// entropy; grid + simplex refinement, within 1e-4 of the true optimum.
std::pair<double, MeasurementBasis> classical_correlation(const PairState& pair,
                                                          MeasuredSide side);

DiscordReport discord(const PairState& pair, MeasuredSide side);

namespace detail {

// Fast conditional entropy for a rank-1 measurement ket (and its orthogonal
// complement); same quantity as the projector path, used by the optimizer
// and the grid oracle.
double conditional_entropy_ket(const Eigen::Matrix4cd& rho, const Eigen::Vector2cd& ket,
                               MeasuredSide side);

Eigen::Vector2cd basis_ket(double theta, double phi);

Eigen::Matrix2cd marginal_a(const Eigen::Matrix4cd& rho);
Eigen::Matrix2cd marginal_b(const Eigen::Matrix4cd& rho);

}  // namespace detail

}  // namespace polsim
