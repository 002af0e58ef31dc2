#pragma once

// Collective angular-momentum moments and the Kitagawa-Ueda squeezing
// parameter xi_s^2 = 4 min Var(J_perp) / N, minimized over directions
// perpendicular to the mean spin.

#include "polsim/hilbert.hpp"

namespace polsim {

struct CollectiveMoments {
  int n_sites = 0;
  Eigen::Vector3d mean;    // <J_x>, <J_y>, <J_z>
  Eigen::Matrix3d second;  // symmetrized <(J_a J_b + J_b J_a)/2>
};

struct SqueezingResult {
  double xi_squared;
  double theta;  // mean spin polar angle, [0, pi]
  double phi;    // mean spin azimuth, [0, 2*pi)
  Eigen::Vector3d optimal_direction;
};

CollectiveMoments collective_moments(const DensityMatrix& rho);

// Mean-spin direction angles; phi branch follows sgn(<J_y>), phi := 0 when
// the mean spin is along +-z. Throws UndefinedSqueezingError when
// |mean| <= 1e-12 * N.
std::pair<double, double> mean_spin_angles(const CollectiveMoments& moments);

// Orthonormal frame perpendicular to the mean spin at angles (theta, phi).
std::pair<Eigen::Vector3d, Eigen::Vector3d> perpendicular_frame(double theta, double phi);

SqueezingResult spin_squeezing(const CollectiveMoments& moments);
SqueezingResult spin_squeezing(const DensityMatrix& rho);

}  // namespace polsim
