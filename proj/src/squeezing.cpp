#include "polsim/squeezing.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace polsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

double real_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) >= 1e-10) throw NumericalError(what);
  return z.real();
}

}  // namespace

CollectiveMoments collective_moments(const DensityMatrix& rho) {
  const int n = rho.reg.n_sites;
  const PauliOp axes[3] = {PauliOp::X, PauliOp::Y, PauliOp::Z};

  CollectiveMoments out;
  out.n_sites = n;

  // single-site expectations <sigma_j^a>
  Eigen::MatrixXd single(3, n);
  for (int a = 0; a < 3; ++a)
    for (int j = 0; j < n; ++j)
      single(a, j) = real_checked(expectation(rho, {{j + 1, axes[a]}}),
                                  "collective moment has imaginary residue");
  for (int a = 0; a < 3; ++a) out.mean[a] = 0.5 * single.row(a).sum();

  // symmetrized second moments: same-site Pauli products anticommute to
  // delta_ab, cross-site factors commute.
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      double cross = 0.0;
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          if (j == k) continue;
          const Complex e = expectation(rho, {{j, axes[a]}, {k, axes[b]}});
          cross += 0.5 * real_checked(e, "collective moment has imaginary residue");
          // symmetrize with the reversed product (equal for j != k)
          cross += 0.5 * real_checked(expectation(rho, {{j, axes[b]}, {k, axes[a]}}),
                                      "collective moment has imaginary residue");
        }
      const double same_site = (a == b) ? n : 0.0;
      out.second(a, b) = 0.25 * (same_site + cross);
      out.second(b, a) = out.second(a, b);
    }

  for (int a = 0; a < 3; ++a)
    if (out.second(a, a) < out.mean[a] * out.mean[a] - 1e-9)
      throw NumericalError("negative collective variance");
  return out;
}

std::pair<double, double> mean_spin_angles(const CollectiveMoments& moments) {
  const double norm = moments.mean.norm();
  if (norm <= 1e-12 * moments.n_sites) throw UndefinedSqueezingError();
  const double theta = std::acos(clamp_unit(moments.mean[2] / norm));
  const double sin_theta = std::sin(theta);
  double phi = 0.0;
  if (sin_theta >= 1e-12) {
    const double c = clamp_unit(moments.mean[0] / (norm * sin_theta));
    phi = (moments.mean[1] > 0.0) ? std::acos(c) : 2.0 * kPi - std::acos(c);
    if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
  }
  return {theta, phi};
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> perpendicular_frame(double theta, double phi) {
  Eigen::Vector3d n1(-std::sin(phi), std::cos(phi), 0.0);
  Eigen::Vector3d n2(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
                     -std::sin(theta));
  return {n1, n2};
}

SqueezingResult spin_squeezing(const CollectiveMoments& moments) {
  const auto [theta, phi] = mean_spin_angles(moments);
  const auto [n1, n2] = perpendicular_frame(theta, phi);

  auto covariance = [&](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    return u.dot(moments.second * v) - u.dot(moments.mean) * v.dot(moments.mean);
  };
  Eigen::Matrix2d gamma;
  gamma(0, 0) = covariance(n1, n1);
  gamma(1, 1) = covariance(n2, n2);
  gamma(0, 1) = gamma(1, 0) = covariance(n1, n2);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gamma);
  double lambda_min = es.eigenvalues()[0];
  if (lambda_min < -1e-9) throw NumericalError("perpendicular covariance not positive");
  if (lambda_min < 0.0) lambda_min = 0.0;
  const Eigen::Vector2d v = es.eigenvectors().col(0);

  SqueezingResult out;
  out.xi_squared = 4.0 * lambda_min / moments.n_sites;
  out.theta = theta;
  out.phi = phi;
  out.optimal_direction = v[0] * n1 + v[1] * n2;
  return out;
}

SqueezingResult spin_squeezing(const DensityMatrix& rho) {
  return spin_squeezing(collective_moments(rho));
}

}  // namespace polsim
