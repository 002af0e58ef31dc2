#pragma once

// Shared fixtures: deterministic random states and a slow dense operator
// builder (explicit Kronecker chains) used to cross-check the bit-arithmetic
// paths.

#include <random>

#include <Eigen/Dense>

#include "polsim/hilbert.hpp"
#include "polsim/measures.hpp"

namespace helpers {

using polsim::Complex;

inline Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;  // |E><G| in the (G, E) basis
  return m;
}

inline Eigen::Matrix2cd sigma_minus() { return sigma_plus().adjoint(); }

inline Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

// op on `site`, identity elsewhere; site 1 is the leftmost Kronecker factor.
inline Eigen::MatrixXcd kron_site_op(const Eigen::Matrix2cd& op, int site, int n_sites) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(1, 1);
  for (int s = 1; s <= n_sites; ++s) {
    const Eigen::MatrixXcd factor =
        (s == site) ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity());
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (long r = 0; r < out.rows(); ++r)
      for (long c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * factor;
    out = next;
  }
  return out;
}

inline Eigen::MatrixXcd random_matrix(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng) {
  const Eigen::MatrixXcd m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

inline Eigen::MatrixXcd random_density(int dim, std::mt19937& rng) {
  const Eigen::MatrixXcd g = random_matrix(dim, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline Eigen::VectorXcd random_pure(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

inline Eigen::Matrix2cd random_unitary2(std::mt19937& rng) {
  const Eigen::Matrix2cd h = random_hermitian(2, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  Eigen::Vector2cd phases;
  for (int i = 0; i < 2; ++i) phases[i] = std::polar(1.0, es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline polsim::PairState as_pair(const Eigen::Matrix4cd& m) {
  polsim::PairState p;
  p.elements = m;
  return p;
}

inline Eigen::Matrix4cd bell_projector() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

inline Eigen::Matrix4cd singlet_projector() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v[1] = 1.0 / std::sqrt(2.0);
  v[2] = -1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

inline Eigen::Matrix4cd werner(double p) {
  return p * singlet_projector() + (1.0 - p) * 0.25 * Eigen::Matrix4cd::Identity();
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace helpers
