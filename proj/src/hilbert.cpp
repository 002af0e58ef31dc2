#include "polsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace polsim {

QubitRegister::QubitRegister(int n) : n_sites(n) {
  if (n < 1 || n > kMaxSites)
    throw std::invalid_argument("n_sites must be in [1, " + std::to_string(kMaxSites) + "]");
  dim = 1 << n;
}

unsigned QubitRegister::mask(int site) const {
  if (site < 1 || site > n_sites) throw std::invalid_argument("site out of range");
  return 1u << (n_sites - site);
}

PureState::PureState(QubitRegister r, Eigen::VectorXcd a) : reg(r), amplitudes(std::move(a)) {
  if (amplitudes.size() != reg.dim) throw std::invalid_argument("amplitude vector size mismatch");
}

DensityMatrix::DensityMatrix(QubitRegister r, Eigen::MatrixXcd m) : reg(r), mat(std::move(m)) {
  if (mat.rows() != reg.dim || mat.cols() != reg.dim)
    throw std::invalid_argument("density matrix size mismatch");
}

double DensityMatrix::trace_deviation() const { return mat.trace().real() - 1.0; }

double DensityMatrix::hermiticity_error() const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::check(double pos_tol) const {
  if (hermiticity_error() >= 1e-10) throw NumericalError("density matrix not Hermitian");
  if (std::abs(trace_deviation()) >= 1e-9 || std::abs(mat.trace().imag()) >= 1e-9)
    throw NumericalError("density matrix trace differs from 1");
  if (min_eigenvalue() < -pos_tol) throw NumericalError("density matrix not positive");
}

PureState basis_state(std::string_view label, QubitRegister reg) {
  if (static_cast<int>(label.size()) != reg.n_sites)
    throw std::invalid_argument("label/register size mismatch");
  unsigned idx = 0;
  for (char ch : label) {
    idx <<= 1;
    if (ch == 'E')
      idx |= 1u;
    else if (ch != 'G')
      throw std::invalid_argument("unknown site symbol");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(reg.dim);
  amps[idx] = 1.0;
  return PureState(reg, std::move(amps));
}

DensityMatrix density_from_pure(const PureState& psi) {
  const double nrm2 = psi.amplitudes.squaredNorm();
  if (std::abs(nrm2 - 1.0) > 1e-9) throw std::invalid_argument("pure state not normalized");
  return DensityMatrix(psi.reg, psi.amplitudes * psi.amplitudes.adjoint());
}

Eigen::MatrixXcd apply_ladder(LadderOp op, int site, OpSide side, const Eigen::MatrixXcd& m) {
  const long dim = m.rows();
  if (m.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("matrix dimension is not a power of two");
  int n_sites = 0;
  while ((1L << n_sites) < dim) ++n_sites;
  if (site < 1 || site > n_sites) throw std::invalid_argument("site out of range");
  const long mask = 1L << (n_sites - site);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (long c = 0; c < dim; ++c) {
    for (long r = 0; r < dim; ++r) {
      if (side == OpSide::Left) {
        // rows transform: (sigma M)[r,c] = sum_k sigma[r,k] M[k,c]
        switch (op) {
          case LadderOp::Plus:
            if (r & mask) out(r, c) = m(r ^ mask, c);
            break;
          case LadderOp::Minus:
            if (!(r & mask)) out(r, c) = m(r | mask, c);
            break;
          case LadderOp::Z:
            out(r, c) = (r & mask) ? m(r, c) : -m(r, c);
            break;
        }
      } else {
        // columns transform: (M sigma)[r,c] = sum_k M[r,k] sigma[k,c]
        switch (op) {
          case LadderOp::Plus:
            if (!(c & mask)) out(r, c) = m(r, c | mask);
            break;
          case LadderOp::Minus:
            if (c & mask) out(r, c) = m(r, c ^ mask);
            break;
          case LadderOp::Z:
            out(r, c) = (c & mask) ? m(r, c) : -m(r, c);
            break;
        }
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.reg.n_sites;
  if (keep.empty()) throw std::invalid_argument("keep list empty");
  for (size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 1 || keep[k] > n) throw std::invalid_argument("keep site out of range");
    if (k > 0 && keep[k] <= keep[k - 1])
      throw std::invalid_argument("keep sites must be strictly increasing");
  }
  const int m = static_cast<int>(keep.size());
  std::vector<int> kept_pos(m);  // bit position (from LSB) of each kept site
  for (int k = 0; k < m; ++k) kept_pos[k] = n - keep[k];
  std::vector<int> traced_pos;
  for (int s = 1; s <= n; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced_pos.push_back(n - s);

  const long out_dim = 1L << m;
  const long tr_dim = 1L << traced_pos.size();

  // spread tables: output/traced sub-index -> full-register index bits
  std::vector<long> kept_spread(out_dim, 0), traced_spread(tr_dim, 0);
  for (long K = 0; K < out_dim; ++K)
    for (int k = 0; k < m; ++k)
      if (K & (1L << (m - 1 - k))) kept_spread[K] |= 1L << kept_pos[k];
  for (long T = 0; T < tr_dim; ++T)
    for (size_t k = 0; k < traced_pos.size(); ++k)
      if (T & (1L << k)) traced_spread[T] |= 1L << traced_pos[k];

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  for (long K = 0; K < out_dim; ++K)
    for (long Kp = 0; Kp < out_dim; ++Kp) {
      Complex acc{0.0, 0.0};
      for (long T = 0; T < tr_dim; ++T)
        acc += rho.mat(kept_spread[K] | traced_spread[T], kept_spread[Kp] | traced_spread[T]);
      out(K, Kp) = acc;
    }
  return DensityMatrix(QubitRegister(m), std::move(out));
}

Complex expectation(const DensityMatrix& rho, const PauliProduct& obs) {
  const int n = rho.reg.n_sites;
  unsigned seen = 0;
  for (const auto& f : obs) {
    if (f.site < 1 || f.site > n) throw std::invalid_argument("observable site out of range");
    const unsigned msk = rho.reg.mask(f.site);
    if (seen & msk) throw std::invalid_argument("duplicate site in operator product");
    seen |= msk;
  }
  const long dim = rho.reg.dim;
  Complex acc{0.0, 0.0};
  const Complex im{0.0, 1.0};
  // Tr(rho O) = sum_r <r|rho O|r>; O|r> = phase * |m> for product observables.
  for (long r = 0; r < dim; ++r) {
    long mcol = r;
    Complex phase{1.0, 0.0};
    bool dead = false;
    for (const auto& f : obs) {
      const long msk = rho.reg.mask(f.site);
      const bool excited = mcol & msk;
      switch (f.op) {
        case PauliOp::Plus:
          if (excited) dead = true;
          else mcol |= msk;
          break;
        case PauliOp::Minus:
          if (!excited) dead = true;
          else mcol ^= msk;
          break;
        case PauliOp::X:
          mcol ^= msk;
          break;
        case PauliOp::Y:
          // sigma_y = -i(sigma^+ - sigma^-): |G> -> -i|E>, |E> -> +i|G>
          phase *= excited ? im : -im;
          mcol ^= msk;
          break;
        case PauliOp::Z:
          if (!excited) phase = -phase;
          break;
      }
      if (dead) break;
    }
    if (!dead) acc += phase * rho.mat(r, mcol);
  }
  return acc;
}

}  // namespace polsim
