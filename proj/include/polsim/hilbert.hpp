#pragma once

// Qubit-register states and operator algebra on computational-basis labels.
// Convention: site 1 is the most significant bit of the basis index,
// bit 0 = |G>, bit 1 = |E>, so basis_state("G..G") is index 0.

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "polsim/errors.hpp"

namespace polsim {

using Complex = std::complex<double>;

inline constexpr int kMaxSites = 12;  // hard cap, dense 2^N matrices

struct QubitRegister {
  int n_sites = 0;
  int dim = 0;  // 2^n_sites

  explicit QubitRegister(int n);

  // Bit mask selecting `site` (1-based, site 1 = MSB).
  unsigned mask(int site) const;
};

struct PureState {
  QubitRegister reg;
  Eigen::VectorXcd amplitudes;

  PureState(QubitRegister r, Eigen::VectorXcd a);
};

struct DensityMatrix {
  QubitRegister reg;
  Eigen::MatrixXcd mat;

  DensityMatrix(QubitRegister r, Eigen::MatrixXcd m);

  double trace_deviation() const;    // tr(rho) - 1, real part
  double hermiticity_error() const;  // max entrywise |rho - rho^dag|
  double min_eigenvalue() const;

  // Throws NumericalError when the state invariants are violated:
  // hermiticity 1e-10, trace 1e-9, eigenvalues >= -pos_tol.
  void check(double pos_tol = 1e-8) const;
};

PureState basis_state(std::string_view label, QubitRegister reg);

DensityMatrix density_from_pure(const PureState& psi);

enum class LadderOp { Plus, Minus, Z };
enum class OpSide { Left, Right };

// sigma_site^op * M (side=Left) or M * sigma_site^op (side=Right), computed by
// index arithmetic on the site bit; no 2^N x 2^N factor matrix is built.
Eigen::MatrixXcd apply_ladder(LadderOp op, int site, OpSide side, const Eigen::MatrixXcd& m);

// Reduced state over `keep` (nonempty, strictly increasing site list), kept
// sites ordered as listed.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Observables for expectation values: products of single-site factors acting
// on distinct sites.
enum class PauliOp { X, Y, Z, Plus, Minus };

struct PauliFactor {
  int site;
  PauliOp op;
};

using PauliProduct = std::vector<PauliFactor>;

// Tr(rho * O) for a product observable O.
Complex expectation(const DensityMatrix& rho, const PauliProduct& obs);

}  // namespace polsim
