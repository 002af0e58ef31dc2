#include "polsim/oracle.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "polsim/squeezing.hpp"

namespace polsim::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v) {
  const long dim = std::lround(std::sqrt(static_cast<double>(v.size())));
  if (dim * dim != v.size()) throw std::invalid_argument("vector is not a matrix vectorization");
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

Eigen::MatrixXcd dense_lowering(int site, int n_sites) {
  if (site < 1 || site > n_sites) throw std::invalid_argument("site out of range");
  Eigen::MatrixXcd lower(2, 2), eye(2, 2);
  lower << 0.0, 1.0, 0.0, 0.0;  // |G><E| in the (G, E) basis
  eye.setIdentity();
  Eigen::MatrixXcd op(1, 1);
  op.setOnes();
  for (int s = 1; s <= n_sites; ++s)
    op = Eigen::kroneckerProduct(op, s == site ? lower : eye).eval();
  return op;
}

DenseLiouvillian dense_liouvillian(const BathSpec& bath, int n_sites) {
  if (n_sites < 2 || n_sites > kMaxDenseSites)
    throw std::invalid_argument("dense Liouvillian limited to 2..5 sites");
  if (bath.n_sites() != n_sites) throw std::invalid_argument("state/bath size mismatch");
  const long dim = 1L << n_sites;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);

  DenseLiouvillian out;
  out.n_sites = n_sites;
  out.matrix = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  const auto sandwich = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    // A rho B -> (B^T kron A) vec(rho)
    return Eigen::kroneckerProduct(b.transpose(), a).eval();
  };
  for (int j = 1; j < n_sites; ++j) {
    const double gn = bath.gammas[j - 1] * bath.occupations[j - 1];
    const double gp = bath.gammas[j - 1] * (bath.occupations[j - 1] + 1.0);
    const Eigen::MatrixXcd jump = dense_lowering(j, n_sites) + dense_lowering(j + 1, n_sites);
    const Eigen::MatrixXcd jump_dag = jump.adjoint();
    out.matrix += gn * (2.0 * sandwich(jump_dag, jump) - sandwich(jump * jump_dag, eye) -
                        sandwich(eye, jump * jump_dag));
    out.matrix += gp * (2.0 * sandwich(jump, jump_dag) - sandwich(jump_dag * jump, eye) -
                        sandwich(eye, jump_dag * jump));
  }
  return out;
}

DensityMatrix expm_propagate(const DenseLiouvillian& liouv, const DensityMatrix& rho0, double t) {
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  if (rho0.reg.n_sites != liouv.n_sites)
    throw std::invalid_argument("state/Liouvillian size mismatch");
  const Eigen::MatrixXcd propagator = (t * liouv.matrix).exp();
  DensityMatrix out(rho0.reg, unvectorize(propagator * vectorize(rho0.mat)));
  if (std::abs(out.trace_deviation()) >= 1e-10)
    throw NumericalError("exponential propagation lost the trace");
  return out;
}

std::vector<Eigen::MatrixXcd> steady_nullspace(const DenseLiouvillian& liouv) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(liouv.matrix, Eigen::ComputeThinV);
  std::vector<Eigen::MatrixXcd> kernel;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] < 1e-10) kernel.push_back(unvectorize(svd.matrixV().col(i)));
  if (kernel.empty())
    throw NumericalError("empty kernel: trace-preserving generator must have one");
  return kernel;
}

double discord_grid(const PairState& pair, MeasuredSide side, double resolution_deg) {
  if (!(resolution_deg > 0.0) || resolution_deg > 1.0)
    throw std::invalid_argument("grid resolution must be in (0, 1] degrees");
  const double step = resolution_deg * kPi / 180.0;
  const long n_theta = std::lround(kPi / step) + 1;  // inclusive of both poles
  const long n_phi = std::lround(2.0 * kPi / step);

  const Eigen::Matrix4cd& rho = pair.elements;
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
  for (long i = 0; i < n_theta; ++i) {
    const double theta = std::min(static_cast<double>(i) * step, kPi);
    for (long j = 0; j < n_phi; ++j) {
      const double v =
          detail::conditional_entropy_ket(rho, detail::basis_ket(theta, j * step), side);
      if (v < best) best = v;
    }
  }
  const double s_unmeasured = von_neumann_entropy(
      side == MeasuredSide::B ? detail::marginal_a(rho) : detail::marginal_b(rho));
  const double info = mutual_information(pair);
  double d = info - (s_unmeasured - best);
  if (d < 0.0) {
    if (d < -kClampTol) throw NumericalError("grid discord negative");
    d = 0.0;
  }
  return d;
}

double squeezing_scan(const DensityMatrix& rho, double resolution_deg) {
  if (!(resolution_deg > 0.0)) throw std::invalid_argument("scan resolution must be positive");
  const CollectiveMoments moments = collective_moments(rho);
  const auto angles = mean_spin_angles(moments);
  const auto frame = perpendicular_frame(angles.first, angles.second);
  const Eigen::Vector3d n1 = frame.first;
  const Eigen::Vector3d n2 = frame.second;
  const double step = resolution_deg * kPi / 180.0;
  const long n_alpha = std::lround(kPi / step);

  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
  for (long i = 0; i < n_alpha; ++i) {
    const double alpha = static_cast<double>(i) * step;
    const Eigen::Vector3d dir = std::cos(alpha) * n1 + std::sin(alpha) * n2;
    const double var =
        dir.dot(moments.second * dir) - dir.dot(moments.mean) * dir.dot(moments.mean);
    if (var < best) best = var;
  }
  return 4.0 * best / moments.n_sites;
}

Eigen::MatrixXcd random_density(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

BathSpec random_bath(int n_fibers, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd gammas(n_fibers), occupations(n_fibers);
  for (int j = 0; j < n_fibers; ++j) {
    gammas[j] = 0.2 + 1.3 * uni(rng);
    occupations[j] = 1.5 * uni(rng);
  }
  return BathSpec(std::move(gammas), std::move(occupations));
}

}  // namespace polsim::oracle
