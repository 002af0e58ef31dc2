#include "polsim/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace polsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double entropy_term(double lambda) {
  return lambda > 0.0 ? -lambda * std::log2(lambda) : 0.0;
}

double clamp_eigenvalue(double lambda, const char* what) {
  if (lambda < -kClampTol) throw NumericalError(what);
  return lambda < 0.0 ? 0.0 : lambda;
}

// Entropy of a 2x2 Hermitian PSD block with trace p (not normalized);
// returns p * S(block / p).
double scaled_entropy_2x2(const Eigen::Matrix2cd& block, double p) {
  const double tr = block(0, 0).real() + block(1, 1).real();
  const double det =
      block(0, 0).real() * block(1, 1).real() - std::norm(block(0, 1));
  double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) disc = 0.0;
  const double root = std::sqrt(disc);
  const double l1 = clamp_eigenvalue(0.5 * (tr + root), "state not positive");
  const double l2 = clamp_eigenvalue(0.5 * (tr - root), "state not positive");
  // S of the normalized block, times p: -sum l log2(l/p)
  double s = entropy_term(l1) + entropy_term(l2);
  if (p > 0.0) s += (l1 + l2) * std::log2(p);
  return s;
}

}  // namespace

PairState pair_state(const DensityMatrix& rho, int site_i, int site_j) {
  if (site_i >= site_j) throw std::invalid_argument("pair must be ordered i < j");
  DensityMatrix red = partial_trace(rho, {site_i, site_j});
  PairState out;
  out.elements = red.mat;
  out.site_pair = {site_i, site_j};
  return out;
}

double von_neumann_entropy(const Eigen::Ref<const Eigen::MatrixXcd>& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    s += entropy_term(clamp_eigenvalue(es.eigenvalues()[i], "state not positive"));
  return s;
}

namespace detail {

Eigen::Matrix2cd marginal_a(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd m;
  m << rho(0, 0) + rho(1, 1), rho(0, 2) + rho(1, 3), rho(2, 0) + rho(3, 1),
      rho(2, 2) + rho(3, 3);
  return m;
}

Eigen::Matrix2cd marginal_b(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd m;
  m << rho(0, 0) + rho(2, 2), rho(0, 1) + rho(2, 3), rho(1, 0) + rho(3, 2),
      rho(1, 1) + rho(3, 3);
  return m;
}

Eigen::Vector2cd basis_ket(double theta, double phi) {
  Eigen::Vector2cd b;
  b[0] = std::polar(std::sin(0.5 * theta), phi);  // |G> component
  b[1] = std::cos(0.5 * theta);                   // |E> component
  return b;
}

double conditional_entropy_ket(const Eigen::Matrix4cd& rho, const Eigen::Vector2cd& ket,
                               MeasuredSide side) {
  // Conditional block for outcome |k>: <a k|rho|a' k> (side B) or
  // <k b|rho|k b'> (side A). The complementary outcome uses the orthogonal
  // ket built from the projector completeness I - |k><k|.
  const Eigen::Vector2cd orth = (Eigen::Vector2cd() << -std::conj(ket[1]), std::conj(ket[0])).finished();
  double total = 0.0;
  for (const auto* k : {&ket, &orth}) {
    Eigen::Matrix2cd block;
    if (side == MeasuredSide::B) {
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
          Complex acc{0.0, 0.0};
          for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
              acc += std::conj((*k)[b]) * rho(2 * a + b, 2 * ap + bp) * (*k)[bp];
          block(a, ap) = acc;
        }
    } else {
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) {
          Complex acc{0.0, 0.0};
          for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap)
              acc += std::conj((*k)[a]) * rho(2 * a + b, 2 * ap + bp) * (*k)[ap];
          block(b, bp) = acc;
        }
    }
    const double p = block(0, 0).real() + block(1, 1).real();
    if (p >= 1e-12) total += scaled_entropy_2x2(block, p);
  }
  return total;
}

}  // namespace detail

double mutual_information(const PairState& pair) {
  const double sa = von_neumann_entropy(detail::marginal_a(pair.elements));
  const double sb = von_neumann_entropy(detail::marginal_b(pair.elements));
  const double sab = von_neumann_entropy(pair.elements);
  return sa + sb - sab;
}

double concurrence(const PairState& pair) {
  static const Eigen::Matrix4cd yy = [] {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 3) = -1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 0) = -1.0;
    return m;
  }();
  const Eigen::Matrix4cd& rho = pair.elements;
  const Eigen::Matrix4cd flipped = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * flipped, false);
  std::array<double, 4> roots{};
  for (int i = 0; i < 4; ++i) {
    const Complex ev = es.eigenvalues()[i];
    if (std::abs(ev.imag()) >= 1e-8 || ev.real() < -kClampTol)
      throw NumericalError("invalid spin-flip spectrum");
    roots[i] = std::sqrt(std::max(0.0, ev.real()));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> measurement_projectors(
    const MeasurementBasis& basis) {
  const Eigen::Vector2cd b = detail::basis_ket(basis.theta, basis.phi);
  const Eigen::Matrix2cd b1 = b * b.adjoint();
  return {b1, Eigen::Matrix2cd::Identity() - b1};
}

double conditional_entropy(const PairState& pair, const Eigen::Matrix2cd& b1,
                           const Eigen::Matrix2cd& b2, MeasuredSide side) {
  const Eigen::Matrix4cd& rho = pair.elements;
  const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
  double total = 0.0;
  for (const auto* proj : {&b1, &b2}) {
    Eigen::Matrix4cd full = Eigen::Matrix4cd::Zero();
    // I (x) B or B (x) I depending on the measured factor
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int ap = 0; ap < 2; ++ap)
          for (int bp = 0; bp < 2; ++bp)
            full(2 * a + b, 2 * ap + bp) = (side == MeasuredSide::B)
                                               ? eye(a, ap) * (*proj)(b, bp)
                                               : (*proj)(a, ap) * eye(b, bp);
    const Eigen::Matrix4cd cond = full * rho * full;
    const double p = cond.trace().real();
    if (p < 1e-12) continue;
    total += p * von_neumann_entropy(Eigen::MatrixXcd(cond / p));
  }
  return total;
}

double conditional_entropy(const PairState& pair, const MeasurementBasis& basis,
                           MeasuredSide side) {
  auto [b1, b2] = measurement_projectors(basis);
  return conditional_entropy(pair, b1, b2, side);
}

namespace {

// Nelder-Mead on the conditional entropy landscape; 2D, smooth, periodic in
// both angles through the trig parameterization, so vertices roam freely.
struct Simplex2d {
  std::array<Eigen::Vector2d, 3> x;
  std::array<double, 3> f;
};

MeasurementBasis refine_minimum(const Eigen::Matrix4cd& rho, MeasuredSide side,
                                double theta0, double phi0, double step, double* best_val) {
  auto eval = [&](const Eigen::Vector2d& p) {
    return detail::conditional_entropy_ket(rho, detail::basis_ket(p[0], p[1]), side);
  };
  Simplex2d s;
  s.x[0] = {theta0, phi0};
  s.x[1] = {theta0 + step, phi0};
  s.x[2] = {theta0, phi0 + step};
  for (int i = 0; i < 3; ++i) s.f[i] = eval(s.x[i]);

  for (int iter = 0; iter < 500; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
    const int lo = order[0], mid = order[1], hi = order[2];
    const double diameter = std::max((s.x[lo] - s.x[hi]).norm(), (s.x[lo] - s.x[mid]).norm());
    if (diameter < 1e-6) break;

    const Eigen::Vector2d centroid = 0.5 * (s.x[lo] + s.x[mid]);
    const Eigen::Vector2d refl = centroid + (centroid - s.x[hi]);
    const double f_refl = eval(refl);
    if (f_refl < s.f[lo]) {
      const Eigen::Vector2d exp_pt = centroid + 2.0 * (centroid - s.x[hi]);
      const double f_exp = eval(exp_pt);
      if (f_exp < f_refl) {
        s.x[hi] = exp_pt;
        s.f[hi] = f_exp;
      } else {
        s.x[hi] = refl;
        s.f[hi] = f_refl;
      }
    } else if (f_refl < s.f[mid]) {
      s.x[hi] = refl;
      s.f[hi] = f_refl;
    } else {
      const Eigen::Vector2d contr = centroid + 0.5 * (s.x[hi] - centroid);
      const double f_contr = eval(contr);
      if (f_contr < s.f[hi]) {
        s.x[hi] = contr;
        s.f[hi] = f_contr;
      } else {
        for (int i : {mid, hi}) {
          s.x[i] = s.x[lo] + 0.5 * (s.x[i] - s.x[lo]);
          s.f[i] = eval(s.x[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (s.f[i] < s.f[best]) best = i;
  *best_val = s.f[best];

  // fold the winner back into the canonical ranges;
  // b(2pi - theta, phi + pi) equals b(theta, phi) up to global phase
  double theta = std::fmod(s.x[best][0], 2.0 * kPi);
  double phi = s.x[best][1];
  if (theta < 0.0) theta += 2.0 * kPi;
  if (theta > kPi) {
    theta = 2.0 * kPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  return MeasurementBasis{theta, phi};
}

}  // namespace

std::pair<double, MeasurementBasis> classical_correlation(const PairState& pair,
                                                          MeasuredSide side) {
  const Eigen::Matrix4cd& rho = pair.elements;
  const double s_unmeasured = von_neumann_entropy(
      side == MeasuredSide::B ? detail::marginal_a(rho) : detail::marginal_b(rho));

  // coarse 24 x 48 grid over cell centers, then simplex refinement
  constexpr int kThetaCells = 24;
  constexpr int kPhiCells = 48;
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0, best_phi = 0.0;
  for (int i = 0; i < kThetaCells; ++i) {
    const double theta = (i + 0.5) * kPi / kThetaCells;
    for (int j = 0; j < kPhiCells; ++j) {
      const double phi = (j + 0.5) * 2.0 * kPi / kPhiCells;
      const double v = detail::conditional_entropy_ket(rho, detail::basis_ket(theta, phi), side);
      if (v < best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  double refined = best;
  MeasurementBasis basis =
      refine_minimum(rho, side, best_theta, best_phi, 0.5 * kPi / kThetaCells, &refined);

  double j = s_unmeasured - refined;
  if (j < 0.0) {
    if (j < -kClampTol) throw NumericalError("classical correlation negative");
    j = 0.0;
  }
  return {j, basis};
}

DiscordReport discord(const PairState& pair, MeasuredSide side) {
  const double info = mutual_information(pair);
  auto [jval, basis] = classical_correlation(pair, side);
  double d = info - jval;
  if (d < 0.0) {
    if (d < -kClampTol) throw NumericalError("optimizer failed to reach sup");
    jval = info;  // keep D = I - J exact after clamping
    d = 0.0;
  }
  return DiscordReport{info, jval, d, basis, side};
}

}  // namespace polsim
