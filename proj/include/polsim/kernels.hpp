#pragma once

// Entrywise Liouvillian kernel, column-major storage. The serial and OpenMP
// drivers share the same per-entry accumulation, so their outputs are
// bitwise identical regardless of thread count; the serial driver is the
// reference the tests and the benchmark compare against.

#include <complex>
#include <cstdint>

namespace polsim::kernels {

struct FiberTerm {
  std::uint32_t mask_a;  // site j bit
  std::uint32_t mask_b;  // site j+1 bit
  double gn;             // gamma_j * n_j
  double gp;             // gamma_j * (n_j + 1)
};

// One output entry of L[rho] = sum_j gn_j (2 J^+ rho J^- - J^- J^+ rho - rho J^- J^+)
//                            + gp_j (2 J^- rho J^+ - J^+ J^- rho - rho J^+ J^-),
// J^- = sigma_j^- + sigma_{j+1}^-, written as bit gathers on (r, c).
inline std::complex<double> liouvillian_entry(const std::complex<double>* rho, long dim, long r,
                                              long c, const FiberTerm* fibers, int n_fibers) {
  using C = std::complex<double>;
  const auto at = [&](long row, long col) -> const C& { return rho[row + col * dim]; };
  C acc{0.0, 0.0};
  for (int f = 0; f < n_fibers; ++f) {
    const long ma = fibers[f].mask_a;
    const long mb = fibers[f].mask_b;
    const bool ra = r & ma, rb = r & mb, ca = c & ma, cb = c & mb;
    if (fibers[f].gp != 0.0) {  // gamma (n+1) group: jump J^-
      C sand{0.0, 0.0};
      if (!ra && !ca) sand += at(r | ma, c | ma);
      if (!ra && !cb) sand += at(r | ma, c | mb);
      if (!rb && !ca) sand += at(r | mb, c | ma);
      if (!rb && !cb) sand += at(r | mb, c | mb);
      C lhs = static_cast<double>(ra + rb) * at(r, c);  // J^+ J^- rho
      if (ra != rb) lhs += at(r ^ ma ^ mb, c);
      C rhs = static_cast<double>(ca + cb) * at(r, c);  // rho J^+ J^-
      if (ca != cb) rhs += at(r, c ^ ma ^ mb);
      acc += fibers[f].gp * (2.0 * sand - lhs - rhs);
    }
    if (fibers[f].gn != 0.0) {  // gamma n group: jump J^+
      C sand{0.0, 0.0};
      if (ra && ca) sand += at(r ^ ma, c ^ ma);
      if (ra && cb) sand += at(r ^ ma, c ^ mb);
      if (rb && ca) sand += at(r ^ mb, c ^ ma);
      if (rb && cb) sand += at(r ^ mb, c ^ mb);
      C lhs = static_cast<double>(!ra + !rb) * at(r, c);  // J^- J^+ rho
      if (ra != rb) lhs += at(r ^ ma ^ mb, c);
      C rhs = static_cast<double>(!ca + !cb) * at(r, c);  // rho J^- J^+
      if (ca != cb) rhs += at(r, c ^ ma ^ mb);
      acc += fibers[f].gn * (2.0 * sand - lhs - rhs);
    }
  }
  return acc;
}

void liouvillian_serial(const std::complex<double>* rho, std::complex<double>* out, long dim,
                        const FiberTerm* fibers, int n_fibers);

// OpenMP over columns; falls back to the serial loop when built without OpenMP.
void liouvillian_parallel(const std::complex<double>* rho, std::complex<double>* out, long dim,
                          const FiberTerm* fibers, int n_fibers);

// Dimension at and above which the parallel driver is worth the fork-join.
inline constexpr long kParallelDim = 256;

}  // namespace polsim::kernels
