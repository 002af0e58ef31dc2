#include "polsim/kernels.hpp"

namespace polsim::kernels {

void liouvillian_serial(const std::complex<double>* rho, std::complex<double>* out, long dim,
                        const FiberTerm* fibers, int n_fibers) {
  for (long c = 0; c < dim; ++c)
    for (long r = 0; r < dim; ++r)
      out[r + c * dim] = liouvillian_entry(rho, dim, r, c, fibers, n_fibers);
}

void liouvillian_parallel(const std::complex<double>* rho, std::complex<double>* out, long dim,
                          const FiberTerm* fibers, int n_fibers) {
#pragma omp parallel for schedule(static)
  for (long c = 0; c < dim; ++c)
    for (long r = 0; r < dim; ++r)
      out[r + c * dim] = liouvillian_entry(rho, dim, r, c, fibers, n_fibers);
}

}  // namespace polsim::kernels
