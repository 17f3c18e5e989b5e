#include "spinsim/simd/kernels.hpp"

#include <cmath>

namespace spinsim::simd::detail {

void cmul6_scalar(const cplx* a, const cplx* b, cplx* c) {
  // column-major: c[:,j] = sum_k a[:,k] * b(k,j)
  for (int j = 0; j < 6; ++j) {
    cplx* cj = c + 6 * j;
    for (int i = 0; i < 6; ++i) cj[i] = cplx(0, 0);
    for (int k = 0; k < 6; ++k) {
      const cplx bkj = b[6 * j + k];
      const cplx* ak = a + 6 * k;
      for (int i = 0; i < 6; ++i) cj[i] += ak[i] * bkj;
    }
  }
}

void lorentzian_eval_scalar(const double* x, std::size_t n, double base, const double* amp,
                            const double* center, const double* width, int ndips, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = base;
    for (int d = 0; d < ndips; ++d) {
      const double hw = 0.5 * width[d];
      const double dx = x[i] - center[d];
      v -= amp[d] * hw * hw / (dx * dx + hw * hw);
    }
    y[i] = v;
  }
}

void axpy_scalar(double* y, const double* x, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += w * x[i];
}

}  // namespace spinsim::simd::detail

namespace spinsim::simd {

void damped_cosine_eval(const double* t, std::size_t n, double y0, double amp, double nu,
                        double phi, double rate, bool gaussian_env, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double rt = rate * t[i];
    const double env = gaussian_env ? std::exp(-rt * rt) : std::exp(-rt);
    y[i] = y0 + amp * std::cos(2.0 * kPi * nu * t[i] + phi) * env;
  }
}

}  // namespace spinsim::simd
