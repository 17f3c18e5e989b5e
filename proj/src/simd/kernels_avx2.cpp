// AVX2 + FMA variants. Built with -mavx2 -mfma in its own translation unit;
// only ever called after the runtime CPU check in dispatch.cpp.
#include "spinsim/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace spinsim::simd::detail {

namespace {

// acc += a * b for interleaved complex lanes, b = (br, bi) broadcast
inline __m256d cplx_fma(__m256d acc, __m256d a, __m256d br, __m256d bi) {
  const __m256d aswap = _mm256_permute_pd(a, 0x5);
  const __m256d t = _mm256_mul_pd(aswap, bi);
  // even lanes: a_re*br - a_im*bi ; odd lanes: a_im*br + a_re*bi
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(a, br, t));
}

}  // namespace

void cmul6_avx2(const cplx* a, const cplx* b, cplx* c) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (int j = 0; j < 6; ++j) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    for (int k = 0; k < 6; ++k) {
      const double* ak = ad + 12 * k;
      const __m256d br = _mm256_set1_pd(bd[12 * j + 2 * k]);
      const __m256d bi = _mm256_set1_pd(bd[12 * j + 2 * k + 1]);
      acc0 = cplx_fma(acc0, _mm256_loadu_pd(ak), br, bi);
      acc1 = cplx_fma(acc1, _mm256_loadu_pd(ak + 4), br, bi);
      acc2 = cplx_fma(acc2, _mm256_loadu_pd(ak + 8), br, bi);
    }
    _mm256_storeu_pd(cd + 12 * j, acc0);
    _mm256_storeu_pd(cd + 12 * j + 4, acc1);
    _mm256_storeu_pd(cd + 12 * j + 8, acc2);
  }
}

void lorentzian_eval_avx2(const double* x, std::size_t n, double base, const double* amp,
                          const double* center, const double* width, int ndips, double* y) {
  std::size_t i = 0;
  const __m256d vbase = _mm256_set1_pd(base);
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d acc = vbase;
    for (int d = 0; d < ndips; ++d) {
      const __m256d hw = _mm256_set1_pd(0.5 * width[d]);
      const __m256d hw2 = _mm256_mul_pd(hw, hw);
      const __m256d dx = _mm256_sub_pd(xv, _mm256_set1_pd(center[d]));
      const __m256d denom = _mm256_fmadd_pd(dx, dx, hw2);
      const __m256d num = _mm256_mul_pd(_mm256_set1_pd(amp[d]), hw2);
      acc = _mm256_sub_pd(acc, _mm256_div_pd(num, denom));
    }
    _mm256_storeu_pd(y + i, acc);
  }
  for (; i < n; ++i) {
    double v = base;
    for (int d = 0; d < ndips; ++d) {
      const double hw = 0.5 * width[d];
      const double dx = x[i] - center[d];
      v -= amp[d] * hw * hw / (dx * dx + hw * hw);
    }
    y[i] = v;
  }
}

void axpy_avx2(double* y, const double* x, double w, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(wv, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += w * x[i];
}

}  // namespace spinsim::simd::detail

#endif  // x86_64
