#include "spinsim/simd/kernels.hpp"

#include <atomic>

namespace spinsim::simd {

namespace detail {
void cmul6_scalar(const cplx*, const cplx*, cplx*);
void lorentzian_eval_scalar(const double*, std::size_t, double, const double*, const double*,
                            const double*, int, double*);
void axpy_scalar(double*, const double*, double, std::size_t);
#if defined(__x86_64__) || defined(_M_X64)
void cmul6_avx2(const cplx*, const cplx*, cplx*);
void lorentzian_eval_avx2(const double*, std::size_t, double, const double*, const double*,
                          const double*, int, double*);
void axpy_avx2(double*, const double*, double, std::size_t);
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Backend> g_backend{cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

bool backend_supported(Backend b) {
  return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

void set_backend(Backend b) {
  if (!backend_supported(b)) throw NumericError("simd backend not supported on this CPU");
  g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void cmul6(const cplx* a, const cplx* b, cplx* c) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::Avx2) return detail::cmul6_avx2(a, b, c);
#endif
  detail::cmul6_scalar(a, b, c);
}

void lorentzian_eval(const double* x, std::size_t n, double base, const double* amp,
                     const double* center, const double* width, int ndips, double* y) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::Avx2)
    return detail::lorentzian_eval_avx2(x, n, base, amp, center, width, ndips, y);
#endif
  detail::lorentzian_eval_scalar(x, n, base, amp, center, width, ndips, y);
}

void axpy(double* y, const double* x, double w, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::Avx2) return detail::axpy_avx2(y, x, w, n);
#endif
  detail::axpy_scalar(y, x, w, n);
}

}  // namespace spinsim::simd
