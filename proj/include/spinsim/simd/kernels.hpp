#pragma once

#include <cstddef>

#include "spinsim/types.hpp"

namespace spinsim::simd {

enum class Backend { Scalar, Avx2 };

// Backend in effect; auto-detected on first use, overridable for testing.
Backend active_backend();
void set_backend(Backend b);
bool backend_supported(Backend b);
const char* backend_name(Backend b);

// c = a * b for column-major 6x6 complex matrices; c must not alias a or b.
void cmul6(const cplx* a, const cplx* b, cplx* c);

// y[i] = base - sum_d amp[d] * (w/2)^2 / ((x[i]-c[d])^2 + (w/2)^2)
void lorentzian_eval(const double* x, std::size_t n, double base, const double* amp,
                     const double* center, const double* width, int ndips, double* y);

// y[i] += w * x[i]
void axpy(double* y, const double* x, double w, std::size_t n);

// y[i] = y0 + amp * cos(2 pi nu t[i] + phi) * env, env = exp(-rate t) or
// exp(-(rate t)^2). Transcendental-bound, intentionally scalar on every
// backend; listed here so the fit models share one evaluation path.
void damped_cosine_eval(const double* t, std::size_t n, double y0, double amp, double nu,
                        double phi, double rate, bool gaussian_env, double* y);

}  // namespace spinsim::simd
