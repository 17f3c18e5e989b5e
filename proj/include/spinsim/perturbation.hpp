#pragma once

#include "spinsim/eigensystem.hpp"
#include "spinsim/params.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

struct PerturbationReport {
  double nu0_closed = 0.0;       // closed-form 0'-manifold splitting, Hz
  double nu0_exact = 0.0;        // exact-diagonalization value, Hz
  double relative_error = 0.0;   // |closed - exact| / max(|exact|, 1 Hz)
  double enhancement = 0.0;      // dimensionless factor
  bool regime_ok = false;        // limit assumptions satisfied
  bool within_tolerance = true;  // relative_error <= requested tolerance
};

// Second-order corrected energies: eigenvalues of the secular part plus
// sum_k |<k|H_perp|n>|^2 / (E_n - E_k) over the secular eigenbasis.
// Throws NumericError naming the level pair when a denominator is < 1 kHz.
Vector6d second_order_energies(const SystemParams& params);

// Closed-form enhanced 0'-manifold precession frequency: norm of the
// effective nuclear field vector
//   (mu_n/h) B - (2 mu_e / (h D_gs)) (B_x alpha_xrow + B_y alpha_yrow).
// This is the second-order result the exact diagonalization reproduces;
// see README for how it relates to the scalar form it replaces.
double nu0_prime_closed_form(const SystemParams& params);

// (alpha_perp / D_gs) * (mu_e B_perp) / (mu_n |B|); errors when B = 0
double enhancement_factor(const SystemParams& params);

// regime_ok := D_gs > 10 * max(mu_e |B| / h, max |alpha|)
bool perturbation_regime_ok(const SystemParams& params);

PerturbationReport validate_perturbation(const SystemParams& params, double tolerance = 0.10);

}  // namespace spinsim
