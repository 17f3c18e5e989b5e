#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinsim/types.hpp"

namespace spinsim {

enum class Envelope { Exponential, Gaussian };

struct FitResult {
  std::string model;                    // "lorentzian2", "lorentzian4", "expcos", "gausscos", "expdecay"
  std::vector<std::string> names;       // parameter order, stable per model
  std::vector<double> parameters;
  std::vector<double> std_errors;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> flags;       // e.g. "T-at-upper-bound"

  double get(const std::string& name) const;
  double err(const std::string& name) const;
  bool has_flag(const std::string& f) const;
};

// y = base - sum_i A_i (w_i/2)^2 / ((x - c_i)^2 + (w_i/2)^2)
// parameters: base, then (amp_i, center_i, width_i) per dip, sorted by center.
// init (optional): same layout; auto-initialized by a local-minima scan.
FitResult fit_lorentzians(const std::vector<double>& x, const std::vector<double>& y, int n_dips,
                          const std::optional<std::vector<double>>& init = std::nullopt);

// y = y0 + A cos(2 pi nu t + phi) env(t;T); parameters: y0, A, nu, phi, T.
// Frequency initialized from the dominant DFT peak of de-trended data with a
// tie-break toward lower frequency. A fitted T beyond 10x the data span is
// reported at that bound with flag "T-at-upper-bound".
FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y,
                            Envelope envelope,
                            const std::optional<std::vector<double>>& init = std::nullopt);

// y = y0 + A exp(-t/T); parameters: y0, A, T (envelope pre-fit helper)
FitResult fit_exp_decay(const std::vector<double>& t, const std::vector<double>& y);

// p = (p_down - p_up) / (p_down + p_up); the lower-frequency dip is the
// |dn>-conserving transition of the scanned branch
double polarization_from_fit(const FitResult& fit, double noise_floor = 1e-9);

// two-level Boltzmann inversion T = h nu / (k_B ln((1+|p|)/(1-|p|)))
double spin_temperature(double p, double reference_frequency);

// dominant DFT frequency of de-trended data (exposed for reuse/testing)
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace spinsim
