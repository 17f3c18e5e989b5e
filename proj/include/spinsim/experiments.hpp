#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinsim/engine.hpp"
#include "spinsim/fitting.hpp"
#include "spinsim/params.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

struct SweepResult {
  std::string axis_name;
  std::string axis_unit;
  std::vector<double> axis_values;
  std::vector<double> signal;  // probabilities in [0, 1]
  SystemParams params_snapshot;
  std::uint64_t seed = 0;

  void validate() const;
};

// MW pulse used by the protocols; ideal = instantaneous selective rotation
struct PulseSpec {
  double rabi = 2e6;          // Hz
  double duration = 250e-9;   // s (pi pulse at the default rabi)
  bool ideal = false;
};

struct PolarizationResult {
  double p = 0.0;               // Eq.-style amplitude asymmetry
  double p_down = 0.0;          // lower-frequency dip amplitude
  double p_up = 0.0;
  int n_steps = 0;
  double p_max_geometric = 0.0;  // 1 - (a^2 - b^2)^2
  FitResult fit;                 // the double-Lorentzian probe fit
};

struct EchoAnalysis {
  double nu0_prime = 0.0;          // modulation frequency, total-tau convention
  std::optional<double> t_se;      // envelope constant when dephasing was on
  FitResult cosine_fit;
  std::optional<FitResult> decay_fit;
};

std::vector<double> linspace(double start, double stop, int points);

// readout vs drive frequency: init -> pi pulse at f -> readout
SweepResult pulsed_odmr(const SystemParams& params, const std::vector<double>& frequencies,
                        const PulseSpec& pulse, const std::optional<DephasingSpec>& dephasing,
                        std::uint64_t seed = 0);

// frequency grid straddling both nuclear-conserving dips of the 0 <-> +1 branch
std::vector<double> odmr_branch_range(const SystemParams& params, double span_hz, int points);

// Hahn echo, tau = total free evolution (pi at tau/2). Hard pulses in the
// hard-pulse limit; the fast hyperfine ESEEM lines are averaged over one
// period per point (detection-bandwidth smoothing). electron_sigma maps to a
// contrast envelope exp(-tau/T_SE), T_SE = sqrt(2)/(2 pi sigma).
SweepResult spin_echo(const SystemParams& params, const std::vector<double>& taus,
                      const std::optional<DephasingSpec>& dephasing, std::uint64_t seed = 0);

EchoAnalysis analyze_echo(const SweepResult& echo, bool with_envelope);

// n x [init -> selective pi -> wait 1/(2 nu0')] then a pulsed-ODMR probe of
// the 0 <-> +1 branch, double-Lorentzian fit, p = (p_dn - p_up)/(p_dn + p_up)
PolarizationResult polarize(const SystemParams& params, int n_steps, const PulseSpec& pulse,
                            const std::optional<DephasingSpec>& dephasing, std::uint64_t seed = 0);

// |0'> (x) (p |dn> + q |up>) -> selective pi -> wait 1/(2 nu0');
// overlap fidelity of the electron reduced state with p|1> + q|0'>, up to the
// deterministic free-precession phase
double state_transfer(const SystemParams& params, cplx p_amp, cplx q_amp, const PulseSpec& pulse);

// init -> selective pi -> wait tau -> selective pi -> readout
SweepResult storage(const SystemParams& params, const std::vector<double>& taus,
                    const PulseSpec& pulse, const std::optional<DephasingSpec>& dephasing,
                    std::uint64_t seed = 0);

// ideal-pulse storage signal: (1 + a^4 + b^4 + 2 a^2 b^2 cos(2 pi nu0' tau)) / 2
double storage_closed_form(double a, double b, double nu0_prime, double tau);

}  // namespace spinsim
