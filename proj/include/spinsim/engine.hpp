#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinsim/eigensystem.hpp"
#include "spinsim/params.hpp"
#include "spinsim/pulse.hpp"
#include "spinsim/state.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

// Dressed-basis evolution engine for one (possibly detuned) Hamiltonian.
// Pulses are evaluated in the rotating frame of the drive with the RWA
// applied to the electron drive only; waits use the exact eigenbasis
// propagator. Piecewise-constant generators throughout, no ODE stepping.
class SpinSystem {
 public:
  explicit SpinSystem(const Matrix6cd& h);

  const EigenSystem& eigs() const { return eigs_; }

  void apply_optical_init(SpinState& state) const;
  void apply_wait(SpinState& state, double duration) const;
  // warnings (if non-null) receives a note when the drive is > 1 GHz away
  // from every 0' <-> (+-1)' transition
  void apply_mw(SpinState& state, const MwPulse& p, std::vector<std::string>* warnings = nullptr) const;
  double readout(const SpinState& state) const;

  // instantaneous selective pi on |0'> x |target-branch spinor> <-> |+1, branch>
  void apply_ideal_selective_pi(SpinState& state, Branch branch = Branch::Lower) const;
  // instantaneous non-selective rotation between the 0' and +1' manifolds,
  // carrying the nuclear state (hard-pulse limit of an echo pulse)
  void apply_dressed_rotation(SpinState& state, double theta, double phi) const;

  // dressed embedding |0'> (x) spinor (spinor in the bare mI basis)
  Vector6cd embed(Manifold m, const Vector2cd& spinor) const;

  Matrix6cd wait_propagator(double duration) const;
  Matrix6cd mw_propagator(const MwPulse& p) const;

 private:
  EigenSystem eigs_;
  Matrix6cd drive_op_;   // Sx (x) 1 in the dressed basis
  Vector6d frame_gen_;   // manifold label of each dressed state
};

// readout probability of a sequence; Monte-Carlo averaged when dephasing is
// active, deterministic for a fixed seed
double run_sequence(const PulseSequence& seq, const SpinState& initial, const SystemParams& params,
                    const std::optional<DephasingSpec>& dephasing = std::nullopt,
                    std::uint64_t seed = 0, std::vector<std::string>* warnings = nullptr);

// single-channel entry points (spec surface; one-shot wrappers over SpinSystem)
SpinState optical_init(const SpinState& state, const SystemParams& params);
SpinState mw_pulse(const SpinState& state, const MwPulse& p, const SystemParams& params,
                   std::vector<std::string>* warnings = nullptr);
SpinState free_evolution(const SpinState& state, double duration, const SystemParams& params,
                         const std::optional<DephasingSpec>& dephasing = std::nullopt);
double readout(const SpinState& state, const SystemParams& params, double contrast = 1.0);

// detuned Hamiltonian used by the Monte-Carlo ensemble
Matrix6cd detuned_hamiltonian(const Matrix6cd& h_nominal, const Vec3& nuclear_axis0,
                              double delta_e, double delta_n);

}  // namespace spinsim
