#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "spinsim/types.hpp"

namespace spinsim {

struct OpticalInit {};

struct MwPulse {
  double frequency = 0.0;  // Hz
  double rabi = 0.0;       // Hz
  double phase = 0.0;      // rad
  double duration = 0.0;   // s
};

struct Wait {
  double duration = 0.0;  // s
};

struct Readout {};

using PulseElement = std::variant<OpticalInit, MwPulse, Wait, Readout>;

struct PulseSequence {
  std::vector<PulseElement> elements;

  // durations/rabi >= 0, exactly one Readout and it is last; throws
  // ConfigError naming the offending element index
  void validate() const;
};

// Quasi-static Gaussian detuning ensemble. electron_sigma detunes the
// electron Zeeman splitting (along Sz), nuclear_sigma the nuclear splitting
// (along the 0'-manifold quantization axis). One draw per Monte-Carlo sample,
// held constant over the whole sequence.
struct DephasingSpec {
  double electron_sigma = 0.0;  // Hz
  double nuclear_sigma = 0.0;   // Hz
  int samples = 1;
  std::uint64_t seed = 0;

  bool active() const { return electron_sigma > 0.0 || nuclear_sigma > 0.0; }
  void validate() const;

  // quasi-static Gaussian detuning <-> Gaussian free-induction decay time
  static double sigma_from_t2star(double t2star) { return std::sqrt(2.0) / (2.0 * kPi * t2star); }
  static double t2star_from_sigma(double sigma) { return std::sqrt(2.0) / (2.0 * kPi * sigma); }
};

// sequence file (de)serialization, JSON with explicit units
PulseSequence load_sequence(const std::string& path);
std::string sequence_to_json(const PulseSequence& seq);

}  // namespace spinsim
