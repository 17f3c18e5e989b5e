#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spinsim/experiments.hpp"
#include "spinsim/params.hpp"
#include "spinsim/pulse.hpp"

namespace spinsim {

enum class ExperimentKind { None, Odmr, Echo, Polarize, Transfer, Store };

struct SweepSpec {
  double start = 0.0;  // SI after loading
  double stop = 0.0;
  int points = 0;
  // odmr only: grid derived from the 0 <-> +1 transitions instead of start/stop
  std::optional<double> branch_span;
};

struct RunConfig {
  SystemParams params;
  std::optional<std::string> preset_name;
  ExperimentKind kind = ExperimentKind::None;
  SweepSpec sweep;
  int polarize_steps = 4;
  cplx transfer_p{1.0, 0.0};
  cplx transfer_q{0.0, 0.0};
  PulseSpec pulse;
  std::optional<DephasingSpec> dephasing;
  std::uint64_t seed;
  std::string output;  // empty = stdout

  RunConfig();
};

// Parses and fully validates a JSON config with explicit units. Unknown keys
// are rejected by name; parse errors carry line and column.
RunConfig load_config(const std::string& path);

// explicit-form params block (cartesian field, Hz tensor); loadable as the
// "params" object of a run configuration
std::string params_to_json(const SystemParams& params);

}  // namespace spinsim
