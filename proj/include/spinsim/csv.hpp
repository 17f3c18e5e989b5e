#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "spinsim/experiments.hpp"
#include "spinsim/fitting.hpp"
#include "spinsim/perturbation.hpp"

namespace spinsim {

// FNV-1a over the canonical parameter rendering; stamped into every output
std::uint64_t config_hash(const SystemParams& params, std::uint64_t seed);

void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_fit_csv(std::ostream& os, const FitResult& fit, std::uint64_t seed);
void write_fit_keyvalue(std::ostream& os, const FitResult& fit);
void write_polarization_csv(std::ostream& os, const PolarizationResult& result,
                            const SystemParams& params, std::uint64_t seed);
void write_perturbation_keyvalue(std::ostream& os, const PerturbationReport& rep, double tolerance);
void write_perturbation_csv(std::ostream& os, const PerturbationReport& rep, double tolerance,
                            const SystemParams& params, std::uint64_t seed);

// writes with IoError on failure; creates/truncates the file
void write_file(const std::string& path, const std::string& contents);

std::string format_number(double v);  // 12 significant digits

}  // namespace spinsim
