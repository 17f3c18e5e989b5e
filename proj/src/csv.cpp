#include "spinsim/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinsim/version.hpp"

namespace spinsim {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string canonical_params(const SystemParams& p) {
  std::ostringstream os;
  os << format_number(p.constants.mu_e) << '|' << format_number(p.constants.mu_n) << '|'
     << format_number(p.constants.h) << '|' << format_number(p.constants.d_gs) << '|'
     << format_number(p.field.bx) << '|' << format_number(p.field.by) << '|'
     << format_number(p.field.bz);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) os << '|' << format_number(p.hyperfine(i, j));
  return os.str();
}

void header(std::ostream& os, const SystemParams& params, std::uint64_t seed) {
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016" PRIx64, config_hash(params, seed));
  os << "# spinsim " << kVersion << "\n";
  os << "# config-hash: " << hex << "\n";
  os << "# seed: " << seed << "\n";
  os << "# field-T: " << format_number(params.field.bx) << ' ' << format_number(params.field.by)
     << ' ' << format_number(params.field.bz) << "\n";
}

}  // namespace

std::uint64_t config_hash(const SystemParams& params, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL;
  h = fnv1a(h, canonical_params(params));
  h = fnv1a(h, std::to_string(seed));
  return h;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  header(os, result.params_snapshot, result.seed);
  os << result.axis_name << '_' << result.axis_unit << ",signal\n";
  for (std::size_t i = 0; i < result.axis_values.size(); ++i)
    os << format_number(result.axis_values[i]) << ',' << format_number(result.signal[i]) << "\n";
}

void write_fit_keyvalue(std::ostream& os, const FitResult& fit) {
  os << "model=" << fit.model << "\n";
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    os << fit.names[i] << '=' << format_number(fit.parameters[i]) << "\n";
    os << fit.names[i] << "_stderr=" << format_number(fit.std_errors[i]) << "\n";
  }
  os << "residual_norm=" << format_number(fit.residual_norm) << "\n";
  os << "converged=" << (fit.converged ? 1 : 0) << "\n";
  os << "iterations=" << fit.iterations << "\n";
  for (const auto& f : fit.flags) os << "flag=" << f << "\n";
}

void write_fit_csv(std::ostream& os, const FitResult& fit, std::uint64_t seed) {
  os << "# spinsim " << kVersion << "\n";
  os << "# seed: " << seed << "\n";
  os << "model";
  for (const auto& n : fit.names) os << ',' << n << ',' << n << "_stderr";
  os << ",residual_norm,converged,iterations\n";
  os << fit.model;
  for (std::size_t i = 0; i < fit.names.size(); ++i)
    os << ',' << format_number(fit.parameters[i]) << ',' << format_number(fit.std_errors[i]);
  os << ',' << format_number(fit.residual_norm) << ',' << (fit.converged ? 1 : 0) << ','
     << fit.iterations << "\n";
}

void write_polarization_csv(std::ostream& os, const PolarizationResult& result,
                            const SystemParams& params, std::uint64_t seed) {
  header(os, params, seed);
  os << "p,p_down,p_up,n_steps,p_max_geometric\n";
  os << format_number(result.p) << ',' << format_number(result.p_down) << ','
     << format_number(result.p_up) << ',' << result.n_steps << ','
     << format_number(result.p_max_geometric) << "\n";
}

void write_perturbation_keyvalue(std::ostream& os, const PerturbationReport& rep, double tolerance) {
  os << "nu0_closed_Hz=" << format_number(rep.nu0_closed) << "\n";
  os << "nu0_exact_Hz=" << format_number(rep.nu0_exact) << "\n";
  os << "relative_error=" << format_number(rep.relative_error) << "\n";
  os << "enhancement=" << format_number(rep.enhancement) << "\n";
  os << "regime_ok=" << (rep.regime_ok ? 1 : 0) << "\n";
  os << "tolerance=" << format_number(tolerance) << "\n";
  os << "within_tolerance=" << (rep.within_tolerance ? 1 : 0) << "\n";
}

void write_perturbation_csv(std::ostream& os, const PerturbationReport& rep, double tolerance,
                            const SystemParams& params, std::uint64_t seed) {
  header(os, params, seed);
  os << "nu0_closed_Hz,nu0_exact_Hz,relative_error,enhancement,regime_ok,tolerance\n";
  os << format_number(rep.nu0_closed) << ',' << format_number(rep.nu0_exact) << ','
     << format_number(rep.relative_error) << ',' << format_number(rep.enhancement) << ','
     << (rep.regime_ok ? 1 : 0) << ',' << format_number(tolerance) << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace spinsim
