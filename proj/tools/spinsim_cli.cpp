// spinsim - command line front end for the coupled NV / 13C simulator.
// Subcommands map one-to-one onto the supported experiments plus fitting and
// the closed-form-vs-exact validation harness.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinsim/config.hpp"
#include "spinsim/csv.hpp"
#include "spinsim/engine.hpp"
#include "spinsim/experiments.hpp"
#include "spinsim/fitting.hpp"
#include "spinsim/perturbation.hpp"
#include "spinsim/version.hpp"

using namespace spinsim;

namespace {

void emit(const std::string& path, const std::string& contents) {
  if (path.empty())
    std::cout << contents;
  else
    write_file(path, contents);
}

std::vector<double> sweep_axis(const RunConfig& cfg) {
  if (cfg.sweep.branch_span)
    return odmr_branch_range(cfg.params, *cfg.sweep.branch_span, cfg.sweep.points);
  return linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points);
}

RunConfig load_for(const std::string& path, ExperimentKind expected) {
  RunConfig cfg = load_config(path);
  if (cfg.kind != expected && cfg.kind != ExperimentKind::None)
    throw ConfigError("config experiment kind does not match the subcommand");
  return cfg;
}

int run_odmr(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = load_for(config_path, ExperimentKind::Odmr);
  if (cfg.kind == ExperimentKind::None) throw ConfigError("odmr: config lacks an experiment block");
  SweepResult r = pulsed_odmr(cfg.params, sweep_axis(cfg), cfg.pulse, cfg.dephasing, cfg.seed);
  std::ostringstream os;
  write_sweep_csv(os, r);
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return 0;
}

int run_echo(const std::string& config_path, const std::string& out_override, bool analyze) {
  RunConfig cfg = load_for(config_path, ExperimentKind::Echo);
  if (cfg.kind == ExperimentKind::None) throw ConfigError("echo: config lacks an experiment block");
  SweepResult r = spin_echo(cfg.params, sweep_axis(cfg), cfg.dephasing, cfg.seed);
  std::ostringstream os;
  write_sweep_csv(os, r);
  if (analyze) {
    const bool env = cfg.dephasing && cfg.dephasing->electron_sigma > 0;
    EchoAnalysis an = analyze_echo(r, env);
    os << "# nu0_prime_Hz: " << format_number(an.nu0_prime) << "\n";
    if (an.t_se) os << "# t_se_s: " << format_number(*an.t_se) << "\n";
  }
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return 0;
}

int run_polarize(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = load_for(config_path, ExperimentKind::Polarize);
  PolarizationResult r = polarize(cfg.params, cfg.polarize_steps, cfg.pulse, cfg.dephasing, cfg.seed);
  std::ostringstream os;
  write_polarization_csv(os, r, cfg.params, cfg.seed);
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return 0;
}

int run_transfer(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = load_for(config_path, ExperimentKind::Transfer);
  const double f = state_transfer(cfg.params, cfg.transfer_p, cfg.transfer_q, cfg.pulse);
  std::ostringstream os;
  os << "fidelity=" << format_number(f) << "\n";
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return 0;
}

int run_store(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = load_for(config_path, ExperimentKind::Store);
  if (cfg.kind == ExperimentKind::None) throw ConfigError("store: config lacks an experiment block");
  SweepResult r = storage(cfg.params, sweep_axis(cfg), cfg.pulse, cfg.dephasing, cfg.seed);
  std::ostringstream os;
  write_sweep_csv(os, r);
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return 0;
}

int run_validate(const std::string& config_path, double tolerance, const std::string& out_override,
                 bool csv) {
  RunConfig cfg = load_config(config_path);
  PerturbationReport rep = validate_perturbation(cfg.params, tolerance);
  std::ostringstream os;
  if (csv)
    write_perturbation_csv(os, rep, tolerance, cfg.params, cfg.seed);
  else
    write_perturbation_keyvalue(os, rep, tolerance);
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return rep.regime_ok && !rep.within_tolerance ? 3 : 0;
}

int run_fit(const std::string& data_path, const std::string& model, const std::string& out_override,
            bool csv) {
  std::ifstream in(data_path);
  if (!in) throw IoError("cannot open data file '" + data_path + "'");
  std::vector<double> x, y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (ls >> a >> b) {
      x.push_back(a);
      y.push_back(b);
    } else if (x.empty()) {
      continue;  // header row
    } else {
      throw ConfigError("fit: malformed data line '" + line + "'");
    }
  }
  if (x.size() < 4) throw ConfigError("fit: need at least 4 data rows");

  FitResult fit;
  if (model == "lorentzian2")
    fit = fit_lorentzians(x, y, 2);
  else if (model == "lorentzian4")
    fit = fit_lorentzians(x, y, 4);
  else if (model == "expcos")
    fit = fit_damped_cosine(x, y, Envelope::Exponential);
  else if (model == "gausscos")
    fit = fit_damped_cosine(x, y, Envelope::Gaussian);
  else
    throw ConfigError("fit: unknown model '" + model + "'");

  std::ostringstream os;
  if (csv)
    write_fit_csv(os, fit, 0);
  else
    write_fit_keyvalue(os, fit);
  emit(out_override, os.str());
  return fit.converged ? 0 : 3;
}

int run_sequence_cmd(const std::string& config_path, const std::string& sequence_path,
                     const std::string& out_override) {
  RunConfig cfg = load_config(config_path);
  PulseSequence seq = load_sequence(sequence_path);
  std::vector<std::string> warnings;
  const double p = run_sequence(seq, SpinState::maximally_mixed(), cfg.params, cfg.dephasing,
                                cfg.seed, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::ostringstream os;
  os << "probability=" << format_number(p) << "\n";
  emit(out_override.empty() ? cfg.output : out_override, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinsim: coupled NV-electron / 13C-nuclear spin simulator"};
  app.set_version_flag("--version", std::string("spinsim ") + kVersion);
  app.require_subcommand(1);

  std::string config_path, out_path, sequence_path, fit_data, fit_model = "expcos";
  double tolerance = 0.10;
  bool as_csv = false, analyze = false;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    if (needs_config)
      sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--output", out_path, "output file (default: config 'output' or stdout)");
  };

  add_common(app.add_subcommand("odmr", "pulsed ODMR frequency sweep"));
  auto* echo = app.add_subcommand("echo", "Hahn-echo tau sweep");
  add_common(echo);
  echo->add_flag("--analyze", analyze, "append fitted modulation frequency / decay");
  add_common(app.add_subcommand("polarize", "nuclear polarization protocol + probe"));
  add_common(app.add_subcommand("transfer", "electron <- nuclear state transfer fidelity"));
  add_common(app.add_subcommand("store", "nuclear storage tau sweep"));
  auto* validate = app.add_subcommand("validate-perturbation", "closed form vs exact diagonalization");
  add_common(validate);
  validate->add_option("--tolerance", tolerance, "relative-error tolerance (default 0.10)");
  validate->add_flag("--csv", as_csv, "emit a CSV row instead of key=value text");
  auto* fit = app.add_subcommand("fit", "nonlinear least squares on a two-column CSV");
  fit->add_option("--data", fit_data, "two-column CSV (x, y)")->required();
  fit->add_option("--model", fit_model, "lorentzian2|lorentzian4|expcos|gausscos");
  fit->add_flag("--csv", as_csv, "emit a CSV row instead of key=value text");
  fit->add_option("--output", out_path, "output file (default stdout)");
  auto* runsub = app.add_subcommand("run", "run a pulse-sequence file");
  add_common(runsub);
  runsub->add_option("--sequence", sequence_path, "JSON pulse sequence")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("odmr")) return run_odmr(config_path, out_path);
    if (app.got_subcommand("echo")) return run_echo(config_path, out_path, analyze);
    if (app.got_subcommand("polarize")) return run_polarize(config_path, out_path);
    if (app.got_subcommand("transfer")) return run_transfer(config_path, out_path);
    if (app.got_subcommand("store")) return run_store(config_path, out_path);
    if (app.got_subcommand("validate-perturbation"))
      return run_validate(config_path, tolerance, out_path, as_csv);
    if (app.got_subcommand("fit")) return run_fit(fit_data, fit_model, out_path, as_csv);
    if (app.got_subcommand("run")) return run_sequence_cmd(config_path, sequence_path, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
