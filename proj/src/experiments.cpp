#include "spinsim/experiments.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

#include "spinsim/hamiltonian.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/threads.hpp"

namespace spinsim {

namespace {

struct McDraw {
  double de = 0.0;
  double dn = 0.0;
};

// per-sample quasi-static detunings for sweep point `index`
std::vector<McDraw> draws_for_point(const std::optional<DephasingSpec>& deph, std::uint64_t seed,
                                    std::uint64_t index) {
  if (!deph || !deph->active()) return {McDraw{}};
  deph->validate();
  std::vector<McDraw> out(static_cast<std::size_t>(deph->samples));
  for (int s = 0; s < deph->samples; ++s) {
    Rng rng(Rng::substream(Rng::substream(seed ^ deph->seed, index), static_cast<std::uint64_t>(s)));
    out[s].de = deph->electron_sigma > 0 ? deph->electron_sigma * rng.next_gaussian() : 0.0;
    out[s].dn = deph->nuclear_sigma > 0 ? deph->nuclear_sigma * rng.next_gaussian() : 0.0;
  }
  return out;
}

// rendered linewidth of the polarization probe's dips (power-broadened scale)
constexpr double kProbeLinewidth = 2e6;

MwPulse selective_pi(const SpinSystem& nominal, const PulseSpec& pulse) {
  MwPulse p;
  p.frequency = nominal.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  p.rabi = pulse.rabi;
  p.phase = 0.0;
  p.duration = pulse.duration;
  return p;
}

void apply_protocol_pi(const SpinSystem& sys, SpinState& st, const PulseSpec& pulse,
                       const MwPulse& mw) {
  if (pulse.ideal)
    sys.apply_ideal_selective_pi(st, Branch::Lower);
  else
    sys.apply_mw(st, mw);
}

// dominant electron direction of a dressed manifold (3-vector)
Eigen::Vector3cd electron_direction(const EigenSystem& eigs, Manifold m) {
  Eigen::Matrix<cplx, 3, 2> block;
  const Vector6cd v = eigs.state(m, Branch::Lower);
  for (int e = 0; e < 3; ++e) {
    block(e, 0) = v[2 * e];
    block(e, 1) = v[2 * e + 1];
  }
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 3, 2>> svd(block, Eigen::ComputeFullU);
  Eigen::Vector3cd dir = svd.matrixU().col(0);
  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(dir[i]) > std::abs(dir[imax])) imax = i;
  if (std::abs(dir[imax]) > 0) dir *= std::conj(dir[imax]) / std::abs(dir[imax]);
  return dir;
}

}  // namespace

void SweepResult::validate() const {
  if (axis_values.size() != signal.size())
    throw NumericError("sweep result: axis/signal length mismatch");
  for (double s : signal)
    if (s < -1e-9 || s > 1.0 + 1e-9) throw NumericError("sweep result: signal outside [0, 1]");
}

std::vector<double> linspace(double start, double stop, int points) {
  if (points < 2) throw ConfigError("sweep: points must be >= 2");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i)
    v[i] = start + (stop - start) * static_cast<double>(i) / (points - 1);
  return v;
}

std::vector<double> odmr_branch_range(const SystemParams& params, double span_hz, int points) {
  const SpinSystem sys(build_hamiltonian(params));
  const double f1 = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  const double f2 = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Upper);
  const double lo = std::min(f1, f2) - 0.5 * span_hz;
  const double hi = std::max(f1, f2) + 0.5 * span_hz;
  return linspace(lo, hi, points);
}

SweepResult pulsed_odmr(const SystemParams& params, const std::vector<double>& frequencies,
                        const PulseSpec& pulse, const std::optional<DephasingSpec>& dephasing,
                        std::uint64_t seed) {
  params.validate();
  if (frequencies.size() < 2) throw ConfigError("odmr: need at least 2 frequencies");
  for (double f : frequencies)
    if (std::abs(f - params.constants.d_gs) > 1e9)
      throw ConfigError("odmr: frequency range must stay within 1 GHz of the zero-field splitting");

  const Matrix6cd h = build_hamiltonian(params);
  const SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);

  SweepResult out;
  out.axis_name = "frequency";
  out.axis_unit = "Hz";
  out.axis_values = frequencies;
  out.signal.resize(frequencies.size());
  out.params_snapshot = params;
  out.seed = seed;

  parallel_for(static_cast<int>(frequencies.size()), [&](int i) {
    const auto draws = draws_for_point(dephasing, seed, static_cast<std::uint64_t>(i));
    double acc = 0.0;
    for (const auto& d : draws) {
      const SpinSystem sys(detuned_hamiltonian(h, axis0, d.de, d.dn));
      SpinState st = SpinState::maximally_mixed();
      sys.apply_optical_init(st);
      MwPulse p;
      p.frequency = frequencies[i];
      p.rabi = pulse.rabi;
      p.duration = pulse.duration;
      if (pulse.ideal) throw ConfigError("odmr: the probe pulse must be a finite MW pulse");
      sys.apply_mw(st, p);
      acc += sys.readout(st);
    }
    out.signal[i] = acc / draws.size();
  });
  return out;
}

SweepResult spin_echo(const SystemParams& params, const std::vector<double>& taus,
                      const std::optional<DephasingSpec>& dephasing, std::uint64_t seed) {
  params.validate();
  if (taus.size() < 2) throw ConfigError("echo: need at least 2 tau values");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] <= 0) throw ConfigError("echo: tau values must be positive");
    if (i > 0 && taus[i] <= taus[i - 1]) throw ConfigError("echo: tau values must be ascending");
  }

  const Matrix6cd h = build_hamiltonian(params);
  const SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);
  const double nu1 = nominal.eigs().doublet_splitting(Manifold::PlusOne);
  const double smooth_period = nu1 > 0 ? 2.0 / nu1 : 0.0;
  constexpr int kSub = 8;

  const double t_se = dephasing && dephasing->electron_sigma > 0
                          ? DephasingSpec::t2star_from_sigma(dephasing->electron_sigma)
                          : 0.0;

  SweepResult out;
  out.axis_name = "tau";
  out.axis_unit = "s";
  out.axis_values = taus;
  out.signal.resize(taus.size());
  out.params_snapshot = params;
  out.seed = seed;

  parallel_for(static_cast<int>(taus.size()), [&](int i) {
    const auto draws = draws_for_point(dephasing, seed, static_cast<std::uint64_t>(i));
    double acc = 0.0;
    for (const auto& d : draws) {
      const SpinSystem sys(detuned_hamiltonian(h, axis0, d.de, d.dn));
      for (int k = 0; k < kSub; ++k) {
        const double tau = taus[i] + smooth_period * k / kSub;
        SpinState st = SpinState::maximally_mixed();
        sys.apply_optical_init(st);
        sys.apply_dressed_rotation(st, kPi / 2.0, 0.0);
        sys.apply_wait(st, tau / 2.0);
        sys.apply_dressed_rotation(st, kPi, 0.0);
        sys.apply_wait(st, tau / 2.0);
        sys.apply_dressed_rotation(st, kPi / 2.0, 0.0);
        acc += sys.readout(st);
      }
    }
    double p = acc / (draws.size() * kSub);
    if (t_se > 0) p = 0.5 + std::exp(-taus[i] / t_se) * (p - 0.5);
    out.signal[i] = std::clamp(p, 0.0, 1.0);
  });
  return out;
}

EchoAnalysis analyze_echo(const SweepResult& echo, bool with_envelope) {
  EchoAnalysis out;
  const auto& t = echo.axis_values;
  const auto& y = echo.signal;
  std::vector<double> resid(y.size());

  if (with_envelope) {
    FitResult dec = fit_exp_decay(t, y);
    out.t_se = dec.get("T");
    out.decay_fit = dec;
    for (std::size_t i = 0; i < y.size(); ++i)
      resid[i] = y[i] - (dec.get("y0") + dec.get("A") * std::exp(-t[i] / dec.get("T")));
  } else {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    for (std::size_t i = 0; i < y.size(); ++i) resid[i] = y[i] - mean;
  }

  const double nu_est = dominant_frequency(t, resid);
  // linear phase/amplitude solve at fixed frequency, then full refinement
  double sc = 0, ss = 0, scc = 0, sss = 0, scs = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double c = std::cos(2.0 * kPi * nu_est * t[i]);
    const double s = std::sin(2.0 * kPi * nu_est * t[i]);
    sc += resid[i] * c;
    ss += resid[i] * s;
    scc += c * c;
    sss += s * s;
    scs += c * s;
  }
  const double det = scc * sss - scs * scs;
  double a_init = 0.0, phi_init = 0.0;
  if (std::abs(det) > 1e-30) {
    const double ca = (sc * sss - ss * scs) / det;
    const double sa = (ss * scc - sc * scs) / det;
    a_init = std::hypot(ca, sa);
    phi_init = std::atan2(-sa, ca);
  }
  const double span = t.back() - t.front();
  std::vector<double> init = {0.0, std::max(a_init, 1e-12), nu_est, phi_init, 20.0 * span};
  out.cosine_fit = fit_damped_cosine(t, resid, Envelope::Exponential, init);
  // fit runs on the total-tau axis; the modulation argument is 2 pi nu0 tau/2
  out.nu0_prime = 2.0 * out.cosine_fit.get("nu");
  return out;
}

PolarizationResult polarize(const SystemParams& params, int n_steps, const PulseSpec& pulse,
                            const std::optional<DephasingSpec>& dephasing, std::uint64_t seed) {
  params.validate();
  if (n_steps < 1) throw ConfigError("polarize: n_steps must be >= 1");

  const Matrix6cd h = build_hamiltonian(params);
  const SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);
  const double nu0p = nuclear_doublet_splitting(nominal.eigs(), Manifold::Zero);
  if (nu0p <= 0) throw NumericError("polarize: vanishing 0'-manifold splitting");
  const double tau_13c = 1.0 / (2.0 * nu0p);
  const MwPulse mw = selective_pi(nominal, pulse);
  const QuantizationAxes axes = nominal.eigs().quantization_axes();

  const std::vector<double> freqs = odmr_branch_range(params, 16e6, 161);
  std::vector<double> spectrum(freqs.size(), 0.0);
  const double f_dn = nominal.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  const double f_up = nominal.eigs().transition_frequency(Manifold::PlusOne, Branch::Upper);

  const auto draws = draws_for_point(dephasing, seed, 0);
  for (const auto& d : draws) {
    const SpinSystem sys(detuned_hamiltonian(h, axis0, d.de, d.dn));
    SpinState prep = SpinState::maximally_mixed();
    for (int s = 0; s < n_steps; ++s) {
      sys.apply_optical_init(prep);
      apply_protocol_pi(sys, prep, pulse, mw);
      sys.apply_wait(prep, tau_13c);
    }
    sys.apply_optical_init(prep);

    // The probe is a frequency-scanned population readout in the
    // fast-selective limit: branch populations rendered as power-broadened
    // Lorentzian dips, then pushed through the shared double-Lorentzian /
    // amplitude-asymmetry pipeline. A literal finite probe of duration
    // comparable to 1/nu0' does not measure populations at all: the
    // coherently precessing nuclear superposition interferes through the
    // unresolved 0'-doublet sub-lines and can even invert the dip asymmetry.
    Matrix2cd rho_n = Matrix2cd::Zero();
    for (int e = 0; e < 3; ++e) rho_n += prep.rho.block<2, 2>(2 * e, 2 * e);
    const auto& nb1 = sys.eigs().nuclear_basis(Manifold::PlusOne);
    const double p_dn = std::real((nb1[0].adjoint() * rho_n * nb1[0])(0));
    const double p_up = std::real((nb1[1].adjoint() * rho_n * nb1[1])(0));
    const double hw = 0.5 * kProbeLinewidth;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      const double ddn = freqs[i] - f_dn, dup = freqs[i] - f_up;
      spectrum[i] += 1.0 - p_dn * hw * hw / (ddn * ddn + hw * hw) -
                     p_up * hw * hw / (dup * dup + hw * hw);
    }
  }
  for (auto& v : spectrum) v /= draws.size();

  // physics-informed initialization: one Lorentzian per hyperfine line at the
  // known transition frequencies (each line carries unresolved 0'-doublet
  // substructure a blind minima scan would otherwise latch onto)
  auto near_depth = [&](double f0) {
    double best = 1e300, val = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i)
      if (std::abs(freqs[i] - f0) < best) {
        best = std::abs(freqs[i] - f0);
        val = spectrum[i];
      }
    double top = *std::max_element(spectrum.begin(), spectrum.end());
    return std::max(top - val, 1e-6);
  };
  const double width0 = kProbeLinewidth;
  std::vector<double> init = {1.0, near_depth(f_dn), f_dn, width0, near_depth(f_up), f_up, width0};
  if (f_up - f_dn < kProbeLinewidth)
    throw NumericError("polarize: probe dips are unresolvable (separation " +
                       std::to_string(f_up - f_dn) + " Hz below the probe linewidth " +
                       std::to_string(kProbeLinewidth) + " Hz)");
  FitResult fit = fit_lorentzians(freqs, spectrum, 2, init);
  if (!fit.converged)
    throw NumericError("polarize: probe spectrum fit did not converge (residual " +
                       std::to_string(fit.residual_norm) + " after " +
                       std::to_string(fit.iterations) + " iterations)");

  PolarizationResult out;
  out.fit = fit;
  out.p_down = fit.get("amp1");
  out.p_up = fit.get("amp2");
  out.p = polarization_from_fit(fit);
  out.n_steps = n_steps;
  const double d2 = axes.a * axes.a - axes.b * axes.b;
  out.p_max_geometric = 1.0 - d2 * d2;
  return out;
}

double state_transfer(const SystemParams& params, cplx p_amp, cplx q_amp, const PulseSpec& pulse) {
  params.validate();
  const double norm2 = std::norm(p_amp) + std::norm(q_amp);
  if (std::abs(norm2 - 1.0) > 1e-9)
    throw ConfigError("state_transfer: input amplitudes must be normalized");

  const SpinSystem sys(build_hamiltonian(params));
  const auto& nb1 = sys.eigs().nuclear_basis(Manifold::PlusOne);
  const Vector2cd spinor = p_amp * nb1[0] + q_amp * nb1[1];
  SpinState st = SpinState::pure(sys.embed(Manifold::Zero, spinor));

  const double nu0p = nuclear_doublet_splitting(sys.eigs(), Manifold::Zero);
  const MwPulse mw = selective_pi(sys, pulse);
  apply_protocol_pi(sys, st, pulse, mw);
  sys.apply_wait(st, 1.0 / (2.0 * nu0p));

  // electron reduced state (bare partial trace over the nucleus)
  Matrix3cd rho_e = Matrix3cd::Zero();
  for (int e1 = 0; e1 < 3; ++e1)
    for (int e2 = 0; e2 < 3; ++e2)
      rho_e(e1, e2) = st.rho(2 * e1, 2 * e2) + st.rho(2 * e1 + 1, 2 * e2 + 1);

  const Eigen::Vector3cd dir1 = electron_direction(sys.eigs(), Manifold::PlusOne);
  const Eigen::Vector3cd dir0 = electron_direction(sys.eigs(), Manifold::Zero);
  const double r11 = std::real((dir1.adjoint() * rho_e * dir1)(0));
  const double r00 = std::real((dir0.adjoint() * rho_e * dir0)(0));
  const cplx r10 = (dir1.adjoint() * rho_e * dir0)(0);
  const double ap = std::abs(p_amp), aq = std::abs(q_amp);
  return std::clamp(ap * ap * r11 + aq * aq * r00 + 2.0 * ap * aq * std::abs(r10), 0.0, 1.0);
}

SweepResult storage(const SystemParams& params, const std::vector<double>& taus,
                    const PulseSpec& pulse, const std::optional<DephasingSpec>& dephasing,
                    std::uint64_t seed) {
  params.validate();
  if (taus.size() < 2) throw ConfigError("storage: need at least 2 tau values");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (taus[i] <= taus[i - 1]) throw ConfigError("storage: tau values must be ascending");
  if (taus.front() < 0) throw ConfigError("storage: tau values must be non-negative");

  const Matrix6cd h = build_hamiltonian(params);
  const SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);
  const MwPulse mw = selective_pi(nominal, pulse);

  SweepResult out;
  out.axis_name = "tau";
  out.axis_unit = "s";
  out.axis_values = taus;
  out.signal.resize(taus.size());
  out.params_snapshot = params;
  out.seed = seed;

  parallel_for(static_cast<int>(taus.size()), [&](int i) {
    const auto draws = draws_for_point(dephasing, seed, static_cast<std::uint64_t>(i));
    double acc = 0.0;
    for (const auto& d : draws) {
      const SpinSystem sys(detuned_hamiltonian(h, axis0, d.de, d.dn));
      SpinState st = SpinState::maximally_mixed();
      sys.apply_optical_init(st);
      apply_protocol_pi(sys, st, pulse, mw);
      sys.apply_wait(st, taus[i]);
      apply_protocol_pi(sys, st, pulse, mw);
      acc += sys.readout(st);
    }
    out.signal[i] = std::clamp(acc / draws.size(), 0.0, 1.0);
  });
  return out;
}

double storage_closed_form(double a, double b, double nu0_prime, double tau) {
  const double a2 = a * a, b2 = b * b;
  return 0.5 * (1.0 + a2 * a2 + b2 * b2 +
                2.0 * a2 * b2 * std::cos(2.0 * kPi * nu0_prime * tau));
}

}  // namespace spinsim
