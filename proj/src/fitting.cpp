#include "spinsim/fitting.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <functional>
#include <numeric>

#include "spinsim/simd/kernels.hpp"

namespace spinsim {

double FitResult::get(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return parameters[i];
  throw NumericError("fit result: no parameter '" + name + "'");
}

double FitResult::err(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return std_errors[i];
  throw NumericError("fit result: no parameter '" + name + "'");
}

bool FitResult::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

using Model = std::function<void(const std::vector<double>& p, std::vector<double>& y,
                                 std::vector<std::vector<double>>* jac)>;

struct Bounds {
  std::vector<double> lo, hi;  // empty = unbounded
  void clamp(std::vector<double>& p) const {
    if (lo.empty()) return;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
  }
};

// damped least squares on normal equations; convergence when the relative
// step or the relative residual change is below threshold
struct LmOutcome {
  bool converged = false;
  int iterations = 0;
  double chi2 = 0.0;
};

LmOutcome levenberg_marquardt(const Model& model, const std::vector<double>& y,
                              std::vector<double>& p, std::vector<double>& std_errors,
                              const Bounds& bounds = {}) {
  const int n = static_cast<int>(y.size());
  const int np = static_cast<int>(p.size());
  std::vector<double> f(n);
  std::vector<std::vector<double>> jac(np, std::vector<double>(n));

  auto chi2_of = [&](const std::vector<double>& pp) {
    std::vector<double> ff(n);
    model(pp, ff, nullptr);
    double c = 0;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] - ff[i];
      c += r * r;
    }
    return c;
  };

  bounds.clamp(p);
  double lambda = 1e-3;
  double chi2 = chi2_of(p);
  LmOutcome out;
  Eigen::MatrixXd jtj(np, np);
  Eigen::VectorXd jtr(np);

  for (out.iterations = 1; out.iterations <= 200; ++out.iterations) {
    model(p, f, &jac);
    for (int a = 0; a < np; ++a) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += jac[a][i] * (y[i] - f[i]);
      jtr[a] = s;
      for (int b = a; b < np; ++b) {
        double m = 0;
        for (int i = 0; i < n; ++i) m += jac[a][i] * jac[b][i];
        jtj(a, b) = jtj(b, a) = m;
      }
    }

    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      Eigen::MatrixXd damped = jtj;
      for (int a = 0; a < np; ++a) damped(a, a) += lambda * std::max(jtj(a, a), 1e-30);
      Eigen::VectorXd step = damped.ldlt().solve(jtr);
      std::vector<double> pnew(p);
      for (int a = 0; a < np; ++a) pnew[a] += step[a];
      bounds.clamp(pnew);
      const double cnew = chi2_of(pnew);
      if (std::isfinite(cnew) && cnew <= chi2) {
        double rel_step = 0;
        for (int a = 0; a < np; ++a)
          rel_step = std::max(rel_step, std::abs(pnew[a] - p[a]) / std::max(std::abs(p[a]), 1e-30));
        const double rel_drop = (chi2 - cnew) / std::max(chi2, 1e-300);
        p = pnew;
        chi2 = cnew;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        if (rel_step < 1e-10 || rel_drop < 1e-12) {
          out.converged = true;
        }
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // no damping level improves chi^2: a (numerical) local minimum
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }
  out.chi2 = chi2;

  // standard errors from (J^T J)^-1 scaled by the residual variance
  std_errors.assign(np, 0.0);
  model(p, f, &jac);
  for (int a = 0; a < np; ++a)
    for (int b = a; b < np; ++b) {
      double m = 0;
      for (int i = 0; i < n; ++i) m += jac[a][i] * jac[b][i];
      jtj(a, b) = jtj(b, a) = m;
    }
  const double dof = std::max(1, n - np);
  const double var = chi2 / dof;
  Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
  for (int a = 0; a < np; ++a) std_errors[a] = std::sqrt(std::max(0.0, cov(a, a) * var));
  return out;
}

std::vector<int> local_minima(const std::vector<double>& y) {
  std::vector<int> mins;
  const int n = static_cast<int>(y.size());
  for (int i = 1; i + 1 < n; ++i)
    if (y[i] <= y[i - 1] && y[i] <= y[i + 1] && (y[i] < y[i - 1] || y[i] < y[i + 1]))
      mins.push_back(i);
  return mins;
}

}  // namespace

double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  if (n < 4) throw NumericError("dominant_frequency: too few samples");
  // de-trend: remove mean and linear slope
  const double tm = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (t[i] - tm) * (t[i] - tm);
    sxy += (t[i] - tm) * (y[i] - ym);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = y[i] - ym - slope * (t[i] - tm);

  const double span = t.back() - t.front();
  if (span <= 0) throw NumericError("dominant_frequency: zero time span");
  const int nbins = n / 2;
  double best_mag = -1.0;
  std::vector<double> mags(nbins + 1, 0.0);
  for (int k = 1; k <= nbins; ++k) {
    const double f = k / span;
    double re = 0, im = 0;
    for (int i = 0; i < n; ++i) {
      const double ph = 2.0 * kPi * f * (t[i] - t.front());
      re += d[i] * std::cos(ph);
      im -= d[i] * std::sin(ph);
    }
    mags[k] = std::hypot(re, im);
    best_mag = std::max(best_mag, mags[k]);
  }
  // tie-break toward lower frequency among near-maximal bins
  int kbest = 1;
  for (int k = 1; k <= nbins; ++k)
    if (mags[k] >= 0.999 * best_mag) {
      kbest = k;
      break;
    }
  // parabolic refinement on the magnitude peak
  double f0 = kbest / span;
  if (kbest > 1 && kbest < nbins) {
    const double ym1 = mags[kbest - 1], y0v = mags[kbest], yp1 = mags[kbest + 1];
    const double denom = ym1 - 2 * y0v + yp1;
    if (std::abs(denom) > 1e-300) {
      const double shift = 0.5 * (ym1 - yp1) / denom;
      if (std::abs(shift) <= 1.0) f0 = (kbest + shift) / span;
    }
  }
  return f0;
}

FitResult fit_lorentzians(const std::vector<double>& x, const std::vector<double>& y, int n_dips,
                          const std::optional<std::vector<double>>& init) {
  if (n_dips != 2 && n_dips != 4) throw ConfigError("fit_lorentzians: n_dips must be 2 or 4");
  if (x.size() != y.size()) throw ConfigError("fit_lorentzians: x/y length mismatch");
  if (static_cast<int>(x.size()) < 5 * n_dips)
    throw ConfigError("fit_lorentzians: need at least 5 points per dip");

  const int n = static_cast<int>(x.size());
  const double xspan = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());

  std::vector<double> p;
  if (init) {
    if (static_cast<int>(init->size()) != 1 + 3 * n_dips)
      throw ConfigError("fit_lorentzians: init must have 1 + 3*n_dips entries");
    p = *init;
  } else {
    // local-minima scan on lightly smoothed data
    std::vector<double> smooth(y);
    for (int i = 1; i + 1 < n; ++i) smooth[i] = (y[i - 1] + y[i] + y[i + 1]) / 3.0;
    const double base = *std::max_element(smooth.begin(), smooth.end());
    auto mins = local_minima(smooth);
    std::sort(mins.begin(), mins.end(), [&](int a, int b) { return smooth[a] < smooth[b]; });
    std::vector<int> picked;
    const double min_sep = xspan / (20.0 * n_dips);
    for (int idx : mins) {
      bool ok = true;
      for (int q : picked)
        if (std::abs(x[idx] - x[q]) < min_sep) ok = false;
      if (ok) picked.push_back(idx);
      if (static_cast<int>(picked.size()) == n_dips) break;
    }
    while (static_cast<int>(picked.size()) < n_dips)
      picked.push_back(n / (n_dips + 1) * (1 + static_cast<int>(picked.size())));
    std::sort(picked.begin(), picked.end(), [&](int a, int b) { return x[a] < x[b]; });
    p.push_back(base);
    for (int idx : picked) {
      p.push_back(std::max(base - smooth[idx], 1e-12));
      p.push_back(x[idx]);
      p.push_back(xspan / (8.0 * n_dips));
    }
  }

  Model model = [&x, n, n_dips](const std::vector<double>& q, std::vector<double>& f,
                                std::vector<std::vector<double>>* jac) {
    std::vector<double> amp(n_dips), cen(n_dips), wid(n_dips);
    for (int d = 0; d < n_dips; ++d) {
      amp[d] = q[1 + 3 * d];
      cen[d] = q[2 + 3 * d];
      wid[d] = q[3 + 3 * d];
    }
    f.resize(n);
    simd::lorentzian_eval(x.data(), n, q[0], amp.data(), cen.data(), wid.data(), n_dips, f.data());
    if (!jac) return;
    for (int i = 0; i < n; ++i) (*jac)[0][i] = 1.0;
    for (int d = 0; d < n_dips; ++d) {
      const double hw = 0.5 * wid[d];
      for (int i = 0; i < n; ++i) {
        const double dx = x[i] - cen[d];
        const double denom = dx * dx + hw * hw;
        const double l = hw * hw / denom;
        (*jac)[1 + 3 * d][i] = -l;
        (*jac)[2 + 3 * d][i] = -amp[d] * 2.0 * dx * hw * hw / (denom * denom);
        (*jac)[3 + 3 * d][i] = -amp[d] * hw * dx * dx / (denom * denom);
      }
    }
  };

  FitResult out;
  out.model = n_dips == 2 ? "lorentzian2" : "lorentzian4";
  const double xlo = *std::min_element(x.begin(), x.end());
  const double ylo = *std::min_element(y.begin(), y.end());
  const double yhi = *std::max_element(y.begin(), y.end());
  const double yr = std::max(yhi - ylo, 1e-12);
  Bounds bounds;
  bounds.lo.push_back(ylo - yr);
  bounds.hi.push_back(yhi + yr);
  for (int d = 0; d < n_dips; ++d) {
    bounds.lo.insert(bounds.lo.end(), {0.0, xlo - 0.25 * xspan, xspan / (4.0 * n)});
    bounds.hi.insert(bounds.hi.end(), {2.0 * yr, xlo + 1.25 * xspan, xspan});
  }
  LmOutcome lm = levenberg_marquardt(model, y, p, out.std_errors, bounds);

  // report dips sorted by center, widths positive
  std::vector<int> order(n_dips);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return p[2 + 3 * a] < p[2 + 3 * b]; });
  FitResult sorted = out;
  sorted.names.push_back("base");
  sorted.parameters.push_back(p[0]);
  std::vector<double> errs{out.std_errors[0]};
  for (int r = 0; r < n_dips; ++r) {
    const int d = order[r];
    const std::string suffix = std::to_string(r + 1);
    sorted.names.insert(sorted.names.end(), {"amp" + suffix, "center" + suffix, "width" + suffix});
    sorted.parameters.push_back(p[1 + 3 * d]);
    sorted.parameters.push_back(p[2 + 3 * d]);
    sorted.parameters.push_back(std::abs(p[3 + 3 * d]));
    errs.push_back(out.std_errors[1 + 3 * d]);
    errs.push_back(out.std_errors[2 + 3 * d]);
    errs.push_back(out.std_errors[3 + 3 * d]);
  }
  sorted.std_errors = errs;
  sorted.residual_norm = std::sqrt(lm.chi2);
  sorted.converged = lm.converged;
  sorted.iterations = lm.iterations;
  return sorted;
}

namespace {

FitResult fit_cosine_impl(const std::vector<double>& t, const std::vector<double>& y, Envelope env,
                          const std::optional<std::vector<double>>& init) {
  const int n = static_cast<int>(t.size());
  const double span = t.back() - t.front();
  const double dt_min = [&] {
    double d = span;
    for (int i = 1; i < n; ++i) d = std::min(d, t[i] - t[i - 1]);
    return d;
  }();
  const bool gaussian = env == Envelope::Gaussian;

  // internal parameterization: (y0, A, nu, phi, rate) with rate = 1/T >= 0
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  std::vector<std::vector<double>> starts;
  if (init) {
    if (init->size() != 5) throw ConfigError("fit_damped_cosine: init must be (y0, A, nu, phi, T)");
    const double nyquist = 0.5 / dt_min;
    if ((*init)[2] > nyquist)
      throw NumericError("fit_damped_cosine: initial frequency violates the Nyquist limit");
    starts.push_back({(*init)[0], (*init)[1], (*init)[2], (*init)[3],
                      (*init)[4] > 0 ? 1.0 / (*init)[4] : 0.0});
  } else {
    const double nu0 = dominant_frequency(t, y);
    // amplitude and phase by linear least squares at the initial frequency
    double sc = 0, ss = 0, scc = 0, sss = 0, scs = 0;
    for (int i = 0; i < n; ++i) {
      const double c = std::cos(2 * kPi * nu0 * t[i]);
      const double s = std::sin(2 * kPi * nu0 * t[i]);
      sc += (y[i] - ym) * c;
      ss += (y[i] - ym) * s;
      scc += c * c;
      sss += s * s;
      scs += c * s;
    }
    const double det = scc * sss - scs * scs;
    double a0 = 0.0, phi0 = 0.0;
    if (std::abs(det) > 1e-30) {
      const double ca = (sc * sss - ss * scs) / det;
      const double sa = (ss * scc - sc * scs) / det;
      a0 = std::hypot(ca, sa);
      phi0 = std::atan2(-sa, ca);
    }
    if (a0 <= 0) {
      for (int i = 0; i < n; ++i) a0 = std::max(a0, std::abs(y[i] - ym));
      a0 = std::max(a0, 1e-12);
    }
    // decay-rate ladder: undamped, moderate, fast
    for (double rate : {0.0, 1.0 / span, 4.0 / span})
      starts.push_back({ym, a0, nu0, phi0, rate});
  }

  Model model = [&t, n, gaussian](const std::vector<double>& q, std::vector<double>& f,
                                  std::vector<std::vector<double>>* jac) {
    const double y0 = q[0], amp = q[1], nu = q[2], phi = q[3], rate = std::abs(q[4]);
    f.resize(n);
    simd::damped_cosine_eval(t.data(), n, y0, amp, nu, phi, rate, gaussian, f.data());
    if (!jac) return;
    for (int i = 0; i < n; ++i) {
      const double rt = rate * t[i];
      const double e = gaussian ? std::exp(-rt * rt) : std::exp(-rt);
      const double arg = 2.0 * kPi * nu * t[i] + phi;
      const double c = std::cos(arg), s = std::sin(arg);
      (*jac)[0][i] = 1.0;
      (*jac)[1][i] = c * e;
      (*jac)[2][i] = -amp * s * e * 2.0 * kPi * t[i];
      (*jac)[3][i] = -amp * s * e;
      const double de_drate = gaussian ? -2.0 * rate * t[i] * t[i] * e : -t[i] * e;
      (*jac)[4][i] = amp * c * de_drate * (q[4] < 0 ? -1.0 : 1.0);
    }
  };

  double ylo = *std::min_element(y.begin(), y.end());
  double yhi = *std::max_element(y.begin(), y.end());
  const double yr = std::max(yhi - ylo, 1e-12);
  Bounds bounds;
  bounds.lo = {ylo - yr, 0.0, 0.0, -4 * kPi, 0.0};
  bounds.hi = {yhi + yr, 2 * yr, 0.6 / dt_min, 4 * kPi, 50.0 / span};

  FitResult out;
  out.model = gaussian ? "gausscos" : "expcos";
  std::vector<double> p;
  LmOutcome lm;
  double best_chi2 = std::numeric_limits<double>::infinity();
  for (auto& start : starts) {
    std::vector<double> q = start;
    std::vector<double> errs;
    LmOutcome o = levenberg_marquardt(model, y, q, errs, bounds);
    if (o.chi2 < best_chi2) {
      best_chi2 = o.chi2;
      p = q;
      lm = o;
      out.std_errors = errs;
    }
    if (o.converged && o.chi2 <= 1e-18 * n * yr * yr) break;  // exact fit, stop early
  }

  double rate = std::abs(p[4]);
  double amp = p[1], phi = p[3];
  if (amp < 0) {  // canonical form: positive amplitude
    amp = -amp;
    phi += kPi;
  }
  phi = std::remainder(phi, 2.0 * kPi);
  const double t_cap = 10.0 * span;
  double t_decay = rate > 1.0 / t_cap ? 1.0 / rate : t_cap;
  if (rate <= 1.0 / t_cap) out.flags.push_back("T-at-upper-bound");

  out.names = {"y0", "A", "nu", "phi", "T"};
  out.parameters = {p[0], amp, std::abs(p[2]), phi, t_decay};
  // error of T from the rate error by first-order propagation
  const double t_err = rate > 1.0 / t_cap ? out.std_errors[4] / (rate * rate) : 0.0;
  out.std_errors = {out.std_errors[0], out.std_errors[1], out.std_errors[2], out.std_errors[3], t_err};
  out.residual_norm = std::sqrt(lm.chi2);
  out.converged = lm.converged;
  out.iterations = lm.iterations;
  return out;
}

}  // namespace

FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y,
                            Envelope envelope, const std::optional<std::vector<double>>& init) {
  if (t.size() != y.size()) throw ConfigError("fit_damped_cosine: t/y length mismatch");
  if (t.size() < 8) throw ConfigError("fit_damped_cosine: need at least 8 samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] <= t[i - 1]) throw ConfigError("fit_damped_cosine: time axis must be strictly increasing");
  return fit_cosine_impl(t, y, envelope, init);
}

FitResult fit_exp_decay(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 4) throw ConfigError("fit_exp_decay: bad input");
  const int n = static_cast<int>(t.size());
  const double span = t.back() - t.front();
  std::vector<double> p = {*std::min_element(y.begin(), y.end()),
                           std::max(*std::max_element(y.begin(), y.end()) -
                                        *std::min_element(y.begin(), y.end()),
                                    1e-12),
                           3.0 / span};

  Model model = [&t, n](const std::vector<double>& q, std::vector<double>& f,
                        std::vector<std::vector<double>>* jac) {
    const double rate = std::abs(q[2]);
    f.resize(n);
    for (int i = 0; i < n; ++i) f[i] = q[0] + q[1] * std::exp(-rate * t[i]);
    if (!jac) return;
    for (int i = 0; i < n; ++i) {
      const double e = std::exp(-rate * t[i]);
      (*jac)[0][i] = 1.0;
      (*jac)[1][i] = e;
      (*jac)[2][i] = -q[1] * t[i] * e * (q[2] < 0 ? -1.0 : 1.0);
    }
  };

  FitResult out;
  out.model = "expdecay";
  LmOutcome lm = levenberg_marquardt(model, y, p, out.std_errors);
  const double rate = std::abs(p[2]);
  const double t_cap = 10.0 * span;
  double t_decay = rate > 1.0 / t_cap ? 1.0 / rate : t_cap;
  if (rate <= 1.0 / t_cap) out.flags.push_back("T-at-upper-bound");
  out.names = {"y0", "A", "T"};
  out.parameters = {p[0], p[1], t_decay};
  const double t_err = rate > 1.0 / t_cap ? out.std_errors[2] / (rate * rate) : 0.0;
  out.std_errors = {out.std_errors[0], out.std_errors[1], t_err};
  out.residual_norm = std::sqrt(lm.chi2);
  out.converged = lm.converged;
  out.iterations = lm.iterations;
  return out;
}

double polarization_from_fit(const FitResult& fit, double noise_floor) {
  if (fit.model != "lorentzian2")
    throw NumericError("polarization_from_fit: expected a two-dip Lorentzian fit");
  const double p_down = fit.get("amp1");  // lower-frequency dip
  const double p_up = fit.get("amp2");
  if (p_down < 0 || p_up < 0)
    throw NumericError("polarization_from_fit: negative dip amplitude");
  if (p_down + p_up < noise_floor)
    throw NumericError("polarization_from_fit: dip amplitudes below the noise floor");
  return (p_down - p_up) / (p_down + p_up);
}

double spin_temperature(double p, double reference_frequency) {
  const double ap = std::abs(p);
  if (!(ap > 0.0) || ap >= 1.0)
    throw NumericError("spin_temperature: |p| must be in (0, 1)");
  if (!(reference_frequency > 0.0))
    throw NumericError("spin_temperature: reference frequency must be positive");
  return kPlanck * reference_frequency / (kBoltzmann * std::log((1.0 + ap) / (1.0 - ap)));
}

}  // namespace spinsim
