#include <doctest.h>

#include <cmath>

#include "spinsim/eigensystem.hpp"
#include "spinsim/experiments.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/rng.hpp"

using namespace spinsim;

namespace {

// random geometry with a tilted hyperfine z-row and an enhanced 0' splitting,
// constrained to configurations every protocol can resolve
SystemParams random_geometry(Rng& rng) {
  while (true) {
    SystemParams p;
    const double theta = (20.0 + 50.0 * rng.next_unit()) * kPi / 180.0;
    p.field = MagneticField::polar(5e-3 + 4e-3 * rng.next_unit(), theta, 0.0);
    const double tilt = (5.0 + 80.0 * rng.next_unit()) * kPi / 180.0;
    const double znorm = 8e6 + 12e6 * rng.next_unit();
    p.hyperfine(2, 2) = znorm * std::cos(tilt);
    p.hyperfine(2, 0) = znorm * std::sin(tilt);
    p.hyperfine(0, 2) = (rng.next_unit() < 0.5 ? -1 : 1) * (5e6 + 15e6 * rng.next_unit());
    EigenSystem e(build_hamiltonian(p));
    if (e.degenerate() || !e.labeling_ok()) continue;
    const double nu0 = e.doublet_splitting(Manifold::Zero);
    const double nu1 = e.doublet_splitting(Manifold::PlusOne);
    if (nu0 < 0.5e6 || nu0 > 3e6) continue;
    if (nu1 < 8e6) continue;
    if (nu1 - nu0 < 6e6) continue;  // probe dips must stay resolvable
    return p;
  }
}

}  // namespace

TEST_CASE("odmr: no hyperfine shows one dip per electron branch") {
  SystemParams p;
  p.field = MagneticField::cartesian(0, 0, 7e-3);
  // full range covering both branches
  auto freqs = linspace(2.6e9, 3.14e9, 541);
  SweepResult r = pulsed_odmr(p, freqs, PulseSpec{}, std::nullopt, 1);
  r.validate();
  int dips = 0;
  for (std::size_t i = 1; i + 1 < r.signal.size(); ++i)
    if (r.signal[i] < r.signal[i - 1] && r.signal[i] < r.signal[i + 1] && r.signal[i] < 0.6) ++dips;
  CHECK(dips == 2);
}

TEST_CASE("odmr: preset spectrum shows two dips split by 14.3 MHz on the +1 branch") {
  SystemParams p = params_preset("paper-nv-aligned");
  auto freqs = odmr_branch_range(p, 16e6, 161);
  SweepResult r = pulsed_odmr(p, freqs, PulseSpec{}, std::nullopt, 1);
  FitResult fit = fit_lorentzians(r.axis_values, r.signal, 2);
  REQUIRE(fit.converged);
  const double split = fit.get("center2") - fit.get("center1");
  CHECK(std::abs(split - 14.3e6) <= 1e6);
  // unpolarized nuclear state: equal dip amplitudes
  CHECK(fit.get("amp1") == doctest::Approx(fit.get("amp2")).epsilon(0.02));
}

TEST_CASE("odmr: four dips appear over the full range") {
  SystemParams p = params_preset("paper-nv-aligned");
  auto freqs = linspace(2.6e9, 3.14e9, 1081);
  SweepResult r = pulsed_odmr(p, freqs, PulseSpec{}, std::nullopt, 1);
  int dips = 0;
  for (std::size_t i = 1; i + 1 < r.signal.size(); ++i)
    if (r.signal[i] < r.signal[i - 1] && r.signal[i] < r.signal[i + 1] && r.signal[i] < 0.75) ++dips;
  CHECK(dips == 4);
}

TEST_CASE("odmr rejects frequencies far from the zero-field splitting") {
  SystemParams p = params_preset("paper-nv");
  CHECK_THROWS_AS(pulsed_odmr(p, linspace(1e9, 1.2e9, 11), PulseSpec{}, std::nullopt, 1),
                  ConfigError);
}

TEST_CASE("echo: tilted field modulation fits the exact 0' splitting") {
  SystemParams p = params_preset("paper-nv");
  auto taus = linspace(100e-9, 4e-6, 240);
  SweepResult r = spin_echo(p, taus, std::nullopt, 7);
  r.validate();
  EchoAnalysis an = analyze_echo(r, false);
  CHECK(an.nu0_prime == doctest::Approx(1.6e6).epsilon(0.05));
}

TEST_CASE("echo: modulation frequency matches the oracle within 2 percent on random geometries") {
  Rng rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    SystemParams p = random_geometry(rng);
    EigenSystem e(build_hamiltonian(p));
    const double nu0 = e.doublet_splitting(Manifold::Zero);
    const double span = std::min(6.0 / nu0, 8e-6);
    auto taus = linspace(span / 240, span, 240);
    SweepResult r = spin_echo(p, taus, std::nullopt, 7);
    EchoAnalysis an = analyze_echo(r, false);
    CHECK(std::abs(an.nu0_prime - nu0) / nu0 <= 0.02);
  }
}

TEST_CASE("echo: aligned field is flat, and decays exponentially with dephasing") {
  SystemParams p = params_preset("paper-nv-aligned");
  auto taus = linspace(100e-9, 4e-6, 200);
  SweepResult flat = spin_echo(p, taus, std::nullopt, 7);
  double lo = 1e9, hi = -1e9;
  for (double s : flat.signal) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(hi - lo < 0.01);  // < 1 percent of contrast

  DephasingSpec deph;
  deph.electron_sigma = DephasingSpec::sigma_from_t2star(1.5e-6);
  deph.samples = 16;
  SweepResult dec = spin_echo(p, taus, deph, 7);
  EchoAnalysis an = analyze_echo(dec, true);
  REQUIRE(an.t_se.has_value());
  CHECK(*an.t_se == doctest::Approx(1.5e-6).epsilon(0.10));
}

TEST_CASE("echo: zero hyperfine gives a flat signal") {
  SystemParams p;
  p.field = MagneticField::polar(7e-3, kPi / 4, 0.0);
  auto taus = linspace(100e-9, 4e-6, 120);
  SweepResult r = spin_echo(p, taus, std::nullopt, 7);
  double lo = 1e9, hi = -1e9;
  for (double s : r.signal) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(hi - lo < 1e-6);
}

TEST_CASE("polarize: one ideal step at the a=b geometry fully polarizes") {
  PulseSpec ideal;
  ideal.ideal = true;
  PolarizationResult r = polarize(params_preset("paper-nv-90"), 1, ideal, std::nullopt, 5);
  CHECK(r.p >= 0.99);
  CHECK(r.p_max_geometric == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("polarize: aligned axes pump nothing") {
  SystemParams p = params_preset("paper-nv-aligned");
  // delta ~ 0 at the aligned field: polarization stays at the noise level
  PulseSpec ideal;
  ideal.ideal = true;
  PolarizationResult r = polarize(p, 4, ideal, std::nullopt, 5);
  CHECK(std::abs(r.p) <= 0.02);
}

TEST_CASE("polarize: 67-degree preset with finite pulses lands near the recorded value") {
  PolarizationResult r = polarize(params_preset("paper-nv-67"), 4, PulseSpec{}, std::nullopt, 5);
  MESSAGE("p(4 steps, 250 ns pulses) = ", r.p);
  CHECK(r.p >= 0.10);
  CHECK(r.p <= 0.20);
}

TEST_CASE("polarize: single ideal step never exceeds the geometric bound") {
  Rng rng(321);
  PulseSpec ideal;
  ideal.ideal = true;
  for (int trial = 0; trial < 50; ++trial) {
    SystemParams p = random_geometry(rng);
    PolarizationResult r = polarize(p, 1, ideal, std::nullopt, 5);
    CHECK(std::abs(r.p) <= r.p_max_geometric + 0.02);
  }
}

TEST_CASE("polarize: ideal-pulse polarization is monotone in the step count") {
  SystemParams p = params_preset("paper-nv-67");
  PulseSpec ideal;
  ideal.ideal = true;
  double prev = -1.0;
  for (int n : {1, 2, 3, 4}) {
    PolarizationResult r = polarize(p, n, ideal, std::nullopt, 5);
    CHECK(r.p >= prev - 1e-6);
    prev = r.p;
  }
}

TEST_CASE("storage: ideal-pulse signal matches the closed form pointwise") {
  Rng rng(99);
  PulseSpec ideal;
  ideal.ideal = true;
  for (int trial = 0; trial < 20; ++trial) {
    SystemParams p = random_geometry(rng);
    EigenSystem e(build_hamiltonian(p));
    const double nu0 = e.doublet_splitting(Manifold::Zero);
    const auto ax = e.quantization_axes();
    auto taus = linspace(0.0, 3.0 / nu0, 64);
    SweepResult r = storage(p, taus, ideal, std::nullopt, 3);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double expect = storage_closed_form(ax.a, ax.b, nu0, taus[i]);
      CHECK(std::abs(r.signal[i] - expect) <= 1e-3);
    }
  }
}

TEST_CASE("storage: tau = 0 reads out unity; half period dips to 1 - 2a^2b^2") {
  SystemParams p = params_preset("paper-nv-67-fig4");
  EigenSystem e(build_hamiltonian(p));
  const double nu0 = e.doublet_splitting(Manifold::Zero);
  const auto ax = e.quantization_axes();
  PulseSpec ideal;
  ideal.ideal = true;
  auto taus = std::vector<double>{0.0, 1.0 / (2.0 * nu0)};
  SweepResult r = storage(p, taus, ideal, std::nullopt, 3);
  CHECK(r.signal[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.signal[1] ==
        doctest::Approx(1.0 - 2.0 * ax.a * ax.a * ax.b * ax.b).epsilon(1e-6));
}

TEST_CASE("storage: aligned axes give a constant signal") {
  SystemParams p;
  p.field = MagneticField::cartesian(0, 0, 7e-3);
  p.hyperfine(2, 2) = 14.3e6;  // a = 1, b = 0
  PulseSpec ideal;
  ideal.ideal = true;
  auto taus = linspace(0.0, 20e-6, 40);
  SweepResult r = storage(p, taus, ideal, std::nullopt, 3);
  for (double s : r.signal) CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("storage: fig-4 round trip with nuclear dephasing") {
  SystemParams p = params_preset("paper-nv-67-fig4");
  DephasingSpec deph;
  deph.nuclear_sigma = DephasingSpec::sigma_from_t2star(26e-6);
  deph.samples = 200;
  auto taus = linspace(0.0, 60e-6, 180);
  SweepResult r = storage(p, taus, PulseSpec{}, deph, 11);
  FitResult fit = fit_damped_cosine(r.axis_values, r.signal, Envelope::Gaussian);
  REQUIRE(fit.converged);
  CHECK(fit.get("nu") == doctest::Approx(170e3).epsilon(0.05));
  CHECK(fit.get("T") == doctest::Approx(26e-6).epsilon(0.05));
}

TEST_CASE("transfer: basis states and superpositions in the a=b limit") {
  SystemParams p = params_preset("paper-nv-90");
  PulseSpec ideal;
  ideal.ideal = true;
  CHECK(state_transfer(p, 1.0, 0.0, ideal) >= 0.99);
  CHECK(state_transfer(p, 0.0, 1.0, ideal) >= 0.99);
  const double root_half = 1.0 / std::sqrt(2.0);
  CHECK(state_transfer(p, root_half, root_half, ideal) >= 0.99);

  // finite 250 ns pulses: record the achieved fidelity
  const double f_finite = state_transfer(p, root_half, root_half, PulseSpec{});
  MESSAGE("finite-pulse transfer fidelity = ", f_finite);
  CHECK(f_finite >= 0.5);

  CHECK_THROWS_AS(state_transfer(p, 1.0, 1.0, ideal), ConfigError);
}

TEST_CASE("sweep validation") {
  CHECK_THROWS_AS(linspace(0, 1, 1), ConfigError);
  SystemParams p = params_preset("paper-nv");
  CHECK_THROWS_AS(spin_echo(p, {1e-6, 0.5e-6}, std::nullopt, 1), ConfigError);
  CHECK_THROWS_AS(storage(p, {-1e-6, 1e-6}, PulseSpec{}, std::nullopt, 1), ConfigError);
  CHECK_THROWS_AS(polarize(p, 0, PulseSpec{}, std::nullopt, 1), ConfigError);
}
