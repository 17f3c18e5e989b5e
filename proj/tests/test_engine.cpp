#include <doctest.h>

#include <cmath>

#include "spinsim/engine.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/rng.hpp"

using namespace spinsim;

namespace {

SystemParams aligned_params() { return params_preset("paper-nv-aligned"); }

SpinState ket_state(const SpinSystem& sys, Manifold m, Branch br) {
  return SpinState::pure(sys.eigs().state(m, br));
}

}  // namespace

TEST_CASE("optical init: target manifold states are unchanged") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  SpinState st = ket_state(sys, Manifold::Zero, Branch::Lower);
  SpinState out = st;
  sys.apply_optical_init(out);
  CHECK((out.rho - st.rho).cwiseAbs().maxCoeff() <= 1e-10);
  out.validate();
}

TEST_CASE("optical init: |1,dn> re-initializes to |0',dn>") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  SpinState st = ket_state(sys, Manifold::PlusOne, Branch::Lower);
  sys.apply_optical_init(st);
  st.validate();
  // nuclear state carried into the 0' manifold
  const Vector2cd dn = sys.eigs().nuclear_basis(Manifold::PlusOne)[0];
  const Vector6cd expect = sys.embed(Manifold::Zero, dn);
  CHECK(std::real((expect.adjoint() * st.rho * expect)(0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("optical init: maximally mixed input becomes |0'><0'| x 1/2") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  SpinState st = SpinState::maximally_mixed();
  sys.apply_optical_init(st);
  st.validate();
  CHECK(sys.readout(st) == doctest::Approx(1.0).epsilon(1e-10));
  // both nuclear branches at population 1/2
  for (Branch br : {Branch::Lower, Branch::Upper}) {
    const Vector6cd v = sys.eigs().state(Manifold::Zero, br);
    CHECK(std::real((v.adjoint() * st.rho * v)(0)) == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("readout basics") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  CHECK(sys.readout(ket_state(sys, Manifold::Zero, Branch::Lower)) == doctest::Approx(1.0));
  CHECK(sys.readout(ket_state(sys, Manifold::PlusOne, Branch::Lower)) == doctest::Approx(0.0));
  CHECK(sys.readout(SpinState::maximally_mixed()) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  // contrast mapping through the free-function surface
  const double p = readout(SpinState::maximally_mixed(), aligned_params(), 0.3);
  CHECK(p == doctest::Approx(1.0 - 0.3 * (1.0 - 1.0 / 3)).epsilon(1e-12));
}

TEST_CASE("mw pulse: zero duration is the identity") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  SpinState st = ket_state(sys, Manifold::Zero, Branch::Lower);
  SpinState out = st;
  MwPulse p;
  p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  p.rabi = 2e6;
  p.duration = 0.0;
  sys.apply_mw(out, p);
  CHECK((out.rho - st.rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mw pulse: resonant pi transfers the driven state") {
  // aligned preset: |0',dn> -> |1,dn> at the dn-conserving transition
  SpinSystem sys(build_hamiltonian(aligned_params()));
  const Vector2cd dn = sys.eigs().nuclear_basis(Manifold::PlusOne)[0];
  SpinState st = SpinState::pure(sys.embed(Manifold::Zero, dn));
  MwPulse p;
  p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  p.rabi = 2e6;
  p.duration = 1.0 / (2.0 * p.rabi);
  sys.apply_mw(st, p);
  const Vector6cd target = sys.eigs().state(Manifold::PlusOne, Branch::Lower);
  CHECK(std::real((target.adjoint() * st.rho * target)(0)) >= 0.99);
  st.validate();
}

TEST_CASE("mw pulse: 14.3 MHz detuned pulse barely transfers") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  const Vector2cd up = sys.eigs().nuclear_basis(Manifold::PlusOne)[1];
  SpinState st = SpinState::pure(sys.embed(Manifold::Zero, up));
  MwPulse p;
  p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  p.rabi = 2e6;
  p.duration = 1.0 / (2.0 * p.rabi);
  sys.apply_mw(st, p);
  const Vector6cd up1 = sys.eigs().state(Manifold::PlusOne, Branch::Upper);
  const double transferred = std::real((up1.adjoint() * st.rho * up1)(0));
  const double nu1 = sys.eigs().doublet_splitting(Manifold::PlusOne);
  const double bound = p.rabi * p.rabi / (p.rabi * p.rabi + nu1 * nu1);
  CHECK(transferred <= 1.5 * bound);
  CHECK(transferred <= 0.03);
}

TEST_CASE("mw pulse: far-detuned drive raises a warning") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  SpinState st = SpinState::maximally_mixed();
  std::vector<std::string> warnings;
  MwPulse p;
  p.frequency = 10e9;
  p.rabi = 2e6;
  p.duration = 100e-9;
  sys.apply_mw(st, p, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("1 GHz") != std::string::npos);
}

TEST_CASE("free evolution: zero duration, composition, purity") {
  SpinSystem sys(build_hamiltonian(params_preset("paper-nv")));
  Rng rng(19);
  SpinState st = SpinState::maximally_mixed();
  sys.apply_optical_init(st);
  sys.apply_dressed_rotation(st, kPi / 2, 0.3);

  SpinState a = st;
  sys.apply_wait(a, 0.0);
  CHECK((a.rho - st.rho).cwiseAbs().maxCoeff() == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = 2e-6 * rng.next_unit();
    const double t2 = 2e-6 * rng.next_unit();
    SpinState x = st, y = st;
    sys.apply_wait(x, t1 + t2);
    sys.apply_wait(y, t1);
    sys.apply_wait(y, t2);
    CHECK((x.rho - y.rho).cwiseAbs().maxCoeff() <= 1e-9);
  }

  // purity of a pure state is conserved by unitary elements
  SpinState pure = SpinState::pure(sys.eigs().state(Manifold::Zero, Branch::Lower));
  sys.apply_dressed_rotation(pure, kPi / 2, 0.0);
  sys.apply_wait(pure, 1e-6);
  MwPulse p;
  p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  p.rabi = 2e6;
  p.duration = 250e-9;
  sys.apply_mw(pure, p);
  CHECK(pure.purity() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("free evolution: half period flips the nuclear state in the a=b geometry") {
  SpinSystem sys(build_hamiltonian(params_preset("paper-nv-90")));
  const Vector2cd up = sys.eigs().nuclear_basis(Manifold::PlusOne)[1];
  const Vector2cd dn = sys.eigs().nuclear_basis(Manifold::PlusOne)[0];
  SpinState st = SpinState::pure(sys.embed(Manifold::Zero, up));
  const double nu0p = sys.eigs().doublet_splitting(Manifold::Zero);
  sys.apply_wait(st, 1.0 / (2.0 * nu0p));
  const Vector6cd target = sys.embed(Manifold::Zero, dn);
  CHECK(std::real((target.adjoint() * st.rho * target)(0)) >= 0.999);
}

TEST_CASE("free evolution: Gaussian free-induction decay from the detuning ensemble") {
  // electron coherence between 0' and 1 under electron_sigma = 1 MHz
  SystemParams params = aligned_params();
  SpinSystem sys(build_hamiltonian(params));
  const Vector6cd v0 = sys.eigs().state(Manifold::Zero, Branch::Lower);
  const Vector6cd v1 = sys.eigs().state(Manifold::PlusOne, Branch::Lower);
  SpinState st = SpinState::pure((v0 + v1) / std::sqrt(2.0));

  DephasingSpec deph;
  deph.electron_sigma = 1e6;
  deph.samples = 3000;
  deph.seed = 99;

  for (double tau : {0.1e-6, 0.2e-6, 0.35e-6}) {
    SpinState out = free_evolution(st, tau, params, deph);
    const double coh = 2.0 * std::abs((v1.adjoint() * out.rho * v0)(0));
    const double expect = std::exp(-0.5 * std::pow(2 * kPi * deph.electron_sigma * tau, 2));
    CHECK(coh == doctest::Approx(expect).epsilon(0.05));
  }
}

TEST_CASE("mw phase covariance: pi shift inverts the rotation") {
  SpinSystem sys(build_hamiltonian(aligned_params()));
  const Vector2cd dn = sys.eigs().nuclear_basis(Manifold::PlusOne)[0];
  Rng rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const double phase = 2 * kPi * rng.next_unit();
    const double frac = 0.2 + 0.7 * rng.next_unit();  // partial rotations
    MwPulse p;
    p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
    p.rabi = 2e6;
    p.duration = frac / (2.0 * p.rabi);
    p.phase = phase;
    // back-to-back pulses from one phase-locked source: the second pulse
    // carries the drive clock advance (as run_sequence does)
    MwPulse q = p;
    q.phase = phase + kPi + 2.0 * kPi * p.frequency * p.duration;
    SpinState st2 = SpinState::pure(sys.embed(Manifold::Zero, dn));
    sys.apply_mw(st2, p);
    sys.apply_mw(st2, q);
    const Vector6cd w = sys.embed(Manifold::Zero, dn);
    const double back = std::real((w.adjoint() * st2.rho * w)(0));
    CHECK(back >= 1.0 - 1e-3);
  }
}

TEST_CASE("channel invariants on random sequences") {
  SystemParams params = params_preset("paper-nv");
  SpinSystem sys(build_hamiltonian(params));
  Rng rng(31);
  for (int seq = 0; seq < 500; ++seq) {
    SpinState st = SpinState::maximally_mixed();
    const int n = 1 + static_cast<int>(rng.next_unit() * 5);
    for (int k = 0; k < n; ++k) {
      const double pick = rng.next_unit();
      if (pick < 0.3) {
        sys.apply_optical_init(st);
      } else if (pick < 0.6) {
        MwPulse p;
        p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower) +
                      20e6 * (2 * rng.next_unit() - 1);
        p.rabi = 0.5e6 + 3e6 * rng.next_unit();
        p.phase = 2 * kPi * rng.next_unit();
        p.duration = 500e-9 * rng.next_unit();
        sys.apply_mw(st, p);
      } else if (pick < 0.9) {
        sys.apply_wait(st, 2e-6 * rng.next_unit());
      } else {
        sys.apply_dressed_rotation(st, kPi * rng.next_unit(), 2 * kPi * rng.next_unit());
      }
      st.validate();
    }
    const double p = sys.readout(st);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("run_sequence: validation and trivial cases") {
  SystemParams params = aligned_params();
  PulseSequence bad;
  bad.elements = {Wait{1e-6}};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("element 0"), ConfigError);

  PulseSequence bad2;
  bad2.elements = {Readout{}, Wait{1e-6}, Readout{}};
  CHECK_THROWS_AS(bad2.validate(), ConfigError);

  PulseSequence ok;
  ok.elements = {OpticalInit{}, Readout{}};
  CHECK(run_sequence(ok, SpinState::maximally_mixed(), params) == doctest::Approx(1.0));
}

TEST_CASE("run_sequence: seeded dephasing is bit-reproducible") {
  SystemParams params = params_preset("paper-nv");
  SpinSystem sys(build_hamiltonian(params));
  PulseSequence seq;
  MwPulse p;
  p.frequency = sys.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  p.rabi = 2e6;
  p.duration = 250e-9;
  seq.elements = {OpticalInit{}, PulseElement{p}, Wait{0.4e-6}, PulseElement{p}, Readout{}};
  DephasingSpec deph;
  deph.electron_sigma = 0.5e6;
  deph.nuclear_sigma = 5e3;
  deph.samples = 64;
  const double a = run_sequence(seq, SpinState::maximally_mixed(), params, deph, 1234);
  const double b = run_sequence(seq, SpinState::maximally_mixed(), params, deph, 1234);
  const double c = run_sequence(seq, SpinState::maximally_mixed(), params, deph, 1235);
  CHECK(a == b);  // bitwise
  CHECK(a != c);
}

TEST_CASE("detuning operators shift the intended splittings") {
  SystemParams params = params_preset("paper-nv");
  const Matrix6cd h = build_hamiltonian(params);
  SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);
  const double nu0 = nominal.eigs().doublet_splitting(Manifold::Zero);

  SpinSystem shifted(detuned_hamiltonian(h, axis0, 0.0, 50e3));
  CHECK(shifted.eigs().doublet_splitting(Manifold::Zero) == doctest::Approx(nu0 + 50e3).epsilon(1e-4));

  const double f0 = nominal.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  SpinSystem shifted_e(detuned_hamiltonian(h, axis0, 2e6, 0.0));
  const double f1 = shifted_e.eigs().transition_frequency(Manifold::PlusOne, Branch::Lower);
  CHECK(f1 - f0 == doctest::Approx(2e6).epsilon(0.01));
}
