#include "spinsim/engine.hpp"

#include <cmath>

#include "spinsim/hamiltonian.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/simd/kernels.hpp"
#include "spinsim/spin_ops.hpp"

namespace spinsim {

namespace {

// rho <- v rho v^dagger
void sandwich(const Matrix6cd& v, Matrix6cd& rho) {
  Matrix6cd t, vdag = v.adjoint();
  simd::cmul6(v.data(), rho.data(), t.data());
  simd::cmul6(t.data(), vdag.data(), rho.data());
}

Matrix6cd exp_herm(const Matrix6cd& g, double scale) {
  // exp(-i * scale * g) for Hermitian g
  Eigen::SelfAdjointEigenSolver<Matrix6cd> s(g);
  if (s.info() != Eigen::Success) throw NumericError("engine: generator diagonalization failed");
  Matrix6cd u = s.eigenvectors();
  Matrix6cd w = u;
  for (int k = 0; k < 6; ++k) {
    const double ph = -scale * s.eigenvalues()[k];
    w.col(k) *= cplx(std::cos(ph), std::sin(ph));
  }
  Matrix6cd out;
  Matrix6cd udag = u.adjoint();
  simd::cmul6(w.data(), udag.data(), out.data());
  return out;
}

}  // namespace

SpinSystem::SpinSystem(const Matrix6cd& h) : eigs_(h) {
  if (!eigs_.labeling_ok())
    throw NumericError("engine: cannot resolve electron manifolds for this Hamiltonian");
  const Matrix6cd sx6 = kron_e(spin1_x());
  drive_op_ = eigs_.states().adjoint() * sx6 * eigs_.states();
  // rotating-frame generator counts MW quanta: both +-1 manifolds sit one
  // drive photon above the 0 manifold, so a positive drive frequency is
  // resonant with either branch
  for (int k = 0; k < 6; ++k) frame_gen_[k] = eigs_.label(k) == Manifold::Zero ? 0.0 : 1.0;
}

void SpinSystem::apply_optical_init(SpinState& state) const {
  // nuclear reduced state per manifold (bare basis), summed
  Matrix2cd rho_n = Matrix2cd::Zero();
  for (int mi = 0; mi < 3; ++mi) {
    const Manifold m = static_cast<Manifold>(mi);
    const Vector6cd lo = eigs_.state(m, Branch::Lower);
    const Vector6cd hi = eigs_.state(m, Branch::Upper);
    const Matrix6cd proj = lo * lo.adjoint() + hi * hi.adjoint();
    const Matrix6cd pm = proj * state.rho * proj;
    for (int e = 0; e < 3; ++e) rho_n += pm.block<2, 2>(2 * e, 2 * e);
  }
  // re-tensor with the 0' manifold
  Eigen::Matrix<cplx, 6, 2> v = Eigen::Matrix<cplx, 6, 2>::Zero();
  const auto& nb = eigs_.nuclear_basis(Manifold::Zero);
  v += eigs_.state(Manifold::Zero, Branch::Lower) * nb[0].adjoint();
  v += eigs_.state(Manifold::Zero, Branch::Upper) * nb[1].adjoint();
  state.rho = v * rho_n * v.adjoint();
}

Matrix6cd SpinSystem::wait_propagator(double duration) const {
  Matrix6cd w = eigs_.states();
  for (int k = 0; k < 6; ++k) {
    const double ph = -2.0 * kPi * eigs_.energies()[k] * duration;
    w.col(k) *= cplx(std::cos(ph), std::sin(ph));
  }
  Matrix6cd out;
  Matrix6cd udag = eigs_.states().adjoint();
  simd::cmul6(w.data(), udag.data(), out.data());
  return out;
}

void SpinSystem::apply_wait(SpinState& state, double duration) const {
  if (duration < 0) throw ConfigError("free evolution: negative duration");
  if (duration == 0) return;
  sandwich(wait_propagator(duration), state.rho);
}

Matrix6cd SpinSystem::mw_propagator(const MwPulse& p) const {
  // rotating frame at the drive frequency; generator = manifold label.
  // Keeps the co-rotating electron drive terms of both 0 <-> +-1 branches,
  // drops the counter-rotating ones; nuclear dynamics stay exact.
  Matrix6cd h_rot = Matrix6cd::Zero();
  for (int k = 0; k < 6; ++k)
    h_rot(k, k) = eigs_.energies()[k] - p.frequency * frame_gen_[k];
  const double amp = std::sqrt(2.0) * p.rabi / 2.0;
  const cplx ephase(std::cos(p.phase), -std::sin(p.phase));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (frame_gen_[i] - frame_gen_[j] == 1.0) {
        const cplx d = amp * ephase * drive_op_(i, j);
        h_rot(i, j) += d;
        h_rot(j, i) += std::conj(d);
      }
  const Matrix6cd u_rot = exp_herm(h_rot, 2.0 * kPi * p.duration);
  Matrix6cd v = u_rot;
  for (int i = 0; i < 6; ++i) {
    const double ph = -2.0 * kPi * p.frequency * p.duration * frame_gen_[i];
    v.row(i) *= cplx(std::cos(ph), std::sin(ph));
  }
  // back to the bare basis
  Matrix6cd t, out;
  Matrix6cd udag = eigs_.states().adjoint();
  simd::cmul6(eigs_.states().data(), v.data(), t.data());
  simd::cmul6(t.data(), udag.data(), out.data());
  return out;
}

void SpinSystem::apply_mw(SpinState& state, const MwPulse& p, std::vector<std::string>* warnings) const {
  if (p.duration < 0 || p.rabi < 0) throw ConfigError("mw pulse: invalid parameters");
  if (p.duration == 0) return;
  if (warnings) {
    double dmin = 1e300;
    for (Manifold m : {Manifold::PlusOne, Manifold::MinusOne})
      for (Branch br : {Branch::Lower, Branch::Upper})
        dmin = std::min(dmin, std::abs(p.frequency - std::abs(eigs_.transition_frequency(m, br))));
    if (dmin > 1e9)
      warnings->push_back("mw pulse at " + std::to_string(p.frequency) +
                          " Hz is detuned by more than 1 GHz from every electron transition");
  }
  sandwich(mw_propagator(p), state.rho);
}

double SpinSystem::readout(const SpinState& state) const {
  const Vector6cd lo = eigs_.state(Manifold::Zero, Branch::Lower);
  const Vector6cd hi = eigs_.state(Manifold::Zero, Branch::Upper);
  double p = std::real((lo.adjoint() * state.rho * lo)(0)) +
             std::real((hi.adjoint() * state.rho * hi)(0));
  return std::clamp(p, 0.0, 1.0);
}

Vector6cd SpinSystem::embed(Manifold m, const Vector2cd& spinor) const {
  const auto& nb = eigs_.nuclear_basis(m);
  return eigs_.state(m, Branch::Lower) * (nb[0].adjoint() * spinor)(0) +
         eigs_.state(m, Branch::Upper) * (nb[1].adjoint() * spinor)(0);
}

void SpinSystem::apply_ideal_selective_pi(SpinState& state, Branch branch) const {
  const Vector2cd target_spinor = eigs_.nuclear_basis(Manifold::PlusOne)[static_cast<int>(branch)];
  const Vector6cd w = embed(Manifold::Zero, target_spinor);
  const Vector6cd t = eigs_.state(Manifold::PlusOne, branch);
  Matrix6cd u = Matrix6cd::Identity();
  u -= w * w.adjoint() + t * t.adjoint();
  u -= cplx(0, 1) * (w * t.adjoint() + t * w.adjoint());
  sandwich(u, state.rho);
}

void SpinSystem::apply_dressed_rotation(SpinState& state, double theta, double phi) const {
  // T carries the bare nuclear state from 0' to +1'
  Eigen::Matrix<cplx, 6, 6> t = Matrix6cd::Zero();
  const auto& nb0 = eigs_.nuclear_basis(Manifold::Zero);
  const auto& nb1 = eigs_.nuclear_basis(Manifold::PlusOne);
  for (int k = 0; k < 2; ++k)
    for (int kp = 0; kp < 2; ++kp) {
      const cplx ov = (nb1[k].adjoint() * nb0[kp])(0);
      t += ov * (eigs_.state(Manifold::PlusOne, static_cast<Branch>(k)) *
                 eigs_.state(Manifold::Zero, static_cast<Branch>(kp)).adjoint());
    }
  const cplx e(std::cos(phi), -std::sin(phi));
  Matrix6cd g = e * t + std::conj(e) * t.adjoint();
  sandwich(exp_herm(g, theta / 2.0), state.rho);
}

Matrix6cd detuned_hamiltonian(const Matrix6cd& h_nominal, const Vec3& nuclear_axis0,
                              double delta_e, double delta_n) {
  // positive delta_e raises the 0 <-> +1 transition; positive delta_n widens
  // the 0'-manifold doublet (the lower branch lies along +nuclear_axis0)
  Matrix6cd h = h_nominal;
  if (delta_e != 0.0) h += delta_e * kron_e(spin1_z());
  if (delta_n != 0.0) h -= delta_n * nuclear_axis_op(nuclear_axis0);
  return h;
}

namespace {

double fold_once(const SpinSystem& sys, const PulseSequence& seq, const SpinState& initial,
                 std::vector<std::string>* warnings) {
  SpinState st = initial;
  double elapsed = 0.0;  // drive sources are phase-locked to the sequence start
  for (const auto& e : seq.elements) {
    if (std::holds_alternative<OpticalInit>(e)) {
      sys.apply_optical_init(st);
    } else if (const auto* mw = std::get_if<MwPulse>(&e)) {
      MwPulse clocked = *mw;
      clocked.phase = mw->phase + 2.0 * kPi * mw->frequency * elapsed;
      sys.apply_mw(st, clocked, warnings);
      elapsed += mw->duration;
    } else if (const auto* w = std::get_if<Wait>(&e)) {
      sys.apply_wait(st, w->duration);
      elapsed += w->duration;
    } else {
      return sys.readout(st);
    }
  }
  throw ConfigError("pulse sequence: missing readout");  // validate() prevents this
}

}  // namespace

double run_sequence(const PulseSequence& seq, const SpinState& initial, const SystemParams& params,
                    const std::optional<DephasingSpec>& dephasing, std::uint64_t seed,
                    std::vector<std::string>* warnings) {
  seq.validate();
  const Matrix6cd h = build_hamiltonian(params);
  if (!dephasing || !dephasing->active()) {
    SpinSystem sys(h);
    return fold_once(sys, seq, initial, warnings);
  }
  dephasing->validate();
  const SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);
  double acc = 0.0;
  for (int s = 0; s < dephasing->samples; ++s) {
    Rng rng(Rng::substream(seed ^ dephasing->seed, static_cast<std::uint64_t>(s)));
    const double de = dephasing->electron_sigma > 0 ? dephasing->electron_sigma * rng.next_gaussian() : 0.0;
    const double dn = dephasing->nuclear_sigma > 0 ? dephasing->nuclear_sigma * rng.next_gaussian() : 0.0;
    SpinSystem sys(detuned_hamiltonian(h, axis0, de, dn));
    acc += fold_once(sys, seq, initial, s == 0 ? warnings : nullptr);
  }
  return acc / dephasing->samples;
}

SpinState optical_init(const SpinState& state, const SystemParams& params) {
  SpinSystem sys(build_hamiltonian(params));
  SpinState out = state;
  sys.apply_optical_init(out);
  return out;
}

SpinState mw_pulse(const SpinState& state, const MwPulse& p, const SystemParams& params,
                   std::vector<std::string>* warnings) {
  SpinSystem sys(build_hamiltonian(params));
  SpinState out = state;
  sys.apply_mw(out, p, warnings);
  return out;
}

SpinState free_evolution(const SpinState& state, double duration, const SystemParams& params,
                         const std::optional<DephasingSpec>& dephasing) {
  const Matrix6cd h = build_hamiltonian(params);
  if (!dephasing || !dephasing->active()) {
    SpinSystem sys(h);
    SpinState out = state;
    sys.apply_wait(out, duration);
    return out;
  }
  dephasing->validate();
  const SpinSystem nominal(h);
  const Vec3 axis0 = nominal.eigs().nuclear_axis(Manifold::Zero);
  SpinState out;
  out.rho.setZero();
  for (int s = 0; s < dephasing->samples; ++s) {
    Rng rng(Rng::substream(dephasing->seed, static_cast<std::uint64_t>(s)));
    const double de = dephasing->electron_sigma > 0 ? dephasing->electron_sigma * rng.next_gaussian() : 0.0;
    const double dn = dephasing->nuclear_sigma > 0 ? dephasing->nuclear_sigma * rng.next_gaussian() : 0.0;
    SpinSystem sys(detuned_hamiltonian(h, axis0, de, dn));
    SpinState st = state;
    sys.apply_wait(st, duration);
    out.rho += st.rho;
  }
  out.rho /= static_cast<double>(dephasing->samples);
  return out;
}

double readout(const SpinState& state, const SystemParams& params, double contrast) {
  SpinSystem sys(build_hamiltonian(params));
  const double p = sys.readout(state);
  return 1.0 - contrast * (1.0 - p);
}

}  // namespace spinsim
