#include "spinsim/eigensystem.hpp"

#include <cmath>

#include "spinsim/hamiltonian.hpp"

namespace spinsim {

namespace {

// fix global phase: largest-|.| component real positive
void fix_phase(Vector6cd& v) {
  int imax = 0;
  double best = 0.0;
  for (int i = 0; i < 6; ++i) {
    double m = std::abs(v[i]);
    if (m > best) {
      best = m;
      imax = i;
    }
  }
  if (best > 0) v *= std::conj(v[imax]) / std::abs(v[imax]);
}

void fix_phase2(Vector2cd& v) {
  int imax = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
  double m = std::abs(v[imax]);
  if (m > 0) v *= std::conj(v[imax]) / m;
}

Vec3 bloch(const Vector2cd& s) {
  Vec3 n(2.0 * std::real(std::conj(s[0]) * s[1]),
         2.0 * std::imag(std::conj(s[0]) * s[1]),
         std::norm(s[0]) - std::norm(s[1]));
  double len = n.norm();
  if (len == 0) throw NumericError("nuclear spinor has no Bloch direction");
  return n / len;
}

}  // namespace

EigenSystem::EigenSystem(const Matrix6cd& h, double degeneracy_tol_hz) {
  if (!h.isApprox(h.adjoint(), 1e-9))
    throw NumericError("eigensystem: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix6cd> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensystem: diagonalization failed");
  energies_ = solver.eigenvalues();
  states_ = solver.eigenvectors();
  for (int k = 0; k < 6; ++k) {
    Vector6cd v = states_.col(k);
    fix_phase(v);
    states_.col(k) = v;
  }

  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (std::abs(energies_[i] - energies_[j]) < degeneracy_tol_hz) degenerate_ = true;

  // label by dominant electron character; bare row order is (+1, 0, -1)
  std::array<int, 3> counts = {0, 0, 0};
  for (int k = 0; k < 6; ++k) {
    double p1 = std::norm(states_(0, k)) + std::norm(states_(1, k));
    double p0 = std::norm(states_(2, k)) + std::norm(states_(3, k));
    double pm = std::norm(states_(4, k)) + std::norm(states_(5, k));
    Manifold m = Manifold::PlusOne;
    if (p0 >= p1 && p0 >= pm) m = Manifold::Zero;
    else if (pm > p1) m = Manifold::MinusOne;
    labels_[k] = m;
    int mi = static_cast<int>(m);
    if (counts[mi] < 2) index_[mi][counts[mi]] = k;
    ++counts[mi];
  }
  labeling_ok_ = counts[0] == 2 && counts[1] == 2 && counts[2] == 2;

  if (labeling_ok_) {
    for (int mi = 0; mi < 3; ++mi) {
      // nuclear spinor conditioned on the dominant electron component
      auto spinor = [&](int k) {
        int erow = 2;  // bare electron block row offset for this manifold
        Manifold m = static_cast<Manifold>(mi);
        if (m == Manifold::PlusOne) erow = 0;
        else if (m == Manifold::Zero) erow = 2;
        else erow = 4;
        Vector2cd s(states_(erow, k), states_(erow + 1, k));
        double n = s.norm();
        if (n == 0) throw NumericError("eigensystem: vanishing nuclear component");
        s /= n;
        fix_phase2(s);
        return s;
      };
      Vector2cd s0 = spinor(index_[mi][0]);
      Vector2cd s1 = spinor(index_[mi][1]);
      // orthonormalize the upper spinor against the lower
      s1 -= s0 * (s0.adjoint() * s1)(0);
      double n1 = s1.norm();
      if (n1 < 1e-6) throw NumericError("eigensystem: nuclear branches not resolvable");
      s1 /= n1;
      fix_phase2(s1);
      nuclear_basis_[mi] = {s0, s1};
    }
  }
}

int EigenSystem::index(Manifold m, Branch br) const {
  if (!labeling_ok_)
    throw NumericError("eigensystem: manifold labeling is ambiguous (degenerate electron character)");
  return index_[static_cast<int>(m)][static_cast<int>(br)];
}

const std::array<Vector2cd, 2>& EigenSystem::nuclear_basis(Manifold m) const {
  if (!labeling_ok_) throw NumericError("eigensystem: manifold labeling is ambiguous");
  return nuclear_basis_[static_cast<int>(m)];
}

double EigenSystem::doublet_splitting(Manifold m) const {
  return energy(m, Branch::Upper) - energy(m, Branch::Lower);
}

Vec3 EigenSystem::nuclear_axis(Manifold m) const {
  return bloch(nuclear_basis(m)[0]);
}

double EigenSystem::transition_frequency(Manifold to, Branch br) const {
  double center0 = 0.5 * (energy(Manifold::Zero, Branch::Lower) + energy(Manifold::Zero, Branch::Upper));
  return energy(to, br) - center0;
}

Vec3 EigenSystem::bare_mixing(Manifold m) const {
  int k = index(m, Branch::Lower);
  double p1 = std::sqrt(std::norm(states_(0, k)) + std::norm(states_(1, k)));
  double p0 = std::sqrt(std::norm(states_(2, k)) + std::norm(states_(3, k)));
  double pm = std::sqrt(std::norm(states_(4, k)) + std::norm(states_(5, k)));
  return Vec3(p0, p1, pm);
}

QuantizationAxes EigenSystem::quantization_axes() const {
  if (degenerate()) throw NumericError("quantization axes: degenerate nuclear branches");
  QuantizationAxes out;
  out.axis_0 = nuclear_axis(Manifold::Zero);
  out.axis_1 = nuclear_axis(Manifold::PlusOne);
  double c = std::clamp(std::abs(out.axis_0.dot(out.axis_1)), 0.0, 1.0);
  out.delta = std::acos(c) * 180.0 / kPi;

  // |+> is the lower 0'-branch, |dn>/|up> the |1>-manifold branches
  const Vector2cd& plus = nuclear_basis(Manifold::Zero)[0];
  const Vector2cd& dn = nuclear_basis(Manifold::PlusOne)[0];
  const Vector2cd& up = nuclear_basis(Manifold::PlusOne)[1];
  cplx ca = (dn.adjoint() * plus)(0);
  cplx cb = (up.adjoint() * plus)(0);
  out.a = std::abs(ca);
  out.b = std::abs(cb);
  // rotate the overall phase so the |dn> coefficient is real positive
  cplx ref = out.a > 1e-12 ? ca / out.a : cplx(1, 0);
  out.phi = std::arg(cb * std::conj(ref));
  return out;
}

EigenSystem eigensystem(const SystemParams& params) {
  return EigenSystem(build_hamiltonian(params));
}

double nuclear_doublet_splitting(const EigenSystem& eigs, Manifold m) {
  if (eigs.degenerate()) throw NumericError("nuclear doublet splitting: manifold is degenerate");
  return eigs.doublet_splitting(m);
}

double secular_splitting(const HyperfineTensor& hyperfine) {
  hyperfine.validate();
  return hyperfine(2, 0) + hyperfine(2, 1) + hyperfine(2, 2);
}

}  // namespace spinsim
