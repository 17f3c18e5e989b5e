#include "spinsim/perturbation.hpp"

#include <cmath>
#include <string>

#include "spinsim/hamiltonian.hpp"

namespace spinsim {

Vector6d second_order_energies(const SystemParams& params) {
  // Second-order corrections over the secular eigenbasis. The nuclear doublet
  // inside each electron manifold is quasi-degenerate on the scale of the
  // induced couplings, so the correction is assembled as a 2x2 effective
  // block per manifold (Van Vleck form) and diagonalized; its diagonal
  // entries are the textbook |<k|H_perp|n>|^2 / (E_n - E_k) sums.
  auto [h_sec, h_perp] = split_secular(params);
  const EigenSystem sec(h_sec);
  if (!sec.labeling_ok())
    throw NumericError("second_order_energies: secular manifolds are not resolvable");
  const Vector6d e0 = sec.energies();
  const Matrix6cd v = sec.states().adjoint() * h_perp * sec.states();

  Vector6d out;
  int slot = 0;
  for (Manifold m : {Manifold::MinusOne, Manifold::Zero, Manifold::PlusOne}) {
    const int i0 = sec.index(m, Branch::Lower);
    const int i1 = sec.index(m, Branch::Upper);
    Matrix2cd block = Matrix2cd::Zero();
    block(0, 0) = e0[i0];
    block(1, 1) = e0[i1];
    const int idx[2] = {i0, i1};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int k = 0; k < 6; ++k) {
          if (k == i0 || k == i1) continue;
          const cplx coupling = v(idx[a], k) * v(k, idx[b]);
          if (std::abs(coupling) < 1e-24) continue;
          const double da = e0[idx[a]] - e0[k];
          const double db = e0[idx[b]] - e0[k];
          if (std::abs(da) < 1e3 || std::abs(db) < 1e3)
            throw NumericError("second_order_energies: near-degenerate levels " +
                               std::to_string(idx[a]) + " and " + std::to_string(k) + " (gap " +
                               std::to_string(std::min(std::abs(da), std::abs(db))) + " Hz)");
          block(a, b) += 0.5 * coupling * (1.0 / da + 1.0 / db);
        }
    Eigen::SelfAdjointEigenSolver<Matrix2cd> bs(block);
    out[slot++] = bs.eigenvalues()[0];
    out[slot++] = bs.eigenvalues()[1];
  }
  std::sort(out.data(), out.data() + 6);
  return out;
}

double nu0_prime_closed_form(const SystemParams& params) {
  params.validate();
  const Vec3 b = params.field.vec();
  const double ge = params.constants.gamma_e();
  const double gn = params.constants.gamma_n();
  Vec3 v = gn * b;
  v -= (2.0 * ge / params.constants.d_gs) *
       (b.x() * params.hyperfine.row(0) + b.y() * params.hyperfine.row(1));
  return v.norm();
}

double enhancement_factor(const SystemParams& params) {
  params.validate();
  const double bmag = params.field.magnitude();
  if (bmag <= 0) throw NumericError("enhancement_factor: B = 0");
  const double bperp = std::hypot(params.field.bx, params.field.by);
  const double alpha_perp = std::hypot(params.hyperfine(0, 2), params.hyperfine(1, 2));
  return (alpha_perp / params.constants.d_gs) * (params.constants.mu_e * bperp) /
         (params.constants.mu_n * bmag);
}

bool perturbation_regime_ok(const SystemParams& params) {
  const double zeeman = params.constants.gamma_e() * params.field.magnitude();
  return params.constants.d_gs > 10.0 * std::max(zeeman, params.hyperfine.max_abs());
}

PerturbationReport validate_perturbation(const SystemParams& params, double tolerance) {
  PerturbationReport rep;
  rep.regime_ok = perturbation_regime_ok(params);
  rep.nu0_closed = nu0_prime_closed_form(params);
  EigenSystem eigs = eigensystem(params);
  rep.nu0_exact = nuclear_doublet_splitting(eigs, Manifold::Zero);
  rep.relative_error = std::abs(rep.nu0_closed - rep.nu0_exact) / std::max(std::abs(rep.nu0_exact), 1.0);
  rep.enhancement = params.field.magnitude() > 0 ? enhancement_factor(params) : 0.0;
  rep.within_tolerance = rep.relative_error <= tolerance;
  return rep;
}

}  // namespace spinsim
