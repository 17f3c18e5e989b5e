#include "spinsim/hamiltonian.hpp"

#include <array>

#include "spinsim/spin_ops.hpp"

namespace spinsim {

namespace {

std::array<Matrix3cd, 3> electron_ops() { return {spin1_x(), spin1_y(), spin1_z()}; }
std::array<Matrix2cd, 3> nuclear_ops() { return {spin_half_x(), spin_half_y(), spin_half_z()}; }

}  // namespace

Matrix6cd build_hamiltonian(const SystemParams& params) {
  params.validate();
  const auto S = electron_ops();
  const auto I = nuclear_ops();
  const Vec3 b = params.field.vec();
  const double ge = params.constants.gamma_e();
  const double gn = params.constants.gamma_n();

  Matrix6cd h = params.constants.d_gs * kron_e(spin1_z() * spin1_z());
  for (int mu = 0; mu < 3; ++mu) {
    h += ge * b[mu] * kron_e(S[mu]);
    h += gn * b[mu] * kron_n(I[mu]);
    for (int nu = 0; nu < 3; ++nu)
      h += params.hyperfine(mu, nu) * kron(S[mu], I[nu]);
  }
  return h;
}

std::pair<Matrix6cd, Matrix6cd> split_secular(const SystemParams& params) {
  params.validate();
  const auto S = electron_ops();
  const auto I = nuclear_ops();
  const Vec3 b = params.field.vec();
  const double ge = params.constants.gamma_e();

  Matrix6cd perp = Matrix6cd::Zero();
  for (int mu = 0; mu < 2; ++mu) {  // x and y electron operators only
    perp += ge * b[mu] * kron_e(S[mu]);
    for (int nu = 0; nu < 3; ++nu)
      perp += params.hyperfine(mu, nu) * kron(S[mu], I[nu]);
  }
  Matrix6cd secular = build_hamiltonian(params) - perp;
  return {secular, perp};
}

}  // namespace spinsim
