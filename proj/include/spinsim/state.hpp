#pragma once

#include "spinsim/types.hpp"

namespace spinsim {

// Density matrix of the joint electron (x) nuclear system.
struct SpinState {
  Matrix6cd rho = Matrix6cd::Zero();

  static SpinState maximally_mixed() {
    SpinState s;
    s.rho = Matrix6cd::Identity() / 6.0;
    return s;
  }

  static SpinState pure(const Vector6cd& psi) {
    SpinState s;
    s.rho = psi * psi.adjoint();
    return s;
  }

  double purity() const { return std::real((rho * rho).trace()); }

  // Hermitian to 1e-10, unit trace to 1e-10, eigenvalues >= -1e-9
  void validate() const;
};

}  // namespace spinsim
