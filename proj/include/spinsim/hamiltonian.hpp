#pragma once

#include <utility>

#include "spinsim/params.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

// Static Hamiltonian of the coupled system, Hz:
//   H = D_gs Sz^2 + (mu_e/h) B.S + (mu_n/h) B.I + sum_{mu,nu} alpha_{mu,nu} S_mu I_nu
Matrix6cd build_hamiltonian(const SystemParams& params);

// Secular / non-secular split. The perpendicular part collects every term
// containing Sx or Sy (electron Zeeman x,y plus the x- and y-rows of the
// hyperfine tensor); the parts sum back to the full Hamiltonian exactly.
std::pair<Matrix6cd, Matrix6cd> split_secular(const SystemParams& params);

}  // namespace spinsim
