#pragma once

#include "spinsim/types.hpp"

namespace spinsim {

// Spin-1 operators in the basis (+1, 0, -1); Sz = diag(1, 0, -1).
Matrix3cd spin1_x();
Matrix3cd spin1_y();
Matrix3cd spin1_z();

// Spin-1/2 operators = sigma/2 in the basis (up, dn) along z.
Matrix2cd spin_half_x();
Matrix2cd spin_half_y();
Matrix2cd spin_half_z();

// Kronecker products onto the joint 6-dim space, basis order
// (1,up),(1,dn),(0,up),(0,dn),(-1,up),(-1,dn).
Matrix6cd kron_e(const Matrix3cd& e);                      // e (x) 1_2
Matrix6cd kron_n(const Matrix2cd& n);                      // 1_3 (x) n
Matrix6cd kron(const Matrix3cd& e, const Matrix2cd& n);

// n_hat . I on the joint space
Matrix6cd nuclear_axis_op(const Vec3& n_hat);

}  // namespace spinsim
