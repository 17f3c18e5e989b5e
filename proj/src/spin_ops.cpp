#include "spinsim/spin_ops.hpp"

#include <cmath>

namespace spinsim {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

Matrix3cd spin1_x() {
  Matrix3cd m = Matrix3cd::Zero();
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = kInvSqrt2;
  return m;
}

Matrix3cd spin1_y() {
  Matrix3cd m = Matrix3cd::Zero();
  m(0, 1) = cplx(0, -kInvSqrt2);
  m(1, 0) = cplx(0, kInvSqrt2);
  m(1, 2) = cplx(0, -kInvSqrt2);
  m(2, 1) = cplx(0, kInvSqrt2);
  return m;
}

Matrix3cd spin1_z() {
  Matrix3cd m = Matrix3cd::Zero();
  m(0, 0) = 1.0;
  m(2, 2) = -1.0;
  return m;
}

Matrix2cd spin_half_x() {
  Matrix2cd m = Matrix2cd::Zero();
  m(0, 1) = m(1, 0) = 0.5;
  return m;
}

Matrix2cd spin_half_y() {
  Matrix2cd m = Matrix2cd::Zero();
  m(0, 1) = cplx(0, -0.5);
  m(1, 0) = cplx(0, 0.5);
  return m;
}

Matrix2cd spin_half_z() {
  Matrix2cd m = Matrix2cd::Zero();
  m(0, 0) = 0.5;
  m(1, 1) = -0.5;
  return m;
}

Matrix6cd kron(const Matrix3cd& e, const Matrix2cd& n) {
  Matrix6cd out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.block<2, 2>(2 * i, 2 * j) = e(i, j) * n;
  return out;
}

Matrix6cd kron_e(const Matrix3cd& e) { return kron(e, Matrix2cd::Identity()); }

Matrix6cd kron_n(const Matrix2cd& n) { return kron(Matrix3cd::Identity(), n); }

Matrix6cd nuclear_axis_op(const Vec3& n_hat) {
  Matrix2cd op = n_hat.x() * spin_half_x() + n_hat.y() * spin_half_y() + n_hat.z() * spin_half_z();
  return kron_n(op);
}

}  // namespace spinsim
