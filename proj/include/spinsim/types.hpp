#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <eigen3/Eigen/Dense>

namespace spinsim {

using cplx = std::complex<double>;
using Matrix6cd = Eigen::Matrix<cplx, 6, 6>;
using Matrix3cd = Eigen::Matrix<cplx, 3, 3>;
using Matrix2cd = Eigen::Matrix<cplx, 2, 2>;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vector6cd = Eigen::Matrix<cplx, 6, 1>;
using Vector2cd = Eigen::Matrix<cplx, 2, 1>;
using Vec3 = Eigen::Vector3d;

// exit-code-bearing error kinds (see CLI): 2 config, 3 numeric, 4 I/O
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& m) : std::runtime_error(m) {}
};
struct IoError : std::runtime_error {
  explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

inline constexpr double kPlanck = 6.62607015e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace spinsim
