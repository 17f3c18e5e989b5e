#pragma once

#include <string>

#include "spinsim/types.hpp"

namespace spinsim {

// Explicit-unit boundary conversion. Internals are SI: Hz, T, s, rad.
// Unknown or dimension-mismatched units raise ConfigError.
enum class Dimension { Frequency, Field, Time, Angle, MagneticMoment, Action, Dimensionless };

double unit_factor(const std::string& unit, Dimension dim);
double convert(double value, const std::string& unit, Dimension dim);
const char* dimension_name(Dimension dim);

}  // namespace spinsim
