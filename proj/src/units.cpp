#include "spinsim/units.hpp"

namespace spinsim {

const char* dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::Frequency: return "frequency";
    case Dimension::Field: return "magnetic field";
    case Dimension::Time: return "time";
    case Dimension::Angle: return "angle";
    case Dimension::MagneticMoment: return "magnetic moment";
    case Dimension::Action: return "action";
    case Dimension::Dimensionless: return "dimensionless";
  }
  return "?";
}

double unit_factor(const std::string& unit, Dimension dim) {
  switch (dim) {
    case Dimension::Frequency:
      if (unit == "Hz") return 1.0;
      if (unit == "kHz") return 1e3;
      if (unit == "MHz") return 1e6;
      if (unit == "GHz") return 1e9;
      break;
    case Dimension::Field:
      if (unit == "T") return 1.0;
      if (unit == "mT") return 1e-3;
      if (unit == "uT") return 1e-6;
      if (unit == "G") return 1e-4;
      break;
    case Dimension::Time:
      if (unit == "s") return 1.0;
      if (unit == "ms") return 1e-3;
      if (unit == "us") return 1e-6;
      if (unit == "ns") return 1e-9;
      break;
    case Dimension::Angle:
      if (unit == "rad") return 1.0;
      if (unit == "deg") return kPi / 180.0;
      break;
    case Dimension::MagneticMoment:
      if (unit == "J/T") return 1.0;
      break;
    case Dimension::Action:
      if (unit == "J*s" || unit == "J.s") return 1.0;
      break;
    case Dimension::Dimensionless:
      if (unit.empty() || unit == "1") return 1.0;
      break;
  }
  throw ConfigError("unit '" + unit + "' is not a valid " + dimension_name(dim) + " unit");
}

double convert(double value, const std::string& unit, Dimension dim) {
  return value * unit_factor(unit, dim);
}

}  // namespace spinsim
