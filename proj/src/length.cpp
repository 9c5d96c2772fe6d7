#include "beamforge/length.hpp"

#include <cmath>
#include <stdexcept>

namespace beamforge {

Length Length::from_meters(double meters) {
  if (!std::isfinite(meters)) {
    throw std::invalid_argument("length is not a finite number");
  }
  const double scaled = meters * 100.0;
  const double rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6) {
    throw std::invalid_argument("length " + std::to_string(meters) +
                                " has more than two fractional digits");
  }
  return Length(static_cast<std::int64_t>(rounded));
}

std::string Length::to_string() const {
  const std::int64_t mag = cm_ < 0 ? -cm_ : cm_;
  std::string out = cm_ < 0 ? "-" : "";
  out += std::to_string(mag / 100);
  const std::int64_t frac = mag % 100;
  if (frac != 0) {
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    if (frac % 10 != 0) out += static_cast<char>('0' + frac % 10);
  }
  return out;
}

}  // namespace beamforge
