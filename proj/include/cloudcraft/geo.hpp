#pragma once

#include <stdexcept>

namespace cloudcraft {

struct GeoPoint {
  double latitude = 0.0;   // degrees, [-90, 90]
  double longitude = 0.0;  // degrees, [-180, 180]

  void validate() const {
    if (!(latitude >= -90.0 && latitude <= 90.0))
      throw std::out_of_range("latitude out of range");
    if (!(longitude >= -180.0 && longitude <= 180.0))
      throw std::out_of_range("longitude out of range");
  }
};

inline constexpr double kEarthRadiusM = 6'371'000.0;

// Great-circle distance in meters on a spherical Earth.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

}  // namespace cloudcraft
