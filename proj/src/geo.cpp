#include "cloudcraft/geo.hpp"

#include <cmath>

namespace cloudcraft {

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kDegToRad = M_PI / 180.0;
  const double lat1 = a.latitude * kDegToRad;
  const double lat2 = b.latitude * kDegToRad;
  const double dlat = (b.latitude - a.latitude) * kDegToRad;
  const double dlon = (b.longitude - a.longitude) * kDegToRad;

  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

}  // namespace cloudcraft
