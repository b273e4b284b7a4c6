#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace seaway {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

//! Local tangent-plane position in meters. Stored as (x, y) = (east, north)
//! so that counter-clockwise has its usual meaning in the plane.
using LocalPoint = Point2<double>;

inline LocalPoint local_point(double north, double east) { return {east, north}; }
inline double north(const LocalPoint& p) { return p.y(); }
inline double east(const LocalPoint& p) { return p.x(); }

//! WGS-84 position in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

//! Rectangular geodetic window.
struct GeoFilter {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;

  GeoPoint center() const { return {0.5 * (lat_min + lat_max), 0.5 * (lon_min + lon_max)}; }
  bool contains(const GeoPoint& p) const {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
  }
  void validate() const;
};

//! Closed ring; the closing vertex is implicit. Exteriors are CCW, holes CW.
using Ring = std::vector<LocalPoint>;

struct NavPolygon {
  Ring exterior;
  std::vector<Ring> holes;
  double depth_min = 0.0;
  double depth_max = 0.0;
};

struct Box {
  LocalPoint min{LocalPoint::Constant(std::numeric_limits<double>::infinity())};
  LocalPoint max{LocalPoint::Constant(-std::numeric_limits<double>::infinity())};

  void extend(const LocalPoint& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Box& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool empty() const { return !(min.x() <= max.x() && min.y() <= max.y()); }
  LocalPoint size() const { return max - min; }
  double area() const { return empty() ? 0.0 : size().prod(); }
  bool contains(const LocalPoint& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  bool intersects(const Box& b) const {
    return !(b.min.x() > max.x() || b.max.x() < min.x() || b.min.y() > max.y() || b.max.y() < min.y());
  }
};

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyRegion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace seaway
