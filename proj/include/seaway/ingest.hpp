#pragma once

#include "seaway/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

namespace seaway {

struct AisMessage {
  std::uint32_t mmsi = 0;
  double t = 0.0;        // seconds since the Unix epoch, UTC
  double sog = 0.0;      // knots
  double draught = 0.0;  // meters
  GeoPoint pos;
};

struct AisLoadResult {
  std::vector<AisMessage> messages;
  std::size_t rows = 0;     // data rows seen, header excluded
  std::size_t skipped = 0;  // rows rejected as invalid
};

//! Parses `mmsi,timestamp,sog_kn,draught_m,lat,lon` CSV text. Invalid rows
//! are skipped and counted; more than half invalid throws FormatError.
AisLoadResult parse_ais(std::string_view text);
//! Reads and parses a file, warning once per skipped row. Throws IoError if
//! the file cannot be read.
AisLoadResult load_ais(const std::filesystem::path& path);

//! Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z|+00:00]" as UTC seconds.
std::optional<double> parse_iso8601(std::string_view s);

//! Selection of messages inside a region, with speed strictly inside
//! (sog_min, sog_max) and draught at least draught_min.
struct AisFilter {
  GeoFilter region;
  double sog_min = 0.5;
  double sog_max = 50.0;
  double draught_min = 0.0;

  void validate() const;
  bool accepts(const AisMessage& m) const {
    return region.contains(m.pos) && m.sog > sog_min && m.sog < sog_max && m.draught >= draught_min;
  }
};

std::vector<AisMessage> filter_ais(std::span<const AisMessage> msgs, const AisFilter& f);

struct ChartSet {
  GeoPoint origin;
  GeoFilter filter;
  std::vector<NavPolygon> depth_areas;
  std::vector<NavPolygon> land_areas;
  std::size_t rejected = 0;  // features dropped with a warning
};

//! Parses a chart FeatureCollection, keeping DEPARE and LNDARE features that
//! intersect the filter, cropped to it and projected about its center.
ChartSet parse_chart(std::string_view json_text, const GeoFilter& filter, std::string_view source = "chart");
ChartSet load_chart(const std::filesystem::path& path, const GeoFilter& filter);

//! Depth areas whose minimum depth is at least `required_depth`. Throws
//! EmptyRegion when none qualify.
std::vector<NavPolygon> navigable_region(const ChartSet& chart, double required_depth);

}  // namespace seaway
