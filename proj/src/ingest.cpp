#include "seaway/ingest.hpp"

#include "seaway/log.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

namespace seaway {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  auto v = parse_number<int>(s.substr(pos, len));
  if (!v) return false;
  out = *v;
  return true;
}

// Line number (1-based) of a byte offset.
std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

std::optional<double> parse_iso8601(std::string_view s) {
  int y, mo, d, h, mi, sec;
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
    return std::nullopt;
  if (!parse_fixed(s, 0, 4, y) || !parse_fixed(s, 5, 2, mo) || !parse_fixed(s, 8, 2, d) || !parse_fixed(s, 11, 2, h) ||
      !parse_fixed(s, 14, 2, mi) || !parse_fixed(s, 17, 2, sec))
    return std::nullopt;
  std::string_view rest = s.substr(19);
  double frac = 0.0;
  if (!rest.empty() && rest.front() == '.') {
    std::size_t n = 1;
    while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
    if (n == 1) return std::nullopt;
    // from_chars cannot read ".123", so prepend the zero by hand.
    const std::string digits = "0" + std::string(rest.substr(0, n));
    const auto f = parse_number<double>(digits);
    if (!f) return std::nullopt;
    frac = *f;
    rest.remove_prefix(n);
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec + frac;
}

AisLoadResult parse_ais(std::string_view text) {
  AisLoadResult out;
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      const std::size_t end = text.find('\n', pos);
      line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      pos = end == std::string_view::npos ? text.size() : end + 1;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) return out;

  static constexpr std::array<std::string_view, 6> names{"mmsi", "timestamp", "sog_kn", "draught_m", "lat", "lon"};
  std::array<std::size_t, 6> col{};
  const auto header = split(line, ',');
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end()) throw FormatError("AIS header lacks column '" + std::string(names[k]) + "'");
    col[k] = static_cast<std::size_t>(it - header.begin());
  }

  while (next_line(line)) {
    ++out.rows;
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      ++out.skipped;
      continue;
    }
    const auto mmsi = parse_number<std::uint32_t>(f[col[0]]);
    const auto t = parse_iso8601(f[col[1]]);
    const auto sog = parse_number<double>(f[col[2]]);
    const auto draught = parse_number<double>(f[col[3]]);
    const auto lat = parse_number<double>(f[col[4]]);
    const auto lon = parse_number<double>(f[col[5]]);
    if (!mmsi || *mmsi > 999999999u || f[col[0]].size() > 9 || !t || !sog || !draught || !lat || !lon ||
        !std::isfinite(*sog) || *sog < 0.0 || !std::isfinite(*draught) || *draught < 0.0 || !valid({*lat, *lon})) {
      ++out.skipped;
      continue;
    }
    out.messages.push_back({*mmsi, *t, *sog, *draught, {*lat, *lon}});
  }
  if (out.rows > 0 && 2 * out.skipped > out.rows)
    throw FormatError(std::to_string(out.skipped) + " of " + std::to_string(out.rows) + " AIS rows are invalid");
  return out;
}

AisLoadResult load_ais(const std::filesystem::path& path) {
  AisLoadResult r = parse_ais(read_file(path));
  if (r.skipped > 0) warn(path.string() + ": skipped " + std::to_string(r.skipped) + " invalid AIS row(s)");
  return r;
}

void AisFilter::validate() const {
  region.validate();
  if (!(sog_min >= 0.0 && sog_min < sog_max)) throw InvalidInput("AIS filter requires 0 <= sog_min < sog_max");
  if (!(draught_min >= 0.0)) throw InvalidInput("AIS filter requires draught_min >= 0");
}

std::vector<AisMessage> filter_ais(std::span<const AisMessage> msgs, const AisFilter& f) {
  f.validate();
  std::vector<AisMessage> out;
  std::copy_if(msgs.begin(), msgs.end(), std::back_inserter(out), [&](const AisMessage& m) { return f.accepts(m); });
  return out;
}

ChartSet parse_chart(std::string_view text, const GeoFilter& filter, std::string_view source) {
  filter.validate();
  const std::string src(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(src + ": line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array())
    throw ParseError(src + ": expected a FeatureCollection with a features array");

  ChartSet chart;
  chart.filter = filter;
  chart.origin = filter.center();

  const auto& features = doc["features"];
  for (std::size_t k = 0; k < features.size(); ++k) {
    const json& feat = features[k];
    const std::string where = src + ": feature " + std::to_string(k);
    if (!feat.is_object() || !feat.contains("geometry") || !feat.contains("properties") ||
        !feat["properties"].is_object())
      throw ParseError(where + ": missing geometry or properties");
    const json& props = feat["properties"];
    const std::string layer = props.value("layer", "");
    if (layer != "DEPARE" && layer != "LNDARE") continue;

    double dmin = 0.0, dmax = 0.0;
    if (layer == "DEPARE") {
      if (!props.contains("DRVAL1") || !props["DRVAL1"].is_number()) {
        warn(where + ": depth area without numeric DRVAL1 rejected");
        ++chart.rejected;
        continue;
      }
      dmin = props["DRVAL1"].get<double>();
      dmax = props.contains("DRVAL2") && props["DRVAL2"].is_number() ? props["DRVAL2"].get<double>() : dmin;
    }

    const json& geom = feat["geometry"];
    if (!geom.is_object() || !geom.contains("coordinates")) throw ParseError(where + ": geometry lacks coordinates");
    const std::string type = geom.value("type", "");
    std::vector<json> polys;
    if (type == "Polygon")
      polys.push_back(geom["coordinates"]);
    else if (type == "MultiPolygon" && geom["coordinates"].is_array())
      for (const auto& p : geom["coordinates"]) polys.push_back(p);
    else
      throw ParseError(where + ": unsupported geometry type '" + type + "'");

    for (const json& rings : polys) {
      if (!rings.is_array() || rings.empty()) throw ParseError(where + ": polygon has no rings");
      NavPolygon poly;
      poly.depth_min = dmin;
      poly.depth_max = dmax;
      bool outside = false;
      Box geo;
      for (std::size_t r = 0; r < rings.size(); ++r) {
        if (!rings[r].is_array()) throw ParseError(where + ": ring is not an array");
        Ring ring;
        for (const auto& c : rings[r]) {
          if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
            throw ParseError(where + ": coordinate is not a [lon, lat] pair");
          const GeoPoint g{c[1].get<double>(), c[0].get<double>()};
          if (!valid(g)) throw ParseError(where + ": coordinate out of range");
          if (r == 0) geo.extend(LocalPoint(g.lon, g.lat));
          ring.push_back(project_unbounded(g, chart.origin));
        }
        (r == 0 ? poly.exterior : poly.holes.emplace_back()) = std::move(ring);
      }
      outside = geo.max.x() < filter.lon_min || geo.min.x() > filter.lon_max || geo.max.y() < filter.lat_min ||
                geo.min.y() > filter.lat_max;
      if (outside) continue;

      poly = normalized(std::move(poly));
      try {
        validate(poly);
      } catch (const InvalidInput& e) {
        warn(where + ": rejected, " + e.what());
        ++chart.rejected;
        continue;
      }
      for (auto& piece : clip_to_filter(poly, filter, chart.origin))
        (layer == "DEPARE" ? chart.depth_areas : chart.land_areas).push_back(std::move(piece));
    }
  }
  return chart;
}

ChartSet load_chart(const std::filesystem::path& path, const GeoFilter& filter) {
  return parse_chart(read_file(path), filter, path.string());
}

std::vector<NavPolygon> navigable_region(const ChartSet& chart, double required_depth) {
  if (!(required_depth > 0.0)) throw InvalidInput("required depth must be positive");
  std::vector<NavPolygon> out;
  for (const auto& p : chart.depth_areas)
    if (p.depth_min >= required_depth) out.push_back(p);
  if (out.empty()) throw EmptyRegion("empty navigable region");
  return out;
}

}  // namespace seaway
