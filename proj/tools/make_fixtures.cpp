// Writes the synthetic chart, AIS, KDE and scenario fixtures used by the tests.
// Usage: make_fixtures <output dir>

#include "seaway/cli.hpp"
#include "seaway/kde.hpp"
#include "seaway/kde_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seaway;

namespace {

using Pts = std::vector<LocalPoint>;

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Channel centreline: straight, then a smooth lateral shift, then straight.
struct Centreline {
  double n_start, n_end;  // bend extent
  double shift;
  double at(double n) const { return shift * smoothstep((n - n_start) / (n_end - n_start)); }
};

// Vertices along the centreline for n in [n0, n1], dense only inside the bend.
std::vector<double> northings(const Centreline& c, double n0, double n1) {
  std::vector<double> ns{n0};
  for (double n = c.n_start; n <= c.n_end; n += 50.0)
    if (n > n0 && n < n1) ns.push_back(n);
  ns.push_back(n1);
  return ns;
}

// Channel section between n0 and n1 of half width hw, counter-clockwise.
Pts channel(const Centreline& c, double n0, double n1, double hw) {
  const auto ns = northings(c, n0, n1);
  Pts ring;
  for (double n : ns) ring.emplace_back(c.at(n) + hw, n);
  for (auto it = ns.rbegin(); it != ns.rend(); ++it) ring.emplace_back(c.at(*it) - hw, *it);
  return ring;
}

// Ring from x_edge to the channel side (west when sign < 0), counter-clockwise.
Pts flank(const Centreline& c, double n0, double n1, double hw, double x_edge, double sign) {
  const auto ns = northings(c, n0, n1);
  Pts ring;
  if (sign < 0) {
    ring.emplace_back(x_edge, n0);
    for (double n : ns) ring.emplace_back(c.at(n) - hw, n);
    ring.emplace_back(x_edge, n1);
  } else {
    ring.emplace_back(x_edge, n0);
    ring.emplace_back(x_edge, n1);
    for (auto it = ns.rbegin(); it != ns.rend(); ++it) ring.emplace_back(c.at(*it) + hw, *it);
  }
  return ring;
}

Pts rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

Pts octagon(LocalPoint c, double r) {
  Pts ring;
  for (int k = 0; k < 8; ++k) {
    const double a = (k + 0.5) * std::numbers::pi / 4.0;
    ring.push_back(c + LocalPoint(r * std::cos(a), r * std::sin(a)));
  }
  return ring;
}

json ring_json(const Pts& ring, const GeoPoint& origin) {
  json out = json::array();
  for (const auto& p : ring) {
    const GeoPoint g = unproject(p, origin);
    out.push_back({g.lon, g.lat});
  }
  const GeoPoint g = unproject(ring.front(), origin);
  out.push_back({g.lon, g.lat});
  return out;
}

struct ChartBuilder {
  GeoPoint origin;
  json features = json::array();

  void depth(const Pts& exterior, double d1, double d2, const std::vector<Pts>& holes = {}) {
    json rings = json::array({ring_json(exterior, origin)});
    for (const auto& h : holes) {
      Pts r(h.rbegin(), h.rend());
      rings.push_back(ring_json(r, origin));
    }
    features.push_back({{"type", "Feature"},
                        {"properties", {{"layer", "DEPARE"}, {"DRVAL1", d1}, {"DRVAL2", d2}}},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}}});
  }
  void land(const Pts& exterior) {
    features.push_back({{"type", "Feature"},
                        {"properties", {{"layer", "LNDARE"}}},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring_json(exterior, origin)})}}}});
  }
  std::string text() const { return json{{"type", "FeatureCollection"}, {"features", features}}.dump(1) + "\n"; }
};

// Everything that differs between the two areas.
struct Area {
  std::string name;
  GeoFilter filter;
  double target_ratio;
  std::function<std::string(double hw)> chart;
  std::size_t navigable_polygons;
};

double ratio_of(const std::string& chart_text, const GeoFilter& f, double depth) {
  const ChartSet c = parse_chart(chart_text, f);
  return build_region(c, depth, 5.0).space.nav.area_ratio();
}

// Half width whose region hits the target area ratio.
double solve_half_width(const Area& a, double depth) {
  double lo = 150.0, hi = 1400.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ratio_of(a.chart(mid), a.filter, depth) < a.target_ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + p.string());
}

std::string iso(double t) {
  const std::time_t s = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&s, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Traffic lane: a polyline in local meters sailed in one direction.
struct Lane {
  Pts points;
  double offset;  // lateral offset of the lane from the polyline, + to starboard
};

LocalPoint along(const Pts& pts, double s, LocalPoint* dir) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const LocalPoint d = pts[i] - pts[i - 1];
    const double len = d.norm();
    if (s <= len || i + 1 == pts.size()) {
      *dir = d / len;
      return pts[i - 1] + d * (std::min(s, len) / len);
    }
    s -= len;
  }
  *dir = LocalPoint(0, 1);
  return pts.front();
}

double polyline_length(const Pts& pts) {
  double s = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += (pts[i] - pts[i - 1]).norm();
  return s;
}

std::string ais_csv(const std::vector<Lane>& lanes, const GeoPoint& origin, const GeoFilter& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::string out = "mmsi,timestamp,sog_kn,draught_m,lat,lon\n";
  char line[160];
  auto row = [&](std::uint32_t mmsi, double t, double sog, double draught, const LocalPoint& p) {
    const GeoPoint geo = unproject(p, origin);
    std::snprintf(line, sizeof line, "%u,%s,%.1f,%.1f,%.6f,%.6f\n", mmsi, iso(t).c_str(), sog, draught, geo.lat, geo.lon);
    out += line;
  };
  const double t0 = 1617235200.0;  // 2021-04-01
  std::uint32_t mmsi = 219000100;
  for (int voyage = 0; voyage < 120; ++voyage) {
    const Lane& lane = lanes[static_cast<std::size_t>(voyage) % lanes.size()];
    const bool deep = u(rng) < 0.75;
    const double draught = deep ? 6.0 + 4.0 * u(rng) : 2.0 + 2.5 * u(rng);
    const double sog = 8.0 + 6.0 * u(rng);
    const double lateral = lane.offset + 25.0 * g(rng);
    const double total = polyline_length(lane.points);
    double t = t0 + voyage * 3600.0 + 600.0 * u(rng);
    ++mmsi;
    for (double s = 0.0; s <= total; s += sog * kKnot * 10.0, t += 10.0) {
      LocalPoint dir;
      const LocalPoint c = along(lane.points, s, &dir);
      const LocalPoint starboard(dir.y(), -dir.x());
      row(mmsi, t, sog + 0.3 * g(rng), draught, c + starboard * (lateral + 10.0 * g(rng)));
    }
  }
  // Anchored and drifting vessels, dropped by the speed filter.
  const Box box = filter_box(f, origin);
  for (int k = 0; k < 200; ++k) {
    const LocalPoint p(box.min.x() + u(rng) * box.size().x(), box.min.y() + u(rng) * box.size().y());
    row(219000001 + static_cast<std::uint32_t>(k % 5), t0 + 30.0 * k, 0.1 * u(rng), 7.5, p);
  }
  // Rows the parser rejects.
  out += "219000900,2021-04-01T00:00:00Z,10.0,7.0,95.000000,9.700000\n";
  out += "219000901,not-a-time,10.0,7.0,55.500000,9.700000\n";
  out += "219000902,2021-04-01T00:00:10Z,10.0,-1.0,55.500000,9.700000\n";
  return out;
}

json scenario_json(const std::string& name, const GeoFilter& f, const GeoPoint& origin, const VesselState& own,
                   double min_turn, const VesselState& target, const Pts& track) {
  auto geo = [&](const LocalPoint& p) {
    const GeoPoint g = unproject(p, origin);
    return json{{"lat", g.lat}, {"lon", g.lon}};
  };
  json own_j = geo(own.pos);
  own_j.update({{"cog_deg", own.cog}, {"sog_kn", own.sog}, {"length_m", own.length}, {"draught_m", own.draught},
                {"min_turn_radius_m", min_turn}});
  json target_j = geo(target.pos);
  target_j.update({{"cog_deg", target.cog}, {"sog_kn", target.sog}, {"length_m", target.length}, {"draught_m", target.draught}});
  json track_j = json::array();
  for (const auto& p : track) track_j.push_back(geo(p));
  return {{"name", name},
          {"chart", name + ".chart.json"},
          {"kde_model", name + ".kde.json"},
          {"geofilter", {{"lat_min", f.lat_min}, {"lat_max", f.lat_max}, {"lon_min", f.lon_min}, {"lon_max", f.lon_max}}},
          {"required_depth_m", 6.0},
          {"simplify_eps_m", 5.0},
          {"own", own_j},
          {"target", target_j},
          {"nominal_track", track_j},
          {"plan",
           {{"w1", 1.0},
            {"w2_per_m", 1e-4},
            {"eta_m", 200.0},
            {"goal_bias", 0.05},
            {"gamma_m", 3000.0},
            {"max_iter", 4000},
            {"goal_tolerance_m", 50.0},
            {"kde_step_m", 10.0},
            {"seed", 7},
            {"theta_head_deg", 6.0},
            {"delta_head_deg", 10.0},
            {"compliance_step_s", 5.0}}}};
}

VesselState vessel(LocalPoint pos, double cog, double sog, double length, double draught) {
  VesselState v;
  v.pos = pos;
  v.cog = cog;
  v.sog = sog;
  v.length = length;
  v.draught = draught;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output dir>\n";
    return 1;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  const double depth = 6.0;

  // Bending channel from the south edge into a full-width northern basin with an island.
  const GeoFilter lb_filter{55.48, 55.53, 9.64, 9.72};
  const GeoPoint lb_origin = lb_filter.center();
  const Box lb_box = filter_box(lb_filter, lb_origin);
  const Centreline lb_line{-1000.0, 800.0, 700.0};
  const double lb_basin = 1300.0, lb_split = -1600.0;
  auto lb_chart = [&](double hw) {
    ChartBuilder b{lb_origin};
    const double s = lb_box.min.y() - 400.0, xw = lb_box.min.x() - 500.0, xe = lb_box.max.x() + 500.0;
    b.depth(channel(lb_line, s, lb_split, hw), 10, 15);
    b.depth(channel(lb_line, lb_split, lb_basin, hw), 8, 12);
    const Pts island = octagon({-900.0, 2100.0}, 260.0);
    b.depth(rect(xw, lb_basin, xe, lb_box.max.y() + 400.0), 12, 20, {island});
    b.land(island);
    b.depth(flank(lb_line, s, lb_basin, hw, xw + 300.0, -1), 2, 5);
    b.depth(flank(lb_line, s, lb_basin, hw, xe - 300.0, +1), 0, 4);
    b.land(rect(xw, s, xw + 300.0, lb_basin));
    b.land(rect(xe - 300.0, s, xe, lb_basin));
    b.depth(rect(lb_box.max.x() + 1500.0, 0.0, lb_box.max.x() + 2500.0, 1000.0), 20, 30);
    return b.text();
  };

  // Straight north-south channel over a full-width east-west fairway at the south edge.
  const GeoFilter gb_filter{55.19, 55.24, 11.10, 11.18};
  const GeoPoint gb_origin = gb_filter.center();
  const Box gb_box = filter_box(gb_filter, gb_origin);
  const Centreline gb_line{-1.0, 0.0, 0.0};
  const double gb_fairway = gb_box.min.y() + 600.0;
  auto gb_chart = [&](double hw) {
    ChartBuilder b{gb_origin};
    const double n = gb_box.max.y() + 400.0, xw = gb_box.min.x() - 500.0, xe = gb_box.max.x() + 500.0;
    b.depth(channel(gb_line, gb_fairway, 0.0, hw), 8, 12);
    b.depth(channel(gb_line, 0.0, n, hw), 10, 18);
    b.depth(rect(xw, gb_box.min.y() - 300.0, xe, gb_fairway), 9, 14);
    const Pts islet = octagon({-1900.0, 900.0}, 220.0);
    b.depth(flank(gb_line, gb_fairway, n, hw, xw, -1), 3, 5, {islet});
    b.land(islet);
    b.depth(flank(gb_line, gb_fairway, n, hw, xe, +1), 1, 4);
    b.land(rect(xw - 800.0, gb_fairway, xw, n));
    b.depth(rect(gb_box.min.x() - 3000.0, 0.0, gb_box.min.x() - 2000.0, 1000.0), 20, 30);
    return b.text();
  };

  const std::vector<Area> areas{{"little_belt", lb_filter, 0.4065, lb_chart, 3},
                                {"great_belt", gb_filter, 0.2677, gb_chart, 3}};
  json manifest = json::object();
  for (const Area& a : areas) {
    const double hw = solve_half_width(a, depth);
    const std::string text = a.chart(hw);
    write_file(dir / (a.name + ".chart.json"), text);
    const ChartSet chart = parse_chart(text, a.filter);
    const Region region = build_region(chart, depth, 5.0);
    manifest[a.name] = {{"half_width_m", hw},
                        {"area_ratio", region.space.nav.area_ratio()},
                        {"reference_area_ratio", a.target_ratio},
                        {"navigable_polygons", a.navigable_polygons},
                        {"required_depth_m", depth}};
    std::cout << a.name << ": half width " << hw << " m, area ratio " << region.space.nav.area_ratio() << ", "
              << region.polygons.size() << " polygons\n";
  }

  // Traffic lanes keep to starboard of the channel centreline.
  const Box lb_b = filter_box(lb_filter, lb_origin);
  Pts lb_north, lb_south;
  for (double n = lb_b.min.y(); n <= 2000.0; n += 50.0) lb_north.emplace_back(lb_line.at(n), n);
  lb_north.emplace_back(lb_line.at(2000.0) + 600.0, lb_b.max.y());
  lb_south.assign(lb_north.rbegin(), lb_north.rend());
  write_file(dir / "little_belt.ais.csv",
             ais_csv({{lb_north, 120.0}, {lb_south, 120.0}}, lb_origin, lb_filter, 11));

  const Box gb_b = filter_box(gb_filter, gb_origin);
  const Pts gb_north{{0.0, gb_b.min.y() + 300.0}, {0.0, gb_b.max.y()}};
  const Pts gb_south{{0.0, gb_b.max.y()}, {0.0, gb_b.min.y() + 300.0}};
  const Pts gb_east{{gb_b.min.x(), gb_b.min.y() + 300.0}, {gb_b.max.x(), gb_b.min.y() + 300.0}};
  write_file(dir / "great_belt.ais.csv",
             ais_csv({{gb_north, 150.0}, {gb_south, 150.0}, {gb_east, 0.0}}, gb_origin, gb_filter, 12));

  const double own_draught = 5.5;
  for (const Area& a : areas) {
    const GeoPoint origin = a.filter.center();
    const AisLoadResult ais = load_ais(dir / (a.name + ".ais.csv"));
    const auto kept = filter_ais(ais.messages, AisFilter{a.filter, 0.5, 50.0, own_draught});
    Pts pts;
    for (const auto& m : kept) pts.push_back(project(m.pos, origin));
    const Bandwidth bw{100.0};
    KdeModel model = kde_fft(pts, bw, default_grid(pts, bw, 20.0));
    model.frame = origin;
    save_model(model, dir / (a.name + ".kde"));
    manifest[a.name]["ais_rows"] = ais.rows;
    manifest[a.name]["ais_retained"] = kept.size();
  }

  // Overtaking: own ship northbound, a slower vessel ahead in the same channel.
  const VesselState lb_own = vessel({lb_line.at(-2300.0), -2300.0}, 0.0, 12.0, 90.0, own_draught);
  const VesselState lb_target = vessel({lb_line.at(-1700.0) + 60.0, -1700.0}, 0.0, 6.0, 100.0, 6.5);
  const Pts lb_track{lb_own.pos, {lb_line.at(0.0), 0.0}, {lb_line.at(1200.0), 1200.0}, {700.0, 1900.0}};
  write_file(dir / "little_belt.scenario.json",
             scenario_json("little_belt", lb_filter, lb_origin, lb_own, 150.0, lb_target, lb_track).dump(2) + "\n");

  // Head-on: own ship southbound, a vessel northbound on a reciprocal course.
  const VesselState gb_own = vessel({-40.0, 1500.0}, 180.0, 10.0, 90.0, own_draught);
  const VesselState gb_target = vessel({40.0, -1000.0}, 0.0, 8.0, 100.0, 7.0);
  const Pts gb_track{gb_own.pos, {-40.0, -1800.0}};
  write_file(dir / "great_belt.scenario.json",
             scenario_json("great_belt", gb_filter, gb_origin, gb_own, 150.0, gb_target, gb_track).dump(2) + "\n");

  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}
