#include "seaway/cli.hpp"

#include "seaway/kde_io.hpp"
#include "seaway/log.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace seaway {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return prefix.string() + suffix;
}

// Typed access to required and optional scenario keys.
struct Reader {
  const json& obj;
  std::string where;

  const json& at(const char* key) const {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
    return obj[key];
  }
  double num(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ParseError(where + ": '" + key + "' must be a number");
    return v.get<double>();
  }
  double num(const char* key, double fallback) const { return obj.contains(key) ? num(key) : fallback; }
  std::string str(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
  }
  Reader sub(const char* key) const {
    const json& v = at(key);
    if (!v.is_object()) throw ParseError(where + ": '" + key + "' must be an object");
    return {v, where + "." + key};
  }
};

GeoPoint geo_of(const Reader& r) {
  const GeoPoint g{r.num("lat"), r.num("lon")};
  if (!valid(g)) throw InvalidInput(r.where + ": coordinate out of range");
  return g;
}

VesselState vessel_of(const Reader& r) {
  VesselState v;
  v.cog = r.num("cog_deg");
  v.sog = r.num("sog_kn");
  v.length = r.num("length_m");
  v.draught = r.num("draught_m", 0.0);
  return v;
}

json lonlat(const GeoPoint& g) { return json::array({g.lon, g.lat}); }

json ring_json(const Ring& ring, const GeoPoint& origin) {
  json out = json::array();
  for (const auto& p : ring) out.push_back(lonlat(unproject(p, origin)));
  out.push_back(lonlat(unproject(ring.front(), origin)));
  return out;
}

std::size_t vertex_count(std::span<const NavPolygon> polys) {
  std::size_t n = 0;
  for (const auto& p : polys) {
    n += p.exterior.size();
    for (const auto& h : p.holes) n += h.size();
  }
  return n;
}

}  // namespace

Scenario Scenario::parse(std::string_view text, const std::filesystem::path& base_dir, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
  const Reader r{doc, std::string(source)};
  Scenario s;
  s.name = r.str("name");
  s.chart = base_dir / r.str("chart");
  if (doc.contains("kde_model") && !doc["kde_model"].is_null()) s.kde_model = base_dir / r.str("kde_model");

  const Reader f = r.sub("geofilter");
  s.filter = {f.num("lat_min"), f.num("lat_max"), f.num("lon_min"), f.num("lon_max")};
  s.filter.validate();
  s.required_depth = r.num("required_depth_m");
  s.simplify_eps = r.num("simplify_eps_m", 5.0);

  const Reader own = r.sub("own");
  s.own_pos = geo_of(own);
  s.own = vessel_of(own);
  s.min_turn_radius = own.num("min_turn_radius_m", 0.0);
  const Reader target = r.sub("target");
  s.target_pos = geo_of(target);
  s.target = vessel_of(target);

  const json& track = r.at("nominal_track");
  if (!track.is_array() || track.empty()) throw ParseError(r.where + ": 'nominal_track' must be a non-empty array");
  for (std::size_t i = 0; i < track.size(); ++i)
    s.nominal_track.push_back(geo_of(Reader{track[i], r.where + ".nominal_track[" + std::to_string(i) + "]"}));

  const Reader p = r.sub("plan");
  PlanConfig& c = s.plan;
  c.w1 = p.num("w1");
  c.w2 = p.num("w2_per_m");
  c.eta = p.num("eta_m", c.eta);
  c.goal_bias = p.num("goal_bias", c.goal_bias);
  c.gamma = p.num("gamma_m", c.gamma);
  c.max_iter = static_cast<int>(p.num("max_iter", c.max_iter));
  c.goal_tolerance = p.num("goal_tolerance_m", c.goal_tolerance);
  c.kde_step = p.num("kde_step_m", c.kde_step);
  if (p.obj.contains("seed")) {
    if (!p.obj["seed"].is_number_unsigned()) throw ParseError(p.where + ": 'seed' must be a non-negative integer");
    c.seed = p.obj["seed"].get<std::uint64_t>();
  }
  c.colregs.theta_head = p.num("theta_head_deg", c.colregs.theta_head);
  c.colregs.delta_head = p.num("delta_head_deg", c.colregs.delta_head);
  c.colregs.step = p.num("compliance_step_s", c.colregs.step);
  c.min_turn_radius = s.min_turn_radius;
  c.own_speed = s.own.sog;
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  return parse(read_text(path), path.parent_path(), path.string());
}

Region build_region(const ChartSet& chart, double required_depth, double simplify_eps) {
  if (!(simplify_eps >= 0.0)) throw InvalidInput("simplification epsilon must be non-negative");
  Region r;
  r.origin = chart.origin;
  const auto deep = navigable_region(chart, required_depth);
  r.vertices_before = vertex_count(deep);
  for (const auto& p : deep) r.polygons.push_back(simplify_eps > 0.0 ? simplify(p, simplify_eps) : p);
  r.vertices_after = vertex_count(r.polygons);
  r.space = SamplingSpace::prepare(r.polygons);
  if (r.space.tri.empty()) throw EmptyRegion("empty navigable region");
  return r;
}

PlanEnv PreparedScenario::env() const {
  PlanEnv e;
  e.nav = &region.space.nav;
  e.region = &region.space.tri;
  if (kde) e.density = DensityField(&*kde, region.origin);
  e.encounter = encounter;
  return e;
}

std::unique_ptr<PreparedScenario> prepare(const Scenario& s) {
  auto p = std::make_unique<PreparedScenario>();
  p->scenario = s;
  const ChartSet chart = load_chart(s.chart, s.filter);
  p->region = build_region(chart, s.required_depth, s.simplify_eps);
  if (!s.kde_model.empty()) p->kde = load_model(s.kde_model);
  const GeoPoint& o = p->region.origin;
  p->own = s.own;
  p->own.pos = project(s.own_pos, o);
  p->target = s.target;
  p->target.pos = project(s.target_pos, o);
  p->start = p->own.pos;
  p->goal = project(s.nominal_track.back(), o);
  p->encounter = classify(p->own, p->target, s.plan.colregs, 0.0);
  return p;
}

ChartResult cmd_chart(const ChartArgs& args, std::ostream& log) {
  const ChartSet chart = load_chart(args.input, args.filter);
  const Region region = build_region(chart, args.depth, args.simplify_eps);
  ChartResult res;
  res.polygons = region.polygons.size();
  res.triangles = region.space.tri.triangles.size();
  res.total_area = region.space.nav.area();
  res.area_ratio = region.space.nav.area_ratio();
  res.vertices_before = region.vertices_before;
  res.vertices_after = region.vertices_after;
  write_text(args.output, region_json(region, res).dump(2) + "\n");
  log << "polygons " << res.polygons << ", triangles " << res.triangles << ", area " << std::fixed
      << std::setprecision(1) << res.total_area << " m^2, area ratio " << std::setprecision(4) << res.area_ratio
      << ", vertices " << res.vertices_before << " -> " << res.vertices_after << "\n";
  log.unsetf(std::ios::floatfield);
  return res;
}

KdeResult cmd_kde(const KdeArgs& args, std::ostream& log) {
  args.filter.validate();
  const AisLoadResult ais = load_ais(args.input);
  const auto kept = filter_ais(ais.messages, AisFilter{args.filter, args.sog_min, args.sog_max, args.draught});
  if (kept.empty()) throw InvalidInput("no AIS messages retained by the filter");
  const GeoPoint origin = args.filter.center();
  std::vector<LocalPoint> pts;
  pts.reserve(kept.size());
  for (const auto& m : kept) pts.push_back(project(m.pos, origin));
  const Bandwidth bw{args.h};
  KdeModel model = kde_fft(pts, bw, default_grid(pts, bw, args.cell));
  model.frame = origin;
  save_model(model, args.output);
  log << "retained " << kept.size() << " of " << ais.messages.size() << " messages, max_value " << std::setprecision(6)
      << model.max_value << ", grid " << model.grid.nx << " x " << model.grid.ny << "\n";
  return {kept.size(), model.max_value};
}

PlannedPath cmd_plan(const PlanArgs& args, std::ostream& log) {
  Scenario s = Scenario::load(args.scenario);
  if (args.seed) s.plan.seed = *args.seed;
  if (args.w1) s.plan.w1 = *args.w1;
  if (args.w2) s.plan.w2 = *args.w2;
  if (args.max_iter) s.plan.max_iter = *args.max_iter;
  const auto p = prepare(s);
  log << "encounter " << to_string(p->encounter.kind) << "\n";
  PlannedPath path;
  try {
    path = plan(p->env(), s.plan, p->start, p->goal);
  } catch (const NoPath&) {
    if (!args.svg.empty()) {
      std::ostringstream svg;
      write_svg(svg, *p, nullptr);
      write_text(args.svg, svg.str());
    }
    throw;
  }
  write_text(with_suffix(args.output, ".path.json"), path_json(path, p->region.origin).dump(2) + "\n");
  write_text(with_suffix(args.output, ".report.json"), report_json(*p, path).dump(2) + "\n");
  if (!args.svg.empty()) {
    std::ostringstream svg;
    write_svg(svg, *p, &path);
    write_text(args.svg, svg.str());
  }
  log << "length " << std::fixed << std::setprecision(1) << path.length << " m, mean density " << std::setprecision(4)
      << path.mean_density << ", cost " << path.cost << ", " << path.states.size() << " states\n";
  log.unsetf(std::ios::floatfield);
  return path;
}

std::vector<BenchReport> cmd_bench(const BenchArgs& args, std::ostream& log) {
  const Scenario s = Scenario::load(args.scenario);
  const ChartSet chart = load_chart(s.chart, s.filter);
  const Region region = build_region(chart, s.required_depth, s.simplify_eps);
  BenchOptions opts;
  opts.repeats = args.repeats;
  opts.seed = args.seed;
  opts.parallel = args.parallel;
  std::vector<BenchReport> reports;
  for (Scheme scheme : {Scheme::Rejection, Scheme::Triangulation})
    reports.push_back(run_bench(region.polygons, region.space, scheme, args.ns, opts, s.name));

  std::ostringstream csv;
  write_csv(csv, reports);
  write_text(with_suffix(args.output, ".csv"), csv.str());
  write_text(with_suffix(args.output, ".summary.json"), summary_json(reports).dump(2) + "\n");
  for (const auto& r : reports)
    log << to_string(r.scheme) << ": config " << std::scientific << std::setprecision(3) << r.config.mean << " s, "
        << r.sample_counts.back() << " samples " << r.elapsed.back().mean << " s\n";
  const auto n = crossover(reports[0], reports[1]);
  if (n)
    log << "crossover at about " << std::fixed << std::setprecision(0) << *n << " samples\n";
  else
    log << "no crossover\n";
  log.unsetf(std::ios::floatfield);
  return reports;
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const EmptyRegion*>(&e)) return 2;
  if (dynamic_cast<const NoPath*>(&e)) return 3;
  return 1;
}

nlohmann::json region_json(const Region& region, const ChartResult& stats) {
  json features = json::array();
  for (const auto& p : region.polygons) {
    json rings = json::array({ring_json(p.exterior, region.origin)});
    for (const auto& h : p.holes) rings.push_back(ring_json(h, region.origin));
    features.push_back({{"type", "Feature"},
                        {"properties", {{"layer", "DEPARE"}, {"DRVAL1", p.depth_min}, {"DRVAL2", p.depth_max}}},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}}});
  }
  return {{"type", "FeatureCollection"},
          {"origin", {{"lat", region.origin.lat}, {"lon", region.origin.lon}}},
          {"features", features},
          {"stats",
           {{"polygons", stats.polygons},
            {"triangles", stats.triangles},
            {"total_area_m2", stats.total_area},
            {"area_ratio", stats.area_ratio},
            {"vertices_before", stats.vertices_before},
            {"vertices_after", stats.vertices_after}}}};
}

nlohmann::json path_json(const PlannedPath& path, const GeoPoint& origin) {
  json line = json::array();
  for (const auto& p : path.states) line.push_back(lonlat(unproject(p, origin)));
  json features = json::array();
  features.push_back({{"type", "Feature"},
                      {"properties", {{"kind", "path"}, {"length_m", path.length}, {"cost", path.cost}, {"mean_density", path.mean_density}}},
                      {"geometry", {{"type", "LineString"}, {"coordinates", line}}}});
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const Waypoint& w = path.waypoints[i];
    features.push_back({{"type", "Feature"},
                        {"properties",
                         {{"kind", "waypoint"},
                          {"index", i},
                          {"north_m", north(w.pos)},
                          {"east_m", east(w.pos)},
                          {"radius_m", w.radius},
                          {"t_s", i < path.times.size() ? path.times[i] : 0.0}}},
                        {"geometry", {{"type", "Point"}, {"coordinates", lonlat(unproject(w.pos, origin))}}}});
  }
  return {{"type", "FeatureCollection"}, {"origin", {{"lat", origin.lat}, {"lon", origin.lon}}}, {"features", features}};
}

nlohmann::json report_json(const PreparedScenario& p, const PlannedPath& path) {
  const PlanConfig& c = p.scenario.plan;
  return {{"scenario", p.scenario.name},
          {"encounter", std::string(to_string(p.encounter.kind))},
          {"cost", path.cost},
          {"length_m", path.length},
          {"mean_density", path.mean_density},
          {"iterations", path.iterations},
          {"seed", c.seed},
          {"tree_size", path.tree_size},
          {"states", path.states.size()},
          {"w1", c.w1},
          {"w2_per_m", c.w2}};
}

void write_svg(std::ostream& out, const PreparedScenario& p, const PlannedPath* path) {
  const Box box = p.region.space.nav.bounds();
  const double w = box.size().x(), h = box.size().y();
  const double scale = 1000.0 / std::max(w, h);
  auto X = [&](const LocalPoint& q) { return (q.x() - box.min.x()) * scale; };
  auto Y = [&](const LocalPoint& q) { return (box.max.y() - q.y()) * scale; };
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\"" << h * scale << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#e8dcc0\"/>\n";
  out << "<path fill=\"#bcd9ef\" fill-rule=\"evenodd\" stroke=\"#4a7fa8\" stroke-width=\"0.5\" d=\"";
  for (const auto& poly : p.region.polygons) {
    auto ring = [&](const Ring& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " L" : "M") << X(r[i]) << ',' << Y(r[i]);
      out << " Z ";
    };
    ring(poly.exterior);
    for (const auto& hole : poly.holes) ring(hole);
  }
  out << "\"/>\n";
  if (p.kde) {
    const KdeModel& m = *p.kde;
    const int stride = std::max(1, std::max(m.grid.nx, m.grid.ny) / 120);
    const DensityField field(&*p.kde, p.region.origin);
    const double cell = m.grid.cell * stride * scale;
    out << "<g fill=\"#c0392b\">\n";
    for (double y = box.min.y(); y < box.max.y(); y += m.grid.cell * stride)
      for (double x = box.min.x(); x < box.max.x(); x += m.grid.cell * stride) {
        const LocalPoint c(x, y);
        const double v = field(c);
        if (v < 0.02) continue;
        out << "<rect x=\"" << X(c) << "\" y=\"" << Y(c) - cell << "\" width=\"" << cell << "\" height=\"" << cell
            << "\" fill-opacity=\"" << std::setprecision(3) << 0.6 * v << std::setprecision(2) << "\"/>\n";
      }
    out << "</g>\n";
  }
  const ComfortEllipse e = ComfortEllipse::around(p.target);
  out << "<ellipse cx=\"" << X(e.center) << "\" cy=\"" << Y(e.center) << "\" rx=\"" << e.semi_minor * scale << "\" ry=\""
      << e.semi_major * scale << "\" transform=\"rotate(" << e.heading << ' ' << X(e.center) << ' ' << Y(e.center)
      << ")\" fill=\"none\" stroke=\"#8e44ad\" stroke-dasharray=\"4 2\"/>\n";
  if (path) {
    out << "<polyline fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"2\" points=\"";
    for (const auto& q : path->states) out << X(q) << ',' << Y(q) << ' ';
    out << "\"/>\n";
  }
  out << "<circle cx=\"" << X(p.start) << "\" cy=\"" << Y(p.start) << "\" r=\"4\" fill=\"#27ae60\"/>\n";
  out << "<circle cx=\"" << X(p.goal) << "\" cy=\"" << Y(p.goal) << "\" r=\"4\" fill=\"#c0392b\"/>\n";
  out << "</svg>\n";
}

}  // namespace seaway
