#pragma once

#include "seaway/bench.hpp"
#include "seaway/ingest.hpp"
#include "seaway/planner.hpp"

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace seaway {

//! Scenario file contents. Relative paths are resolved against the file's directory.
struct Scenario {
  std::string name;
  std::filesystem::path chart;
  std::filesystem::path kde_model;  // empty: no density term
  GeoFilter filter;
  double required_depth = 0.0;
  double simplify_eps = 5.0;
  GeoPoint own_pos, target_pos;
  VesselState own, target;  // positions filled once the frame is known
  double min_turn_radius = 0.0;
  std::vector<GeoPoint> nominal_track;
  PlanConfig plan;

  static Scenario parse(std::string_view json_text, const std::filesystem::path& base_dir, std::string_view source = "scenario");
  static Scenario load(const std::filesystem::path& path);
};

//! Navigable region prepared for planning and benchmarking.
struct Region {
  GeoPoint origin;
  std::vector<NavPolygon> polygons;  // after depth filter and simplification
  std::size_t vertices_before = 0;
  std::size_t vertices_after = 0;
  SamplingSpace space;
};

Region build_region(const ChartSet& chart, double required_depth, double simplify_eps);

//! Everything plan() needs, derived from a scenario. Not copyable: env points into it.
struct PreparedScenario {
  Scenario scenario;
  Region region;
  std::optional<KdeModel> kde;
  LocalPoint start = LocalPoint::Zero();
  LocalPoint goal = LocalPoint::Zero();
  VesselState own, target;
  Encounter encounter;

  PreparedScenario() = default;
  PreparedScenario(const PreparedScenario&) = delete;
  PreparedScenario& operator=(const PreparedScenario&) = delete;

  PlanEnv env() const;
};

std::unique_ptr<PreparedScenario> prepare(const Scenario& s);

struct ChartArgs {
  std::filesystem::path input;
  GeoFilter filter;
  double depth = 0.0;
  double simplify_eps = 5.0;
  std::filesystem::path output;
};

struct ChartResult {
  std::size_t polygons = 0;
  std::size_t triangles = 0;
  double total_area = 0.0;
  double area_ratio = 0.0;
  std::size_t vertices_before = 0;
  std::size_t vertices_after = 0;
};

ChartResult cmd_chart(const ChartArgs& args, std::ostream& log);

struct KdeArgs {
  std::filesystem::path input;
  GeoFilter filter;
  double sog_min = 0.5, sog_max = 50.0;
  double draught = 0.0;
  double h = 100.0;
  double cell = 0.0;  // 0: h / 5
  std::filesystem::path output;  // prefix
};

struct KdeResult {
  std::size_t retained = 0;
  double max_value = 0.0;
};

KdeResult cmd_kde(const KdeArgs& args, std::ostream& log);

struct PlanArgs {
  std::filesystem::path scenario;
  std::filesystem::path output;  // prefix
  std::filesystem::path svg;     // optional
  std::optional<std::uint64_t> seed;
  std::optional<double> w1, w2;
  std::optional<int> max_iter;
};

PlannedPath cmd_plan(const PlanArgs& args, std::ostream& log);

struct BenchArgs {
  std::filesystem::path scenario;
  std::vector<std::size_t> ns{1000, 10000, 100000};
  int repeats = 30;
  std::uint64_t seed = 1;
  bool parallel = false;
  std::filesystem::path output;  // prefix
};

std::vector<BenchReport> cmd_bench(const BenchArgs& args, std::ostream& log);

//! Process exit code for an exception escaping a command: 1 input error,
//! 2 empty region, 3 no path.
int exit_code(const std::exception& e);

//! Geodetic output documents, exposed for tests.
nlohmann::json region_json(const Region& region, const ChartResult& stats);
nlohmann::json path_json(const PlannedPath& path, const GeoPoint& origin);
nlohmann::json report_json(const PreparedScenario& p, const PlannedPath& path);
void write_svg(std::ostream& out, const PreparedScenario& p, const PlannedPath* path);

}  // namespace seaway
