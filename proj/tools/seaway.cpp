#include "seaway/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

seaway::GeoFilter parse_filter(const std::vector<double>& v) {
  if (v.size() != 4) throw seaway::InvalidInput("--filter takes lat_min,lat_max,lon_min,lon_max");
  seaway::GeoFilter f{v[0], v[1], v[2], v[3]};
  f.validate();
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grounding-aware path planning for confined waters"};
  app.require_subcommand(1);

  seaway::ChartArgs chart;
  std::vector<double> chart_filter;
  auto* c = app.add_subcommand("chart", "Crop, depth-filter and triangulate a chart");
  c->add_option("input", chart.input, "Chart FeatureCollection JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--filter", chart_filter, "lat_min,lat_max,lon_min,lon_max")->required()->delimiter(',')->expected(4);
  c->add_option("--depth", chart.depth, "Required minimum depth, m")->required();
  c->add_option("--simplify-eps", chart.simplify_eps, "Douglas-Peucker tolerance, m")->capture_default_str();
  c->add_option("--out", chart.output, "Output JSON")->required();

  seaway::KdeArgs kde;
  std::vector<double> kde_filter, sog{0.5, 50.0};
  auto* k = app.add_subcommand("kde", "Build a density model from AIS history");
  k->set_help_flag("--help", "Print this help message and exit");
  k->add_option("input", kde.input, "AIS CSV")->required()->check(CLI::ExistingFile);
  k->add_option("--filter", kde_filter, "lat_min,lat_max,lon_min,lon_max")->required()->delimiter(',')->expected(4);
  k->add_option("--sog", sog, "Speed window min,max in knots, both exclusive")->delimiter(',')->expected(2);
  k->add_option("--draught", kde.draught, "Minimum draught, m")->capture_default_str();
  k->add_option("--h", kde.h, "Bandwidth, m")->capture_default_str();
  k->add_option("--cell", kde.cell, "Grid cell, m (default h/5)");
  k->add_option("--out", kde.output, "Output prefix; writes <prefix>.json and <prefix>.bin")->required();

  seaway::PlanArgs plan;
  std::uint64_t plan_seed = 0;
  double w1 = 0, w2 = 0;
  int max_iter = 0;
  auto* p = app.add_subcommand("plan", "Plan a path for a scenario");
  p->add_option("scenario", plan.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  p->add_option("--out", plan.output, "Output prefix; writes <prefix>.path.json and <prefix>.report.json")->required();
  p->add_option("--svg", plan.svg, "Also write an SVG overview");
  auto* seed_opt = p->add_option("--seed", plan_seed, "Override the scenario seed");
  auto* w1_opt = p->add_option("--w1", w1, "Override w1");
  auto* w2_opt = p->add_option("--w2", w2, "Override w2, per meter");
  auto* iter_opt = p->add_option("--max-iter", max_iter, "Override max_iter");

  seaway::BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Compare rejection and triangulation sampling");
  b->add_option("scenario", bench.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  b->add_option("--Ns", bench.ns, "Sample counts")->delimiter(',')->capture_default_str();
  b->add_option("--repeats", bench.repeats, "Timed repeats per point")->capture_default_str();
  b->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  b->add_flag("--parallel", bench.parallel, "Run repeats on several threads");
  b->add_option("--out", bench.output, "Output prefix; writes <prefix>.csv and <prefix>.summary.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c) {
      chart.filter = parse_filter(chart_filter);
      seaway::cmd_chart(chart, std::cout);
    } else if (*k) {
      kde.filter = parse_filter(kde_filter);
      kde.sog_min = sog[0];
      kde.sog_max = sog[1];
      seaway::cmd_kde(kde, std::cout);
    } else if (*p) {
      if (*seed_opt) plan.seed = plan_seed;
      if (*w1_opt) plan.w1 = w1;
      if (*w2_opt) plan.w2 = w2;
      if (*iter_opt) plan.max_iter = max_iter;
      seaway::cmd_plan(plan, std::cout);
    } else if (*b) {
      seaway::cmd_bench(bench, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return seaway::exit_code(e);
  }
  return 0;
}
