#pragma once

#include "seaway/sampling.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace seaway {

enum class Scheme { Rejection, Triangulation };

std::string_view to_string(Scheme s);

struct TimingStats {
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator
  std::size_t n = 0;
};

TimingStats summarize(std::span<const double> xs);

//! Prepared sampling spaces for both schemes.
struct SamplingSpace {
  NavIndex nav;
  TriangulatedRegion tri;

  static SamplingSpace prepare(std::span<const NavPolygon> polys);
};

struct BenchOptions {
  int repeats = 30;
  std::uint64_t seed = 1;
  bool warmup = true;
  bool parallel = false;
};

//! Region preparation time per repeat: the polygon index for rejection, the
//! index plus triangulation for the direct scheme. Excludes file I/O.
std::vector<double> time_config(std::span<const NavPolygon> polys, Scheme scheme, const BenchOptions& opts);
TimingStats measure_config(std::span<const NavPolygon> polys, Scheme scheme, const BenchOptions& opts);

struct BenchRow {
  Scheme scheme = Scheme::Rejection;
  std::string scenario;
  std::size_t n_samples = 0;
  int repeat = 0;
  double elapsed_s = 0.0;
  std::uint64_t attempts = 0;  // draws made; equals n_samples for the direct scheme
  double area_ratio = 0.0;
};

struct BenchReport {
  Scheme scheme = Scheme::Rejection;
  std::string scenario;
  double area_ratio = 0.0;
  TimingStats config;
  std::vector<std::size_t> sample_counts;
  std::vector<TimingStats> elapsed;         // per sample count
  std::vector<double> attempts_per_sample;  // mean over repeats, per sample count
  std::vector<BenchRow> rows;
  //! Fraction of per-repeat observations inside mean +- 3 std of their group.
  double band_coverage = 0.0;
};

//! Times producing N valid samples for each N, `opts.repeats` times, each
//! repeat on its own counter stream.
BenchReport measure_sampling(const SamplingSpace& space, Scheme scheme, std::span<const std::size_t> ns,
                             const BenchOptions& opts, std::string scenario = "");

//! Full comparison: configuration timing plus sampling timing for one scheme.
BenchReport run_bench(std::span<const NavPolygon> polys, const SamplingSpace& space, Scheme scheme,
                      std::span<const std::size_t> ns, const BenchOptions& opts, std::string scenario = "");

//! Sample count beyond which config + sampling time of the direct scheme
//! undercuts rejection, from the mean config times and the per-sample rates
//! at the largest N. Empty if the direct scheme is never faster.
std::optional<double> crossover(const BenchReport& rejection, const BenchReport& triangulation);

void write_csv(std::ostream& out, std::span<const BenchReport> reports);
nlohmann::json summary_json(std::span<const BenchReport> reports);

}  // namespace seaway
