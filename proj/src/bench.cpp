#include "seaway/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <thread>

namespace seaway {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Keeps sampled coordinates observable so timed loops are not optimized away.
std::atomic<double> g_sink{0.0};

std::uint64_t stream_seed(std::uint64_t seed, std::size_t n_index, int repeat) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (n_index + 1) + 0xC2B2AE3D27D4EB4FULL * static_cast<std::uint64_t>(repeat + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Run {
  double elapsed = 0.0;
  std::uint64_t attempts = 0;
};

Run sample_once(const SamplingSpace& space, Scheme scheme, std::size_t n, std::uint64_t seed) {
  Run r;
  double acc = 0.0;
  const auto t0 = Clock::now();
  if (scheme == Scheme::Triangulation) {
    SampleStream s(space.tri, seed);
    for (std::size_t k = 0; k < n; ++k) acc += s.draw().x();
    r.attempts = n;
  } else {
    RejectionStream s(space.nav, seed);
    for (std::size_t k = 0; k < n; ++k) {
      const RejectionDraw d = s.draw();
      acc += d.point.x();
      r.attempts += d.attempts;
    }
  }
  r.elapsed = seconds_since(t0);
  g_sink.store(acc, std::memory_order_relaxed);
  return r;
}

template <typename F>
void for_repeats(int repeats, bool parallel, F&& body) {
  if (!parallel) {
    for (int r = 0; r < repeats; ++r) body(r);
    return;
  }
  const int workers = std::max(1, std::min<int>(repeats, static_cast<int>(std::thread::hardware_concurrency())));
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int r = next++; r < repeats; r = next++) body(r);
    });
}

void check_options(const BenchOptions& opts) {
  if (opts.repeats < 10) throw InvalidInput("benchmarks need at least 10 repeats");
}

}  // namespace

std::string_view to_string(Scheme s) { return s == Scheme::Rejection ? "rejection" : "triangulation"; }

TimingStats summarize(std::span<const double> xs) {
  TimingStats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

SamplingSpace SamplingSpace::prepare(std::span<const NavPolygon> polys) {
  SamplingSpace s;
  s.nav = NavIndex(std::vector<NavPolygon>(polys.begin(), polys.end()));
  s.tri = triangulate(polys);
  return s;
}

std::vector<double> time_config(std::span<const NavPolygon> polys, Scheme scheme, const BenchOptions& opts) {
  check_options(opts);
  auto once = [&] {
    const auto t0 = Clock::now();
    NavIndex nav(std::vector<NavPolygon>(polys.begin(), polys.end()));
    double keep = nav.area();
    if (scheme == Scheme::Triangulation) keep += triangulate(polys).total_area;
    const double dt = seconds_since(t0);
    g_sink.store(keep, std::memory_order_relaxed);
    return dt;
  };
  if (opts.warmup) once();
  std::vector<double> out(static_cast<std::size_t>(opts.repeats));
  for_repeats(opts.repeats, opts.parallel, [&](int r) { out[static_cast<std::size_t>(r)] = once(); });
  return out;
}

TimingStats measure_config(std::span<const NavPolygon> polys, Scheme scheme, const BenchOptions& opts) {
  const auto runs = time_config(polys, scheme, opts);
  return summarize(runs);
}

BenchReport measure_sampling(const SamplingSpace& space, Scheme scheme, std::span<const std::size_t> ns,
                             const BenchOptions& opts, std::string scenario) {
  check_options(opts);
  if (ns.empty()) throw InvalidInput("benchmark needs at least one sample count");
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (ns[i] == 0 || (i > 0 && ns[i] <= ns[i - 1])) throw InvalidInput("sample counts must be positive and increasing");

  BenchReport rep;
  rep.scheme = scheme;
  rep.scenario = std::move(scenario);
  rep.area_ratio = space.nav.area_ratio();
  rep.sample_counts.assign(ns.begin(), ns.end());
  if (opts.warmup) sample_once(space, scheme, ns.front(), stream_seed(opts.seed, ns.size(), -1));

  std::size_t inside = 0, total = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<Run> runs(static_cast<std::size_t>(opts.repeats));
    for_repeats(opts.repeats, opts.parallel, [&](int r) {
      runs[static_cast<std::size_t>(r)] = sample_once(space, scheme, ns[i], stream_seed(opts.seed, i, r));
    });
    std::vector<double> times;
    double attempts = 0.0;
    for (int r = 0; r < opts.repeats; ++r) {
      const Run& run = runs[static_cast<std::size_t>(r)];
      times.push_back(run.elapsed);
      attempts += static_cast<double>(run.attempts);
      rep.rows.push_back({scheme, rep.scenario, ns[i], r, run.elapsed, run.attempts, rep.area_ratio});
    }
    const TimingStats st = summarize(times);
    for (double t : times) inside += std::abs(t - st.mean) <= 3.0 * st.std;
    total += times.size();
    rep.elapsed.push_back(st);
    rep.attempts_per_sample.push_back(attempts / (static_cast<double>(ns[i]) * opts.repeats));
  }
  rep.band_coverage = static_cast<double>(inside) / static_cast<double>(total);
  return rep;
}

BenchReport run_bench(std::span<const NavPolygon> polys, const SamplingSpace& space, Scheme scheme,
                      std::span<const std::size_t> ns, const BenchOptions& opts, std::string scenario) {
  BenchReport rep = measure_sampling(space, scheme, ns, opts, std::move(scenario));
  rep.config = measure_config(polys, scheme, opts);
  return rep;
}

std::optional<double> crossover(const BenchReport& rejection, const BenchReport& triangulation) {
  if (rejection.elapsed.empty() || triangulation.elapsed.empty()) return std::nullopt;
  const double n_rej = static_cast<double>(rejection.sample_counts.back());
  const double n_tri = static_cast<double>(triangulation.sample_counts.back());
  const double rate_rej = rejection.elapsed.back().mean / n_rej;
  const double rate_tri = triangulation.elapsed.back().mean / n_tri;
  const double extra_config = triangulation.config.mean - rejection.config.mean;
  if (extra_config <= 0.0) return 0.0;
  if (rate_rej <= rate_tri) return std::nullopt;
  return extra_config / (rate_rej - rate_tri);
}

void write_csv(std::ostream& out, std::span<const BenchReport> reports) {
  out << "scheme,scenario,n_samples,repeat,elapsed_s,attempts,area_ratio\n";
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(9);
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      out << to_string(r.scheme) << ',' << r.scenario << ',' << r.n_samples << ',' << r.repeat << ',' << r.elapsed_s
          << ',' << r.attempts << ',' << r.area_ratio << '\n';
  out.flags(flags);
  out.precision(prec);
}

nlohmann::json summary_json(std::span<const BenchReport> reports) {
  using nlohmann::json;
  json out = json::object();
  json list = json::array();
  const BenchReport* rej = nullptr;
  const BenchReport* tri = nullptr;
  for (const auto& rep : reports) {
    json j;
    j["scheme"] = to_string(rep.scheme);
    j["scenario"] = rep.scenario;
    j["area_ratio"] = rep.area_ratio;
    j["config_time_s"] = {{"mean", rep.config.mean}, {"std", rep.config.std}, {"repeats", rep.config.n}};
    json per_n = json::array();
    for (std::size_t i = 0; i < rep.sample_counts.size(); ++i)
      per_n.push_back({{"n_samples", rep.sample_counts[i]},
                       {"mean_s", rep.elapsed[i].mean},
                       {"std_s", rep.elapsed[i].std},
                       {"per_sample_s", rep.elapsed[i].mean / static_cast<double>(rep.sample_counts[i])},
                       {"attempts_per_sample", rep.attempts_per_sample[i]},
                       {"acceptance", 1.0 / rep.attempts_per_sample[i]}});
    j["sampling"] = per_n;
    j["band_coverage"] = rep.band_coverage;
    list.push_back(j);
    if (rep.scheme == Scheme::Rejection) rej = &rep;
    if (rep.scheme == Scheme::Triangulation) tri = &rep;
  }
  out["reports"] = list;
  if (rej && tri) {
    const auto n = crossover(*rej, *tri);
    out["crossover_n"] = n ? json(*n) : json(nullptr);
  }
  return out;
}

}  // namespace seaway
