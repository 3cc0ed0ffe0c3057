#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convspec/approximation.hpp"
#include "convspec/bounds.hpp"
#include "convspec/model.hpp"

namespace convspec {

enum class Distribution { kUniform, kGaussian };
std::string_view to_string(Distribution d);
std::optional<Distribution> parse_distribution(std::string_view name);

struct RunOptions {
  std::string command;      // exact|circular|sample|quantile|bounds|compare
  std::string filter_path;  // echoed only
  std::optional<std::size_t> n;
  std::optional<std::size_t> stride;
  double gamma = 0.5;
  InterpolationMode interp = InterpolationMode::kLinear;
  std::size_t grid = 0;   // one/inf bound grid; 0 = n
  bool with_exact = false;  // bounds: also compute sigma_max(T)
  std::size_t top_k = 0;  // 0 = full spectra
  std::size_t size_cap = 50'000'000;
  std::size_t threads = 1;
};

struct BenchOptions {
  Distribution dist = Distribution::kUniform;
  std::size_t c_out = 8;
  std::size_t c_in = 8;
  std::size_t h = 3;
  std::size_t w = 3;
  std::size_t n = 10;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  double gamma = 0.5;
  InterpolationMode interp = InterpolationMode::kLinear;
  std::size_t size_cap = 50'000'000;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one trial
};

struct BenchMethodSummary {
  Method method = Method::kCircular;
  MetricSummary overall;
  MetricSummary sigma1;
  std::vector<double> overall_per_trial;
  std::vector<double> sigma1_per_trial;
};

struct BenchSummary {
  std::size_t trials = 0;
  std::vector<BenchMethodSummary> methods;
  MetricSummary exact_seconds;
  const BenchMethodSummary* find(Method m) const;
};

struct BundleEcho {
  std::size_t c_out = 0, c_in = 0, h = 0, w = 0;
  PaddingSpec pad;
  InputGeometry geometry;
};
BundleEcho echo(const Bundle& bundle);

struct RunReport {
  std::string command;
  std::optional<RunOptions> run;
  std::optional<BenchOptions> bench;
  std::optional<BundleEcho> bundle;
  std::vector<std::pair<std::string, SingularSpectrum>> spectra;
  std::optional<ErrorReport> errors;
  std::optional<BoundReport> bounds;
  std::optional<BenchSummary> bench_summary;
  double seconds = 0.0;
};

/// Description of the seeded generator, embedded in every report.
std::string rng_description();

/// Pretty-printed JSON. Spectra are truncated to top_k when top_k > 0.
std::string to_json(const RunReport& report, std::size_t top_k = 0);

/// CSV. Spectra: method,index,value. Bounds: bound,value,ratio,seconds.
/// Bench: method,metric,mean,stddev. Values use %.17g.
std::string to_csv(const RunReport& report, std::size_t top_k = 0);

}  // namespace convspec
