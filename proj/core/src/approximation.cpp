#include "convspec/approximation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "convspec/error.hpp"
#include "convspec/operators.hpp"
#include "convspec/svd.hpp"

namespace convspec {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_same_length(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "spectra differ in length: " + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Type-7 sample quantile, used only for the IQR in the bandwidth rule.
double sample_quantile(const std::vector<double>& x, double p) {
  const double h = (double(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - double(lo)) * (x[hi] - x[lo]);
}

}  // namespace

std::string_view to_string(InterpolationMode mode) {
  return mode == InterpolationMode::kLinear ? "linear" : "kernel";
}

double silverman_bandwidth(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / double(n - 1));
  const double iqr = (sample_quantile(x, 0.75) - sample_quantile(x, 0.25)) / 1.34;
  const double spread = iqr > 0.0 ? std::min(sd, iqr) : sd;
  return 0.9 * spread * std::pow(double(n), -0.2);
}

QuantileModel::QuantileModel(const GridSamples& samples, QuantileConfig config)
    : config_(std::move(config)) {
  const std::size_t m = samples.clusters();
  if (samples.points() == 0 || m == 0)
    throw Error(ErrorCode::kInvalidArgument, "QuantileModel: no grid samples");
  if (!config_.cluster_gamma.empty() && config_.cluster_gamma.size() != m)
    throw Error(ErrorCode::kInvalidArgument,
                "QuantileModel: expected " + std::to_string(m) +
                    " per-cluster gammas, got " +
                    std::to_string(config_.cluster_gamma.size()));
  if (config_.bandwidth < 0.0 || !std::isfinite(config_.bandwidth))
    throw Error(ErrorCode::kInvalidArgument, "QuantileModel: bad bandwidth");

  sorted_.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto x = samples.cluster(j);
    std::sort(x.begin(), x.end());
    const double g =
        config_.cluster_gamma.empty() ? config_.gamma : config_.cluster_gamma[j];
    if (!(g > 0.0 && g < 1.0))
      throw Error(ErrorCode::kInvalidArgument,
                  "QuantileModel: gamma must lie in (0, 1), got " + std::to_string(g));
    gamma_.push_back(g);
    bandwidth_.push_back(config_.mode == InterpolationMode::kKernel
                             ? (config_.bandwidth > 0.0 ? config_.bandwidth
                                                        : silverman_bandwidth(x))
                             : 0.0);
    sorted_.push_back(std::move(x));
  }
}

double QuantileModel::linear_quantile(const std::vector<double>& x,
                                      double u) const {
  const std::size_t n = x.size();
  const double t = std::clamp(u, 0.0, 1.0) * double(n);
  const auto i = static_cast<std::size_t>(std::floor(t));
  if (i >= n) return x.back();
  const double lower = i == 0 ? x.front() : x[i - 1];
  return lower + (t - double(i)) * (x[i] - lower);
}

double QuantileModel::kernel_quantile(const std::vector<double>& x, double bw,
                                      double u) const {
  if (bw <= 0.0) return linear_quantile(x, u);
  u = std::clamp(u, 0.0, 1.0);
  auto cdf = [&](double v) {
    double acc = 0.0;
    for (double s : x) acc += normal_cdf((v - s) / bw);
    return acc / double(x.size());
  };
  double lo = x.front() - 10.0 * bw;
  double hi = x.back() + 10.0 * bw;
  // Fixed iteration count keeps the map u -> Q(u) monotone.
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return std::max(0.0, 0.5 * (lo + hi));
}

double QuantileModel::quantile(std::size_t j, double u) const {
  const auto& x = sorted_.at(j);
  return config_.mode == InterpolationMode::kKernel
             ? kernel_quantile(x, bandwidth_[j], u)
             : linear_quantile(x, u);
}

std::vector<double> QuantileModel::estimates(std::size_t j) const {
  const std::size_t n = sorted_.at(j).size();
  const double g = gamma_[j];
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k)
    out[k - 1] = quantile(j, 1.0 - (double(k) - g) / double(n));
  return out;
}

SingularSpectrum circular_spectrum(const Bundle& bundle) {
  auto s = exact_spectrum(build_C(bundle));
  s.provenance = Provenance::kCircular;
  return s;
}

SingularSpectrum uniform_sampling_spectrum(const GridSamples& samples) {
  SingularSpectrum s =
      make_spectrum(samples.all_values(), Provenance::kUniformSampling);
  for (std::size_t j = 0; j < samples.clusters(); ++j) {
    auto c = samples.cluster(j);
    std::sort(c.begin(), c.end(), std::greater<>());
    s.clusters.push_back(std::move(c));
  }
  return s;
}

SingularSpectrum uniform_sampling_spectrum(const Bundle& bundle, std::size_t n) {
  return uniform_sampling_spectrum(sample_grid(make_density(bundle), n));
}

SingularSpectrum quantile_spectrum(const GridSamples& samples,
                                   const QuantileConfig& config) {
  const QuantileModel model(samples, config);
  SingularSpectrum s;
  s.provenance = Provenance::kQuantile;
  std::vector<double> all;
  for (std::size_t j = 0; j < model.clusters(); ++j) {
    auto est = model.estimates(j);
    all.insert(all.end(), est.begin(), est.end());
    s.clusters.push_back(std::move(est));
  }
  std::sort(all.begin(), all.end(), std::greater<>());
  s.values = std::move(all);
  return s;
}

SingularSpectrum quantile_spectrum(const Bundle& bundle, std::size_t n,
                                   const QuantileConfig& config) {
  return quantile_spectrum(sample_grid(make_density(bundle), n), config);
}

double overall_error(const std::vector<double>& reference,
                     const std::vector<double>& estimate) {
  require_same_length(reference, estimate);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    num += std::abs(reference[j] - estimate[j]);
    den += std::abs(reference[j]);
  }
  return den > 0.0 ? num / den : num;
}

double first_value_error(const std::vector<double>& reference,
                         const std::vector<double>& estimate) {
  require_same_length(reference, estimate);
  if (reference.empty()) return 0.0;
  const double diff = std::abs(reference.front() - estimate.front());
  const double den = std::abs(reference.front());
  return den > 0.0 ? diff / den : diff;
}

double max_abs_deviation(const std::vector<double>& reference,
                         const std::vector<double>& estimate) {
  require_same_length(reference, estimate);
  double worst = 0.0;
  for (std::size_t j = 0; j < reference.size(); ++j)
    worst = std::max(worst, std::abs(reference[j] - estimate[j]));
  return worst;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kExact: return "exact";
    case Method::kCircular: return "circular";
    case Method::kUniformSampling: return "sample";
    case Method::kQuantile: return "quantile";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kExact, Method::kCircular, Method::kUniformSampling,
                   Method::kQuantile})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

const MethodResult* ErrorReport::find(Method m) const {
  for (const auto& r : methods)
    if (r.method == m) return &r;
  return nullptr;
}

void check_size_cap(std::size_t rows, std::size_t cols, std::size_t cap) {
  if (rows * cols > cap)
    throw Error(ErrorCode::kSizeCapExceeded,
                "dense " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " operator exceeds the size cap of " + std::to_string(cap) +
                    " entries");
}

ErrorReport compare_methods(const Bundle& bundle,
                            const std::vector<Method>& methods,
                            const CompareOptions& options) {
  const std::size_t side = bundle.n() * bundle.n();
  check_size_cap(bundle.c_out() * side, bundle.c_in() * side, options.size_cap);

  ErrorReport report;
  auto start = Clock::now();
  report.exact = exact_spectrum(build_T(bundle));
  report.exact_seconds = seconds_since(start);

  for (Method m : methods) {
    MethodResult r;
    r.method = m;
    start = Clock::now();
    switch (m) {
      case Method::kExact:
        r.spectrum = report.exact;
        r.seconds = report.exact_seconds;
        break;
      case Method::kCircular:
        r.spectrum = circular_spectrum(bundle);
        break;
      case Method::kUniformSampling:
        r.spectrum = uniform_sampling_spectrum(
            sample_grid(make_density(bundle), bundle.n(), options.grid_threads));
        break;
      case Method::kQuantile:
        r.spectrum = quantile_spectrum(
            sample_grid(make_density(bundle), bundle.n(), options.grid_threads),
            options.quantile);
        break;
    }
    if (m != Method::kExact) r.seconds = seconds_since(start);
    r.overall_error = overall_error(report.exact.values, r.spectrum.values);
    r.sigma1_error = first_value_error(report.exact.values, r.spectrum.values);
    r.max_abs_deviation = max_abs_deviation(report.exact.values, r.spectrum.values);
    report.methods.push_back(std::move(r));
  }
  return report;
}

}  // namespace convspec
