#include "convspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include <cblas.h>

#include "convspec/operators.hpp"
#include "convspec/svd.hpp"

namespace convspec {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

MetricSummary summarize(const std::vector<double>& x) {
  MetricSummary s;
  if (x.empty()) return s;
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / double(x.size());
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / double(x.size() - 1));
  }
  return s;
}

void require_unit_stride(const Bundle& b, const std::string& command) {
  if (b.stride() != 1)
    throw Error(ErrorCode::kUnsupportedStride,
                "'" + command + "' needs stride 1 (got " +
                    std::to_string(b.stride()) + "); only 'exact' and 'bounds' "
                    "accept strided filters");
}

QuantileConfig quantile_config(double gamma, InterpolationMode interp) {
  QuantileConfig q;
  q.gamma = gamma;
  q.mode = interp;
  return q;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double TrialRng::gaussian() {
  const double u1 = 1.0 - unit();  // (0, 1]
  const double u2 = unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ConvFilter random_filter(std::size_t c_out, std::size_t c_in, std::size_t h,
                         std::size_t w, Distribution dist, TrialRng& rng) {
  ConvFilter f{c_out, c_in, h, w, {}};
  f.weights.resize(c_out * c_in * h * w);
  for (double& v : f.weights)
    v = dist == Distribution::kUniform ? rng.uniform() : rng.gaussian();
  return f;
}

RunReport cmd_run(const Bundle& b, const RunOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.command = o.command;
  r.run = o;
  r.bundle = echo(b);
  const QuantileConfig qc = quantile_config(o.gamma, o.interp);

  if (o.command == "exact") {
    const std::size_t m =
        b.stride() == 1 ? b.n() : strided_output_side(b.n(), b.stride());
    check_size_cap(b.c_out() * m * m, b.c_in() * b.n() * b.n(), o.size_cap);
    const DenseOperator op = b.stride() == 1 ? build_T(b) : build_T_strided(b);
    r.spectra.emplace_back("exact", exact_spectrum(op));
  } else if (o.command == "circular") {
    require_unit_stride(b, o.command);
    const std::size_t side = b.n() * b.n();
    check_size_cap(b.c_out() * side, b.c_in() * side, o.size_cap);
    r.spectra.emplace_back("circular", circular_spectrum(b));
  } else if (o.command == "sample") {
    require_unit_stride(b, o.command);
    r.spectra.emplace_back(
        "sample", uniform_sampling_spectrum(sample_grid(make_density(b), b.n(), o.threads)));
  } else if (o.command == "quantile") {
    require_unit_stride(b, o.command);
    r.spectra.emplace_back(
        "quantile",
        quantile_spectrum(sample_grid(make_density(b), b.n(), o.threads), qc));
  } else if (o.command == "bounds") {
    BoundOptions bo;
    bo.with_exact = o.with_exact;
    bo.n_grid = o.grid;
    bo.size_cap = o.size_cap;
    r.bounds = bound_report(b, bo);
  } else if (o.command == "compare") {
    require_unit_stride(b, o.command);
    CompareOptions co;
    co.size_cap = o.size_cap;
    co.quantile = qc;
    co.grid_threads = o.threads;
    ErrorReport e = compare_methods(
        b, {Method::kCircular, Method::kUniformSampling, Method::kQuantile}, co);
    r.spectra.emplace_back("exact", e.exact);
    for (const auto& m : e.methods)
      r.spectra.emplace_back(std::string(to_string(m.method)), m.spectrum);
    r.errors = std::move(e);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown command '" + o.command + "'");
  }
  r.seconds = seconds_since(start);
  return r;
}

RunReport cmd_bench(const BenchOptions& o) {
  if (o.trials == 0)
    throw Error(ErrorCode::kInvalidArgument, "bench: trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t side = o.n * o.n;
  check_size_cap(o.c_out * side, o.c_in * side, o.size_cap);

  // Trials are the unit of parallelism; keep BLAS itself single-threaded.
  openblas_set_num_threads(1);

  const std::vector<Method> methods = {Method::kCircular, Method::kQuantile};
  CompareOptions co;
  co.size_cap = o.size_cap;
  co.quantile = quantile_config(o.gamma, o.interp);

  std::vector<ErrorReport> results(o.trials);
  std::vector<std::exception_ptr> failures(o.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < o.trials; t = next++) {
      try {
        TrialRng rng(o.seed, t);
        ConvFilter f = random_filter(o.c_out, o.c_in, o.h, o.w, o.dist, rng);
        const Bundle b = validate_filter(std::move(f), InputGeometry{o.n, 1});
        results[t] = compare_methods(b, methods, co);
        results[t].exact.values.clear();
        for (auto& m : results[t].methods) m.spectrum = {};
      } catch (...) {
        failures[t] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(o.threads, 1, o.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  BenchSummary summary;
  summary.trials = o.trials;
  std::vector<double> exact_times;
  for (const auto& res : results) exact_times.push_back(res.exact_seconds);
  summary.exact_seconds = summarize(exact_times);
  for (std::size_t k = 0; k < methods.size(); ++k) {
    BenchMethodSummary s;
    s.method = methods[k];
    for (const auto& res : results) {
      s.overall_per_trial.push_back(res.methods[k].overall_error);
      s.sigma1_per_trial.push_back(res.methods[k].sigma1_error);
    }
    s.overall = summarize(s.overall_per_trial);
    s.sigma1 = summarize(s.sigma1_per_trial);
    summary.methods.push_back(std::move(s));
  }

  RunReport r;
  r.command = "bench";
  r.bench = o;
  r.bench_summary = std::move(summary);
  r.seconds = seconds_since(start);
  return r;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kPadMismatch:
    case ErrorCode::kFilterExceedsInput:
    case ErrorCode::kNonFinite:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnsupportedStride:
    case ErrorCode::kGridTooSmall:
    case ErrorCode::kParse:
      return 2;
    case ErrorCode::kSizeCapExceeded:
      return 3;
    case ErrorCode::kNoConvergence:
    case ErrorCode::kDegenerateTopSingularValue:
      return 4;
    case ErrorCode::kIo:
      return 1;
  }
  return 1;
}

}  // namespace convspec
