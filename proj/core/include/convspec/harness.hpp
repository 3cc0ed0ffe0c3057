#pragma once

#include <cstdint>
#include <random>

#include "convspec/error.hpp"
#include "convspec/model.hpp"
#include "convspec/report.hpp"

namespace convspec {

std::uint64_t splitmix64(std::uint64_t x);

/// Per-trial generator. The sequence depends only on (seed, trial).
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : engine_(splitmix64(seed + trial)) {}

  double unit() { return double(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform() { return unit() - 0.5; }                       // [-0.5, 0.5)
  double gaussian();

 private:
  std::mt19937_64 engine_;
};

ConvFilter random_filter(std::size_t c_out, std::size_t c_in, std::size_t h,
                         std::size_t w, Distribution dist, TrialRng& rng);

/// Dispatches one of exact|circular|sample|quantile|bounds|compare.
/// Throws kInvalidArgument for an unknown command and kUnsupportedStride for
/// spectral methods on strided bundles.
RunReport cmd_run(const Bundle& bundle, const RunOptions& options);

/// Monte-Carlo comparison of the circular and quantile methods against the
/// exact spectrum. Trials run on options.threads workers; the aggregate is
/// independent of the thread count.
RunReport cmd_bench(const BenchOptions& options);

/// 2 for input/validation errors, 3 for the size cap, 4 for numerical
/// failures, 1 otherwise.
int exit_code(ErrorCode code);

}  // namespace convspec
