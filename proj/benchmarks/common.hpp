#pragma once

#include <cstdint>

#include "convspec/harness.hpp"
#include "convspec/model.hpp"

inline convspec::Bundle bench_bundle(std::size_t c, std::size_t k, std::size_t n,
                                     std::uint64_t seed = 7) {
  convspec::TrialRng rng(seed, 0);
  return convspec::validate_filter(
      convspec::random_filter(c, c, k, k, convspec::Distribution::kUniform, rng),
      convspec::InputGeometry{n, 1});
}
