#pragma once

#include <cstddef>
#include <optional>

#include "convspec/model.hpp"

namespace convspec {

/// sqrt(h*w) * min(||R||_2, ||L||_2), where R is (h*c_out) x (w*c_in) with
/// block (c, d) = K[c, d, :, :] and L stacks the transposed blocks.
double bound_reshape(const Bundle& bundle);

/// max over the n_grid x n_grid frequency grid of sqrt(||F||_1 ||F||_inf),
/// using the entrywise modulus of F. n_grid = 0 selects the bundle's n.
/// The continuous supremum can be slightly larger than the grid maximum.
double bound_one_inf(const Bundle& bundle, std::size_t n_grid = 0);

/// Sum of the spectral norms of the h*w coefficient blocks.
double bound_sum_blocks(const Bundle& bundle);

struct BoundTimings {
  double reshape = 0.0;  // seconds, median of 5 runs
  double one_inf = 0.0;
  double sum_blocks = 0.0;
};

struct BoundReport {
  double reshape = 0.0;
  double one_inf = 0.0;
  double sum_blocks = 0.0;
  double sigma_max_circular = 0.0;
  std::optional<double> sigma_max_exact;
  std::size_t n_grid = 0;
  BoundTimings timings;

  double ratio_reshape() const { return ratio(reshape); }
  double ratio_one_inf() const { return ratio(one_inf); }
  double ratio_sum_blocks() const { return ratio(sum_blocks); }

 private:
  double ratio(double b) const {
    return sigma_max_circular > 0.0 ? b / sigma_max_circular : 1.0;
  }
};

struct BoundOptions {
  bool with_exact = false;
  std::size_t n_grid = 0;             // 0: bundle's n
  std::size_t size_cap = 50'000'000;  // for the exact reference
  std::size_t repeats = 5;
};

/// All three bounds, sigma_max(C) from the grid (always) and sigma_max(T)
/// when requested. Throws kSizeCapExceeded if T is too large.
BoundReport bound_report(const Bundle& bundle, const BoundOptions& options = {});

}  // namespace convspec
