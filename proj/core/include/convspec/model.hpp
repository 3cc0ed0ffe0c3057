#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "convspec/matrix.hpp"

namespace convspec {

/// Raw 4-tensor K in row-major (c_out, c_in, h, w) order. Unchecked; pass it
/// through validate_filter to obtain a Bundle.
struct ConvFilter {
  std::size_t c_out = 0;
  std::size_t c_in = 0;
  std::size_t h = 0;
  std::size_t w = 0;
  std::vector<double> weights;
};

/// Split of the filter support around the output pixel: taps run over
/// k in [-h1, h2] and l in [-w1, w2].
struct PaddingSpec {
  std::size_t h1 = 0;
  std::size_t h2 = 0;
  std::size_t w1 = 0;
  std::size_t w2 = 0;

  bool operator==(const PaddingSpec&) const = default;
};

struct InputGeometry {
  std::size_t n = 0;       // input is n x n per channel
  std::size_t stride = 1;  // g
};

/// Centered split: h1 = floor((h-1)/2), h2 = h-1-h1 (same for w).
PaddingSpec default_padding(std::size_t h, std::size_t w);

/// A filter, padding and input geometry that satisfy every invariant. All
/// builders and spectral routines take a Bundle; it is immutable.
class Bundle {
 public:
  std::size_t c_out() const noexcept { return filter_.c_out; }
  std::size_t c_in() const noexcept { return filter_.c_in; }
  std::size_t h() const noexcept { return filter_.h; }
  std::size_t w() const noexcept { return filter_.w; }
  std::size_t n() const noexcept { return geometry_.n; }
  std::size_t stride() const noexcept { return geometry_.stride; }
  const PaddingSpec& pad() const noexcept { return pad_; }
  const InputGeometry& geometry() const noexcept { return geometry_; }
  const ConvFilter& filter() const noexcept { return filter_; }
  std::span<const double> weights() const noexcept { return filter_.weights; }

  /// K[c, d, p, q], zero-based.
  double weight(std::size_t c, std::size_t d, std::size_t p,
                std::size_t q) const {
    return filter_.weights[((c * filter_.c_in + d) * filter_.h + p) *
                               filter_.w +
                           q];
  }

  /// Toeplitz coefficient t^{k,l}_{c,d} for k in [-h1, h2], l in [-w1, w2].
  double tap(std::size_t c, std::size_t d, std::ptrdiff_t k,
             std::ptrdiff_t l) const {
    return weight(c, d, static_cast<std::size_t>(k + std::ptrdiff_t(pad_.h1)),
                  static_cast<std::size_t>(l + std::ptrdiff_t(pad_.w1)));
  }

  std::ptrdiff_t k_min() const noexcept { return -std::ptrdiff_t(pad_.h1); }
  std::ptrdiff_t k_max() const noexcept { return std::ptrdiff_t(pad_.h2); }
  std::ptrdiff_t l_min() const noexcept { return -std::ptrdiff_t(pad_.w1); }
  std::ptrdiff_t l_max() const noexcept { return std::ptrdiff_t(pad_.w2); }

  /// Same filter with another input geometry (re-validated).
  Bundle with_geometry(InputGeometry geometry) const;
  /// Same geometry with every weight multiplied by `factor`.
  Bundle scaled(double factor) const;

 private:
  friend Bundle validate_filter(ConvFilter, PaddingSpec, InputGeometry);
  Bundle(ConvFilter filter, PaddingSpec pad, InputGeometry geometry)
      : filter_(std::move(filter)), pad_(pad), geometry_(geometry) {}

  ConvFilter filter_;
  PaddingSpec pad_;
  InputGeometry geometry_;
};

/// Throws convspec::Error with kDimensionMismatch, kPadMismatch,
/// kFilterExceedsInput, kNonFinite or kInvalidArgument.
Bundle validate_filter(ConvFilter filter, PaddingSpec pad,
                       InputGeometry geometry);

/// Convenience overload using default_padding.
Bundle validate_filter(ConvFilter filter, InputGeometry geometry);

enum class Representation { kA, kT, kC, kCA, kTStrided };
std::string_view to_string(Representation r);

/// Records how a DenseOperator's rows and columns are blocked. Rows number
/// block_rows * out_side^2, columns block_cols * in_side^2.
struct BlockGeometry {
  std::size_t out_side = 0;
  std::size_t in_side = 0;
  std::size_t block_rows = 0;  // r = c_out
  std::size_t block_cols = 0;  // s = c_in
};

struct DenseOperator {
  Representation kind = Representation::kT;
  BlockGeometry geometry;
  RealMatrix matrix;

  std::size_t rows() const noexcept { return matrix.rows(); }
  std::size_t cols() const noexcept { return matrix.cols(); }
};

enum class Provenance { kExact, kCircular, kUniformSampling, kQuantile };
std::string_view to_string(Provenance p);

struct SingularSpectrum {
  std::vector<double> values;  // nonincreasing, >= 0
  // Optional: min(r, s) clusters, each nonincreasing.
  std::vector<std::vector<double>> clusters;
  Provenance provenance = Provenance::kExact;

  std::size_t size() const noexcept { return values.size(); }
  double largest() const { return values.empty() ? 0.0 : values.front(); }
};

/// Sorts `values` nonincreasing and tags them.
SingularSpectrum make_spectrum(std::vector<double> values,
                               Provenance provenance);

}  // namespace convspec
