#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "convspec/matrix.hpp"
#include "convspec/model.hpp"

namespace convspec {

/// Matrix-valued trigonometric polynomial
///   F(w1, w2) = sum_{k,l} T_{k,l} exp(i (k w1 + l w2))
/// with real r x s coefficient blocks on k in [k_min, k_max], l in [l_min, l_max].
class SpectralDensity {
 public:
  SpectralDensity(std::size_t r, std::size_t s, std::ptrdiff_t k_min,
                  std::ptrdiff_t k_max, std::ptrdiff_t l_min,
                  std::ptrdiff_t l_max, std::vector<RealMatrix> coefficients);

  std::size_t rows() const noexcept { return r_; }
  std::size_t cols() const noexcept { return s_; }
  std::ptrdiff_t k_min() const noexcept { return k_min_; }
  std::ptrdiff_t k_max() const noexcept { return k_max_; }
  std::ptrdiff_t l_min() const noexcept { return l_min_; }
  std::ptrdiff_t l_max() const noexcept { return l_max_; }
  std::size_t height() const noexcept { return std::size_t(k_max_ - k_min_ + 1); }
  std::size_t width() const noexcept { return std::size_t(l_max_ - l_min_ + 1); }

  const RealMatrix& coefficient(std::ptrdiff_t k, std::ptrdiff_t l) const;
  const std::vector<RealMatrix>& coefficients() const noexcept { return coeffs_; }

  ComplexMatrix eval(double w1, double w2) const;

 private:
  std::size_t r_, s_;
  std::ptrdiff_t k_min_, k_max_, l_min_, l_max_;
  std::vector<RealMatrix> coeffs_;  // (k - k_min) * width + (l - l_min)
};

/// T_{k,l}[c, d] = K[c, d, h1 + k, w1 + l].
SpectralDensity make_density(const Bundle& bundle);

/// Convenience wrapper around SpectralDensity::eval.
inline ComplexMatrix eval_F(const SpectralDensity& density, double w1,
                            double w2) {
  return density.eval(w1, w2);
}

/// Grid frequency for index j in [0, n): 2*pi*(j - floor(n/2))/n. For even n
/// this is exactly -pi + 2*pi*j/n; for every n it lies on the DFT lattice of
/// the circulant wrap, in [-pi, pi).
double grid_frequency(std::size_t n, std::size_t j);

/// DFT bin of grid index j: (j - floor(n/2)) mod n.
std::size_t grid_dft_index(std::size_t n, std::size_t j);

struct GridSamples {
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  // Indexed by point p = j1 * n + j2.
  std::vector<std::pair<double, double>> frequencies;
  std::vector<ComplexMatrix> blocks;             // B at each point
  std::vector<std::vector<double>> singular;     // min(r,s) values, nonincreasing

  std::size_t points() const noexcept { return blocks.size(); }
  std::size_t clusters() const noexcept { return std::min(rows, cols); }
  /// j-th singular value at every grid point, in point order.
  std::vector<double> cluster(std::size_t j) const;
  /// Every singular value of every point, nonincreasing.
  std::vector<double> all_values() const;
};

/// Samples F on the n x n grid and attaches per-point singular values.
/// Requires n >= max(height, width) of the symbol (kGridTooSmall). Results
/// are stored by grid index and do not depend on `threads`.
GridSamples sample_grid(const SpectralDensity& density, std::size_t n,
                        std::size_t threads = 1);

/// The diagonal blocks of a doubly block circulant operator computed from its
/// first block row: B_{i,k} = sum_{p,q} C_{p,q} exp(-2 pi i (p i + q k)/n).
/// Indexed by i * n + k. Requires a pixel-major circulant (build_C).
std::vector<ComplexMatrix> circulant_block_dft(const DenseOperator& circulant);

/// Product symbol F_M(w) ... F_2(w) F_1(w) of layers applied first to last.
class ComposedSymbol {
 public:
  explicit ComposedSymbol(std::vector<SpectralDensity> layers);

  std::size_t rows() const noexcept { return layers_.back().rows(); }
  std::size_t cols() const noexcept { return layers_.front().cols(); }
  /// Support extent of the product polynomial.
  std::size_t height() const noexcept;
  std::size_t width() const noexcept;
  const std::vector<SpectralDensity>& layers() const noexcept { return layers_; }

  ComplexMatrix eval(double w1, double w2) const;

 private:
  std::vector<SpectralDensity> layers_;
};

/// Throws kDimensionMismatch when layer i+1 does not accept layer i's output
/// channels.
ComposedSymbol compose_symbols(std::vector<SpectralDensity> layers);

GridSamples sample_grid(const ComposedSymbol& symbol, std::size_t n,
                        std::size_t threads = 1);

}  // namespace convspec
