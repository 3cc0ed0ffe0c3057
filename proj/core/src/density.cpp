#include "convspec/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <thread>

#include "convspec/error.hpp"
#include "convspec/svd.hpp"

namespace convspec {
namespace {

constexpr double kPi = std::numbers::pi;

using Evaluator = std::function<ComplexMatrix(double, double)>;

GridSamples sample_with(const Evaluator& eval, std::size_t rows,
                        std::size_t cols, std::size_t n, std::size_t threads) {
  GridSamples g;
  g.n = n;
  g.rows = rows;
  g.cols = cols;
  const std::size_t points = n * n;
  g.frequencies.resize(points);
  g.blocks.resize(points);
  g.singular.resize(points);

  auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t p = first; p < last; ++p) {
      const double w1 = grid_frequency(n, p / n);
      const double w2 = grid_frequency(n, p % n);
      g.frequencies[p] = {w1, w2};
      g.blocks[p] = eval(w1, w2);
      g.singular[p] = singular_values(g.blocks[p]);
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, points);
  if (threads == 1) {
    work(0, points);
    return g;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (points + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t first = t * chunk;
    const std::size_t last = std::min(points, first + chunk);
    if (first < last) pool.emplace_back(work, first, last);
  }
  pool.clear();
  return g;
}

void require_grid(std::size_t n, std::size_t height, std::size_t width) {
  if (n < std::max(height, width))
    throw Error(ErrorCode::kGridTooSmall,
                "grid side " + std::to_string(n) +
                    " is smaller than the symbol support " +
                    std::to_string(height) + "x" + std::to_string(width));
}

}  // namespace

SpectralDensity::SpectralDensity(std::size_t r, std::size_t s,
                                 std::ptrdiff_t k_min, std::ptrdiff_t k_max,
                                 std::ptrdiff_t l_min, std::ptrdiff_t l_max,
                                 std::vector<RealMatrix> coefficients)
    : r_(r),
      s_(s),
      k_min_(k_min),
      k_max_(k_max),
      l_min_(l_min),
      l_max_(l_max),
      coeffs_(std::move(coefficients)) {
  if (r == 0 || s == 0 || k_max < k_min || l_max < l_min)
    throw Error(ErrorCode::kInvalidArgument, "SpectralDensity: empty support");
  if (coeffs_.size() != height() * width())
    throw Error(ErrorCode::kDimensionMismatch,
                "SpectralDensity: expected " + std::to_string(height() * width()) +
                    " coefficient blocks, got " + std::to_string(coeffs_.size()));
  for (const auto& c : coeffs_) {
    if (c.rows() != r || c.cols() != s)
      throw Error(ErrorCode::kDimensionMismatch,
                  "SpectralDensity: coefficient block has wrong shape");
    if (!all_finite(c))
      throw Error(ErrorCode::kNonFinite, "SpectralDensity: non-finite coefficient");
  }
}

const RealMatrix& SpectralDensity::coefficient(std::ptrdiff_t k,
                                               std::ptrdiff_t l) const {
  if (k < k_min_ || k > k_max_ || l < l_min_ || l > l_max_)
    throw Error(ErrorCode::kInvalidArgument, "coefficient index out of support");
  return coeffs_[std::size_t(k - k_min_) * width() + std::size_t(l - l_min_)];
}

ComplexMatrix SpectralDensity::eval(double w1, double w2) const {
  ComplexMatrix out(r_, s_);
  std::size_t idx = 0;
  for (std::ptrdiff_t k = k_min_; k <= k_max_; ++k) {
    for (std::ptrdiff_t l = l_min_; l <= l_max_; ++l, ++idx) {
      const Complex phase = std::polar(1.0, double(k) * w1 + double(l) * w2);
      const RealMatrix& t = coeffs_[idx];
      for (std::size_t i = 0; i < t.size(); ++i)
        out.data()[i] += t.data()[i] * phase;
    }
  }
  return out;
}

SpectralDensity make_density(const Bundle& b) {
  std::vector<RealMatrix> coeffs;
  coeffs.reserve(b.h() * b.w());
  for (std::ptrdiff_t k = b.k_min(); k <= b.k_max(); ++k) {
    for (std::ptrdiff_t l = b.l_min(); l <= b.l_max(); ++l) {
      RealMatrix t(b.c_out(), b.c_in());
      for (std::size_t c = 0; c < b.c_out(); ++c)
        for (std::size_t d = 0; d < b.c_in(); ++d) t(c, d) = b.tap(c, d, k, l);
      coeffs.push_back(std::move(t));
    }
  }
  return SpectralDensity(b.c_out(), b.c_in(), b.k_min(), b.k_max(), b.l_min(),
                         b.l_max(), std::move(coeffs));
}

double grid_frequency(std::size_t n, std::size_t j) {
  const double shifted = double(j) - double(n / 2);
  return 2.0 * kPi * shifted / double(n);
}

std::size_t grid_dft_index(std::size_t n, std::size_t j) {
  return (j + n - n / 2) % n;
}

std::vector<double> GridSamples::cluster(std::size_t j) const {
  std::vector<double> out;
  out.reserve(singular.size());
  for (const auto& s : singular) out.push_back(s.at(j));
  return out;
}

std::vector<double> GridSamples::all_values() const {
  std::vector<double> out;
  out.reserve(singular.size() * clusters());
  for (const auto& s : singular) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

GridSamples sample_grid(const SpectralDensity& density, std::size_t n,
                        std::size_t threads) {
  require_grid(n, density.height(), density.width());
  return sample_with([&](double a, double b) { return density.eval(a, b); },
                     density.rows(), density.cols(), n, threads);
}

std::vector<ComplexMatrix> circulant_block_dft(const DenseOperator& circ) {
  if (circ.kind != Representation::kC)
    throw Error(ErrorCode::kInvalidArgument,
                "circulant_block_dft expects a build_C operator");
  const std::size_t n = circ.geometry.in_side;
  const std::size_t r = circ.geometry.block_rows;
  const std::size_t s = circ.geometry.block_cols;

  // First block row: output pixel (0, 0) against input pixel (p, q).
  std::vector<ComplexMatrix> out(n * n, ComplexMatrix(r, s));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t col0 = (p * n + q) * s;
      bool nonzero = false;
      for (std::size_t c = 0; c < r && !nonzero; ++c)
        for (std::size_t d = 0; d < s; ++d)
          if (circ.matrix(c, col0 + d) != 0.0) {
            nonzero = true;
            break;
          }
      if (!nonzero) continue;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t e = (p * i + q * k) % n;
          const Complex phase = std::polar(1.0, -2.0 * kPi * double(e) / double(n));
          ComplexMatrix& b = out[i * n + k];
          for (std::size_t c = 0; c < r; ++c)
            for (std::size_t d = 0; d < s; ++d)
              b(c, d) += circ.matrix(c, col0 + d) * phase;
        }
      }
    }
  }
  return out;
}

ComposedSymbol::ComposedSymbol(std::vector<SpectralDensity> layers)
    : layers_(std::move(layers)) {
  if (layers_.empty())
    throw Error(ErrorCode::kInvalidArgument, "compose_symbols: no layers");
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    if (layers_[i].cols() != layers_[i - 1].rows())
      throw Error(ErrorCode::kDimensionMismatch,
                  "compose_symbols: layer " + std::to_string(i) + " takes " +
                      std::to_string(layers_[i].cols()) +
                      " input channels but layer " + std::to_string(i - 1) +
                      " produces " + std::to_string(layers_[i - 1].rows()));
  }
}

std::size_t ComposedSymbol::height() const noexcept {
  std::size_t total = 1;
  for (const auto& l : layers_) total += l.height() - 1;
  return total;
}

std::size_t ComposedSymbol::width() const noexcept {
  std::size_t total = 1;
  for (const auto& l : layers_) total += l.width() - 1;
  return total;
}

ComplexMatrix ComposedSymbol::eval(double w1, double w2) const {
  ComplexMatrix acc = layers_.front().eval(w1, w2);
  for (std::size_t i = 1; i < layers_.size(); ++i)
    acc = multiply(layers_[i].eval(w1, w2), acc);
  return acc;
}

ComposedSymbol compose_symbols(std::vector<SpectralDensity> layers) {
  return ComposedSymbol(std::move(layers));
}

GridSamples sample_grid(const ComposedSymbol& symbol, std::size_t n,
                        std::size_t threads) {
  require_grid(n, symbol.height(), symbol.width());
  return sample_with([&](double a, double b) { return symbol.eval(a, b); },
                     symbol.rows(), symbol.cols(), n, threads);
}

}  // namespace convspec
