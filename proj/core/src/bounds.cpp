#include "convspec/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

#include "convspec/approximation.hpp"
#include "convspec/density.hpp"
#include "convspec/error.hpp"
#include "convspec/operators.hpp"
#include "convspec/svd.hpp"

namespace convspec {
namespace {

template <typename F>
double median_seconds(std::size_t repeats, F&& fn, double& value) {
  std::vector<double> times;
  times.reserve(repeats);
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    value = fn();
    times.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace

double bound_reshape(const Bundle& b) {
  const std::size_t h = b.h(), w = b.w();
  const std::size_t co = b.c_out(), ci = b.c_in();
  RealMatrix r(h * co, w * ci);
  RealMatrix l(w * co, h * ci);
  for (std::size_t c = 0; c < co; ++c)
    for (std::size_t d = 0; d < ci; ++d)
      for (std::size_t p = 0; p < h; ++p)
        for (std::size_t q = 0; q < w; ++q) {
          const double v = b.weight(c, d, p, q);
          r(c * h + p, d * w + q) = v;
          l(c * w + q, d * h + p) = v;
        }
  const double s = std::min(spectral_norm(r), spectral_norm(l));
  return std::sqrt(double(h * w)) * s;
}

double bound_one_inf(const Bundle& b, std::size_t n_grid) {
  if (n_grid == 0) n_grid = b.n();
  const SpectralDensity f = make_density(b);
  if (n_grid < std::max(f.height(), f.width()))
    throw Error(ErrorCode::kGridTooSmall, "bound_one_inf: grid smaller than filter");
  double best = 0.0;
  std::vector<double> col(f.cols());
  for (std::size_t j1 = 0; j1 < n_grid; ++j1) {
    for (std::size_t j2 = 0; j2 < n_grid; ++j2) {
      const ComplexMatrix m =
          f.eval(grid_frequency(n_grid, j1), grid_frequency(n_grid, j2));
      std::fill(col.begin(), col.end(), 0.0);
      double row_max = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
          const double a = std::abs(m(i, j));
          row += a;
          col[j] += a;
        }
        row_max = std::max(row_max, row);
      }
      const double col_max = *std::max_element(col.begin(), col.end());
      best = std::max(best, std::sqrt(col_max * row_max));
    }
  }
  return best;
}

double bound_sum_blocks(const Bundle& b) {
  const SpectralDensity f = make_density(b);
  double total = 0.0;
  for (const auto& t : f.coefficients()) total += spectral_norm(t);
  return total;
}

BoundReport bound_report(const Bundle& b, const BoundOptions& options) {
  BoundReport rep;
  rep.n_grid = options.n_grid == 0 ? b.n() : options.n_grid;
  if (options.with_exact) {
    const std::size_t side = b.n() * b.n();
    check_size_cap(b.c_out() * side, b.c_in() * side, options.size_cap);
  }

  rep.timings.reshape = median_seconds(
      options.repeats, [&] { return bound_reshape(b); }, rep.reshape);
  rep.timings.one_inf = median_seconds(
      options.repeats, [&] { return bound_one_inf(b, rep.n_grid); }, rep.one_inf);
  rep.timings.sum_blocks = median_seconds(
      options.repeats, [&] { return bound_sum_blocks(b); }, rep.sum_blocks);

  // Largest grid singular value equals sigma_max(C) on the bundle's own grid.
  const GridSamples g = sample_grid(make_density(b), b.n());
  for (const auto& s : g.singular)
    if (!s.empty()) rep.sigma_max_circular = std::max(rep.sigma_max_circular, s.front());

  if (options.with_exact) {
    const auto values = singular_values(
        (b.stride() == 1 ? build_T(b) : build_T_strided(b)).matrix);
    rep.sigma_max_exact = values.empty() ? 0.0 : values.front();
  }
  return rep;
}

}  // namespace convspec
