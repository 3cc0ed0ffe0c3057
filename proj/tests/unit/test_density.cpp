#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "doctest.h"
#include "expect.hpp"
#include "oracles.hpp"

#include "convspec/density.hpp"
#include "convspec/operators.hpp"
#include "convspec/svd.hpp"

using namespace convspec;

namespace {

constexpr double kPi = std::numbers::pi;

Bundle ones3(std::size_t n) {
  return validate_filter(ConvFilter{1, 1, 3, 3, std::vector<double>(9, 1.0)},
                         PaddingSpec{1, 1, 1, 1}, InputGeometry{n, 1});
}

double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TEST_CASE("make_density of simple filters") {
  const Bundle tap = validate_filter(ConvFilter{1, 1, 1, 1, {-1.5}}, InputGeometry{4, 1});
  const auto f = make_density(tap);
  for (double w : {-3.0, -0.4, 0.0, 1.0, 2.9})
    CHECK(eval_F(f, w, 0.7 * w)(0, 0) == Complex(-1.5, 0.0));

  const auto g = make_density(ones3(4));
  CHECK(std::abs(eval_F(g, 0, 0)(0, 0) - 9.0) < 1e-14);
  CHECK(std::abs(eval_F(g, kPi, kPi)(0, 0) - 1.0) < 1e-14);
  for (double a : {-2.0, 0.3, 1.1})
    for (double b : {-0.7, 2.5}) {
      const double expected = (1 + 2 * std::cos(a)) * (1 + 2 * std::cos(b));
      CHECK(std::abs(eval_F(g, a, b)(0, 0) - expected) < 1e-13);
    }
}

TEST_CASE("coefficients are the padded filter taps") {
  std::mt19937_64 rng(31);
  const Bundle b = validate_filter(ConvFilter{2, 3, 2, 3, std::vector<double>(36)},
                                   PaddingSpec{0, 1, 2, 0}, InputGeometry{5, 1});
  const Bundle r = oracle::random_bundle(rng, 2, 3, 4, 3, 6);
  for (const Bundle* x : {&b, &r}) {
    const auto f = make_density(*x);
    CHECK(f.height() == x->h());
    CHECK(f.width() == x->w());
    for (long k = x->k_min(); k <= x->k_max(); ++k)
      for (long l = x->l_min(); l <= x->l_max(); ++l)
        for (std::size_t c = 0; c < x->c_out(); ++c)
          for (std::size_t d = 0; d < x->c_in(); ++d)
            CHECK(f.coefficient(k, l)(c, d) ==
                  x->weight(c, d, std::size_t(k + long(x->pad().h1)),
                            std::size_t(l + long(x->pad().w1))));
  }
}

TEST_CASE("quadrature recovers the coefficients") {
  std::mt19937_64 rng(32);
  const Bundle b = oracle::random_bundle(rng, 2, 3, 3, 5, 6);
  const auto f = make_density(b);
  const std::size_t m = 64;
  for (long k = b.k_min(); k <= b.k_max(); ++k)
    for (long l = b.l_min(); l <= b.l_max(); ++l) {
      ComplexMatrix acc(2, 3);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c) {
          const double w1 = -kPi + 2 * kPi * double(a) / double(m);
          const double w2 = -kPi + 2 * kPi * double(c) / double(m);
          const Complex phase = std::polar(1.0 / double(m * m), -(double(k) * w1 + double(l) * w2));
          const auto v = f.eval(w1, w2);
          for (std::size_t i = 0; i < v.size(); ++i) acc.data()[i] += v.data()[i] * phase;
        }
      const RealMatrix& t = f.coefficient(k, l);
      for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(acc.data()[i] - t.data()[i]) < 1e-8);
    }
}

TEST_CASE("eval_F periodicity and conjugate symmetry") {
  std::mt19937_64 rng(33);
  const auto f = make_density(oracle::random_bundle(rng, 3, 2, 3, 3, 5));
  for (double a : {-2.2, 0.1, 1.7})
    for (double b : {-0.3, 3.0}) {
      const auto v = f.eval(a, b);
      CHECK(max_entry_diff(v, f.eval(a + 2 * kPi, b)) < 1e-13);
      CHECK(max_entry_diff(v, f.eval(a, b - 2 * kPi)) < 1e-13);
      const auto m = f.eval(-a, -b);
      for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::abs(m.data()[i] - std::conj(v.data()[i])) < 1e-14);
    }
}

TEST_CASE("SpectralDensity validates its coefficients") {
  CHECK_THROWS_CODE(SpectralDensity(1, 1, 0, 1, 0, 0, {RealMatrix(1, 1)}),
                    ErrorCode::kDimensionMismatch);
  CHECK_THROWS_CODE(SpectralDensity(1, 1, 0, 0, 0, 0, {RealMatrix(2, 1)}),
                    ErrorCode::kDimensionMismatch);
  RealMatrix bad(1, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_CODE(SpectralDensity(1, 1, 0, 0, 0, 0, {bad}), ErrorCode::kNonFinite);
}

TEST_CASE("grid layout") {
  for (std::size_t n : {4u, 6u, 10u})
    for (std::size_t j = 0; j < n; ++j)
      CHECK(grid_frequency(n, j) == doctest::Approx(-kPi + 2 * kPi * double(j) / double(n)));
  // Odd n stays on the DFT lattice inside [-pi, pi).
  for (std::size_t j = 0; j < 5; ++j) {
    const double w = grid_frequency(5, j);
    CHECK(w >= -kPi);
    CHECK(w < kPi);
    const double bin = 2 * kPi * double(grid_dft_index(5, j)) / 5.0;
    CHECK(std::abs(std::remainder(w - bin, 2 * kPi)) < 1e-14);
  }
}

TEST_CASE("sample_grid of a constant symbol") {
  const Bundle tap = validate_filter(ConvFilter{1, 1, 1, 1, {-0.5}}, InputGeometry{4, 1});
  const auto g = sample_grid(make_density(tap), 4);
  CHECK(g.points() == 16);
  CHECK(g.clusters() == 1);
  for (const auto& s : g.singular) CHECK(s == std::vector<double>{0.5});
  CHECK_THROWS_CODE(sample_grid(make_density(ones3(4)), 2), ErrorCode::kGridTooSmall);
}

TEST_CASE("grid singular values equal the spectrum of C") {
  std::mt19937_64 rng(34);
  const Bundle b = oracle::random_bundle(rng, 2, 2, 3, 3, 6);
  const auto g = sample_grid(make_density(b), 6);
  CHECK(g.all_values().size() == 72);
  CHECK(oracle::max_rel_diff(g.all_values(), singular_values(build_C(b).matrix)) < 1e-8);
  for (std::size_t p = 0; p < g.points(); ++p) {
    CHECK(g.singular[p].size() == 2);
    CHECK(g.singular[p][0] >= g.singular[p][1]);
    CHECK(g.singular[p][1] >= 0.0);
  }
}

TEST_CASE("DFT of the circulant equals direct symbol evaluation") {
  std::mt19937_64 rng(35);
  for (std::size_t n : {5u, 6u}) {
    const Bundle b = oracle::random_bundle(rng, 2, 3, 3, 3, n);
    const auto g = sample_grid(make_density(b), n);
    const auto dft = circulant_block_dft(build_C(b));
    for (std::size_t j1 = 0; j1 < n; ++j1)
      for (std::size_t j2 = 0; j2 < n; ++j2) {
        const auto& direct = g.blocks[j1 * n + j2];
        const auto& via = dft[grid_dft_index(n, j1) * n + grid_dft_index(n, j2)];
        CHECK(max_entry_diff(direct, via) < 1e-10);
      }
  }
  CHECK_THROWS_CODE(circulant_block_dft(build_T(ones3(4))), ErrorCode::kInvalidArgument);
}

TEST_CASE("sample_grid is independent of the thread count") {
  std::mt19937_64 rng(36);
  const auto f = make_density(oracle::random_bundle(rng, 3, 2, 3, 3, 7));
  const auto one = sample_grid(f, 7, 1);
  for (std::size_t threads : {2u, 3u, 8u}) {
    const auto many = sample_grid(f, 7, threads);
    CHECK(many.singular == one.singular);
    CHECK(many.frequencies == one.frequencies);
  }
}

TEST_CASE("composition with the identity symbol") {
  std::mt19937_64 rng(37);
  const Bundle b = oracle::random_bundle(rng, 2, 3, 3, 3, 6);
  const SpectralDensity id(2, 2, 0, 0, 0, 0, {RealMatrix::identity(2)});
  const auto plain = sample_grid(make_density(b), 6);
  const auto composed = sample_grid(compose_symbols({make_density(b), id}), 6);
  for (std::size_t p = 0; p < plain.points(); ++p)
    CHECK(oracle::max_rel_diff(plain.singular[p], composed.singular[p]) < 1e-14);

  CHECK_THROWS_CODE(compose_symbols({make_density(b), make_density(b)}),
                    ErrorCode::kDimensionMismatch);
}

TEST_CASE("scalar product symbol is the symbol of the full convolution") {
  std::mt19937_64 rng(38);
  const Bundle a = oracle::random_bundle(rng, 1, 1, 3, 3, 6);
  const Bundle b = oracle::random_bundle(rng, 1, 1, 3, 3, 6);
  // Full 2-D convolution of the tap arrays, indexed from k_min + k_min.
  std::vector<RealMatrix> coeffs;
  for (long k = -2; k <= 2; ++k)
    for (long l = -2; l <= 2; ++l) {
      double acc = 0;
      for (long k1 = -1; k1 <= 1; ++k1)
        for (long l1 = -1; l1 <= 1; ++l1) {
          const long k2 = k - k1, l2 = l - l1;
          if (k2 < -1 || k2 > 1 || l2 < -1 || l2 > 1) continue;
          acc += a.tap(0, 0, k1, l1) * b.tap(0, 0, k2, l2);
        }
      RealMatrix t(1, 1);
      t(0, 0) = acc;
      coeffs.push_back(t);
    }
  const SpectralDensity full(1, 1, -2, 2, -2, 2, coeffs);
  const auto prod = compose_symbols({make_density(a), make_density(b)});
  CHECK(prod.height() == 5);
  CHECK(prod.width() == 5);
  for (double w1 : {-3.0, -1.0, 0.2, 2.2})
    for (double w2 : {-2.5, 0.0, 1.4})
      CHECK(std::abs(prod.eval(w1, w2)(0, 0) - full.eval(w1, w2)(0, 0)) < 1e-12);
}

TEST_CASE("composed grid spectrum approaches the product of Toeplitz matrices") {
  std::mt19937_64 rng(39);
  const Bundle a0 = oracle::random_bundle(rng, 1, 1, 3, 3, 10);
  const Bundle b0 = oracle::random_bundle(rng, 1, 1, 3, 3, 10);
  double prev = 0;
  for (std::size_t n : {10u, 20u}) {
    const Bundle a = a0.with_geometry({n, 1}), b = b0.with_geometry({n, 1});
    const auto exact = singular_values(multiply(build_T(b).matrix, build_T(a).matrix));
    const auto grid =
        sample_grid(compose_symbols({make_density(a), make_density(b)}), n).all_values();
    REQUIRE(exact.size() == grid.size());
    double mae = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) mae += std::abs(exact[i] - grid[i]);
    mae /= double(exact.size());
    if (n == 20u) CHECK(mae < prev);
    prev = mae;
  }
}

TEST_CASE("Parseval identity of the symbol") {
  std::mt19937_64 rng(40);
  for (int t = 0; t < 5; ++t) {
    const Bundle b = oracle::random_bundle(rng, 2, 3, 3, 3, 6);
    const auto f = make_density(b);
    double coeff = 0;
    for (const auto& c : f.coefficients())
      for (std::size_t i = 0; i < c.size(); ++i) coeff += c.data()[i] * c.data()[i];
    const auto g = sample_grid(f, 6);
    double avg = 0;
    for (double v : g.all_values()) avg += v * v;
    avg /= double(g.points());
    CHECK(std::abs(avg - coeff) <= 1e-10 * coeff);
  }
}

TEST_CASE("grid sample values are sorted per point and clusters partition them") {
  std::mt19937_64 rng(41);
  const auto g = sample_grid(make_density(oracle::random_bundle(rng, 3, 2, 3, 3, 5)), 5);
  std::vector<double> merged;
  for (std::size_t j = 0; j < g.clusters(); ++j) {
    const auto c = g.cluster(j);
    CHECK(c.size() == 25);
    merged.insert(merged.end(), c.begin(), c.end());
  }
  CHECK(sorted_desc(merged) == g.all_values());
}
