#include "convspec/operators.hpp"

#include <string>

#include "convspec/error.hpp"

namespace convspec {
namespace {

using Index = std::ptrdiff_t;

void require_unit_stride(const Bundle& bundle, std::string_view what) {
  if (bundle.stride() != 1)
    throw Error(ErrorCode::kUnsupportedStride,
                std::string(what) + " requires stride 1, got stride " +
                    std::to_string(bundle.stride()) +
                    " (use build_T_strided)");
}

Index wrap(Index v, Index n) { return ((v % n) + n) % n; }

enum class Layout { kChannelMajor, kPixelMajor };
enum class Boundary { kZero, kCircular };

DenseOperator assemble(const Bundle& b, Representation kind, Layout layout,
                       Boundary boundary) {
  const std::size_t n = b.n();
  const std::size_t r = b.c_out();
  const std::size_t s = b.c_in();
  const std::size_t pixels = n * n;

  DenseOperator op;
  op.kind = kind;
  op.geometry = {n, n, r, s};
  op.matrix = RealMatrix(r * pixels, s * pixels);

  const Index sn = static_cast<Index>(n);
  for (Index i1 = 0; i1 < sn; ++i1) {
    for (Index i2 = 0; i2 < sn; ++i2) {
      for (Index k = b.k_min(); k <= b.k_max(); ++k) {
        for (Index l = b.l_min(); l <= b.l_max(); ++l) {
          Index j1 = i1 - k;
          Index j2 = i2 - l;
          if (boundary == Boundary::kCircular) {
            j1 = wrap(j1, sn);
            j2 = wrap(j2, sn);
          } else if (j1 < 0 || j1 >= sn || j2 < 0 || j2 >= sn) {
            continue;
          }
          const std::size_t out_pix = std::size_t(i1) * n + std::size_t(i2);
          const std::size_t in_pix = std::size_t(j1) * n + std::size_t(j2);
          for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t d = 0; d < s; ++d) {
              const std::size_t row = layout == Layout::kPixelMajor
                                          ? out_pix * r + c
                                          : c * pixels + out_pix;
              const std::size_t col = layout == Layout::kPixelMajor
                                          ? in_pix * s + d
                                          : d * pixels + in_pix;
              op.matrix(row, col) = b.tap(c, d, k, l);
            }
          }
        }
      }
    }
  }
  return op;
}

}  // namespace

std::size_t strided_output_side(std::size_t n, std::size_t stride) {
  if (n == 0 || stride == 0)
    throw Error(ErrorCode::kInvalidArgument, "n and stride must be positive");
  return (n - 1) / stride + 1;
}

DenseOperator build_A(const Bundle& bundle) {
  require_unit_stride(bundle, "build_A");
  return assemble(bundle, Representation::kA, Layout::kChannelMajor,
                  Boundary::kZero);
}

DenseOperator build_T(const Bundle& bundle) {
  require_unit_stride(bundle, "build_T");
  return assemble(bundle, Representation::kT, Layout::kPixelMajor,
                  Boundary::kZero);
}

// h <= n guarantees the wrapped offsets (i - j) mod n never land on two taps.
DenseOperator build_C(const Bundle& bundle) {
  require_unit_stride(bundle, "build_C");
  return assemble(bundle, Representation::kC, Layout::kPixelMajor,
                  Boundary::kCircular);
}

DenseOperator build_CA(const Bundle& bundle) {
  require_unit_stride(bundle, "build_CA");
  return assemble(bundle, Representation::kCA, Layout::kChannelMajor,
                  Boundary::kCircular);
}

DenseOperator build_T_strided(const Bundle& b) {
  const std::size_t n = b.n();
  const std::size_t g = b.stride();
  const std::size_t m = strided_output_side(n, g);
  const std::size_t r = b.c_out();
  const std::size_t s = b.c_in();

  DenseOperator op;
  op.kind = g == 1 ? Representation::kT : Representation::kTStrided;
  op.geometry = {m, n, r, s};
  op.matrix = RealMatrix(r * m * m, s * n * n);

  const Index sn = static_cast<Index>(n);
  const Index sg = static_cast<Index>(g);
  for (Index i1 = 0; i1 < Index(m); ++i1) {
    for (Index i2 = 0; i2 < Index(m); ++i2) {
      for (Index k = b.k_min(); k <= b.k_max(); ++k) {
        const Index j1 = sg * i1 - k;
        if (j1 < 0 || j1 >= sn) continue;
        for (Index l = b.l_min(); l <= b.l_max(); ++l) {
          const Index j2 = sg * i2 - l;
          if (j2 < 0 || j2 >= sn) continue;
          const std::size_t out_pix = std::size_t(i1) * m + std::size_t(i2);
          const std::size_t in_pix = std::size_t(j1) * n + std::size_t(j2);
          for (std::size_t c = 0; c < r; ++c)
            for (std::size_t d = 0; d < s; ++d)
              op.matrix(out_pix * r + c, in_pix * s + d) = b.tap(c, d, k, l);
        }
      }
    }
  }
  return op;
}

}  // namespace convspec
