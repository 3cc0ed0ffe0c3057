#include "convspec/svd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>

#include "convspec/error.hpp"

namespace convspec {
namespace {

template <typename T>
void require_finite(const Matrix<T>& m) {
  if (!all_finite(m))
    throw Error(ErrorCode::kNonFinite, "svd: matrix has non-finite entries");
}

lapack_int to_lapack(std::size_t v) { return static_cast<lapack_int>(v); }

// dgesdd/zgesdd occasionally fail on pathological inputs where the QR-based
// drivers still succeed, so fall back once before reporting.
template <typename T, typename Sdd, typename Svd>
SvdResult<T> run_lapack(const Matrix<T>& m, bool want_vectors, Sdd sdd,
                        Svd gesvd) {
  require_finite(m);
  SvdResult<T> out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t k = std::min(rows, cols);
  if (k == 0) return out;

  Matrix<T> a = m;
  out.values.assign(k, 0.0);
  Matrix<T> u, vt;
  char job = 'N';
  if (want_vectors) {
    u = Matrix<T>(rows, k);
    vt = Matrix<T>(k, cols);
    job = 'S';
  }
  T* u_ptr = want_vectors ? u.data() : nullptr;
  T* vt_ptr = want_vectors ? vt.data() : nullptr;
  // LAPACKE validates the leading dimensions even when no vectors are wanted.
  const lapack_int ldu = to_lapack(k);
  const lapack_int ldvt = to_lapack(cols);

  lapack_int info = sdd(LAPACK_ROW_MAJOR, job, to_lapack(rows),
                        to_lapack(cols), a.data(), to_lapack(cols),
                        out.values.data(), u_ptr, ldu, vt_ptr, ldvt);
  if (info != 0) {
    a = m;
    std::vector<double> superb(k);
    info = gesvd(LAPACK_ROW_MAJOR, job, job, to_lapack(rows), to_lapack(cols),
                 a.data(), to_lapack(cols), out.values.data(), u_ptr, ldu,
                 vt_ptr, ldvt, superb.data());
  }
  if (info != 0)
    throw Error(ErrorCode::kNoConvergence,
                "svd: LAPACK returned info = " + std::to_string(info));

  if (want_vectors) {
    out.u = std::move(u);
    out.v = Matrix<T>(cols, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        if constexpr (std::is_same_v<T, Complex>)
          out.v(j, i) = std::conj(vt(i, j));
        else
          out.v(j, i) = vt(i, j);
      }
    out.has_vectors = true;
  }
  return out;
}

double norm2(const std::vector<double>& x) {
  return cblas_dnrm2(static_cast<int>(x.size()), x.data(), 1);
}

}  // namespace

SvdResult<double> svd(const RealMatrix& m, bool want_vectors) {
  return run_lapack(
      m, want_vectors,
      [](int layout, char job, lapack_int r, lapack_int c, double* a,
         lapack_int lda, double* s, double* u, lapack_int ldu, double* vt,
         lapack_int ldvt) {
        return LAPACKE_dgesdd(layout, job, r, c, a, lda, s, u, ldu, vt, ldvt);
      },
      [](int layout, char ju, char jv, lapack_int r, lapack_int c, double* a,
         lapack_int lda, double* s, double* u, lapack_int ldu, double* vt,
         lapack_int ldvt, double* superb) {
        return LAPACKE_dgesvd(layout, ju, jv, r, c, a, lda, s, u, ldu, vt,
                              ldvt, superb);
      });
}

SvdResult<Complex> svd(const ComplexMatrix& m, bool want_vectors) {
  return run_lapack(
      m, want_vectors,
      [](int layout, char job, lapack_int r, lapack_int c, Complex* a,
         lapack_int lda, double* s, Complex* u, lapack_int ldu, Complex* vt,
         lapack_int ldvt) {
        return LAPACKE_zgesdd(layout, job, r, c, a, lda, s, u, ldu, vt, ldvt);
      },
      [](int layout, char ju, char jv, lapack_int r, lapack_int c, Complex* a,
         lapack_int lda, double* s, Complex* u, lapack_int ldu, Complex* vt,
         lapack_int ldvt, double* superb) {
        return LAPACKE_zgesvd(layout, ju, jv, r, c, a, lda, s, u, ldu, vt,
                              ldvt, superb);
      });
}

SingularSpectrum exact_spectrum(const DenseOperator& op) {
  return make_spectrum(svd(op.matrix, false).values, Provenance::kExact);
}

double power_sigma_max(const RealMatrix& m, double tol, std::size_t max_iters) {
  if (!(tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "power_sigma_max: tol must be > 0");
  require_finite(m);
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0.0;
  if (frobenius_norm(m) == 0.0) return 0.0;

  const int r = static_cast<int>(rows);
  const int c = static_cast<int>(cols);
  std::vector<double> v(cols, 1.0 / std::sqrt(double(cols)));
  std::vector<double> w(rows);

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    cblas_dgemv(CblasRowMajor, CblasNoTrans, r, c, 1.0, m.data(), c, x.data(),
                1, 0.0, y.data(), 1);
  };
  auto apply_t = [&](const std::vector<double>& x, std::vector<double>& y) {
    cblas_dgemv(CblasRowMajor, CblasTrans, r, c, 1.0, m.data(), c, x.data(),
                1, 0.0, y.data(), 1);
  };

  apply(v, w);
  double sigma = norm2(w);
  if (sigma == 0.0) {
    // All-ones lies in the null space; restart from the heaviest column.
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rows; ++i) acc += m(i, j) * m(i, j);
      if (acc > best_norm) {
        best_norm = acc;
        best = j;
      }
    }
    std::fill(v.begin(), v.end(), 0.0);
    v[best] = 1.0;
    apply(v, w);
    sigma = norm2(w);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  double prev_delta = std::numeric_limits<double>::infinity();
  double q_prev = 0.0;
  int settled = 0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    apply_t(w, v);
    const double z = norm2(v);
    if (z == 0.0) return sigma;
    cblas_dscal(c, 1.0 / z, v.data(), 1);
    apply(v, w);
    const double next = norm2(w);
    const double delta = std::abs(next - sigma);
    sigma = next;
    if (delta <= 8.0 * eps * sigma) return sigma;
    // Geometric convergence: the remaining error is about delta*q/(1-q).
    // Fast modes die first and make early ratios look too small, so take the
    // larger of the last two ratios and ask for three agreeing steps.
    if (std::isfinite(prev_delta) && prev_delta > 0.0) {
      const double q_now = delta / prev_delta;
      const double q = std::max(q_now, q_prev);
      q_prev = q_now;
      if (q < 1.0 && delta * q / (1.0 - q) <= 0.1 * tol * sigma) {
        if (++settled >= 3) return sigma;
      } else {
        settled = 0;
      }
    }
    prev_delta = delta;
  }
  throw Error(ErrorCode::kNoConvergence,
              "power_sigma_max: no convergence after " +
                  std::to_string(max_iters) + " iterations");
}

double spectral_norm(const RealMatrix& m, double tol, std::size_t max_iters) {
  try {
    return power_sigma_max(m, tol, max_iters);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoConvergence) throw;
  }
  const auto values = svd(m, false).values;
  return values.empty() ? 0.0 : values.front();
}

RealMatrix sigma_max_gradient(const RealMatrix& m) {
  const auto res = svd(m, true);
  if (res.values.empty() || res.values.front() <= 0.0)
    throw Error(ErrorCode::kDegenerateTopSingularValue,
                "sigma_max_gradient: sigma_1 is zero");
  const double s1 = res.values.front();
  if (res.values.size() > 1 && s1 - res.values[1] < 1e-8 * s1)
    throw Error(ErrorCode::kDegenerateTopSingularValue,
                "sigma_max_gradient: top singular value is not simple");
  RealMatrix g(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g(i, j) = res.u(i, 0) * res.v(j, 0);
  return g;
}

}  // namespace convspec
