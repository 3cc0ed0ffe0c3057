#pragma once

#include <cstddef>
#include <vector>

#include "convspec/matrix.hpp"
#include "convspec/model.hpp"

namespace convspec {

/// Thin SVD M = U diag(values) V^H. U is rows x k, V is cols x k with
/// k = min(rows, cols); both are empty unless vectors were requested.
template <typename T>
struct SvdResult {
  std::vector<double> values;  // nonincreasing
  Matrix<T> u;
  Matrix<T> v;
  bool has_vectors = false;
};

// Both overloads throw kNonFinite on NaN/Inf input and kNoConvergence if the
// LAPACK driver fails.
SvdResult<double> svd(const RealMatrix& m, bool want_vectors = false);
SvdResult<Complex> svd(const ComplexMatrix& m, bool want_vectors = false);

inline std::vector<double> singular_values(const RealMatrix& m) {
  return svd(m, false).values;
}
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  return svd(m, false).values;
}

/// Full spectrum of a realized operator, provenance = exact.
SingularSpectrum exact_spectrum(const DenseOperator& op);

/// Largest singular value by power iteration on M^T M from the normalized
/// all-ones vector. Stops once the extrapolated error of the estimate drops
/// below tol * estimate; throws kNoConvergence after max_iters.
double power_sigma_max(const RealMatrix& m, double tol = 1e-10,
                       std::size_t max_iters = 10000);

/// power_sigma_max with a dense SVD fallback when iteration stalls.
double spectral_norm(const RealMatrix& m, double tol = 1e-8,
                     std::size_t max_iters = 5000);

/// Gradient of sigma_max(M) with respect to M: u1 v1^T, shaped like M.
/// Throws kDegenerateTopSingularValue when sigma_1 is zero or not simple
/// (sigma_1 - sigma_2 < 1e-8 * sigma_1).
RealMatrix sigma_max_gradient(const RealMatrix& m);

}  // namespace convspec
