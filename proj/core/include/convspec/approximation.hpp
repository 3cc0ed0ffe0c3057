#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "convspec/density.hpp"
#include "convspec/model.hpp"

namespace convspec {

enum class InterpolationMode { kLinear, kKernel };
std::string_view to_string(InterpolationMode mode);

struct QuantileConfig {
  double gamma = 0.5;                 // shared offset, in (0, 1)
  std::vector<double> cluster_gamma;  // optional per-cluster override
  InterpolationMode mode = InterpolationMode::kLinear;
  double bandwidth = 0.0;             // kernel mode only; 0 selects Silverman
};

/// Empirical quantile functions of the singular value functions, one per
/// cluster, estimated from grid samples.
///
/// Linear mode interpolates the ascending order statistics k_1..k_N at nodes
/// i/N and holds Q = k_1 on [0, 1/N]. Kernel mode
/// inverts a Gaussian-smoothed empirical CDF. In both modes Q is
/// nondecreasing on [0, 1].
///
/// The k-th largest value of cluster j is estimated by Q_j(1 - (k - gamma_j)/N),
/// i.e. the quantile read from the top at u = (k - gamma_j)/N. With linear
/// interpolation this is gamma_j * d_k + (1 - gamma_j) * d_{k+1} for the
/// descending samples d (with d_{N+1} = d_N), so gamma_j -> 1 recovers the
/// raw grid samples and a constant cluster is reproduced exactly.
class QuantileModel {
 public:
  QuantileModel(const GridSamples& samples, QuantileConfig config);

  std::size_t clusters() const noexcept { return sorted_.size(); }
  std::size_t samples_per_cluster() const noexcept {
    return sorted_.empty() ? 0 : sorted_.front().size();
  }
  /// Ascending samples of cluster j.
  const std::vector<double>& samples(std::size_t j) const { return sorted_.at(j); }
  double gamma(std::size_t j) const { return gamma_.at(j); }
  double bandwidth(std::size_t j) const { return bandwidth_.at(j); }
  InterpolationMode mode() const noexcept { return config_.mode; }

  /// Quantile of cluster j at probability level u (clamped to [0, 1]).
  double quantile(std::size_t j, double u) const;

  /// N estimates for cluster j, nonincreasing.
  std::vector<double> estimates(std::size_t j) const;

 private:
  double linear_quantile(const std::vector<double>& x, double u) const;
  double kernel_quantile(const std::vector<double>& x, double bw, double u) const;

  QuantileConfig config_;
  std::vector<std::vector<double>> sorted_;
  std::vector<double> gamma_;
  std::vector<double> bandwidth_;
};

/// Silverman-style bandwidth 0.9 * min(sd, IQR/1.34) * N^(-1/5).
double silverman_bandwidth(const std::vector<double>& ascending);

/// Sorted singular values of the circulant wrap C (dense SVD).
SingularSpectrum circular_spectrum(const Bundle& bundle);

/// Singular values of the spectral density on the n x n grid, clustered.
SingularSpectrum uniform_sampling_spectrum(const Bundle& bundle, std::size_t n);
SingularSpectrum uniform_sampling_spectrum(const GridSamples& samples);

SingularSpectrum quantile_spectrum(const Bundle& bundle, std::size_t n,
                                   const QuantileConfig& config = {});
SingularSpectrum quantile_spectrum(const GridSamples& samples,
                                   const QuantileConfig& config = {});

/// sum_j |s_j - e_j| / sum_j |s_j| over globally sorted lists of equal length.
/// Falls back to the absolute sum when the reference is identically zero.
double overall_error(const std::vector<double>& reference,
                     const std::vector<double>& estimate);
/// |s_1 - e_1| / |s_1| (absolute when s_1 == 0).
double first_value_error(const std::vector<double>& reference,
                         const std::vector<double>& estimate);
/// max_j |s_j - e_j|.
double max_abs_deviation(const std::vector<double>& reference,
                         const std::vector<double>& estimate);

enum class Method { kExact, kCircular, kUniformSampling, kQuantile };
std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct MethodResult {
  Method method = Method::kExact;
  SingularSpectrum spectrum;
  double overall_error = 0.0;
  double sigma1_error = 0.0;
  double max_abs_deviation = 0.0;
  double seconds = 0.0;
};

struct ErrorReport {
  SingularSpectrum exact;
  double exact_seconds = 0.0;
  std::vector<MethodResult> methods;

  const MethodResult* find(Method m) const;
};

struct CompareOptions {
  std::size_t size_cap = 50'000'000;  // rows * cols of T
  QuantileConfig quantile;
  std::size_t grid_threads = 1;
};

/// Runs each method and scores it against the exact spectrum of T.
/// Throws kSizeCapExceeded when T would exceed options.size_cap entries.
ErrorReport compare_methods(const Bundle& bundle,
                            const std::vector<Method>& methods,
                            const CompareOptions& options = {});

/// Throws kSizeCapExceeded if rows * cols exceeds the cap.
void check_size_cap(std::size_t rows, std::size_t cols, std::size_t cap);

}  // namespace convspec
