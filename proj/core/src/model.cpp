#include "convspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "convspec/error.hpp"

namespace convspec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kPadMismatch: return "pad-mismatch";
    case ErrorCode::kFilterExceedsInput: return "filter-exceeds-input";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUnsupportedStride: return "unsupported-stride";
    case ErrorCode::kGridTooSmall: return "grid-too-small";
    case ErrorCode::kSizeCapExceeded: return "size-cap-exceeded";
    case ErrorCode::kNoConvergence: return "no-convergence";
    case ErrorCode::kDegenerateTopSingularValue:
      return "degenerate-top-singular-value";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::kA: return "A";
    case Representation::kT: return "T";
    case Representation::kC: return "C";
    case Representation::kCA: return "C(A)";
    case Representation::kTStrided: return "T^g";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kExact: return "exact";
    case Provenance::kCircular: return "circular";
    case Provenance::kUniformSampling: return "uniform-sampling";
    case Provenance::kQuantile: return "quantile";
  }
  return "?";
}

PaddingSpec default_padding(std::size_t h, std::size_t w) {
  if (h == 0 || w == 0)
    throw Error(ErrorCode::kInvalidArgument,
                "filter height and width must be positive");
  PaddingSpec pad;
  pad.h1 = (h - 1) / 2;
  pad.h2 = h - 1 - pad.h1;
  pad.w1 = (w - 1) / 2;
  pad.w2 = w - 1 - pad.w1;
  return pad;
}

Bundle validate_filter(ConvFilter filter, PaddingSpec pad,
                       InputGeometry geometry) {
  if (filter.c_out == 0 || filter.c_in == 0 || filter.h == 0 || filter.w == 0)
    throw Error(ErrorCode::kInvalidArgument,
                "c_out, c_in, h and w must all be positive");
  const std::size_t expected = filter.c_out * filter.c_in * filter.h * filter.w;
  if (filter.weights.size() != expected)
    throw Error(ErrorCode::kDimensionMismatch,
                "weights: expected " + std::to_string(expected) +
                    " values for a " + std::to_string(filter.c_out) + "x" +
                    std::to_string(filter.c_in) + "x" +
                    std::to_string(filter.h) + "x" + std::to_string(filter.w) +
                    " filter, got " + std::to_string(filter.weights.size()));
  if (pad.h1 + pad.h2 + 1 != filter.h)
    throw Error(ErrorCode::kPadMismatch,
                "pad: h1 + h2 + 1 must equal h = " + std::to_string(filter.h));
  if (pad.w1 + pad.w2 + 1 != filter.w)
    throw Error(ErrorCode::kPadMismatch,
                "pad: w1 + w2 + 1 must equal w = " + std::to_string(filter.w));
  if (geometry.n == 0)
    throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  if (geometry.stride == 0)
    throw Error(ErrorCode::kInvalidArgument, "stride must be positive");
  if (filter.h > geometry.n || filter.w > geometry.n)
    throw Error(ErrorCode::kFilterExceedsInput,
                "filter " + std::to_string(filter.h) + "x" +
                    std::to_string(filter.w) + " exceeds input side n = " +
                    std::to_string(geometry.n));
  const auto bad = std::find_if(filter.weights.begin(), filter.weights.end(),
                                [](double v) { return !std::isfinite(v); });
  if (bad != filter.weights.end())
    throw Error(ErrorCode::kNonFinite,
                "weights[" +
                    std::to_string(std::distance(filter.weights.begin(), bad)) +
                    "] is not finite");
  return Bundle(std::move(filter), pad, geometry);
}

Bundle validate_filter(ConvFilter filter, InputGeometry geometry) {
  const PaddingSpec pad = default_padding(filter.h, filter.w);
  return validate_filter(std::move(filter), pad, geometry);
}

Bundle Bundle::with_geometry(InputGeometry geometry) const {
  return validate_filter(filter_, pad_, geometry);
}

Bundle Bundle::scaled(double factor) const {
  ConvFilter f = filter_;
  for (double& v : f.weights) v *= factor;
  return validate_filter(std::move(f), pad_, geometry_);
}

SingularSpectrum make_spectrum(std::vector<double> values,
                               Provenance provenance) {
  std::sort(values.begin(), values.end(), std::greater<>());
  SingularSpectrum s;
  s.values = std::move(values);
  s.provenance = provenance;
  return s;
}

}  // namespace convspec
