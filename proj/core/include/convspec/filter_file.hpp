#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "convspec/model.hpp"

namespace convspec {

// JSON manifest:
//   {"c_out": 2, "c_in": 3, "h": 3, "w": 3, "n": 10,
//    "pad": [h1, h2, w1, w2],     optional
//    "stride": 1,                 optional
//    "data": [...]}               or "data_file": "weights.bin"
//
// Binary sidecar: "CFL1", then c_out, c_in, h, w as u32 little-endian,
// 8 reserved bytes, then the weights as f64 little-endian, row-major.

struct FilterFile {
  ConvFilter filter;
  std::optional<PaddingSpec> pad;
  InputGeometry geometry;
};

/// Parses a manifest without validating it as a bundle. Relative data_file
/// paths resolve against the manifest's directory. Throws kParse / kIo /
/// kDimensionMismatch.
FilterFile read_manifest(const std::filesystem::path& path);
FilterFile parse_manifest(const std::string& json_text,
                          const std::filesystem::path& base_dir = {});

/// Manifest or raw binary sidecar (detected by the magic). A bare binary
/// file carries no geometry, so `n` must then be supplied by the caller.
Bundle parse_filter_file(const std::filesystem::path& path,
                         std::optional<std::size_t> n_override = std::nullopt,
                         std::optional<std::size_t> stride_override = std::nullopt);

ConvFilter read_binary(const std::filesystem::path& path);
void write_binary(const std::filesystem::path& path, const ConvFilter& filter);

/// Inline-data manifest for `filter`.
std::string manifest_json(const ConvFilter& filter, const PaddingSpec& pad,
                          const InputGeometry& geometry);

}  // namespace convspec
