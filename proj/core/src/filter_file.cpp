#include "convspec/filter_file.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "convspec/error.hpp"

namespace convspec {
namespace {

using nlohmann::json;

constexpr std::array<char, 4> kMagic = {'C', 'F', 'L', '1'};
constexpr std::size_t kHeaderBytes = 32;

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t load_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

void store_u32(unsigned char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

bool has_magic(const std::string& bytes) {
  return bytes.size() >= kMagic.size() &&
         std::equal(kMagic.begin(), kMagic.end(), bytes.begin());
}

ConvFilter decode_binary(const std::string& bytes, const std::string& name) {
  if (bytes.size() < kHeaderBytes || !has_magic(bytes))
    throw Error(ErrorCode::kParse, name + ": missing CFL1 header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  ConvFilter f;
  f.c_out = load_u32(p + 4);
  f.c_in = load_u32(p + 8);
  f.h = load_u32(p + 12);
  f.w = load_u32(p + 16);
  const std::size_t count = f.c_out * f.c_in * f.h * f.w;
  if (bytes.size() - kHeaderBytes != count * 8)
    throw Error(ErrorCode::kDimensionMismatch,
                name + ": header declares " + std::to_string(count) +
                    " weights but payload holds " +
                    std::to_string((bytes.size() - kHeaderBytes) / 8) + " (" +
                    std::to_string(bytes.size() - kHeaderBytes) + " bytes)");
  f.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    const unsigned char* q = p + kHeaderBytes + 8 * i;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(q[b]) << (8 * b);
    f.weights[i] = std::bit_cast<double>(bits);
  }
  return f;
}

std::size_t get_count(const json& j, const char* field, bool required,
                      std::size_t fallback = 0) {
  if (!j.contains(field)) {
    if (required)
      throw Error(ErrorCode::kParse, std::string("manifest: missing field '") +
                                         field + "'");
    return fallback;
  }
  const json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(ErrorCode::kParse, std::string("manifest: field '") + field +
                                       "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

FilterFile parse_manifest(const std::string& text,
                          const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "manifest: expected an object");

  FilterFile out;
  out.filter.c_out = get_count(j, "c_out", true);
  out.filter.c_in = get_count(j, "c_in", true);
  out.filter.h = get_count(j, "h", true);
  out.filter.w = get_count(j, "w", true);
  out.geometry.n = get_count(j, "n", false);
  out.geometry.stride = get_count(j, "stride", false, 1);

  if (j.contains("pad")) {
    const json& p = j.at("pad");
    if (!p.is_array() || p.size() != 4)
      throw Error(ErrorCode::kParse, "manifest: 'pad' must be [h1, h2, w1, w2]");
    for (const auto& v : p)
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw Error(ErrorCode::kParse, "manifest: 'pad' entries must be nonnegative integers");
    out.pad = PaddingSpec{p[0].get<std::size_t>(), p[1].get<std::size_t>(),
                          p[2].get<std::size_t>(), p[3].get<std::size_t>()};
  }

  const std::size_t expected =
      out.filter.c_out * out.filter.c_in * out.filter.h * out.filter.w;
  if (j.contains("data")) {
    const json& d = j.at("data");
    if (!d.is_array()) throw Error(ErrorCode::kParse, "manifest: 'data' must be an array");
    out.filter.weights.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d[i].is_number())
        throw Error(ErrorCode::kParse,
                    "manifest: data[" + std::to_string(i) + "] is not a number");
      out.filter.weights.push_back(d[i].get<double>());
    }
  } else if (j.contains("data_file")) {
    if (!j.at("data_file").is_string())
      throw Error(ErrorCode::kParse, "manifest: 'data_file' must be a string");
    std::filesystem::path bin = j.at("data_file").get<std::string>();
    if (bin.is_relative()) bin = base_dir / bin;
    ConvFilter f = read_binary(bin);
    if (f.c_out != out.filter.c_out || f.c_in != out.filter.c_in ||
        f.h != out.filter.h || f.w != out.filter.w)
      throw Error(ErrorCode::kDimensionMismatch,
                  "manifest: dims disagree with " + bin.string());
    out.filter.weights = std::move(f.weights);
  } else {
    throw Error(ErrorCode::kParse, "manifest: need 'data' or 'data_file'");
  }

  if (out.filter.weights.size() != expected)
    throw Error(ErrorCode::kDimensionMismatch,
                "manifest: 'data' has " + std::to_string(out.filter.weights.size()) +
                    " values, expected c_out*c_in*h*w = " + std::to_string(expected));
  return out;
}

FilterFile read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_all(path), path.parent_path());
}

Bundle parse_filter_file(const std::filesystem::path& path,
                         std::optional<std::size_t> n_override,
                         std::optional<std::size_t> stride_override) {
  const std::string bytes = read_all(path);
  FilterFile ff;
  if (has_magic(bytes))
    ff.filter = decode_binary(bytes, path.string());
  else
    ff = parse_manifest(bytes, path.parent_path());

  if (n_override) ff.geometry.n = *n_override;
  if (stride_override) ff.geometry.stride = *stride_override;
  if (ff.geometry.n == 0)
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + ": input size n missing (set 'n' or pass --n)");
  const PaddingSpec pad = ff.pad.value_or(default_padding(ff.filter.h, ff.filter.w));
  return validate_filter(std::move(ff.filter), pad, ff.geometry);
}

ConvFilter read_binary(const std::filesystem::path& path) {
  return decode_binary(read_all(path), path.string());
}

void write_binary(const std::filesystem::path& path, const ConvFilter& f) {
  if (f.weights.size() != f.c_out * f.c_in * f.h * f.w)
    throw Error(ErrorCode::kDimensionMismatch, "write_binary: weight count mismatch");
  std::string bytes(kHeaderBytes + 8 * f.weights.size(), '\0');
  auto* p = reinterpret_cast<unsigned char*>(bytes.data());
  std::memcpy(p, kMagic.data(), kMagic.size());
  store_u32(p + 4, static_cast<std::uint32_t>(f.c_out));
  store_u32(p + 8, static_cast<std::uint32_t>(f.c_in));
  store_u32(p + 12, static_cast<std::uint32_t>(f.h));
  store_u32(p + 16, static_cast<std::uint32_t>(f.w));
  for (std::size_t i = 0; i < f.weights.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(f.weights[i]);
    for (int b = 0; b < 8; ++b)
      p[kHeaderBytes + 8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

std::string manifest_json(const ConvFilter& f, const PaddingSpec& pad,
                          const InputGeometry& geometry) {
  json j;
  j["c_out"] = f.c_out;
  j["c_in"] = f.c_in;
  j["h"] = f.h;
  j["w"] = f.w;
  j["pad"] = {pad.h1, pad.h2, pad.w1, pad.w2};
  j["n"] = geometry.n;
  j["stride"] = geometry.stride;
  j["data"] = f.weights;
  return j.dump(2);
}

}  // namespace convspec
