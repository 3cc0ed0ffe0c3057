#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "expect.hpp"
#include "json.hpp"
#include "oracles.hpp"

#include "convspec/filter_file.hpp"
#include "convspec/harness.hpp"

using namespace convspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "convspec_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string fixture(const std::string& name) {
  return std::string(CONVSPEC_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("manifest parsing") {
  const auto ff = parse_manifest(R"({"c_out":1,"c_in":1,"h":1,"w":1,"n":3,"data":[2.0]})");
  CHECK(ff.filter.weights == std::vector<double>{2.0});
  CHECK(ff.geometry.n == 3);
  CHECK(ff.geometry.stride == 1);
  CHECK_FALSE(ff.pad.has_value());

  const auto p = scratch("tap.json");
  write_text(p, R"({"c_out":1,"c_in":1,"h":1,"w":1,"n":3,"data":[2.0]})");
  const Bundle b = parse_filter_file(p);
  CHECK(b.n() == 3);
  CHECK(b.weight(0, 0, 0, 0) == 2.0);

  CHECK_THROWS_CODE(
      parse_manifest(R"({"c_out":1,"c_in":1,"h":3,"w":3,"n":4,"data":[1,1,1,1,1,1,1,1]})"),
      ErrorCode::kDimensionMismatch);
  CHECK_THROWS_CODE(parse_manifest(R"({"c_out":1,"c_in":1,"h":3,"data":[]})"),
                    ErrorCode::kParse);
  CHECK_THROWS_CODE(parse_manifest("{not json"), ErrorCode::kParse);
  CHECK_THROWS_CODE(parse_manifest(R"({"c_out":-1,"c_in":1,"h":1,"w":1,"data":[1]})"),
                    ErrorCode::kParse);
  CHECK_THROWS_CODE(parse_manifest(R"({"c_out":1,"c_in":1,"h":1,"w":1,"data":["x"]})"),
                    ErrorCode::kParse);
  CHECK_THROWS_CODE(parse_manifest(R"({"c_out":1,"c_in":1,"h":1,"w":1,"pad":[0,0],"data":[1]})"),
                    ErrorCode::kParse);
}

TEST_CASE("manifest padding, stride and validation") {
  const auto p = scratch("pad.json");
  write_text(p, R"({"c_out":1,"c_in":1,"h":2,"w":2,"n":4,"stride":2,"pad":[1,0,0,1],"data":[1,2,3,4]})");
  const Bundle b = parse_filter_file(p);
  CHECK(b.pad() == PaddingSpec{1, 0, 0, 1});
  CHECK(b.stride() == 2);
  CHECK(parse_filter_file(p, 6, 1).n() == 6);

  write_text(p, R"({"c_out":1,"c_in":1,"h":3,"w":3,"n":2,"data":[1,1,1,1,1,1,1,1,1]})");
  CHECK_THROWS_CODE(parse_filter_file(p), ErrorCode::kFilterExceedsInput);
  write_text(p, R"({"c_out":1,"c_in":1,"h":3,"w":3,"data":[1,1,1,1,1,1,1,1,1]})");
  CHECK_THROWS_CODE(parse_filter_file(p), ErrorCode::kInvalidArgument);
  CHECK(parse_filter_file(p, 5).n() == 5);
  CHECK_THROWS_CODE(parse_filter_file(scratch("missing.json")), ErrorCode::kIo);
}

TEST_CASE("binary sidecar round-trips bit-exactly") {
  std::mt19937_64 rng(81);
  std::normal_distribution<double> nd;
  ConvFilter f{3, 2, 3, 5, {}};
  for (std::size_t i = 0; i < 90; ++i) f.weights.push_back(nd(rng) * std::pow(10.0, int(i % 7) - 3));
  f.weights[5] = -0.0;
  f.weights[6] = 5e-324;
  const auto bin = scratch("w.bin");
  write_binary(bin, f);
  CHECK(fs::file_size(bin) == 32 + 90 * 8);
  const ConvFilter g = read_binary(bin);
  CHECK(g.c_out == 3);
  CHECK(g.c_in == 2);
  CHECK(g.h == 3);
  CHECK(g.w == 5);
  REQUIRE(g.weights.size() == 90);
  CHECK(std::memcmp(g.weights.data(), f.weights.data(), 90 * sizeof(double)) == 0);

  // Header layout: magic, little-endian dims, reserved zeros.
  std::ifstream in(bin, std::ios::binary);
  unsigned char h[32];
  in.read(reinterpret_cast<char*>(h), 32);
  CHECK(std::string(reinterpret_cast<char*>(h), 4) == "CFL1");
  CHECK(h[4] == 3);
  CHECK(h[8] == 2);
  CHECK(h[12] == 3);
  CHECK(h[16] == 5);
  for (int i = 20; i < 32; ++i) CHECK(h[i] == 0);

  // Raw binary given directly, and referenced from a manifest.
  CHECK(parse_filter_file(bin, 6).weight(2, 1, 2, 4) == f.weights.back());
  const auto man = scratch("w.json");
  write_text(man, R"({"c_out":3,"c_in":2,"h":3,"w":5,"n":6,"data_file":"w.bin"})");
  CHECK(parse_filter_file(man).filter().weights == f.weights);
  write_text(man, R"({"c_out":3,"c_in":2,"h":5,"w":3,"n":6,"data_file":"w.bin"})");
  CHECK_THROWS_CODE(parse_filter_file(man), ErrorCode::kDimensionMismatch);
}

TEST_CASE("binary header and payload are validated") {
  const auto bin = scratch("bad.bin");
  write_text(bin, "CFL2 and some bytes that are long enough to be a header");
  CHECK_THROWS_CODE(read_binary(bin), ErrorCode::kParse);

  write_binary(bin, ConvFilter{1, 1, 2, 2, {1, 2, 3, 4}});
  fs::resize_file(bin, 32 + 3 * 8);
  CHECK_THROWS_CODE(read_binary(bin), ErrorCode::kDimensionMismatch);
  CHECK_THROWS_CODE(write_binary(bin, ConvFilter{1, 1, 2, 2, {1}}),
                    ErrorCode::kDimensionMismatch);
}

TEST_CASE("manifest_json round-trips") {
  ConvFilter f{1, 2, 1, 3, {0.1, -0.2, 1.0 / 3.0, 4, 5, 6}};
  const auto ff = parse_manifest(manifest_json(f, {0, 0, 1, 1}, {5, 2}));
  CHECK(ff.filter.weights == f.weights);
  CHECK(*ff.pad == PaddingSpec{0, 0, 1, 1});
  CHECK(ff.geometry.n == 5);
  CHECK(ff.geometry.stride == 2);
}

TEST_CASE("cmd_run compare on a single tap reports zero errors") {
  const Bundle b = parse_filter_file(fixture("single_tap.json"));
  RunOptions o;
  o.command = "compare";
  const auto r = cmd_run(b, o);
  REQUIRE(r.errors.has_value());
  CHECK(r.errors->methods.size() == 3);
  for (const auto& m : r.errors->methods) {
    CHECK(m.overall_error == 0.0);
    CHECK(m.sigma1_error == 0.0);
  }
  CHECK(r.spectra.size() == 4);
}

TEST_CASE("cmd_run bounds on all-ones lists 9, 9, 9") {
  const Bundle b = parse_filter_file(fixture("ones_3x3.json"));
  RunOptions o;
  o.command = "bounds";
  const auto r = cmd_run(b, o);
  REQUIRE(r.bounds.has_value());
  CHECK(std::abs(r.bounds->reshape - 9) < 1e-10);
  CHECK(std::abs(r.bounds->one_inf - 9) < 1e-10);
  CHECK(std::abs(r.bounds->sum_blocks - 9) < 1e-10);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(std::abs(j["bounds"]["reshape"].get<double>() - 9) < 1e-10);
}

TEST_CASE("cmd_run compare on the stored 1x1x5x5 fixture") {
  const Bundle b = parse_filter_file(fixture("random_1x1x5x5_n10.json"));
  std::ifstream in(fixture("random_1x1x5x5_n10.json"));
  const auto meta = nlohmann::json::parse(in)["oracle"];
  RunOptions o;
  o.command = "compare";
  const auto r = cmd_run(b, o);
  // Exact spectrum against the numpy reference stored alongside the weights.
  const auto ref = meta["exact_singular_values"].get<std::vector<double>>();
  CHECK(oracle::max_rel_diff(r.errors->exact.values, ref) < 1e-12);
  const auto* ca = r.errors->find(Method::kCircular);
  const auto* qi = r.errors->find(Method::kQuantile);
  MESSAGE("circular " << ca->overall_error << "  quantile " << qi->overall_error);
  CHECK(qi->overall_error < ca->overall_error);
}

TEST_CASE("cmd_run dispatch and errors") {
  std::mt19937_64 rng(82);
  const Bundle b = oracle::random_bundle(rng, 2, 2, 3, 3, 5);
  for (std::string cmd : {"exact", "circular", "sample", "quantile"}) {
    RunOptions o;
    o.command = cmd;
    const auto r = cmd_run(b, o);
    REQUIRE(r.spectra.size() == 1);
    CHECK(r.spectra[0].first == cmd);
    CHECK(r.spectra[0].second.size() == 50);
  }
  RunOptions bad;
  bad.command = "nope";
  CHECK_THROWS_CODE(cmd_run(b, bad), ErrorCode::kInvalidArgument);

  RunOptions cap;
  cap.command = "exact";
  cap.size_cap = 10;
  CHECK_THROWS_CODE(cmd_run(b, cap), ErrorCode::kSizeCapExceeded);

  const Bundle g = oracle::random_bundle(rng, 2, 2, 3, 3, 7, 2);
  RunOptions ex;
  ex.command = "exact";
  CHECK(cmd_run(g, ex).spectra[0].second.size() == 2 * 16);
  RunOptions q;
  q.command = "quantile";
  CHECK_THROWS_CODE(cmd_run(g, q), ErrorCode::kUnsupportedStride);
}

TEST_CASE("reports echo their config and agree between JSON and CSV") {
  std::mt19937_64 rng(83);
  const Bundle b = oracle::random_bundle(rng, 2, 1, 3, 3, 4);
  RunOptions o;
  o.command = "compare";
  o.filter_path = "some/filter.json";
  o.gamma = 0.4;
  const auto r = cmd_run(b, o);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["config"]["gamma"] == 0.4);
  CHECK(j["config"]["filter"] == "some/filter.json");
  CHECK(j["bundle"]["n"] == 4);

  std::istringstream csv(to_csv(r));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "method,index,value");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    const std::string method = line.substr(0, c1);
    const std::size_t idx = std::stoul(line.substr(c1 + 1, c2 - c1 - 1));
    const double v = std::strtod(line.substr(c2 + 1).c_str(), nullptr);
    CHECK(j["spectra"][method]["values"][idx - 1].get<double>() == v);
    ++rows;
  }
  CHECK(rows == 4 * 16);

  const auto top = nlohmann::json::parse(to_json(r, 3));
  CHECK(top["spectra"]["exact"]["values"].size() == 3);
  CHECK(top["spectra"]["exact"]["count"] == 16);
}

TEST_CASE("random streams depend only on seed and trial") {
  TrialRng a(5, 3), b(5, 3), c(5, 4);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= -0.5);
    CHECK(u < 0.5);
    CHECK(std::isfinite(a.gaussian()));
  }
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("bench on a degenerate single tap reports zero errors") {
  BenchOptions o;
  o.c_out = o.c_in = o.h = o.w = 1;
  o.n = 4;
  o.trials = 1;
  const auto r = cmd_bench(o);
  REQUIRE(r.bench_summary.has_value());
  for (const auto& m : r.bench_summary->methods) {
    CHECK(m.overall.mean == 0.0);
    CHECK(m.sigma1.mean == 0.0);
    CHECK(m.overall.stddev == 0.0);
  }
  o.trials = 0;
  CHECK_THROWS_CODE(cmd_bench(o), ErrorCode::kInvalidArgument);
}

TEST_CASE("bench is bit-identical across thread counts") {
  BenchOptions o;
  o.c_out = 2;
  o.c_in = 3;
  o.n = 6;
  o.trials = 7;
  o.seed = 99;
  o.dist = Distribution::kGaussian;
  auto strip = [](std::string s) {
    auto j = nlohmann::json::parse(s);
    j.erase("seconds");
    j["config"].erase("threads");
    j["bench"].erase("exact_seconds");
    return j.dump();
  };
  o.threads = 1;
  const std::string one = strip(to_json(cmd_bench(o)));
  o.threads = 3;
  const std::string three = strip(to_json(cmd_bench(o)));
  CHECK(one == three);
  const auto j = nlohmann::json::parse(one);
  CHECK(j["seed"] == 99);
  CHECK(j["rng"].get<std::string>().find("splitmix64") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorCode::kDimensionMismatch) == 2);
  CHECK(exit_code(ErrorCode::kParse) == 2);
  CHECK(exit_code(ErrorCode::kSizeCapExceeded) == 3);
  CHECK(exit_code(ErrorCode::kNoConvergence) == 4);
  CHECK(exit_code(ErrorCode::kIo) == 1);
}
