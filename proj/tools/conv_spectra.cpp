// conv-spectra: singular values and spectral-norm bounds of conv layers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "convspec/filter_file.hpp"
#include "convspec/harness.hpp"

namespace {

// "8x8x3x3" -> c_out, c_in, h, w
bool parse_shape(const std::string& s, convspec::BenchOptions& o) {
  std::vector<std::size_t> dims;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      return false;
    dims.push_back(std::stoul(part));
  }
  if (dims.size() != 4) return false;
  o.c_out = dims[0];
  o.c_in = dims[1];
  o.h = dims[2];
  o.w = dims[3];
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and approximate singular values of multi-channel 2-D convolutions"};
  app.name("conv-spectra");

  std::string command;
  std::string filter_path;
  std::optional<std::size_t> n, stride;
  double gamma = 0.5;
  std::string interp = "linear";
  std::size_t grid = 0;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string dist = "uniform";
  std::string shape = "8x8x3x3";
  std::size_t top_k = 0;
  std::string out_path;
  std::string format = "json";
  std::size_t size_cap = 50'000'000;
  std::size_t threads = 1;
  bool with_exact = false;

  app.add_option("command", command, "exact|circular|sample|quantile|bounds|compare|bench")
      ->required()
      ->check(CLI::IsMember(
          {"exact", "circular", "sample", "quantile", "bounds", "compare", "bench"}));
  app.add_option("--filter", filter_path, "JSON manifest or CFL1 binary");
  app.add_option("--n", n, "input side (overrides the manifest)");
  app.add_option("--stride", stride, "stride g (overrides the manifest)");
  app.add_option("--gamma", gamma, "quantile offset in (0, 1)")->capture_default_str();
  app.add_option("--interp", interp, "quantile interpolation")
      ->check(CLI::IsMember({"linear", "kernel"}))
      ->capture_default_str();
  app.add_option("--grid", grid, "grid side for the one/inf bound (0 = n)");
  app.add_flag("--with-exact", with_exact, "bounds: also compute sigma_max(T)");
  app.add_option("--trials", trials, "bench trials")->capture_default_str();
  app.add_option("--seed", seed, "bench seed")->capture_default_str();
  app.add_option("--dist", dist, "bench weight distribution")
      ->check(CLI::IsMember({"uniform", "gaussian"}))
      ->capture_default_str();
  app.add_option("--shape", shape, "bench filter shape c_outxc_inxhxw")->capture_default_str();
  app.add_option("--top-k", top_k, "truncate spectra (0 = all)");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--size-cap", size_cap, "max entries of a dense operator")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    convspec::RunReport report;
    if (command == "bench") {
      convspec::BenchOptions o;
      if (!parse_shape(shape, o)) {
        std::cerr << "conv-spectra: --shape expects c_outxc_inxhxw, got '" << shape << "'\n";
        return 2;
      }
      o.dist = *convspec::parse_distribution(dist);
      o.n = n.value_or(10);
      o.trials = trials;
      o.seed = seed;
      o.threads = threads;
      o.gamma = gamma;
      o.interp = interp == "kernel" ? convspec::InterpolationMode::kKernel
                                    : convspec::InterpolationMode::kLinear;
      o.size_cap = size_cap;
      report = convspec::cmd_bench(o);
    } else {
      if (filter_path.empty()) {
        std::cerr << "conv-spectra: " << command << " needs --filter\n";
        return 2;
      }
      convspec::RunOptions o;
      o.command = command;
      o.filter_path = filter_path;
      o.n = n;
      o.stride = stride;
      o.gamma = gamma;
      o.interp = interp == "kernel" ? convspec::InterpolationMode::kKernel
                                    : convspec::InterpolationMode::kLinear;
      o.grid = grid;
      o.with_exact = with_exact;
      o.top_k = top_k;
      o.size_cap = size_cap;
      o.threads = threads;
      const convspec::Bundle b = convspec::parse_filter_file(filter_path, n, stride);
      report = convspec::cmd_run(b, o);
    }

    const std::string text = format == "csv" ? convspec::to_csv(report, top_k)
                                             : convspec::to_json(report, top_k);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out || !(out << text)) {
        std::cerr << "conv-spectra: cannot write " << out_path << "\n";
        return 1;
      }
    }
  } catch (const convspec::Error& e) {
    std::cerr << "conv-spectra: " << convspec::to_string(e.code()) << ": "
              << e.what() << "\n";
    return convspec::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "conv-spectra: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
