#include "convspec/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace convspec {
namespace {

using nlohmann::ordered_json;

std::vector<double> head(const std::vector<double>& v, std::size_t top_k) {
  if (top_k == 0 || top_k >= v.size()) return v;
  return {v.begin(), v.begin() + std::ptrdiff_t(top_k)};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json metric(const MetricSummary& m) {
  return {{"mean", m.mean}, {"stddev", m.stddev}};
}

ordered_json run_config(const RunOptions& o) {
  ordered_json j;
  j["command"] = o.command;
  j["filter"] = o.filter_path;
  j["n"] = o.n ? ordered_json(*o.n) : ordered_json(nullptr);
  j["stride"] = o.stride ? ordered_json(*o.stride) : ordered_json(nullptr);
  j["gamma"] = o.gamma;
  j["interp"] = to_string(o.interp);
  j["grid"] = o.grid;
  j["with_exact"] = o.with_exact;
  j["top_k"] = o.top_k;
  j["size_cap"] = o.size_cap;
  j["threads"] = o.threads;
  return j;
}

ordered_json bench_config(const BenchOptions& o) {
  ordered_json j;
  j["command"] = "bench";
  j["dist"] = to_string(o.dist);
  j["shape"] = {o.c_out, o.c_in, o.h, o.w};
  j["n"] = o.n;
  j["trials"] = o.trials;
  j["seed"] = o.seed;
  j["gamma"] = o.gamma;
  j["interp"] = to_string(o.interp);
  j["size_cap"] = o.size_cap;
  j["threads"] = o.threads;
  return j;
}

}  // namespace

std::string_view to_string(Distribution d) {
  return d == Distribution::kUniform ? "uniform" : "gaussian";
}

std::optional<Distribution> parse_distribution(std::string_view name) {
  if (name == "uniform") return Distribution::kUniform;
  if (name == "gaussian") return Distribution::kGaussian;
  return std::nullopt;
}

const BenchMethodSummary* BenchSummary::find(Method m) const {
  for (const auto& s : methods)
    if (s.method == m) return &s;
  return nullptr;
}

BundleEcho echo(const Bundle& b) {
  return {b.c_out(), b.c_in(), b.h(), b.w(), b.pad(), b.geometry()};
}

std::string rng_description() {
  return "mt19937_64 per trial, seeded with splitmix64(seed + trial); "
         "uniform = (x >> 11) * 2^-53 - 0.5; gaussian = Box-Muller on two "
         "uniforms (x >> 11) * 2^-53, cosine branch; weights drawn in "
         "row-major (c_out, c_in, h, w) order";
}

std::string to_json(const RunReport& r, std::size_t top_k) {
  ordered_json j;
  j["tool"] = "conv-spectra";
  j["command"] = r.command;
  if (r.run) j["config"] = run_config(*r.run);
  if (r.bench) {
    j["config"] = bench_config(*r.bench);
    j["seed"] = r.bench->seed;
    j["rng"] = rng_description();
  }
  if (r.bundle) {
    const auto& b = *r.bundle;
    j["bundle"] = {{"c_out", b.c_out},
                   {"c_in", b.c_in},
                   {"h", b.h},
                   {"w", b.w},
                   {"pad", {b.pad.h1, b.pad.h2, b.pad.w1, b.pad.w2}},
                   {"n", b.geometry.n},
                   {"stride", b.geometry.stride}};
  }
  if (!r.spectra.empty()) {
    ordered_json s = ordered_json::object();
    for (const auto& [name, spec] : r.spectra)
      s[name] = {{"provenance", to_string(spec.provenance)},
                 {"count", spec.values.size()},
                 {"values", head(spec.values, top_k)}};
    j["spectra"] = s;
  }
  if (r.errors) {
    ordered_json e;
    e["exact_seconds"] = r.errors->exact_seconds;
    e["methods"] = ordered_json::array();
    for (const auto& m : r.errors->methods)
      e["methods"].push_back({{"method", to_string(m.method)},
                              {"overall_error", m.overall_error},
                              {"sigma1_error", m.sigma1_error},
                              {"max_abs_deviation", m.max_abs_deviation},
                              {"seconds", m.seconds}});
    j["errors"] = e;
  }
  if (r.bounds) {
    const auto& b = *r.bounds;
    ordered_json e;
    e["reshape"] = b.reshape;
    e["one_inf"] = b.one_inf;
    e["sum_blocks"] = b.sum_blocks;
    e["sigma_max_circular"] = b.sigma_max_circular;
    e["sigma_max_exact"] =
        b.sigma_max_exact ? ordered_json(*b.sigma_max_exact) : ordered_json(nullptr);
    e["ratio_reshape"] = b.ratio_reshape();
    e["ratio_one_inf"] = b.ratio_one_inf();
    e["ratio_sum_blocks"] = b.ratio_sum_blocks();
    e["n_grid"] = b.n_grid;
    e["seconds"] = {{"reshape", b.timings.reshape},
                    {"one_inf", b.timings.one_inf},
                    {"sum_blocks", b.timings.sum_blocks}};
    j["bounds"] = e;
  }
  if (r.bench_summary) {
    ordered_json e;
    e["trials"] = r.bench_summary->trials;
    e["exact_seconds"] = metric(r.bench_summary->exact_seconds);
    e["methods"] = ordered_json::array();
    for (const auto& m : r.bench_summary->methods)
      e["methods"].push_back({{"method", to_string(m.method)},
                              {"overall_error", metric(m.overall)},
                              {"sigma1_error", metric(m.sigma1)},
                              {"overall_per_trial", m.overall_per_trial},
                              {"sigma1_per_trial", m.sigma1_per_trial}});
    j["bench"] = e;
  }
  j["seconds"] = r.seconds;
  return j.dump(2) + "\n";
}

std::string to_csv(const RunReport& r, std::size_t top_k) {
  std::ostringstream out;
  if (!r.spectra.empty()) {
    out << "method,index,value\n";
    for (const auto& [name, spec] : r.spectra) {
      const auto v = head(spec.values, top_k);
      for (std::size_t i = 0; i < v.size(); ++i)
        out << name << ',' << i + 1 << ',' << num(v[i]) << '\n';
    }
  }
  if (r.bounds) {
    const auto& b = *r.bounds;
    out << "bound,value,ratio,seconds\n";
    out << "reshape," << num(b.reshape) << ',' << num(b.ratio_reshape()) << ','
        << num(b.timings.reshape) << '\n';
    out << "one_inf," << num(b.one_inf) << ',' << num(b.ratio_one_inf()) << ','
        << num(b.timings.one_inf) << '\n';
    out << "sum_blocks," << num(b.sum_blocks) << ',' << num(b.ratio_sum_blocks()) << ','
        << num(b.timings.sum_blocks) << '\n';
    out << "sigma_max_circular," << num(b.sigma_max_circular) << ",1,\n";
    if (b.sigma_max_exact)
      out << "sigma_max_exact," << num(*b.sigma_max_exact) << ','
          << num(*b.sigma_max_exact / b.sigma_max_circular) << ",\n";
  }
  if (r.bench_summary) {
    out << "method,metric,mean,stddev\n";
    for (const auto& m : r.bench_summary->methods) {
      out << to_string(m.method) << ",overall_error," << num(m.overall.mean)
          << ',' << num(m.overall.stddev) << '\n';
      out << to_string(m.method) << ",sigma1_error," << num(m.sigma1.mean)
          << ',' << num(m.sigma1.stddev) << '\n';
    }
  }
  return out.str();
}

}  // namespace convspec
