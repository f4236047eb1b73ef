// Copyright 2026 The osclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: factor, apply, sweep, ranges, audit, verify-kernel.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "osclab/config.hpp"
#include "osclab/errors.hpp"
#include "osclab/runner.hpp"

#ifndef OSCLAB_VERSION
#define OSCLAB_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace osclab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitQuadrature = 3;
constexpr int kExitResolution = 4;
constexpr int kExitUsage = 64;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> quad_tol;
  std::string out;
};

RunConfig resolve(const Globals& g) {
  RunConfig c = g.config.empty() ? parse_config("{}", "<defaults>") : load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.threads) c.threads = *g.threads;
  if (g.quad_tol) {
    if (!(*g.quad_tol > 0.0)) throw ConfigError("--quad-tol must be positive");
    c.op.quad_tol = *g.quad_tol;
  }
  return c;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

// CSV to <out>/<name> when --out is given, otherwise to stdout.
std::vector<std::string> emit(const Globals& g, const std::string& name, const RunOutput& r) {
  if (g.out.empty()) {
    std::cout << r.csv;
    std::cerr << r.summary();
    return {};
  }
  const fs::path csv = fs::path(g.out) / name;
  const fs::path summary = fs::path(g.out) / (fs::path(name).stem().string() + "_summary.txt");
  write_file(csv, r.csv);
  write_file(summary, r.summary());
  std::cout << r.summary();
  return {csv.string(), summary.string()};
}

void write_manifest(const Globals& g, const RunConfig& c, const std::vector<std::string>& outputs,
                    const RunOutput& r) {
  if (g.out.empty()) return;
  nlohmann::json m;
  m["config_path"] = g.config;
  m["config"] = nlohmann::json::parse(c.echo);
  m["tool_version"] = OSCLAB_VERSION;
  m["timestamp"] = utc_timestamp();
  m["outputs"] = outputs;
  m["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    m["verdicts"].push_back({{"name", v.name}, {"verdict", to_string(v.verdict)}, {"detail", v.detail}});
  }
  write_file(fs::path(g.out) / "manifest.json", m.dump(2) + "\n");
}

int verdict_code(const RunOutput& r) { return r.any_fail() ? kExitFail : kExitPass; }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"osclab: degenerate and singular oscillatory integral operators"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "seed for every random start");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--quad-tol", g.quad_tol, "absolute quadrature tolerance");
  app.add_option("--out", g.out, "output directory (default: CSV on stdout)");
  app.set_version_flag("--version", OSCLAB_VERSION);

  auto* factor = app.add_subcommand("factor", "factor the mixed Hessian of a phase");
  int degree = 0;
  std::string coeffs;
  factor->add_option("--degree", degree, "degree n")->required();
  factor->add_option("--coeffs", coeffs, "a_1,...,a_{n-1}")->required();

  auto* apply = app.add_subcommand("apply", "pointwise values of Tf");
  std::string variants, xs;
  apply->add_option("--variant", variants, "comma list, e.g. T,T1,T2");
  apply->add_option("--x", xs, "comma list of x values");

  auto* sweep = app.add_subcommand("sweep", "run the experiment named in the config");

  auto* ranges = app.add_subcommand("ranges", "theorem and necessary p-ranges");
  int rn = 0;
  double rmu = 0.0;
  ranges->add_option("--n", rn, "degree")->required();
  ranges->add_option("--mu", rmu, "kernel exponent")->required();

  auto* audit = app.add_subcommand("audit", "check T = T1 + T2 and T2 = TX + TDelta + TY pointwise");

  auto* verify = app.add_subcommand("verify-kernel", "sample the kernel size and derivative conditions");
  int vsamples = 10000;
  bool with_x = false;
  verify->add_option("--samples", vsamples, "number of sample points");
  verify->add_flag("--x-condition", with_x, "also check the x-derivative condition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*factor) {
      std::vector<double> a;
      try {
        a = parse_list(coeffs);
      } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      if (a.empty()) {
        std::cerr << "error: --coeffs is empty\n";
        return kExitUsage;
      }
      try {
        const HomogeneousPhase phase(degree, a);
        std::cout << factor_hessian(phase).to_string() << '\n';
      } catch (const InvalidArgument& e) {
        std::cerr << "degenerate phase: " << e.what() << '\n';
        return kExitDegenerate;
      }
      return kExitPass;
    }
    if (*ranges) {
      try {
        std::cout << p_ranges(rn, rmu).to_string() << '\n';
      } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      return kExitPass;
    }

    RunConfig c = resolve(g);
    if (*apply) {
      if (!variants.empty()) {
        c.variants.clear();
        std::stringstream ss(variants);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (!item.empty()) c.variants.push_back(item);
        }
        for (const auto& v : c.variants) {
          try {
            (void)variant_from_string(v, c.z);
          } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
          }
        }
      }
      if (!xs.empty()) c.xs = parse_list(xs);
      const auto r = run_apply(c);
      const auto outputs = emit(g, "apply.csv", r);
      write_manifest(g, c, outputs, r);
      return kExitPass;
    }
    if (*sweep || *audit) {
      if (*audit) c.experiment = ExperimentKind::Audit;
      const auto r = run_experiment(c);
      const auto outputs = emit(g, *audit ? "audit.csv" : c.output, r);
      write_manifest(g, c, outputs, r);
      return verdict_code(r);
    }
    if (*verify) {
      const auto rep = verify_kernel_conditions(c.op.kernel, vsamples, with_x, c.seed);
      std::cout << "size_ratio=" << rep.size_ratio << " dy1_ratio=" << rep.dy1_ratio
                << " dy2_ratio=" << rep.dy2_ratio;
      if (rep.checked_x) std::cout << " dx1_ratio=" << rep.dx1_ratio << " dx2_ratio=" << rep.dx2_ratio;
      std::cout << " samples=" << rep.samples << " verdict=" << (rep.pass ? "pass" : "fail") << '\n';
      return rep.pass ? kExitPass : kExitFail;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateHessian& e) {
    std::cerr << "degenerate input: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const RootIsolationFailure& e) {
    std::cerr << "degenerate input: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const QuadratureFailure& e) {
    std::cerr << "quadrature failure: " << e.what() << '\n';
    return kExitQuadrature;
  } catch (const ResolutionInadequate& e) {
    std::cerr << "resolution inadequate: " << e.what() << '\n';
    return kExitResolution;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
