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

#include <doctest.h>

#include <string>

#include "osclab/config.hpp"
#include "osclab/errors.hpp"
#include "osclab/runner.hpp"

using namespace osclab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty document gives the defaults") {
  const auto c = parse_config("{}");
  CHECK(c.experiment == ExperimentKind::Decay);
  CHECK(c.op.phase.degree() == 4);
  CHECK(c.op.kernel.mu() == 0.5);
  CHECK(c.variants == std::vector<std::string>{"T"});
  CHECK(c.ps == std::vector<double>{2.0});
  CHECK(c.lambdas.size() == 9);
  CHECK(c.rule == DiagonalRule::ZetaCorrected);
  CHECK(c.seed == 1);
}

TEST_CASE("field forms") {
  const auto c = parse_config(R"({
    "experiment": "damped",
    "variant": "T,T1 , T2",
    "p": [2, 3],
    "z": [0.5, 1],
    "region": "X",
    "lambda": [64, 128],
    "kernel": {"family": "modulated", "mu": 0.3, "E": 2, "g": "cos_sum"},
    "grid": {"rule": "excise", "min_size": 256},
    "f": [{"indicator": [0, 0.2]}, {"bump": [0.1, 0.05], "coef": [0, 2]}],
    "x": {"start": 0, "stop": 0.4, "count": 5},
    "seed": 9
  })");
  CHECK(c.experiment == ExperimentKind::Damped);
  CHECK(c.variants == std::vector<std::string>{"T", "T1", "T2"});
  CHECK(c.ps == std::vector<double>{2.0, 3.0});
  CHECK(c.z == std::complex<double>(0.5, 1.0));
  CHECK(c.region == Region::X);
  CHECK(c.lambdas == std::vector<double>{64.0, 128.0});
  CHECK_FALSE(c.op.kernel.is_pure_power());
  CHECK(c.op.kernel.bound() == 2.0);
  CHECK(c.rule == DiagonalRule::Excise);
  CHECK(c.grid.min_size == 256);
  CHECK(c.f(0.1) == std::complex<double>(1.0, 2.0));
  REQUIRE(c.xs.size() == 5);
  CHECK(c.xs[4] == doctest::Approx(0.4));
  CHECK(c.seed == 9);
}

TEST_CASE("syntax errors carry line and column") {
  const auto e = error_of("{\n  \"seed\": 1\n  \"p\": 2\n}");
  CHECK(e.rfind("cfg.json:3:", 0) == 0);
}

TEST_CASE("field errors name the field") {
  CHECK(error_of(R"({"kernel": {"mu": "half"}})").find("field 'kernel.mu'") != std::string::npos);
  CHECK(error_of(R"({"seeed": 1})").find("field 'seeed'") != std::string::npos);
  CHECK(error_of(R"({"grid": {"size": 1.5}})").find("field 'grid.size'") != std::string::npos);
  CHECK(error_of(R"({"experiment": "fly"})").find("field 'experiment'") != std::string::npos);
  CHECK(error_of(R"({"kernel": {"mu": 1.5}})").find("kernel") != std::string::npos);
  CHECK(error_of(R"({"lambda": [64, -1]})").find("lambda") != std::string::npos);
}

TEST_CASE("degenerate phases are reported separately") {
  CHECK_THROWS_AS(parse_config(R"({"phase": {"degree": 4, "coeffs": [0, 1, 1]}})"), DegenerateHessian);
}

TEST_CASE("echo round trip") {
  const auto a = parse_config(R"({"experiment": "schur", "variant": "T1", "seed": 3})");
  const auto b = parse_config(a.echo);
  CHECK(a.echo == b.echo);
  CHECK(a.echo.find("\"experiment\": \"schur\"") != std::string::npos);
}

TEST_CASE("identical configs give identical CSV") {
  const std::string text = R"({"experiment": "schur", "variant": "T1", "lambda": [64, 128, 256, 512],
                              "grid": {"min_size": 256, "max_size": 256}, "seed": 5})";
  const auto a = run_experiment(parse_config(text));
  const auto b = run_experiment(parse_config(text));
  CHECK(a.csv == b.csv);
  CHECK(a.csv.rfind("lambda,variant,row_sup,col_sup\n", 0) == 0);
  CHECK(a.verdicts.size() == 2);
}

TEST_CASE("apply rows for the zero function") {
  const auto c = parse_config(R"({"f": {"zero": true}, "lambda": [64], "variant": "T,T1,T2", "x": [0, 0.1]})");
  const auto r = run_apply(c);
  const std::string zero_row_tail = "0.0000000000e+00,0.0000000000e+00,0.0000000000e+00\n";
  std::size_t rows = 0, pos = r.csv.find('\n') + 1;
  while (pos < r.csv.size()) {
    const auto end = r.csv.find('\n', pos);
    const auto line = r.csv.substr(pos, end - pos + 1);
    CHECK(line.size() >= zero_row_tail.size());
    CHECK(line.compare(line.size() - zero_row_tail.size(), zero_row_tail.size(), zero_row_tail) == 0);
    ++rows;
    pos = end + 1;
  }
  CHECK(rows == 6);
}

}
