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

#ifndef OSCLAB_CONFIG_HPP
#define OSCLAB_CONFIG_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osclab/experiments.hpp"

namespace osclab {

enum class ExperimentKind { Decay, Schur, Damped, Endpoint, Counterexample, Audit };

std::string to_string(ExperimentKind k);

/// A parsed experiment document. Every field has a default, so "{}" is a
/// valid config describing the n=4, mu=1/2 L^2 decay sweep.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::Decay;
  OperatorConfig op{HomogeneousPhase(4, {1.0, 0.0, 1.0}), SingularKernel::pure_power(0.5, 1.0)};
  std::vector<std::string> variants{"T"};
  std::vector<double> ps{2.0};
  std::complex<double> z{0.5, 0.0};
  Region region = Region::Y;
  std::vector<double> lambdas = LambdaSweep{}.values();
  GridPolicy grid;
  DiagonalRule rule = DiagonalRule::ZetaCorrected;
  int restarts = 4;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  TestFunction f = TestFunction::indicator(0.25, 0.5);
  std::vector<double> xs;
  int samples = 50;      // counterexample samples in [0, 1/(100 lambda)]
  bool swapped = false;  // counterexample adjoint run
  // verdict thresholds; negative means "use the experiment default"
  double slope_tolerance = -1.0;
  double growth_limit = 2.0;
  std::string output = "results.csv";

  /// Resolved document, pretty-printed JSON with sorted keys.
  std::string echo;

  ExperimentSettings settings() const;
};

/// Throws ConfigError with "<source>:<line>:<column>: ..." for malformed
/// text and "<source>: field '<path>': ..." for bad values.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace osclab

#endif
