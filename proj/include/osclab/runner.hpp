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

#ifndef OSCLAB_RUNNER_HPP
#define OSCLAB_RUNNER_HPP

#include <string>
#include <vector>

#include "osclab/config.hpp"

namespace osclab {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct VerdictLine {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;  // "slope=-0.113±0.004, expected -0.125"
};

struct RunOutput {
  std::string csv;
  std::vector<VerdictLine> verdicts;

  bool any_fail() const;
  /// One line per verdict: "<name>: <detail>, <verdict>".
  std::string summary() const;
};

/// Runs the experiment named in the config. CSV numbers use a fixed
/// %.10e format so that equal inputs give byte-identical output.
RunOutput run_experiment(const RunConfig& cfg);

/// Rows (x, variant, re, im, err) of the pointwise application of every
/// configured variant to cfg.f at cfg.xs and cfg.op.lambda. The lambda of
/// the application is the first entry of cfg.lambdas.
RunOutput run_apply(const RunConfig& cfg);

/// Formats a double for CSV output.
std::string csv_number(double v);

}  // namespace osclab

#endif
