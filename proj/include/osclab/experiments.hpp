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

#ifndef OSCLAB_EXPERIMENTS_HPP
#define OSCLAB_EXPERIMENTS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osclab/norms.hpp"
#include "osclab/operator.hpp"

namespace osclab {

/// Least-squares line through (log2 lambda, log2 norm).
struct DecayFit {
  std::vector<double> lambdas;
  std::vector<double> norms;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS in log2 units
  double slope_stderr = 0.0;
};

/// Throws InvalidArgument with fewer than 4 samples, non-increasing or
/// non-geometric lambdas, or non-positive norms.
DecayFit fit_loglog(const std::vector<double>& lambdas, const std::vector<double>& norms);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

struct RangeReport {
  int n = 0;
  double mu = 0.0;
  Interval theorem_range;    // [(n-2mu)/(n-1-mu), (n-2mu)/(1-mu)]
  Interval necessary_range;  // [n/(n-1+mu), n/(1-mu)]
  Interval lower_gap;        // [necessary lo, theorem lo]
  Interval upper_gap;        // [theorem hi, necessary hi]

  /// "[1.200, 6.000] ⊂ [1.143, 8.000]"
  std::string to_string() const;
};

/// Throws InvalidArgument unless n >= 3 and 0 < mu < 1.
RangeReport p_ranges(int n, double mu);

/// start, start*ratio, ..., count values.
struct LambdaSweep {
  double start = 32.0;
  double ratio = 2.0;
  int count = 9;

  std::vector<double> values() const;
};

/// Uniform grid size as a function of lambda: enough points per wavelength
/// of the fastest y-oscillation, rounded up to a multiple of `align` and
/// clamped to [min_size, max_size].
struct GridPolicy {
  double points_per_wave = 4.0;
  int min_size = 512;
  int max_size = 4096;
  int align = 256;

  int size_for(const HomogeneousPhase& phase, double lambda, double half_width) const;
  /// Largest node spacing allowed at lambda (used by graded grids).
  double spacing_for(const HomogeneousPhase& phase, double lambda, double half_width) const;
};

/// Shared knobs of every experiment. `base` supplies phase, kernel and
/// quadrature settings; lambda is overwritten per sample.
struct ExperimentSettings {
  OperatorConfig base;
  GridPolicy grid;
  DiagonalRule rule = DiagonalRule::ZetaCorrected;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  int restarts = 4;
  // doubling check on opnorm2 at lambda <= resolution_lambda_max
  bool resolution_check = true;
  double resolution_lambda_max = 1024.0;
  double resolution_tol = 0.05;
  int schur_samples = 64;
};

/// Deterministic per-lambda seed.
std::uint64_t lambda_seed(std::uint64_t seed, double lambda);

/// The family used for designed starts and endpoint checks: bumps
/// supported on +-h[2^{-j}, 2^{-j+1}], j = 1..scales, and the indicators
/// of +-[h/2, h].
struct NamedFunction {
  std::string name;
  TestFunction f;
};
std::vector<NamedFunction> dyadic_test_family(double half_width, int scales = 9);

/// One CSV row of a norm sweep.
struct SweepRow {
  double lambda = 0.0;
  std::string variant;
  double p = 2.0;
  double lower_norm = 0.0;
  double schur_upper = 0.0;
  int grid_size = 0;
  double error_budget = 0.0;
  bool bracket_ok = true;  // lower_norm <= schur_upper (up to the error budget)
};

struct DecayReport {
  std::vector<SweepRow> rows;
  DecayFit lower_fit;
  std::optional<DecayFit> upper_fit;
  double expected_slope = 0.0;
  bool brackets_ok = true;
};

/// Expected decay exponent: -(1-mu)/n for the undamped variants,
/// mu/n - 1/2 for damped ones.
double expected_slope(const OperatorConfig& cfg, const Variant& v);

/// Norm of the discretized variant at each lambda: opnorm2 for p = 2,
/// otherwise the nonlinear power method lower bound; plus the Schur upper
/// bound. Throws ResolutionInadequate when the doubling check fails.
DecayReport decay_fit(const ExperimentSettings& s, const Variant& v, double p, const std::vector<double>& lambdas);

struct SchurRow {
  double lambda = 0.0;
  double row_sup = 0.0;
  double col_sup = 0.0;
};

struct SchurDecayReport {
  std::vector<SchurRow> rows;
  DecayFit row_fit;
  DecayFit col_fit;
  double expected_slope = 0.0;
};

SchurDecayReport schur_decay(const ExperimentSettings& s, const Variant& v, const std::vector<double>& lambdas);

struct DampedReport {
  DecayReport decay;
  std::complex<double> z;
  Region region = Region::Y;
  // ||T^z|| / (lambda^{mu/n-1/2} log2 lambda)
  std::vector<double> log_normalized;
  // max over i < j of log_normalized[j] / log_normalized[i]
  double log_growth = 0.0;
};

/// Throws InvalidArgument unless n >= 3, region != Delta.
DampedReport damped_l2_sweep(const ExperimentSettings& s, Region region, std::complex<double> z,
                             const std::vector<double>& lambdas);

struct EndpointRow {
  double lambda = 0.0;
  double value = 0.0;  // max over the family of the L^1 ratio (Y) or weak-L^1 ratio (X)
  std::string argmax;
  int grid_size = 0;
};

struct EndpointReport {
  Region region = Region::Y;
  std::complex<double> z;
  std::vector<EndpointRow> rows;
  // max over i < j of value[j] / value[i]
  double growth = 0.0;
};

/// sup_t t |{|g| > t}| for grid values with weights.
double weak_l1(const Eigen::VectorXcd& values, std::span<const double> weights);

/// Damped operator with z = -(1-mu)/(n-2) on a graded grid; measures the
/// L^1 (region Y) or weak-L^1 (region X) ratio over dyadic_test_family.
EndpointReport endpoint_l1_check(const ExperimentSettings& s, Region region, const std::vector<double>& lambdas);

struct CounterexampleRow {
  double lambda = 0.0;
  double min_abs = 0.0;        // min over samples in [0, 1/(100 lambda)] of |Tf(x)|
  double implied_lower = 0.0;  // (1/10) (1/(100 lambda))^{1/p}
  // ||Tf||_{L^p[0, 1/(100 lambda)]} from the samples: a lower bound for ||Tf||_p
  double measured_norm = 0.0;
  double full_norm = 0.0;   // ||Tf||_p over the amplitude box on a graded grid
  double normalized = 0.0;  // measured_norm * lambda^{(1-mu)/n}
};

struct CounterexampleReport {
  int n = 0;
  double mu = 0.0;
  double p = 0.0;
  bool swapped = false;
  std::vector<CounterexampleRow> rows;
  DecayFit norm_fit;
  // normalized.back() / normalized.front()
  double growth = 0.0;
};

/// S = x^{n-1}y + xy^{n-1}, K = |x-y|^{-mu}, f = indicator of [h/2, h].
/// With swapped set, the adjoint is applied and the small interval plays
/// the role of the output variable, probing the lower end of the range.
/// `samples` points are taken in [0, 1/(100 lambda)].
CounterexampleReport counterexample(const ExperimentSettings& s, int n, double mu, double p,
                                    const std::vector<double>& lambdas, bool swapped = false, int samples = 50);

struct AuditRow {
  double x = 0.0;
  std::complex<double> t, t1, t2, tx, tdelta, ty;
  double split_error = 0.0;  // |Tf - T1f - T2f|
  double group_error = 0.0;  // |T2f - (TX + TDelta + TY)f|
  double budget = 0.0;       // truncation budget at x
};

struct AuditReport {
  std::vector<AuditRow> rows;
  double max_split_error = 0.0;
  double max_group_error = 0.0;
  double max_budget = 0.0;
  double tolerance = 0.0;  // 5 quad_tol
  bool pass = false;
};

AuditReport decomposition_audit(const OperatorConfig& cfg, const TestFunction& f, const std::vector<double>& xs,
                                unsigned threads = 1);

/// max_{i<j} v[j]/v[i]; 0 for fewer than two values.
double max_forward_ratio(const std::vector<double>& v);

}  // namespace osclab

#endif
