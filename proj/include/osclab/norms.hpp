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

#ifndef OSCLAB_NORMS_HPP
#define OSCLAB_NORMS_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "osclab/operator.hpp"

namespace osclab {

/// Quadrature nodes and positive weights for the x (output) and y (input)
/// variables, plus the exponent p of the norm being measured.
struct GridSpec {
  std::vector<double> x_nodes;
  std::vector<double> y_nodes;
  std::vector<double> x_weights;
  std::vector<double> y_weights;
  double p = 2.0;

  /// n equispaced nodes on [lo, hi] with composite trapezoid weights, the
  /// same for x and y.
  static GridSpec uniform(int n, double lo, double hi, double p = 2.0);

  /// Nodes on [-half_width, half_width] refined dyadically toward 0: the
  /// bands half_width*[2^{-l-1}, 2^{-l}], l < levels, and the core get
  /// max(per_level, width/max_spacing) intervals each. Trapezoid weights.
  static GridSpec graded(double half_width, int levels, int per_level, double max_spacing, double p = 2.0);

  /// Throws InvalidArgument on length mismatch, non-increasing nodes or
  /// non-positive weights.
  void validate() const;
};

enum class DiagonalRule {
  // drop y-nodes coinciding with the output node
  Excise,
  // drop them and add the -2 zeta(mu) h^{1-mu} correction of the
  // trapezoid rule for |x-y|^{-mu} (uniform shared grids only)
  ZetaCorrected,
};

std::string to_string(DiagonalRule r);

/// (Af)(x_m) ~ sum_n matrix(m,n) y_weights[n] f(y_n).
struct DiscretizedOperator {
  Eigen::MatrixXcd matrix;
  GridSpec grid;
  std::string variant;
  DiagonalRule rule = DiagonalRule::Excise;
  // Bound on the contribution of one omitted diagonal cell.
  double diagonal_budget = 0.0;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const;
  /// Adjoint for the weighted pairings: (A^# g)_n = sum_m conj(A(m,n)) wx_m g_m.
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& g) const;
  /// Discretization of the adjoint operator on the swapped grid.
  DiscretizedOperator adjoint() const;
};

DiscretizedOperator discretize(const OscillatoryOperator& op, const Variant& variant, const GridSpec& grid,
                               DiagonalRule rule = DiagonalRule::Excise, unsigned threads = 1);

/// (sum_i w_i |v_i|^p)^{1/p}, or max |v_i| for p = infinity.
double lp_norm(std::span<const std::complex<double>> values, std::span<const double> weights, double p);
double lp_norm(const Eigen::VectorXcd& values, std::span<const double> weights, double p);

/// Values as a column vector sampled on nodes.
Eigen::VectorXcd sample(const TestFunction& f, std::span<const double> nodes);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::VectorXcd maximizer;
};

/// Discretized L^2 -> L^2 norm: top singular value of
/// Wx^{1/2} A Wy^{1/2}, by power iteration on the normal operator.
NormEstimate opnorm2(const DiscretizedOperator& A, double tol = 1e-10, int max_iter = 10000,
                     std::uint64_t seed = 1);

/// Certified lower bound for the discretized L^p -> L^p norm (1 < p < inf)
/// by the nonlinear power method; best over `restarts` random starts and
/// the supplied designed starts.
NormEstimate opnorm_p_lower(const DiscretizedOperator& A, double p, int restarts,
                            const std::vector<Eigen::VectorXcd>& designed_starts = {}, std::uint64_t seed = 1,
                            int max_iter = 500);

/// Schur test constants: A1 = sup_x int |Ker| dy, A2 = sup_y int |Ker| dx.
struct SchurBounds {
  double row_sup = 0.0;
  double col_sup = 0.0;
  double row_argmax = 0.0;
  double col_argmax = 0.0;

  /// ||V||_{p->p} <= A2/p + A1/p' (p in [1, inf]).
  double bound(double p) const;
};

struct SchurProblem {
  // |Ker(x,y)|
  std::function<double(double, double)> abs_kernel;
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
  bool singular_diagonal = false;
  double mu = 0.0;
  double singular_bound = 1.0;
  std::vector<double> breakpoints;  // absolute positions in the integration variable
  std::vector<double> offsets;      // positions relative to the fixed variable
  double tol = 1e-8;
  int samples = 64;
};

SchurBounds schur_bounds(const SchurProblem& problem);
SchurBounds schur_bounds(const OscillatoryOperator& op, const Variant& variant, int samples = 64);

}  // namespace osclab

#endif
