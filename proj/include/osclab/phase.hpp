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

#ifndef OSCLAB_PHASE_HPP
#define OSCLAB_PHASE_HPP

#include <span>
#include <string>
#include <vector>

namespace osclab {

/// Homogeneous polynomial phase S(x,y) = sum_{k=1}^{n-1} a_k x^{n-k} y^k
/// with a_1 a_{n-1} != 0.
class HomogeneousPhase {
public:
  /// Throws InvalidArgument unless degree >= 2, coeffs.size() == degree-1
  /// and both extreme coefficients are nonzero.
  HomogeneousPhase(int degree, std::vector<double> coeffs);

  int degree() const { return degree_; }
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(int k) const { return coeffs_[static_cast<std::size_t>(k - 1)]; }

  double value(double x, double y) const { return partial(0, 0, x, y); }

  /// Exact partial derivative d^{dx}/dx d^{dy}/dy S evaluated at (x,y).
  /// Orders exceeding the monomial degrees give 0.
  double partial(int dx, int dy, double x, double y) const;

  /// S''_{xy}(x,y).
  double mixed_hessian(double x, double y) const { return partial(1, 1, x, y); }

  /// Upper bound of |dS/dy| over the square |x|,|y| <= half_width.
  double y_gradient_bound(double half_width) const;
  /// Upper bound of |dS/dx| over the same square.
  double x_gradient_bound(double half_width) const;

  /// Coefficients b_0..b_{n-2} of S''_{xy} = sum_i b_i x^{n-2-i} y^i.
  std::vector<double> mixed_hessian_coeffs() const;

  /// The phase with every coefficient negated; realizes lambda -> -lambda.
  HomogeneousPhase negated() const;

  /// x^{n-1} y + x y^{n-1}.
  static HomogeneousPhase extreme_pair(int degree);

private:
  int degree_;
  std::vector<double> coeffs_;
};

struct LinearFactor {
  double alpha;      // factor (y - alpha x)
  int multiplicity;  // >= 1
};

/// Positive definite A x^2 + B x y + C y^2.
struct QuadraticFactor {
  double A;
  double B;
  double C;

  double operator()(double x, double y) const { return A * x * x + B * x * y + C * y * y; }
};

/// c * x^e * prod (y - alpha_l x)^{m_l} * prod Q_l(x,y).
/// For admissible phases e is always 0; it is kept for general binary forms
/// whose dehomogenization loses degree.
struct HessianFactorization {
  double leading = 0.0;
  std::vector<LinearFactor> linear_factors;  // strictly increasing alpha
  std::vector<QuadraticFactor> quad_factors;
  int x_exponent = 0;
  double cluster_tolerance = 1e-7;

  int total_degree() const;
  double evaluate(double x, double y) const;
  std::string to_string() const;
};

/// Factor a binary form sum_i b_i x^{d-i} y^i over the reals.
/// Throws DegenerateHessian when every coefficient vanishes and
/// RootIsolationFailure when nearby roots cannot be resolved either as a
/// multiple root or as distinct roots.
HessianFactorization factor_binary_form(std::span<const double> coeffs);

/// Factorization of S''_{xy} for an admissible phase.
HessianFactorization factor_hessian(const HomogeneousPhase& phase);

enum class Region { X, Delta, Y };

const char* to_string(Region r);

/// Smallest K >= 2 with 2^K >= 4 max(1, |alpha_l|, 1/|alpha_l|), nonzero alpha_l.
int compute_k_threshold(const HessianFactorization& fact);

/// Y if j > k + threshold, X if j < k - threshold, Delta otherwise.
constexpr Region classify(int j, int k, int threshold) {
  if (j > k + threshold) return Region::Y;
  if (j < k - threshold) return Region::X;
  return Region::Delta;
}

/// One dyadic cell: x ~ sigma_x 2^{-j}, y ~ sigma_y 2^{-k}.
struct DyadicIndex {
  int j = 0;
  int k = 0;
  int sigma_x = 1;
  int sigma_y = 1;
  Region region = Region::Delta;

  static DyadicIndex make(int j, int k, int sigma_x, int sigma_y, int threshold) {
    return {j, k, sigma_x, sigma_y, classify(j, k, threshold)};
  }
};

}  // namespace osclab

#endif
