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

#ifndef OSCLAB_WEIGHTS_HPP
#define OSCLAB_WEIGHTS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace osclab {

/// Smooth factor g(x,y) multiplying |x-y|^{-mu} in a modulated kernel.
enum class Modulation {
  One,       // g = 1
  CosSum,    // g = cos(x + y)
  Gaussian,  // g = exp(-(x^2 + y^2))
};

std::string to_string(Modulation m);
/// Throws InvalidArgument for unknown names.
Modulation modulation_from_string(const std::string& name);

/// K(x,y) = sign |x-y|^{-mu} (pure power) or g(x,y) |x-y|^{-mu} (modulated).
class SingularKernel {
public:
  static SingularKernel pure_power(double mu, double bound, int sign = 1);
  static SingularKernel modulated(double mu, double bound, Modulation g);

  double mu() const { return mu_; }
  double bound() const { return bound_; }
  bool is_pure_power() const { return pure_; }
  int sign() const { return sign_; }
  Modulation modulation() const { return g_; }

  /// Throws DiagonalEvaluation when x == y.
  double operator()(double x, double y) const;

  /// K(x,y) |x-y|^{mu}, the smooth factor; finite on the diagonal.
  double regular_part(double x, double y) const;

private:
  SingularKernel(double mu, double bound, bool pure, int sign, Modulation g);

  double mu_;
  double bound_;
  bool pure_;
  int sign_;
  Modulation g_;
};

/// Fixed C-infinity bump: 1 on |x| <= 1/2, 0 on |x| >= 1.
double bump_phi(double x);

/// Psi(x) = phi(x/2) - phi(x), supported in 1/2 <= |x| <= 2.
double dyadic_psi(double x);

/// Psi(2^l x).
double dyadic_psi_level(int level, double x);

/// One-sided piece Psi(2^l sigma x) restricted to sigma x > 0; summing
/// over sigma = +-1 recovers dyadic_psi_level.
double quadrant_psi(int level, int sigma, double x);

struct KernelConditionReport {
  double size_ratio = 0.0;   // max |K| |x-y|^mu / E
  double dy1_ratio = 0.0;    // max |d_y K| |x-y|^{mu+1} / E
  double dy2_ratio = 0.0;    // max |d_y^2 K| |x-y|^{mu+2} / E
  double dx1_ratio = 0.0;    // filled when the extra x-condition is checked
  double dx2_ratio = 0.0;
  bool checked_x = false;
  bool size_ok = false;
  bool y_derivatives_ok = false;
  bool x_derivatives_ok = false;
  bool pass = false;
  int samples = 0;
};

/// Sample (x,y) with |x-y| log-uniform in [1e-6, 1] and report the largest
/// observed normalized ratios.
KernelConditionReport verify_kernel_conditions(const SingularKernel& kernel, int samples,
                                               bool include_x_condition, std::uint64_t seed = 1);

}  // namespace osclab

#endif
