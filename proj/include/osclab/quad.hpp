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

#ifndef OSCLAB_QUAD_HPP
#define OSCLAB_QUAD_HPP

#include <complex>
#include <functional>
#include <vector>

namespace osclab {

using Complex = std::complex<double>;

/// One-dimensional integrand amplitude(y) * exp(i phase(y)) on [a,b].
struct IntegrandSpec {
  std::function<Complex(double)> amplitude;
  std::function<double(double)> phase;  // empty means phase == 0
  double a = 0.0;
  double b = 1.0;

  // Points where the amplitude may blow up like |y - s|^{-mu}.
  std::vector<double> singular_points;
  // mu of the blow-up; 0 when unknown (no tail extrapolation is attempted).
  double singular_exponent = 0.0;
  // Constant C in |amplitude(y)| <= C |y - s|^{-mu} near a singular point.
  double singular_bound = 1.0;

  // Bound on max |phase'| over [a,b]; sets the initial panel width.
  double osc_scale = 0.0;

  // Interior points where the amplitude has a kink or a jump.
  std::vector<double> breakpoints;
};

struct QuadResult {
  Complex value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  int panels_used = 0;
  bool converged = false;
};

/// Adaptive 15-point Gauss-Kronrod quadrature with embedded 7-point Gauss
/// error estimates. Panels adjacent to singular points are graded toward
/// them with ratio 1/2. Returns converged == false when max_panels is hit.
QuadResult integrate(const IntegrandSpec& spec, double tol, int max_panels = 20000);

/// Slow reference value: composite Simpson on 2^levels, 2^{levels+1} and
/// 2^{levels+2} intervals per smooth segment, Richardson-extrapolated.
/// Segments ending at a singular point are first mapped by y = s + L u^q
/// with q = 2/(1-mu), which makes the integrand vanish linearly at u = 0.
/// The amplitude near s is assumed to be g(y) |y - s|^{-mu} with g smooth.
Complex oracle_integrate(const IntegrandSpec& spec, int levels);

}  // namespace osclab

#endif
