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

#include "osclab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "osclab/errors.hpp"

namespace osclab {

namespace {

double smooth_step_weight(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double modulation_value(Modulation g, double x, double y) {
  switch (g) {
    case Modulation::One:
      return 1.0;
    case Modulation::CosSum:
      return std::cos(x + y);
    case Modulation::Gaussian:
      return std::exp(-(x * x + y * y));
  }
  return 1.0;
}

// Sixth-order central differences for the first and second derivative.
template <class F>
double fd_first(const F& f, double t, double h) {
  return (-f(t - 3 * h) + 9 * f(t - 2 * h) - 45 * f(t - h) + 45 * f(t + h) - 9 * f(t + 2 * h) + f(t + 3 * h)) /
         (60.0 * h);
}

template <class F>
double fd_second(const F& f, double t, double h) {
  return (2 * f(t - 3 * h) - 27 * f(t - 2 * h) + 270 * f(t - h) - 490 * f(t) + 270 * f(t + h) -
          27 * f(t + 2 * h) + 2 * f(t + 3 * h)) /
         (180.0 * h * h);
}

}  // namespace

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::One:
      return "one";
    case Modulation::CosSum:
      return "cos_sum";
    case Modulation::Gaussian:
      return "gaussian";
  }
  return "?";
}

Modulation modulation_from_string(const std::string& name) {
  if (name == "one") return Modulation::One;
  if (name == "cos_sum") return Modulation::CosSum;
  if (name == "gaussian") return Modulation::Gaussian;
  throw InvalidArgument("unknown modulation '" + name + "' (expected one, cos_sum, gaussian)");
}

SingularKernel::SingularKernel(double mu, double bound, bool pure, int sign, Modulation g)
    : mu_(mu), bound_(bound), pure_(pure), sign_(sign), g_(g) {
  if (!(mu > 0.0 && mu < 1.0)) throw InvalidArgument("kernel exponent mu must lie in (0,1)");
  if (!(bound > 0.0)) throw InvalidArgument("kernel constant E must be positive");
  if (sign != 1 && sign != -1) throw InvalidArgument("kernel sign must be +1 or -1");
}

SingularKernel SingularKernel::pure_power(double mu, double bound, int sign) {
  return SingularKernel(mu, bound, true, sign, Modulation::One);
}

SingularKernel SingularKernel::modulated(double mu, double bound, Modulation g) {
  return SingularKernel(mu, bound, false, 1, g);
}

double SingularKernel::operator()(double x, double y) const {
  if (x == y) throw DiagonalEvaluation("singular kernel evaluated on the diagonal");
  return regular_part(x, y) * std::pow(std::abs(x - y), -mu_);
}

double SingularKernel::regular_part(double x, double y) const {
  return pure_ ? static_cast<double>(sign_) : modulation_value(g_, x, y);
}

double bump_phi(double x) {
  const double a = std::abs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double t = 2.0 * a - 1.0;
  const double up = smooth_step_weight(1.0 - t);
  return up / (up + smooth_step_weight(t));
}

double dyadic_psi(double x) { return bump_phi(0.5 * x) - bump_phi(x); }

double dyadic_psi_level(int level, double x) { return dyadic_psi(std::ldexp(x, level)); }

double quadrant_psi(int level, int sigma, double x) {
  const double sx = sigma > 0 ? x : -x;
  return sx > 0.0 ? dyadic_psi_level(level, sx) : 0.0;
}

KernelConditionReport verify_kernel_conditions(const SingularKernel& kernel, int samples,
                                               bool include_x_condition, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("verify_kernel_conditions needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mu = kernel.mu();
  const double E = kernel.bound();

  KernelConditionReport rep;
  rep.samples = samples;
  rep.checked_x = include_x_condition;
  for (int s = 0; s < samples; ++s) {
    const double dist = std::pow(10.0, -6.0 * unit(rng));
    const double x = unit(rng) - 0.5;
    const double y = unit(rng) < 0.5 ? x + dist : x - dist;
    const double t = std::abs(x - y);

    double ky1 = 0.0;
    double ky2 = 0.0;
    double kx1 = 0.0;
    double kx2 = 0.0;
    if (kernel.is_pure_power()) {
      // d_y |x-y|^{-mu} = mu |x-y|^{-mu-1} sgn(x-y), second derivative mu(mu+1)|x-y|^{-mu-2}
      ky1 = kx1 = mu * std::pow(t, -mu - 1.0);
      ky2 = kx2 = mu * (mu + 1.0) * std::pow(t, -mu - 2.0);
    } else {
      const double h = std::min(1e-3 * t, 1e-6);
      auto along_y = [&](double v) { return kernel(x, v); };
      auto along_x = [&](double u) { return kernel(u, y); };
      ky1 = std::abs(fd_first(along_y, y, h));
      ky2 = std::abs(fd_second(along_y, y, h));
      if (include_x_condition) {
        kx1 = std::abs(fd_first(along_x, x, h));
        kx2 = std::abs(fd_second(along_x, x, h));
      }
    }
    rep.size_ratio = std::max(rep.size_ratio, std::abs(kernel(x, y)) * std::pow(t, mu) / E);
    rep.dy1_ratio = std::max(rep.dy1_ratio, ky1 * std::pow(t, mu + 1.0) / E);
    rep.dy2_ratio = std::max(rep.dy2_ratio, ky2 * std::pow(t, mu + 2.0) / E);
    if (include_x_condition) {
      rep.dx1_ratio = std::max(rep.dx1_ratio, kx1 * std::pow(t, mu + 1.0) / E);
      rep.dx2_ratio = std::max(rep.dx2_ratio, kx2 * std::pow(t, mu + 2.0) / E);
    }
  }
  // |K| |x-y|^mu is 1 up to rounding for E equal to the exact constant
  constexpr double kLimit = 1.0 + 1e-12;
  rep.size_ok = rep.size_ratio <= kLimit;
  rep.y_derivatives_ok = rep.dy1_ratio <= kLimit && rep.dy2_ratio <= kLimit;
  rep.x_derivatives_ok = !include_x_condition || (rep.dx1_ratio <= kLimit && rep.dx2_ratio <= kLimit);
  rep.pass = rep.size_ok && rep.y_derivatives_ok && rep.x_derivatives_ok;
  return rep;
}

}  // namespace osclab
