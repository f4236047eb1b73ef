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

#include <cmath>
#include <numbers>

#include "osclab/quad.hpp"

using namespace osclab;

namespace {

IntegrandSpec constant_spec() {
  IntegrandSpec s;
  s.amplitude = [](double) { return Complex(1.0, 0.0); };
  return s;
}

IntegrandSpec oscillating_spec() {
  IntegrandSpec s = constant_spec();
  s.phase = [](double y) { return 40.0 * y; };
  s.b = 2 * std::numbers::pi;
  s.osc_scale = 40.0;
  return s;
}

IntegrandSpec singular_spec() {
  IntegrandSpec s;
  s.amplitude = [](double y) { return Complex(std::pow(std::abs(y - 0.5), -0.5), 0.0); };
  s.singular_points = {0.5};
  s.singular_exponent = 0.5;
  return s;
}

}  // namespace

TEST_SUITE("quad") {

TEST_CASE("reference integrals") {
  const double tol = 1e-9;
  const auto c = integrate(constant_spec(), tol);
  CHECK(c.converged);
  CHECK(std::abs(c.value - Complex(1.0, 0.0)) <= tol);

  const auto o = integrate(oscillating_spec(), tol);
  CHECK(o.converged);
  CHECK(std::abs(o.value) <= tol);

  const auto s = integrate(singular_spec(), tol);
  CHECK(s.converged);
  CHECK(std::abs(s.value - Complex(4.0 * std::sqrt(0.5), 0.0)) <= 1e-8);
}

TEST_CASE("oracle agrees with adaptive quadrature") {
  const double tol = 1e-9;
  for (const auto& spec : {constant_spec(), oscillating_spec(), singular_spec()}) {
    const auto q = integrate(spec, tol);
    const auto r = oracle_integrate(spec, 10);
    CHECK(std::abs(q.value - r) <= 10 * tol + 1e-8);
  }
  IntegrandSpec lin;
  lin.amplitude = [](double y) { return Complex(y, 0.0); };
  CHECK(std::abs(oracle_integrate(constant_spec(), 6) - Complex(1.0, 0.0)) <= 1e-13);
  CHECK(std::abs(oracle_integrate(lin, 6) - Complex(0.5, 0.0)) <= 1e-13);
}

TEST_CASE("strong singularity away from the origin") {
  IntegrandSpec s;
  s.amplitude = [](double y) { return Complex(std::pow(std::abs(y - 0.1), -0.7), 0.0); };
  s.a = -0.3;
  s.b = 0.5;
  s.singular_points = {0.1};
  s.singular_exponent = 0.7;
  const double exact = (std::pow(0.4, 0.3) + std::pow(0.4, 0.3)) / 0.3;
  const auto r = integrate(s, 1e-10);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - exact) < 1e-10);
  CHECK(std::abs(oracle_integrate(s, 11).real() - exact) < 1e-10);
}

TEST_CASE("linearity in the amplitude") {
  IntegrandSpec f = oscillating_spec();
  f.amplitude = [](double y) { return Complex(std::cos(y), y); };
  IntegrandSpec g = oscillating_spec();
  g.amplitude = [](double y) { return Complex(y * y, -1.0); };
  const Complex alpha(0.3, -1.2), beta(2.0, 0.5);
  IntegrandSpec h = oscillating_spec();
  h.amplitude = [&](double y) { return alpha * f.amplitude(y) + beta * g.amplitude(y); };
  const double tol = 1e-10;
  const Complex lhs = integrate(h, tol).value;
  const Complex rhs = alpha * integrate(f, tol).value + beta * integrate(g, tol).value;
  CHECK(std::abs(lhs - rhs) <= 20 * tol);
}

TEST_CASE("additivity over intervals") {
  IntegrandSpec s = singular_spec();
  s.phase = [](double y) { return 7.0 * y * y; };
  s.osc_scale = 14.0;
  const double tol = 1e-10;
  IntegrandSpec left = s, right = s;
  left.b = 0.3;
  right.a = 0.3;
  const Complex whole = integrate(s, tol).value;
  const Complex parts = integrate(left, tol).value + integrate(right, tol).value;
  CHECK(std::abs(whole - parts) <= 1e-8);
}

TEST_CASE("breakpoints handle jumps") {
  IntegrandSpec s;
  s.amplitude = [](double y) { return Complex(y < 0.3 ? 1.0 : 0.0, 0.0); };
  s.breakpoints = {0.3};
  const auto q = integrate(s, 1e-12);
  CHECK(std::abs(q.value - Complex(0.3, 0.0)) <= 1e-12);
}

TEST_CASE("panel budget exhaustion is reported") {
  IntegrandSpec s = constant_spec();
  s.phase = [](double y) { return 1e6 * y * y; };
  s.osc_scale = 2e6;
  const auto q = integrate(s, 1e-14, 8);
  CHECK_FALSE(q.converged);
  CHECK(q.panels_used >= 8);
  CHECK(q.abs_error_estimate > 1e-14);
}

}
