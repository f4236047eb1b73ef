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
#include <random>

#include "osclab/errors.hpp"
#include "osclab/norms.hpp"
#include "osclab/operator.hpp"

using namespace osclab;
using C = std::complex<double>;

namespace {

OperatorConfig quartic(double lambda) {
  OperatorConfig c{HomogeneousPhase(4, {1.0, 0.0, 1.0}), SingularKernel::pure_power(0.5, 1.0)};
  c.lambda = lambda;
  c.quad_tol = 1e-9;
  return c;
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("config validation") {
  auto c = quartic(10.0);
  c.lambda = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = quartic(10.0);
  c.amplitude_half_width = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_THROWS_AS(Variant::damped(Region::Delta, 0.5), InvalidArgument);
  CHECK_THROWS_AS(variant_from_string("T3"), InvalidArgument);
  CHECK(variant_from_string("T1").kind == VariantKind::NearDiagonal);
  CHECK(variant_from_string("damped:Y", 0.5).kind == VariantKind::Damped);
}

TEST_CASE("zero input gives zero") {
  const OscillatoryOperator op(quartic(64.0));
  for (const char* v : {"T", "T1", "T2", "Y"}) {
    CHECK(op.apply(variant_from_string(v), TestFunction::zero(), 0.1).value == C(0.0, 0.0));
  }
  CHECK(adjoint_apply(op, TestFunction::zero(), 0.2).value == C(0.0, 0.0));
}

TEST_CASE("outside the amplitude box") {
  const OscillatoryOperator op(quartic(64.0));
  CHECK(apply_T(op, TestFunction::indicator(0.25, 0.5), 0.75).value == C(0.0, 0.0));
}

TEST_CASE("pointwise lower bound at large lambda") {
  const OscillatoryOperator op(quartic(1e4));
  const auto a = apply_T(op, TestFunction::indicator(0.25, 0.5), 1e-7);
  CHECK(std::abs(a.value) >= 0.1);
}

TEST_CASE("agreement with the oracle") {
  OperatorConfig c{HomogeneousPhase(3, {1.0, 1.0}), SingularKernel::pure_power(0.5, 1.0)};
  c.lambda = 50.0;
  c.quad_tol = 1e-10;
  const OscillatoryOperator op(c);
  const double x = 0.1;
  const auto a = apply_T(op, TestFunction::indicator(0.25, 0.5), x);
  IntegrandSpec s;
  s.amplitude = [&](double y) { return op.amplitude(Variant::full(), x, y); };
  s.phase = [&](double y) { return c.lambda * c.phase.value(x, y); };
  s.a = 0.25;
  s.b = 0.5;
  CHECK(std::abs(a.value - oracle_integrate(s, 10)) <= 1e-6);
}

TEST_CASE("T = T1 + T2 at random points") {
  const OscillatoryOperator op(quartic(100.0));
  const auto f = TestFunction::indicator(-0.3, 0.4) + TestFunction::bump(0.1, 0.05) * C(0.0, 1.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng);
    const C t = apply_T(op, f, x).value;
    const C t12 = apply_T1(op, f, x).value + apply_T2(op, f, x).value;
    CHECK(std::abs(t - t12) <= 3 * op.config().quad_tol);
  }
}

TEST_CASE("near-diagonal part vanishes away from the support") {
  const OscillatoryOperator op(quartic(1e4));  // lambda^{-1/4} = 0.1
  CHECK(std::abs(apply_T1(op, TestFunction::indicator(0.25, 0.5), -0.25).value) == 0.0);
}

TEST_CASE("pieces vanish outside their x band") {
  const OscillatoryOperator op(quartic(64.0));
  const auto idx = DyadicIndex::make(3, 1, 1, 1, op.k_threshold());
  const auto f = TestFunction::indicator(0.05, 0.45);
  CHECK(apply_piece(op, idx, f, 0.3).value == C(0.0, 0.0));
  CHECK(apply_piece(op, idx, f, 0.03).value == C(0.0, 0.0));
  CHECK(apply_piece(op, idx, f, -0.1).value == C(0.0, 0.0));
}

TEST_CASE("groups reconstruct T2") {
  const OscillatoryOperator op(quartic(64.0));
  const auto f = TestFunction::indicator(-0.4, 0.35);
  for (double x : {-0.31, -0.07, 0.013, 0.2, 0.44}) {
    const C t2 = apply_T2(op, f, x).value;
    const C sum = apply_group(op, Region::X, f, x).value + apply_group(op, Region::Delta, f, x).value +
                  apply_group(op, Region::Y, f, x).value;
    CHECK(std::abs(t2 - sum) <= 5 * op.config().quad_tol + op.truncation_budget(f, x));
  }
}

TEST_CASE("damping factor") {
  const OscillatoryOperator op(quartic(64.0));
  CHECK(std::abs(op.damping(0.1, 0.2, 0.5) - C(0.3872983346207417, 0.0)) <= 1e-12);
  CHECK(op.damping(0.1, 0.2, 0.0) == C(1.0, 0.0));
  for (double y : {0.01, 0.1, 0.4}) CHECK(std::abs(op.damping(0.2, y, C(0.0, 1.7))) == doctest::Approx(1.0));
  CHECK(op.damping(0.0, 0.0, 0.5) == C(0.0, 0.0));
}

TEST_CASE("z = 0 damping reduces to the group") {
  const OscillatoryOperator op(quartic(64.0));
  const auto f = TestFunction::indicator(0.05, 0.45);
  for (double x : {0.003, 0.02}) {
    const C d = apply_damped(op, Region::Y, 0.0, f, x).value;
    const C g = apply_group(op, Region::Y, f, x).value;
    CHECK(std::abs(d - g) <= 2 * op.config().quad_tol);
  }
}

TEST_CASE("imaginary z keeps the integrand modulus") {
  const OscillatoryOperator op(quartic(64.0));
  const auto dz = Variant::damped(Region::Y, C(0.0, 2.0));
  const auto g = Variant::group(Region::Y);
  for (double y : {0.1, 0.2, 0.3}) {
    CHECK(std::abs(op.kernel(dz, 0.01, y)) == doctest::Approx(std::abs(op.kernel(g, 0.01, y))));
  }
}

TEST_CASE("linearity") {
  const OscillatoryOperator op(quartic(100.0));
  const auto f = TestFunction::indicator(0.0, 0.3);
  const auto g = TestFunction::bump(-0.2, 0.1);
  const C a(0.7, -0.4), b(-1.1, 2.0);
  for (double x : {-0.2, 0.05, 0.3}) {
    const C lhs = apply_T(op, f * a + g * b, x).value;
    const C rhs = a * apply_T(op, f, x).value + b * apply_T(op, g, x).value;
    CHECK(std::abs(lhs - rhs) <= 1e-7);
  }
}

TEST_CASE("adjoint duality on a grid") {
  const OscillatoryOperator op(quartic(64.0));
  const auto grid = GridSpec::uniform(128, -0.5, 0.5);
  const auto A = discretize(op, Variant::full(), grid);
  Eigen::VectorXcd f = Eigen::VectorXcd::Random(128), g = Eigen::VectorXcd::Random(128);
  const auto& w = grid.x_weights;
  C lhs = 0.0, rhs = 0.0;
  const Eigen::VectorXcd Af = A.apply(f), Ag = A.apply_adjoint(g);
  for (int i = 0; i < 128; ++i) {
    lhs += w[static_cast<std::size_t>(i)] * Af(i) * std::conj(g(i));
    rhs += w[static_cast<std::size_t>(i)] * f(i) * std::conj(Ag(i));
  }
  CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("adjoint apply matches the conjugate kernel") {
  const OscillatoryOperator op(quartic(50.0));
  const auto g = TestFunction::indicator(-0.2, 0.3);
  const double y = 0.1;
  IntegrandSpec s;
  s.amplitude = [&](double x) { return std::conj(op.kernel(Variant::full(), x, y)); };  // g = 1 on [a, b]
  s.a = -0.2;
  s.b = 0.3;
  s.singular_points = {y};
  s.singular_exponent = 0.5;
  CHECK(std::abs(adjoint_apply(op, g, y).value - oracle_integrate(s, 11)) <= 1e-5);
}

TEST_CASE("self-adjoint without oscillation") {
  const OscillatoryOperator op(quartic(1e-12));
  const auto f = TestFunction::indicator(-0.1, 0.3);
  for (double t : {-0.2, 0.05, 0.2}) {
    CHECK(std::abs(apply_T(op, f, t).value - adjoint_apply(op, f, t).value) <= 1e-8);
  }
}

}
