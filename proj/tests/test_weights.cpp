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
#include "osclab/weights.hpp"

using namespace osclab;

TEST_SUITE("weights") {

TEST_CASE("pure power values") {
  const auto k = SingularKernel::pure_power(0.5, 1.0);
  CHECK(k(0.0, 0.25) == doctest::Approx(2.0));
  CHECK(k(0.5, 0.25) == doctest::Approx(2.0));
  const auto k3 = SingularKernel::pure_power(0.3, 1.0);
  CHECK(k3(0.9, 0.1) == doctest::Approx(std::pow(0.8, -0.3)).epsilon(1e-14));
  const auto neg = SingularKernel::pure_power(0.5, 1.0, -1);
  CHECK(neg(0.0, 0.25) == doctest::Approx(-2.0));
}

TEST_CASE("diagonal evaluation throws") {
  const auto k = SingularKernel::pure_power(0.5, 1.0);
  CHECK_THROWS_AS(k(0.3, 0.3), DiagonalEvaluation);
  CHECK(k.regular_part(0.3, 0.3) == doctest::Approx(1.0));
}

TEST_CASE("invalid kernels are rejected") {
  CHECK_THROWS_AS(SingularKernel::pure_power(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SingularKernel::pure_power(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SingularKernel::pure_power(0.5, -1.0), InvalidArgument);
  CHECK_THROWS_AS(modulation_from_string("sin"), InvalidArgument);
}

TEST_CASE("modulated kernels") {
  const auto g1 = SingularKernel::modulated(0.5, 1.0, Modulation::One);
  const auto p = SingularKernel::pure_power(0.5, 1.0);
  CHECK(g1(0.1, 0.35) == doctest::Approx(p(0.1, 0.35)));
  const auto gc = SingularKernel::modulated(0.5, 1.0, Modulation::CosSum);
  CHECK(gc(0.1, 0.35) == doctest::Approx(std::cos(0.45) * p(0.1, 0.35)));
  CHECK(modulation_from_string(to_string(Modulation::Gaussian)) == Modulation::Gaussian);
}

TEST_CASE("bump values") {
  CHECK(bump_phi(0.3) == 1.0);
  CHECK(bump_phi(-2.0) == 0.0);
  CHECK(bump_phi(0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bump_phi(-0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bump_phi(1.0) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = bump_phi(0.5 + 0.5 * i / 100.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("dyadic psi values") {
  CHECK(dyadic_psi(1.0) == doctest::Approx(1.0));
  CHECK(dyadic_psi(0.25) == 0.0);
  CHECK(dyadic_psi(3.0) == 0.0);
  CHECK(dyadic_psi_level(3, 0.125) == doctest::Approx(1.0));
}

TEST_CASE("telescoping sum") {
  double s = 0.0;
  for (int l = -30; l <= 30; ++l) s += dyadic_psi_level(l, 0.37);
  CHECK(std::abs(s - 1.0) <= 1e-12);
}

TEST_CASE("partition of unity at log-uniform points") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(-35.0, 35.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = std::exp2(e(rng));
    double s = 0.0;
    for (int l = -40; l <= 40; ++l) s += dyadic_psi_level(l, x);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("quadrant pieces add up") {
  for (double x : {-1.3, -0.2, 0.0, 0.07, 0.6, 1.9}) {
    for (int l = -2; l <= 4; ++l) {
      CHECK(quadrant_psi(l, 1, x) + quadrant_psi(l, -1, x) == doctest::Approx(dyadic_psi_level(l, x)));
    }
  }
  CHECK(quadrant_psi(0, 1, -1.0) == 0.0);
  CHECK(quadrant_psi(0, -1, -1.0) == doctest::Approx(1.0));
}

TEST_CASE("kernel condition checker") {
  const auto ok = verify_kernel_conditions(SingularKernel::pure_power(0.5, 1.0), 2000, true);
  CHECK(ok.pass);
  CHECK(ok.size_ratio == doctest::Approx(1.0));
  CHECK(ok.dy1_ratio == doctest::Approx(0.5));
  CHECK(ok.dy2_ratio == doctest::Approx(0.75));
  CHECK(ok.checked_x);

  const auto low = verify_kernel_conditions(SingularKernel::pure_power(0.5, 0.3), 2000, false);
  CHECK_FALSE(low.pass);
  CHECK(low.size_ratio == doctest::Approx(1.0 / 0.3));

  const auto g1 = verify_kernel_conditions(SingularKernel::modulated(0.5, 1.0, Modulation::One), 2000, false);
  CHECK(g1.size_ratio == doctest::Approx(ok.size_ratio));
  CHECK(g1.dy1_ratio == doctest::Approx(ok.dy1_ratio).epsilon(1e-5));
  CHECK(g1.dy2_ratio == doctest::Approx(ok.dy2_ratio).epsilon(2e-3));
}

}
