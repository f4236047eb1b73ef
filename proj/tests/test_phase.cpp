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
#include "osclab/phase.hpp"

using namespace osclab;

namespace {

// Phases with real roots of various multiplicities, definite quadratics and mixes.
std::vector<HomogeneousPhase> corpus() {
  std::vector<HomogeneousPhase> out;
  for (int n = 3; n <= 6; ++n) out.push_back(HomogeneousPhase::extreme_pair(n));
  out.emplace_back(3, std::vector{1.0, 1.0});
  out.emplace_back(3, std::vector{2.0, -5.0});
  out.emplace_back(4, std::vector{1.0, 1.0, 1.0});
  out.emplace_back(4, std::vector{1.0, -3.0, 1.0});
  out.emplace_back(4, std::vector{1.0, 2.0, 1.0});
  out.emplace_back(4, std::vector{-2.0, 0.5, 3.0});
  out.emplace_back(5, std::vector{1.0, 0.0, 0.0, 1.0});
  out.emplace_back(5, std::vector{1.0, -1.0, 1.0, -1.0});
  out.emplace_back(5, std::vector{0.25, 1.0, 1.0, 0.25});
  out.emplace_back(5, std::vector{3.0, 0.0, -2.0, 1.0});
  out.emplace_back(6, std::vector{1.0, 0.0, 0.0, 0.0, 1.0});
  out.emplace_back(6, std::vector{1.0, 2.0, 3.0, 2.0, 1.0});
  out.emplace_back(6, std::vector{1.0, -4.0, 6.0, -4.0, 1.0});
  out.emplace_back(6, std::vector{0.5, 0.0, -1.0, 0.0, 2.0});
  out.emplace_back(7, std::vector{1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  out.emplace_back(7, std::vector{1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  out.emplace_back(7, std::vector{2.0, -1.0, 0.0, 3.0, -1.0, 0.5});
  // repeated roots: 3 (y-x)^2, 4 (y-x)^3, 4 (y+x)^3
  out.emplace_back(4, std::vector{1.0, -1.5, 1.0});
  out.emplace_back(5, std::vector{1.0, -2.0, 2.0, -1.0});
  out.emplace_back(4, std::vector{1.0, 3.0, 1.0});
  out.emplace_back(5, std::vector{1.0, 3.0, 3.0, 1.0});
  out.emplace_back(5, std::vector{0.25, 0.5, 0.5, 0.25});
  out.emplace_back(6, std::vector{1.0, 5.0, 10.0, 10.0, 5.0});
  out.emplace_back(3, std::vector{-1.0, 7.0});
  out.emplace_back(8, std::vector{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  out.emplace_back(8, std::vector{1.0, -1.0, 0.5, 0.0, 0.5, -1.0, 1.0});
  out.emplace_back(8, std::vector{1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0});
  return out;
}

}  // namespace

TEST_SUITE("phase") {

TEST_CASE("evaluation examples") {
  const HomogeneousPhase s(4, {1.0, 0.0, 1.0});
  CHECK(s.value(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(s.value(0.0, 0.7) == 0.0);
  CHECK(s.value(0.5, 0.25) == doctest::Approx(0.0390625).epsilon(1e-15));
  CHECK(s.partial(1, 1, 1.0, 1.0) == doctest::Approx(6.0));
  CHECK(s.partial(4, 1, 0.3, 0.2) == 0.0);
  const HomogeneousPhase c(3, {1.0, 1.0});
  CHECK(c.partial(1, 1, 2.0, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("invalid phases are rejected") {
  CHECK_THROWS_AS(HomogeneousPhase(4, {0.0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(HomogeneousPhase(4, {1.0, 1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(HomogeneousPhase(4, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(HomogeneousPhase(1, {}), InvalidArgument);
}

TEST_CASE("homogeneity and Euler identity at random points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.1, 10.0);
  for (const auto& s : corpus()) {
    const int n = s.degree();
    // sum of |monomials|, the scale of the rounding error
    auto size = [&](double x, double y) {
      double m = 0.0;
      for (int k = 1; k < n; ++k) m += std::abs(s.coeff(k) * std::pow(x, n - k) * std::pow(y, k));
      return m;
    };
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng), y = u(rng), tt = t(rng);
      const double scaled = std::pow(tt, n) * s.value(x, y);
      CHECK(std::abs(s.value(tt * x, tt * y) - scaled) <= 1e-12 * size(tt * x, tt * y));
      const double euler = x * s.partial(1, 0, x, y) + y * s.partial(0, 1, x, y);
      CHECK(std::abs(euler - n * s.value(x, y)) <= 1e-12 * n * n * size(x, y));
    }
  }
}

TEST_CASE("partials agree with finite differences") {
  const HomogeneousPhase s(5, {1.0, -2.0, 0.5, 3.0});
  const double x = 0.31, y = -0.47, h = 1e-5;
  const double fd = (s.value(x + h, y + h) - s.value(x + h, y - h) - s.value(x - h, y + h) + s.value(x - h, y - h)) /
                    (4 * h * h);
  CHECK(s.mixed_hessian(x, y) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("factorization examples") {
  const auto f1 = factor_hessian(HomogeneousPhase(4, {1.0, 0.0, 1.0}));
  CHECK(f1.leading == doctest::Approx(3.0));
  CHECK(f1.linear_factors.empty());
  REQUIRE(f1.quad_factors.size() == 1);
  CHECK(f1.quad_factors[0].A == doctest::Approx(1.0));
  CHECK(f1.quad_factors[0].B == doctest::Approx(0.0));
  CHECK(f1.quad_factors[0].C == doctest::Approx(1.0));
  CHECK(f1.to_string() == "3 * (x^2+y^2)");

  const auto f2 = factor_hessian(HomogeneousPhase(4, {1.0, 1.0, 1.0}));
  CHECK(f2.leading == doctest::Approx(3.0));
  CHECK(f2.linear_factors.empty());
  REQUIRE(f2.quad_factors.size() == 1);

  const auto f3 = factor_hessian(HomogeneousPhase(3, {1.0, 1.0}));
  CHECK(f3.leading == doctest::Approx(2.0));
  REQUIRE(f3.linear_factors.size() == 1);
  CHECK(f3.linear_factors[0].alpha == doctest::Approx(-1.0));
  CHECK(f3.linear_factors[0].multiplicity == 1);
  CHECK(f3.total_degree() == 1);
  CHECK(f3.to_string() == "2 * (y+x)");
}

TEST_CASE("repeated roots are clustered") {
  // S''_{xy} = 3 (y - x)^2 for S = x^3 y - 3/2 x^2 y^2 + x y^3
  const auto f = factor_hessian(HomogeneousPhase(4, {1.0, -1.5, 1.0}));
  REQUIRE(f.linear_factors.size() == 1);
  CHECK(f.linear_factors[0].alpha == doctest::Approx(1.0));
  CHECK(f.linear_factors[0].multiplicity == 2);
  // 4 (y - x)^3
  const auto t = factor_hessian(HomogeneousPhase(5, {1.0, -2.0, 2.0, -1.0}));
  REQUIRE(t.linear_factors.size() == 1);
  CHECK(t.linear_factors[0].alpha == doctest::Approx(1.0));
  CHECK(t.linear_factors[0].multiplicity == 3);
  // (y + x)^3
  const auto g = factor_hessian(HomogeneousPhase(5, {0.25, 0.5, 0.5, 0.25}));
  REQUIRE(g.linear_factors.size() == 1);
  CHECK(g.linear_factors[0].multiplicity == 3);
}

TEST_CASE("quadruple and nearly repeated roots") {
  // S''_{xy} = 7 (y + 6.122 x)(y + x)^4 (y + 0.163 x)
  const auto f = factor_hessian(HomogeneousPhase(8, {1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0}));
  REQUIRE(f.linear_factors.size() == 3);
  CHECK(f.linear_factors[1].alpha == doctest::Approx(-1.0));
  CHECK(f.linear_factors[1].multiplicity == 4);
  CHECK(f.quad_factors.empty());
  // (y - x)(y - 1.0005 x): distinct roots inside the loose clustering radius
  const std::vector<double> b{1.0005, -2.0005, 1.0};
  const auto g = factor_binary_form(b);
  REQUIRE(g.linear_factors.size() == 2);
  CHECK(g.linear_factors[0].alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.linear_factors[1].alpha == doctest::Approx(1.0005).epsilon(1e-12));
}

TEST_CASE("reconstruction and degree count over the corpus") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-3.0, 0.0);
  std::bernoulli_distribution sign(0.5);
  const auto all = corpus();
  CHECK(all.size() >= 30);
  for (const auto& s : all) {
    const auto f = factor_hessian(s);
    CHECK(f.total_degree() == s.degree() - 2);
    for (std::size_t i = 1; i < f.linear_factors.size(); ++i) {
      CHECK(f.linear_factors[i - 1].alpha < f.linear_factors[i].alpha);
    }
    for (const auto& q : f.quad_factors) {
      CHECK(q.A > 0.0);
      CHECK(q.B * q.B - 4 * q.A * q.C < 0.0);
    }
    for (int i = 0; i < 200; ++i) {
      const double x = (sign(rng) ? 1 : -1) * std::pow(10.0, mag(rng));
      const double y = (sign(rng) ? 1 : -1) * std::pow(10.0, mag(rng));
      const double want = s.mixed_hessian(x, y);
      const double scale = std::max(std::abs(want), 1e-300);
      // relative to the size of the monomials, which bounds cancellation
      double mono = 0.0;
      const auto b = s.mixed_hessian_coeffs();
      for (std::size_t k = 0; k < b.size(); ++k) {
        mono += std::abs(b[k]) * std::pow(std::abs(x), static_cast<double>(b.size() - 1 - k)) *
                std::pow(std::abs(y), static_cast<double>(k));
      }
      CHECK(std::abs(f.evaluate(x, y) - want) <= 1e-9 * std::max(scale, mono));
    }
  }
}

TEST_CASE("zero form is degenerate") {
  const std::vector<double> zero{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(factor_binary_form(zero), DegenerateHessian);
}

TEST_CASE("binary forms with x and y factors") {
  // x * y * (y - 2x): coefficients of x^{3-i} y^i
  const std::vector<double> b{0.0, -2.0, 1.0, 0.0};
  const auto f = factor_binary_form(b);
  CHECK(f.x_exponent == 1);
  CHECK(f.total_degree() == 3);
  CHECK(f.evaluate(0.7, 0.3) == doctest::Approx(0.7 * 0.3 * (0.3 - 1.4)));
}

TEST_CASE("K threshold") {
  HessianFactorization none;
  CHECK(compute_k_threshold(none) == 2);
  HessianFactorization one;
  one.linear_factors = {{1.0, 1}};
  CHECK(compute_k_threshold(one) == 2);
  HessianFactorization two;
  two.linear_factors = {{0.125, 1}, {3.0, 1}};
  CHECK(compute_k_threshold(two) == 5);
}

TEST_CASE("classify examples and partition") {
  CHECK(classify(10, 2, 3) == Region::Y);
  CHECK(classify(2, 10, 3) == Region::X);
  CHECK(classify(5, 4, 3) == Region::Delta);
  for (int j = -20; j <= 20; ++j) {
    for (int k = -20; k <= 20; ++k) {
      const Region r = classify(j, k, 3);
      const int hits = (r == Region::X) + (r == Region::Delta) + (r == Region::Y);
      CHECK(hits == 1);
      CHECK((r == Region::Y) == (j > k + 3));
      CHECK((r == Region::X) == (j < k - 3));
    }
  }
}

TEST_CASE("Hessian size on region Y boxes scales like 2^{-k(n-2)}") {
  const HomogeneousPhase s(4, {1.0, -1.5, 1.0});  // 3 (y-x)^2
  const auto f = factor_hessian(s);
  const int K = compute_k_threshold(f);
  std::vector<double> ratios;
  for (int k = 1; k <= 8; ++k) {
    const int j = k + K + 1;
    double lo = INFINITY, hi = 0.0;
    for (int a = 0; a <= 10; ++a) {
      for (int b = 0; b <= 10; ++b) {
        const double x = std::ldexp(0.5 + 1.5 * a / 10.0, -j);
        const double y = std::ldexp(0.5 + 1.5 * b / 10.0, -k);
        const double v = std::abs(s.mixed_hessian(x, y)) / std::ldexp(1.0, -k * 2);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    ratios.push_back(lo);
    ratios.push_back(hi);
  }
  const double mn = *std::min_element(ratios.begin(), ratios.end());
  const double mx = *std::max_element(ratios.begin(), ratios.end());
  CHECK(mn > 0.1);
  CHECK(mx < 20.0);
}

TEST_CASE("dyadic index carries its region") {
  const auto idx = DyadicIndex::make(9, 2, 1, -1, 3);
  CHECK(idx.region == Region::Y);
  CHECK(idx.sigma_y == -1);
}

}
