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

#ifndef OSCLAB_OPERATOR_HPP
#define OSCLAB_OPERATOR_HPP

#include <array>
#include <atomic>
#include <complex>
#include <memory>
#include <string>

#include "osclab/phase.hpp"
#include "osclab/quad.hpp"
#include "osclab/test_function.hpp"
#include "osclab/weights.hpp"

namespace osclab {

/// Index into OperatorConfig::quadrants for signs (sigma_x, sigma_y).
constexpr std::size_t quadrant_index(int sigma_x, int sigma_y) {
  return static_cast<std::size_t>((sigma_x > 0 ? 0 : 2) + (sigma_y > 0 ? 0 : 1));
}

/// One concrete instance of
///   Tf(x) = int e^{i lambda S(x,y)} K(x,y) psi(x,y) f(y) dy
/// with psi(x,y) = phi(x/h) phi(y/h), h = amplitude_half_width.
struct OperatorConfig {
  HomogeneousPhase phase;
  SingularKernel kernel;
  double lambda = 1.0;
  double amplitude_half_width = 0.5;
  double quad_tol = 1e-8;
  int max_panels = 20000;
  int j_max = 14;
  std::array<bool, 4> quadrants = {true, true, true, true};
  bool fail_on_nonconvergence = true;

  /// Throws InvalidArgument on violated invariants.
  void validate() const;
};

enum class VariantKind { Full, NearDiagonal, FarDiagonal, Piece, Group, Damped };

/// Which part of the decomposition an application or discretization uses.
struct Variant {
  VariantKind kind = VariantKind::Full;
  Region region = Region::Delta;
  DyadicIndex piece{};
  std::complex<double> z{0.0, 0.0};

  static Variant full() { return {}; }
  static Variant near_diagonal() { return {VariantKind::NearDiagonal}; }
  static Variant far_diagonal() { return {VariantKind::FarDiagonal}; }
  static Variant dyadic_piece(const DyadicIndex& idx) { return {VariantKind::Piece, idx.region, idx}; }
  static Variant group(Region r) { return {VariantKind::Group, r}; }
  /// Throws InvalidArgument for Region::Delta.
  static Variant damped(Region r, std::complex<double> z);

  bool has_singular_diagonal() const {
    return kind == VariantKind::Full || kind == VariantKind::NearDiagonal;
  }
  std::string name() const;
};

/// Parses "T", "T1", "T2", "X", "Delta", "Y", "group:X", "damped:Y" (z separate).
Variant variant_from_string(const std::string& name, std::complex<double> z = {0.0, 0.0});

struct Application {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  double truncation_budget = 0.0;
  int panels = 0;
  bool converged = true;
};

class OscillatoryOperator {
public:
  explicit OscillatoryOperator(OperatorConfig cfg);

  const OperatorConfig& config() const { return cfg_; }
  const HessianFactorization& factorization() const { return fact_; }
  int k_threshold() const { return k_threshold_; }
  /// lambda^{1/n}; the diagonal excision acts on (x-y) lambda^{1/n}.
  double cutoff_scale() const { return cutoff_scale_; }

  double psi(double x, double y) const;
  /// Sum of Psi_j(sigma_x x) Psi_k(sigma_y y) over enabled quadrants and
  /// truncated indices 0 <= j,k <= j_max lying in `r`.
  double region_weight(Region r, double x, double y) const;
  /// |S''_{xy}(x,y)|^z, with the zero-variety conventions documented in
  /// the README.
  std::complex<double> damping(double x, double y, std::complex<double> z) const;

  /// Kernel without the oscillatory factor e^{i lambda S}.
  std::complex<double> amplitude(const Variant& v, double x, double y) const;
  /// Full kernel of the variant at (x,y); zero on the diagonal.
  std::complex<double> kernel(const Variant& v, double x, double y) const;

  Application apply(const Variant& v, const TestFunction& f, double x) const;
  /// (T_v^* g)(y) = int conj(Ker_v(x,y)) g(x) dx.
  Application adjoint_apply(const Variant& v, const TestFunction& g, double y) const;

  /// Bound on |T2 f(x) - sum of truncated pieces at x|.
  double truncation_budget(const TestFunction& f, double x) const;

  std::size_t damping_events() const { return damping_events_->load(); }

private:
  Application run(const Variant& v, IntegrandSpec spec) const;
  void add_common_breakpoints(const Variant& v, double other, std::vector<double>& pts) const;

  OperatorConfig cfg_;
  HessianFactorization fact_;
  int k_threshold_ = 2;
  double cutoff_scale_ = 1.0;
  std::shared_ptr<std::atomic<std::size_t>> damping_events_;
};

Application apply_T(const OscillatoryOperator& op, const TestFunction& f, double x);
Application apply_T1(const OscillatoryOperator& op, const TestFunction& f, double x);
Application apply_T2(const OscillatoryOperator& op, const TestFunction& f, double x);
Application apply_piece(const OscillatoryOperator& op, const DyadicIndex& idx, const TestFunction& f, double x);
Application apply_group(const OscillatoryOperator& op, Region r, const TestFunction& f, double x);
Application apply_damped(const OscillatoryOperator& op, Region r, std::complex<double> z, const TestFunction& f,
                         double x);
Application adjoint_apply(const OscillatoryOperator& op, const TestFunction& g, double y);

}  // namespace osclab

#endif
