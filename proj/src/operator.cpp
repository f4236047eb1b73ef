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

#include "osclab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "osclab/errors.hpp"

namespace osclab {

namespace {

using cplx = std::complex<double>;

// Dyadic levels l >= 0 with Psi(2^l |t|) possibly nonzero.
std::array<int, 2> candidate_levels(double t) {
  const int e = std::ilogb(std::abs(t));  // |t| in [2^e, 2^{e+1})
  return {-e - 1, -e};
}

int sign_of(double t) { return t > 0.0 ? 1 : -1; }

}  // namespace

void OperatorConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  if (!(quad_tol > 0.0)) throw InvalidArgument("quad_tol must be positive");
  if (max_panels < 1) throw InvalidArgument("max_panels must be positive");
  if (j_max < 1) throw InvalidArgument("J_max must be at least 1");
  if (!(amplitude_half_width > 0.0 && amplitude_half_width <= 0.5)) {
    throw InvalidArgument("amplitude support must lie inside [-1/2,1/2]^2");
  }
}

Variant Variant::damped(Region r, std::complex<double> z) {
  if (r == Region::Delta) throw InvalidArgument("damped operators exist for regions X and Y only");
  Variant v;
  v.kind = VariantKind::Damped;
  v.region = r;
  v.z = z;
  return v;
}

std::string Variant::name() const {
  switch (kind) {
    case VariantKind::Full:
      return "T";
    case VariantKind::NearDiagonal:
      return "T1";
    case VariantKind::FarDiagonal:
      return "T2";
    case VariantKind::Piece: {
      std::ostringstream os;
      os << "piece(" << piece.j << "," << piece.k << "," << (piece.sigma_x > 0 ? "+" : "-")
         << (piece.sigma_y > 0 ? "+" : "-") << ")";
      return os.str();
    }
    case VariantKind::Group:
      return std::string("T_") + to_string(region);
    case VariantKind::Damped: {
      std::ostringstream os;
      os << "T_" << to_string(region) << "^z(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
      return os.str();
    }
  }
  return "?";
}

Variant variant_from_string(const std::string& name, std::complex<double> z) {
  auto region_of = [&](const std::string& r) {
    if (r == "X") return Region::X;
    if (r == "Y") return Region::Y;
    if (r == "Delta" || r == "D") return Region::Delta;
    throw InvalidArgument("unknown region '" + r + "'");
  };
  if (name == "T") return Variant::full();
  if (name == "T1") return Variant::near_diagonal();
  if (name == "T2") return Variant::far_diagonal();
  if (name == "X" || name == "Y" || name == "Delta") return Variant::group(region_of(name));
  if (name.rfind("group:", 0) == 0) return Variant::group(region_of(name.substr(6)));
  if (name.rfind("damped:", 0) == 0) return Variant::damped(region_of(name.substr(7)), z);
  throw InvalidArgument("unknown operator variant '" + name + "'");
}

OscillatoryOperator::OscillatoryOperator(OperatorConfig cfg)
    : cfg_(std::move(cfg)), damping_events_(std::make_shared<std::atomic<std::size_t>>(0)) {
  cfg_.validate();
  fact_ = factor_hessian(cfg_.phase);
  k_threshold_ = compute_k_threshold(fact_);
  cutoff_scale_ = std::pow(cfg_.lambda, 1.0 / cfg_.phase.degree());
}

double OscillatoryOperator::psi(double x, double y) const {
  const double h = cfg_.amplitude_half_width;
  return bump_phi(x / h) * bump_phi(y / h);
}

double OscillatoryOperator::region_weight(Region r, double x, double y) const {
  if (x == 0.0 || y == 0.0) return 0.0;
  const int sx = sign_of(x);
  const int sy = sign_of(y);
  if (!cfg_.quadrants[quadrant_index(sx, sy)]) return 0.0;
  double w = 0.0;
  for (int j : candidate_levels(x)) {
    if (j < 0 || j > cfg_.j_max) continue;
    const double pj = quadrant_psi(j, sx, x);
    if (pj == 0.0) continue;
    for (int k : candidate_levels(y)) {
      if (k < 0 || k > cfg_.j_max) continue;
      if (classify(j, k, k_threshold_) != r) continue;
      w += pj * quadrant_psi(k, sy, y);
    }
  }
  return w;
}

cplx OscillatoryOperator::damping(double x, double y, cplx z) const {
  if (z == cplx{0.0, 0.0}) return 1.0;
  double h = cfg_.phase.mixed_hessian(x, y);
  if (h == 0.0) {
    if (z.real() >= 0.0) return 0.0;
    damping_events_->fetch_add(1);
    h = cfg_.phase.mixed_hessian(x, std::nextafter(y, y + 1.0));
    if (h == 0.0) return 0.0;
  }
  return std::exp(z * std::log(std::abs(h)));
}

cplx OscillatoryOperator::amplitude(const Variant& v, double x, double y) const {
  if (x == y) return 0.0;
  const double ps = psi(x, y);
  if (ps == 0.0) return 0.0;
  double w = ps;
  if (v.kind != VariantKind::Full) {
    const double cut = bump_phi((x - y) * cutoff_scale_);
    w *= (v.kind == VariantKind::NearDiagonal) ? cut : 1.0 - cut;
  }
  switch (v.kind) {
    case VariantKind::Piece: {
      const auto& p = v.piece;
      if (p.j < 0 || p.k < 0 || p.j > cfg_.j_max || p.k > cfg_.j_max) return 0.0;
      if (!cfg_.quadrants[quadrant_index(p.sigma_x, p.sigma_y)]) return 0.0;
      w *= quadrant_psi(p.j, p.sigma_x, x) * quadrant_psi(p.k, p.sigma_y, y);
      break;
    }
    case VariantKind::Group:
    case VariantKind::Damped:
      w *= region_weight(v.region, x, y);
      break;
    default:
      break;
  }
  if (w == 0.0) return 0.0;
  cplx a = w * cfg_.kernel(x, y);
  if (v.kind == VariantKind::Damped) a *= damping(x, y, v.z);
  return a;
}

cplx OscillatoryOperator::kernel(const Variant& v, double x, double y) const {
  const cplx a = amplitude(v, x, y);
  if (a == cplx{0.0, 0.0}) return a;
  const double ph = cfg_.lambda * cfg_.phase.value(x, y);
  return a * cplx(std::cos(ph), std::sin(ph));
}

void OscillatoryOperator::add_common_breakpoints(const Variant& v, double other, std::vector<double>& pts) const {
  const double h = cfg_.amplitude_half_width;
  pts.push_back(-0.5 * h);
  pts.push_back(0.5 * h);
  if (v.kind != VariantKind::Full) {
    const double r = 1.0 / cutoff_scale_;
    for (double c : {-r, -0.5 * r, 0.5 * r, r}) pts.push_back(other + c);
  }
  if (v.kind == VariantKind::Piece || v.kind == VariantKind::Group || v.kind == VariantKind::Damped) {
    pts.push_back(0.0);
    for (int l = 0; l <= cfg_.j_max + 1; ++l) {
      pts.push_back(std::ldexp(1.0, -l));
      pts.push_back(-std::ldexp(1.0, -l));
    }
  }
  if (v.kind == VariantKind::Damped) {
    for (const auto& lf : fact_.linear_factors) pts.push_back(lf.alpha * other);
  }
}

Application OscillatoryOperator::run(const Variant& v, IntegrandSpec spec) const {
  const QuadResult q = integrate(spec, cfg_.quad_tol, cfg_.max_panels);
  if (!q.converged && cfg_.fail_on_nonconvergence) {
    std::ostringstream msg;
    msg << "quadrature for " << v.name() << " did not reach tol " << cfg_.quad_tol << " (estimate "
        << q.abs_error_estimate << ", " << q.panels_used << " panels)";
    throw QuadratureFailure(msg.str());
  }
  Application out;
  out.value = q.value;
  out.error = q.abs_error_estimate;
  out.panels = q.panels_used;
  out.converged = q.converged;
  return out;
}

Application OscillatoryOperator::apply(const Variant& v, const TestFunction& f, double x) const {
  const double h = cfg_.amplitude_half_width;
  if (f.is_zero() || std::abs(x) >= h) return {};

  auto [lo, hi] = f.support();
  lo = std::max(lo, -h);
  hi = std::min(hi, h);
  if (v.kind == VariantKind::Piece) {
    if (std::abs(x) >= 1.0) return {};
    const double a = std::ldexp(1.0, -v.piece.k - 1);
    const double b = std::ldexp(1.0, -v.piece.k + 1);
    lo = std::max(lo, v.piece.sigma_y > 0 ? a : -b);
    hi = std::min(hi, v.piece.sigma_y > 0 ? b : -a);
  }
  if (!(lo < hi)) return {};

  IntegrandSpec spec;
  spec.a = lo;
  spec.b = hi;
  spec.amplitude = [this, &v, &f, x](double y) {
    const cplx fy = f(y);
    if (fy == cplx{0.0, 0.0}) return fy;
    return amplitude(v, x, y) * fy;
  };
  const double lam = cfg_.lambda;
  spec.phase = [this, x, lam](double y) { return lam * cfg_.phase.value(x, y); };
  if (v.has_singular_diagonal()) spec.singular_points.push_back(x);
  spec.singular_exponent = cfg_.kernel.mu();
  spec.singular_bound = cfg_.kernel.bound() * f.sup_bound();

  // max_y |dS/dy(x,y)| <= sum_k k |a_k| |x|^{n-k} h^{k-1}
  const int n = cfg_.phase.degree();
  double grad = 0.0;
  for (int k = 1; k < n; ++k) {
    grad += k * std::abs(cfg_.phase.coeff(k)) * std::pow(std::abs(x), n - k) * std::pow(h, k - 1);
  }
  spec.osc_scale = lam * grad;

  spec.breakpoints = f.breakpoints();
  add_common_breakpoints(v, x, spec.breakpoints);

  Application out = run(v, std::move(spec));
  if (v.kind == VariantKind::Group) out.truncation_budget = truncation_budget(f, x);
  return out;
}

Application OscillatoryOperator::adjoint_apply(const Variant& v, const TestFunction& g, double y) const {
  const double h = cfg_.amplitude_half_width;
  if (g.is_zero() || std::abs(y) >= h) return {};

  auto [lo, hi] = g.support();
  lo = std::max(lo, -h);
  hi = std::min(hi, h);
  if (v.kind == VariantKind::Piece) {
    const double a = std::ldexp(1.0, -v.piece.j - 1);
    const double b = std::ldexp(1.0, -v.piece.j + 1);
    lo = std::max(lo, v.piece.sigma_x > 0 ? a : -b);
    hi = std::min(hi, v.piece.sigma_x > 0 ? b : -a);
  }
  if (!(lo < hi)) return {};

  IntegrandSpec spec;
  spec.a = lo;
  spec.b = hi;
  spec.amplitude = [this, &v, &g, y](double x) {
    const cplx gx = g(x);
    if (gx == cplx{0.0, 0.0}) return gx;
    return std::conj(amplitude(v, x, y)) * gx;
  };
  const double lam = cfg_.lambda;
  spec.phase = [this, y, lam](double x) { return -lam * cfg_.phase.value(x, y); };
  if (v.has_singular_diagonal()) spec.singular_points.push_back(y);
  spec.singular_exponent = cfg_.kernel.mu();
  spec.singular_bound = cfg_.kernel.bound() * g.sup_bound();

  const int n = cfg_.phase.degree();
  double grad = 0.0;
  for (int k = 1; k < n; ++k) {
    grad += (n - k) * std::abs(cfg_.phase.coeff(k)) * std::pow(h, n - k - 1) * std::pow(std::abs(y), k);
  }
  spec.osc_scale = lam * grad;

  spec.breakpoints = g.breakpoints();
  add_common_breakpoints(v, y, spec.breakpoints);
  return run(v, std::move(spec));
}

double OscillatoryOperator::truncation_budget(const TestFunction& f, double x) const {
  const double mu = cfg_.kernel.mu();
  const double scale = cfg_.kernel.bound() * f.sup_bound();
  const double cell = std::ldexp(1.0, -cfg_.j_max);
  // dropped y-levels: |y| < 2^{-J}; the worst placement of x centres the window
  double budget = scale * 2.0 * std::pow(cell, 1.0 - mu) / (1.0 - mu);
  // dropped x-levels: the whole row is lost
  const double lost_row = bump_phi(std::ldexp(std::abs(x), cfg_.j_max));
  if (lost_row > 0.0) {
    budget += lost_row * scale * 2.0 * std::pow(cfg_.amplitude_half_width, 1.0 - mu) / (1.0 - mu);
  }
  return budget;
}

Application apply_T(const OscillatoryOperator& op, const TestFunction& f, double x) {
  return op.apply(Variant::full(), f, x);
}

Application apply_T1(const OscillatoryOperator& op, const TestFunction& f, double x) {
  return op.apply(Variant::near_diagonal(), f, x);
}

Application apply_T2(const OscillatoryOperator& op, const TestFunction& f, double x) {
  return op.apply(Variant::far_diagonal(), f, x);
}

Application apply_piece(const OscillatoryOperator& op, const DyadicIndex& idx, const TestFunction& f, double x) {
  return op.apply(Variant::dyadic_piece(idx), f, x);
}

Application apply_group(const OscillatoryOperator& op, Region r, const TestFunction& f, double x) {
  return op.apply(Variant::group(r), f, x);
}

Application apply_damped(const OscillatoryOperator& op, Region r, std::complex<double> z, const TestFunction& f,
                         double x) {
  return op.apply(Variant::damped(r, z), f, x);
}

Application adjoint_apply(const OscillatoryOperator& op, const TestFunction& g, double y) {
  return op.adjoint_apply(Variant::full(), g, y);
}

}  // namespace osclab
