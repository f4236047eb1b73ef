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

#include "osclab/phase.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "osclab/errors.hpp"

namespace osclab {

namespace {

using cplx = std::complex<double>;

// m (m-1) ... (m-d+1); zero when d > m.
double falling(int m, int d) {
  if (d > m) return 0.0;
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= static_cast<double>(m - i);
  return r;
}

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Horner evaluation of the d-th derivative of q(t) = sum_i c_i t^i.
cplx poly_derivative(std::span<const double> c, int d, cplx t) {
  cplx acc = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= d; --i) {
    acc = acc * t + c[static_cast<std::size_t>(i)] * falling(i, d);
  }
  return acc;
}

// Scale for a relative residual test of the d-th derivative.
double poly_derivative_scale(std::span<const double> c, int d, double r) {
  double acc = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= d; --i) {
    acc = acc * r + std::abs(c[static_cast<std::size_t>(i)]) * falling(i, d);
  }
  return acc;
}

cplx newton_polish(std::span<const double> c, int d, cplx root) {
  for (int it = 0; it < 60; ++it) {
    const cplx f = poly_derivative(c, d, root);
    const cplx df = poly_derivative(c, d + 1, root);
    if (std::abs(df) == 0.0) break;
    const cplx step = f / df;
    const cplx next = root - step;
    if (std::abs(poly_derivative(c, d, next)) > std::abs(f)) break;
    root = next;
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(root))) break;
  }
  return root;
}

struct Root {
  cplx value;
  int multiplicity;
};

std::vector<Root> cluster_roots(std::span<const double> c, std::vector<cplx> raw, double strict_tol) {
  // an m-fold root scatters by about eps^{1/m}; 1e-3 covers m <= 5
  constexpr double kLooseTol = 1e-3;
  // raw eigenvalues of an m-fold root scatter symmetrically around it, so
  // clusters are averaged before polishing

  // single-linkage at the loose tolerance
  const std::size_t n = raw.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = 1.0 + std::max(std::abs(raw[i]), std::abs(raw[j]));
      if (std::abs(raw[i] - raw[j]) <= kLooseTol * scale) parent[find(i)] = find(j);
    }
  }

  std::vector<std::vector<cplx>> groups;
  std::vector<std::size_t> label(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (label[r] == n) {
      label[r] = groups.size();
      groups.emplace_back();
    }
    groups[label[r]].push_back(raw[i]);
  }

  std::vector<Root> out;
  for (const auto& g : groups) {
    const int m = static_cast<int>(g.size());
    cplx mean = std::accumulate(g.begin(), g.end(), cplx{0.0}) / static_cast<double>(m);
    if (m == 1) {
      out.push_back({newton_polish(c, 0, g.front()), 1});
      continue;
    }
    double spread = 0.0;
    for (const auto& r : g) spread = std::max(spread, std::abs(r - mean));
    const double scale = 1.0 + std::abs(mean);
    bool multiple = spread <= strict_tol * scale;
    if (!multiple) {
      // accept as an m-fold root only if q, q', ..., q^{(m-1)} all vanish at the mean
      multiple = true;
      for (int d = 0; d < m && multiple; ++d) {
        const double resid = std::abs(poly_derivative(c, d, mean));
        const double ref = poly_derivative_scale(c, d, std::abs(mean));
        if (resid > 1e-11 * std::max(ref, 1e-300)) multiple = false;
      }
    }
    if (!multiple) {
      // distinct nearby roots: accept them if Newton separates them cleanly
      std::vector<cplx> polished;
      for (const auto& r : g) polished.push_back(newton_polish(c, 0, r));
      double gap = INFINITY;
      for (std::size_t i = 0; i < polished.size(); ++i) {
        for (std::size_t j = i + 1; j < polished.size(); ++j) gap = std::min(gap, std::abs(polished[i] - polished[j]));
      }
      if (gap <= strict_tol * scale) {
        std::ostringstream msg;
        msg << "cannot resolve " << m << " roots near " << mean.real() << (mean.imag() >= 0 ? "+" : "")
            << mean.imag() << "i (spread " << spread << ")";
        throw RootIsolationFailure(msg.str());
      }
      for (const auto& r : polished) out.push_back({r, 1});
      continue;
    }
    mean = newton_polish(c, m - 1, mean);
    out.push_back({mean, m});
  }
  return out;
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// "x", "2x", "-1.5x": coefficient with 1 omitted.
std::string fmt_term(double coef, const std::string& mono) {
  const std::string c = fmt_num(coef);
  if (c == "1") return mono;
  if (c == "-1") return "-" + mono;
  return c + mono;
}

std::string fmt_quadratic(const QuadraticFactor& q) {
  std::string s;
  auto append = [&](double coef, const std::string& mono) {
    if (coef == 0.0) return;
    std::string t = fmt_term(coef, mono);
    if (!s.empty() && t.front() != '-') s += "+";
    s += t;
  };
  append(q.A, "x^2");
  append(q.B, "xy");
  append(q.C, "y^2");
  return "(" + s + ")";
}

}  // namespace

HomogeneousPhase::HomogeneousPhase(int degree, std::vector<double> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree_ < 2) throw InvalidArgument("phase degree must be at least 2");
  if (static_cast<int>(coeffs_.size()) != degree_ - 1) {
    throw InvalidArgument("phase of degree " + std::to_string(degree_) + " needs " +
                          std::to_string(degree_ - 1) + " coefficients, got " +
                          std::to_string(coeffs_.size()));
  }
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw InvalidArgument("phase coefficients must be finite");
  }
  if (coeffs_.front() == 0.0 || coeffs_.back() == 0.0) {
    throw InvalidArgument("phase needs a_1 * a_{n-1} != 0");
  }
}

double HomogeneousPhase::partial(int dx, int dy, double x, double y) const {
  if (dx < 0 || dy < 0) throw InvalidArgument("negative derivative order");
  if (dx + dy > degree_) return 0.0;
  double sum = 0.0;
  for (int k = 1; k < degree_; ++k) {
    const double a = coeffs_[static_cast<std::size_t>(k - 1)];
    if (a == 0.0) continue;
    const int px = degree_ - k;
    const int py = k;
    const double f = falling(px, dx) * falling(py, dy);
    if (f == 0.0) continue;
    sum += a * f * ipow(x, px - dx) * ipow(y, py - dy);
  }
  return sum;
}

double HomogeneousPhase::y_gradient_bound(double half_width) const {
  double b = 0.0;
  for (int k = 1; k < degree_; ++k) b += k * std::abs(coeff(k));
  return b * ipow(half_width, degree_ - 1);
}

double HomogeneousPhase::x_gradient_bound(double half_width) const {
  double b = 0.0;
  for (int k = 1; k < degree_; ++k) b += (degree_ - k) * std::abs(coeff(k));
  return b * ipow(half_width, degree_ - 1);
}

std::vector<double> HomogeneousPhase::mixed_hessian_coeffs() const {
  // d^2/dxdy a_k x^{n-k} y^k = a_k (n-k) k x^{n-k-1} y^{k-1}
  std::vector<double> b(static_cast<std::size_t>(degree_ - 1));
  for (int k = 1; k < degree_; ++k) {
    b[static_cast<std::size_t>(k - 1)] = coeff(k) * (degree_ - k) * k;
  }
  return b;
}

HomogeneousPhase HomogeneousPhase::negated() const {
  std::vector<double> c = coeffs_;
  for (auto& v : c) v = -v;
  return HomogeneousPhase(degree_, std::move(c));
}

HomogeneousPhase HomogeneousPhase::extreme_pair(int degree) {
  std::vector<double> c(static_cast<std::size_t>(std::max(degree - 1, 1)), 0.0);
  c.front() = 1.0;
  c.back() = 1.0;
  return HomogeneousPhase(degree, std::move(c));
}

int HessianFactorization::total_degree() const {
  int d = x_exponent + 2 * static_cast<int>(quad_factors.size());
  for (const auto& f : linear_factors) d += f.multiplicity;
  return d;
}

double HessianFactorization::evaluate(double x, double y) const {
  double v = leading * ipow(x, x_exponent);
  for (const auto& f : linear_factors) v *= ipow(y - f.alpha * x, f.multiplicity);
  for (const auto& q : quad_factors) v *= q(x, y);
  return v;
}

std::string HessianFactorization::to_string() const {
  std::vector<std::string> parts;
  if (x_exponent == 1) parts.emplace_back("x");
  if (x_exponent > 1) parts.push_back("x^" + std::to_string(x_exponent));
  for (const auto& f : linear_factors) {
    std::string s;
    if (f.alpha == 0.0) {
      s = "y";
    } else {
      const std::string ax = fmt_term(std::abs(f.alpha), "x");
      s = "(y" + std::string(f.alpha > 0 ? "-" : "+") + ax + ")";
    }
    if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
    parts.push_back(std::move(s));
  }
  for (const auto& q : quad_factors) parts.push_back(fmt_quadratic(q));

  std::string out = fmt_num(leading);
  for (const auto& p : parts) out += " * " + p;
  return out;
}

HessianFactorization factor_binary_form(std::span<const double> coeffs) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  int lo = -1;
  int hi = -1;
  for (int i = 0; i <= d; ++i) {
    if (coeffs[static_cast<std::size_t>(i)] != 0.0) {
      if (lo < 0) lo = i;
      hi = i;
    }
  }
  if (lo < 0) throw DegenerateHessian("mixed Hessian vanishes identically");

  HessianFactorization fact;
  fact.leading = coeffs[static_cast<std::size_t>(hi)];
  fact.x_exponent = d - hi;

  // q(t) = P(1,t) / t^lo, with q(0) != 0
  std::vector<double> q(coeffs.begin() + lo, coeffs.begin() + hi + 1);
  const int deg = hi - lo;

  std::vector<Root> roots;
  if (deg == 1) {
    roots.push_back({cplx(-q[0] / q[1], 0.0), 1});
  } else if (deg > 1) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -q[static_cast<std::size_t>(i)] / q.back();
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    if (es.info() != Eigen::Success) throw RootIsolationFailure("companion eigenvalue solve failed");
    std::vector<cplx> raw(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) raw[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    roots = cluster_roots(q, std::move(raw), fact.cluster_tolerance);
  }

  std::vector<LinearFactor> linear;
  if (lo > 0) linear.push_back({0.0, lo});
  int upper = 0;
  int lower = 0;
  for (const auto& r : roots) {
    const double re = r.value.real();
    const double im = r.value.imag();
    if (std::abs(im) <= fact.cluster_tolerance * (1.0 + std::abs(re))) {
      linear.push_back({re, r.multiplicity});
    } else if (im > 0.0) {
      upper += r.multiplicity;
      // (y - r x)(y - conj(r) x) = |r|^2 x^2 - 2 Re(r) x y + y^2
      QuadraticFactor qf{re * re + im * im, -2.0 * re, 1.0};
      if (qf.B * qf.B >= 4.0 * qf.A * qf.C) {
        // numerically indefinite: split back into two real lines
        const double disc = std::sqrt(std::max(0.0, qf.B * qf.B - 4.0 * qf.A * qf.C));
        linear.push_back({re - disc / 2.0, r.multiplicity});
        linear.push_back({re + disc / 2.0, r.multiplicity});
      } else {
        for (int m = 0; m < r.multiplicity; ++m) fact.quad_factors.push_back(qf);
      }
    } else {
      lower += r.multiplicity;
    }
  }
  std::sort(linear.begin(), linear.end(), [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
  for (const auto& f : linear) {
    if (!fact.linear_factors.empty() &&
        std::abs(f.alpha - fact.linear_factors.back().alpha) <= fact.cluster_tolerance * (1.0 + std::abs(f.alpha))) {
      fact.linear_factors.back().multiplicity += f.multiplicity;
    } else {
      fact.linear_factors.push_back(f);
    }
  }
  if (upper != lower) {
    throw RootIsolationFailure("complex roots do not pair into conjugates");
  }
  return fact;
}

HessianFactorization factor_hessian(const HomogeneousPhase& phase) {
  const auto b = phase.mixed_hessian_coeffs();
  return factor_binary_form(b);
}

const char* to_string(Region r) {
  switch (r) {
    case Region::X:
      return "X";
    case Region::Delta:
      return "Delta";
    case Region::Y:
      return "Y";
  }
  return "?";
}

int compute_k_threshold(const HessianFactorization& fact) {
  double worst = 1.0;
  for (const auto& f : fact.linear_factors) {
    if (f.alpha == 0.0) continue;
    worst = std::max({worst, std::abs(f.alpha), 1.0 / std::abs(f.alpha)});
  }
  int k = 2;
  while (std::ldexp(1.0, k) < 4.0 * worst) ++k;
  return k;
}

}  // namespace osclab
