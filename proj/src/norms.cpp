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

#include "osclab/norms.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "osclab/errors.hpp"
#include "osclab/parallel.hpp"

namespace osclab {

namespace {

using cplx = std::complex<double>;

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

bool shared_uniform_grid(const GridSpec& g, double& spacing) {
  if (g.x_nodes != g.y_nodes || g.x_nodes.size() < 3) return false;
  const auto& n = g.x_nodes;
  spacing = (n.back() - n.front()) / static_cast<double>(n.size() - 1);
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (std::abs((n[i] - n[i - 1]) - spacing) > 1e-9 * spacing) return false;
  }
  return true;
}

// sgn(v) |v|^{p-1} / ||v||_p^{p-1}: the unit-norm dual element of v.
Eigen::VectorXcd duality_map(const Eigen::VectorXcd& v, std::span<const double> w, double p) {
  const double nrm = lp_norm(v, w, p);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  if (nrm == 0.0) return out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a == 0.0) continue;
    out(i) = (v(i) / a) * std::pow(a / nrm, p - 1.0);
  }
  return out;
}

double sup_of(const std::function<double(double)>& fn, double lo, double hi, int samples, double& argmax) {
  const double step = (hi - lo) / samples;
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i < samples; ++i) {
    const double v = fn(lo + (i + 0.5) * step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  argmax = lo + (best_i + 0.5) * step;
  const double a = std::max(lo, argmax - step);
  const double b = std::min(hi, argmax + step);
  std::uintmax_t iters = 60;
  const auto [xm, negv] =
      boost::math::tools::brent_find_minima([&](double t) { return -fn(t); }, a, b, 30, iters);
  if (-negv > best) {
    best = -negv;
    argmax = xm;
  }
  return best;
}

}  // namespace

GridSpec GridSpec::uniform(int n, double lo, double hi, double p) {
  if (n < 2 || !(lo < hi)) throw InvalidArgument("uniform grid needs n >= 2 and lo < hi");
  GridSpec g;
  g.p = p;
  g.x_nodes.resize(static_cast<std::size_t>(n));
  g.x_weights.assign(static_cast<std::size_t>(n), (hi - lo) / (n - 1));
  for (int i = 0; i < n; ++i) g.x_nodes[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  g.x_nodes.back() = hi;
  g.x_weights.front() *= 0.5;
  g.x_weights.back() *= 0.5;
  g.y_nodes = g.x_nodes;
  g.y_weights = g.x_weights;
  return g;
}

GridSpec GridSpec::graded(double half_width, int levels, int per_level, double max_spacing, double p) {
  if (!(half_width > 0.0) || levels < 0 || per_level < 1 || !(max_spacing > 0.0)) {
    throw InvalidArgument("graded grid needs positive half width, spacing and per-level count");
  }
  std::vector<double> pos{0.0};
  auto fill = [&](double a, double b) {
    const auto m = static_cast<int>(std::max<double>(per_level, std::ceil((b - a) / max_spacing)));
    for (int i = 1; i <= m; ++i) pos.push_back(i == m ? b : a + (b - a) * i / m);
  };
  fill(0.0, std::ldexp(half_width, -levels));
  for (int l = levels - 1; l >= 0; --l) fill(std::ldexp(half_width, -l - 1), std::ldexp(half_width, -l));

  GridSpec g;
  g.p = p;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it != 0.0) g.x_nodes.push_back(-*it);
  }
  g.x_nodes.insert(g.x_nodes.end(), pos.begin(), pos.end());
  const std::size_t n = g.x_nodes.size();
  g.x_weights.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = 0.5 * (g.x_nodes[i + 1] - g.x_nodes[i]);
    g.x_weights[i] += d;
    g.x_weights[i + 1] += d;
  }
  g.y_nodes = g.x_nodes;
  g.y_weights = g.x_weights;
  return g;
}

void GridSpec::validate() const {
  auto check = [](const std::vector<double>& nodes, const std::vector<double>& w, const char* axis) {
    if (nodes.empty() || nodes.size() != w.size()) {
      throw InvalidArgument(std::string(axis) + " nodes and weights must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!(w[i] > 0.0)) throw InvalidArgument(std::string(axis) + " weights must be positive");
      if (i > 0 && !(nodes[i] > nodes[i - 1])) {
        throw InvalidArgument(std::string(axis) + " nodes must be strictly increasing");
      }
    }
  };
  check(x_nodes, x_weights, "x");
  check(y_nodes, y_weights, "y");
  if (!(p >= 1.0)) throw InvalidArgument("p must be >= 1");
}

std::string to_string(DiagonalRule r) { return r == DiagonalRule::Excise ? "excise" : "zeta"; }

Eigen::VectorXcd DiscretizedOperator::apply(const Eigen::VectorXcd& f) const {
  return matrix * f.cwiseProduct(as_vector(grid.y_weights).cast<cplx>());
}

Eigen::VectorXcd DiscretizedOperator::apply_adjoint(const Eigen::VectorXcd& g) const {
  return matrix.adjoint() * g.cwiseProduct(as_vector(grid.x_weights).cast<cplx>());
}

DiscretizedOperator DiscretizedOperator::adjoint() const {
  DiscretizedOperator out;
  out.matrix = matrix.adjoint();
  out.grid = grid;
  std::swap(out.grid.x_nodes, out.grid.y_nodes);
  std::swap(out.grid.x_weights, out.grid.y_weights);
  out.variant = variant + "*";
  out.rule = rule;
  out.diagonal_budget = diagonal_budget;
  return out;
}

DiscretizedOperator discretize(const OscillatoryOperator& op, const Variant& variant, const GridSpec& grid,
                               DiagonalRule rule, unsigned threads) {
  grid.validate();
  const auto rows = static_cast<Eigen::Index>(grid.x_nodes.size());
  const auto cols = static_cast<Eigen::Index>(grid.y_nodes.size());

  DiscretizedOperator out;
  out.grid = grid;
  out.variant = variant.name();
  out.matrix.resize(rows, cols);

  double spacing = 0.0;
  const bool uniform = shared_uniform_grid(grid, spacing);
  if (rule == DiagonalRule::ZetaCorrected && !(uniform && variant.has_singular_diagonal())) {
    rule = DiagonalRule::Excise;
  }
  out.rule = rule;

  const auto& cfg = op.config();
  const double mu = cfg.kernel.mu();
  if (variant.has_singular_diagonal()) {
    double h = 0.0;
    for (std::size_t i = 1; i < grid.y_nodes.size(); ++i) h = std::max(h, grid.y_nodes[i] - grid.y_nodes[i - 1]);
    out.diagonal_budget = cfg.kernel.bound() * 2.0 * std::pow(0.5 * h, 1.0 - mu) / (1.0 - mu);
  }
  const double zeta_weight = rule == DiagonalRule::ZetaCorrected
                                 ? -2.0 * std::riemann_zeta(mu) * std::pow(spacing, 1.0 - mu)
                                 : 0.0;

  parallel_for(static_cast<std::size_t>(rows), threads, [&](std::size_t m) {
    const double x = grid.x_nodes[m];
    const auto r = static_cast<Eigen::Index>(m);
    for (Eigen::Index n = 0; n < cols; ++n) {
      out.matrix(r, n) = op.kernel(variant, x, grid.y_nodes[static_cast<std::size_t>(n)]);
    }
    if (rule == DiagonalRule::ZetaCorrected) {
      // smooth factor of the kernel on the diagonal; the cutoff of T1 is 1 there
      const double reg = cfg.kernel.regular_part(x, x) * op.psi(x, x);
      const double ph = cfg.lambda * cfg.phase.value(x, x);
      out.matrix(r, r) = zeta_weight * reg * cplx(std::cos(ph), std::sin(ph)) / grid.y_weights[m];
    }
  });
  return out;
}

double lp_norm(std::span<const cplx> values, std::span<const double> weights, double p) {
  if (values.size() != weights.size()) throw InvalidArgument("lp_norm: values and weights differ in length");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm needs p >= 1");
  // scale by the max to avoid under/overflow for large p
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * std::pow(std::abs(values[i]) / m, p);
  return m * std::pow(acc, 1.0 / p);
}

double lp_norm(const Eigen::VectorXcd& values, std::span<const double> weights, double p) {
  return lp_norm(std::span<const cplx>(values.data(), static_cast<std::size_t>(values.size())), weights, p);
}

Eigen::VectorXcd sample(const TestFunction& f, std::span<const double> nodes) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) v(static_cast<Eigen::Index>(i)) = f(nodes[i]);
  return v;
}

NormEstimate opnorm2(const DiscretizedOperator& A, double tol, int max_iter, std::uint64_t seed) {
  const Eigen::VectorXcd sx = as_vector(A.grid.x_weights).cwiseSqrt().cast<cplx>();
  const Eigen::VectorXcd sy = as_vector(A.grid.y_weights).cwiseSqrt().cast<cplx>();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(A.matrix.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(normal(rng), normal(rng));
  v.normalize();

  NormEstimate est;
  double sigma = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd u = sx.cwiseProduct(A.matrix * sy.cwiseProduct(v));
    const double next = u.norm();
    Eigen::VectorXcd w = sy.cwiseProduct(A.matrix.adjoint() * sx.cwiseProduct(u));
    est.iterations = it;
    const double wn = w.norm();
    if (wn == 0.0) {
      sigma = next;
      est.converged = true;
      break;
    }
    const bool done = it > 1 && std::abs(next - sigma) <= tol * next;
    sigma = next;
    v = w / wn;
    if (done) {
      est.converged = true;
      break;
    }
  }
  est.value = sigma;
  est.maximizer = sy.cwiseInverse().cwiseProduct(v);
  return est;
}

NormEstimate opnorm_p_lower(const DiscretizedOperator& A, double p, int restarts,
                            const std::vector<Eigen::VectorXcd>& designed_starts, std::uint64_t seed,
                            int max_iter) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("opnorm_p_lower needs 1 < p < infinity");
  const auto& wx = A.grid.x_weights;
  const auto& wy = A.grid.y_weights;
  const double q = p / (p - 1.0);

  std::vector<Eigen::VectorXcd> starts = designed_starts;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXcd s(A.matrix.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = normal(rng);
    starts.push_back(std::move(s));
  }

  NormEstimate best;
  for (const auto& start : starts) {
    if (start.size() != A.matrix.cols()) throw InvalidArgument("start vector has the wrong length");
    const double n0 = lp_norm(start, wy, p);
    if (n0 == 0.0) continue;
    Eigen::VectorXcd f = start / n0;
    double value = 0.0;
    int it = 0;
    bool converged = false;
    for (it = 1; it <= max_iter; ++it) {
      const Eigen::VectorXcd y = A.apply(f);
      const double ratio = lp_norm(y, wx, p);
      if (ratio > best.value) {
        best.value = ratio;
        best.maximizer = f;
      }
      if (ratio == 0.0) break;
      if (it > 1 && ratio <= value * (1.0 + 1e-13)) {
        value = std::max(value, ratio);
        converged = true;
        break;
      }
      value = ratio;
      const Eigen::VectorXcd z = A.apply_adjoint(duality_map(y, wx, p));
      if (z.norm() == 0.0) break;
      f = duality_map(z, wy, q);
    }
    best.iterations += it;
    best.converged = best.converged || converged;
  }
  return best;
}

double SchurBounds::bound(double p) const {
  if (std::isinf(p)) return row_sup;
  if (!(p >= 1.0)) throw InvalidArgument("Schur bound needs p >= 1");
  const double inv_p = 1.0 / p;
  return col_sup * inv_p + row_sup * (1.0 - inv_p);
}

SchurBounds schur_bounds(const SchurProblem& pr) {
  auto line_integral = [&](double fixed, bool rows) {
    IntegrandSpec spec;
    spec.a = rows ? pr.y_lo : pr.x_lo;
    spec.b = rows ? pr.y_hi : pr.x_hi;
    spec.amplitude = [&, fixed, rows](double t) -> cplx {
      if (t == fixed && pr.singular_diagonal) return 0.0;
      return rows ? pr.abs_kernel(fixed, t) : pr.abs_kernel(t, fixed);
    };
    if (pr.singular_diagonal) spec.singular_points.push_back(fixed);
    spec.singular_exponent = pr.mu;
    spec.singular_bound = pr.singular_bound;
    spec.breakpoints = pr.breakpoints;
    for (double o : pr.offsets) spec.breakpoints.push_back(fixed + o);
    const QuadResult q = integrate(spec, pr.tol);
    return q.value.real();
  };

  SchurBounds out;
  out.row_sup = sup_of([&](double x) { return line_integral(x, true); }, pr.x_lo, pr.x_hi, pr.samples,
                       out.row_argmax);
  out.col_sup = sup_of([&](double y) { return line_integral(y, false); }, pr.y_lo, pr.y_hi, pr.samples,
                       out.col_argmax);
  return out;
}

SchurBounds schur_bounds(const OscillatoryOperator& op, const Variant& variant, int samples) {
  const auto& cfg = op.config();
  const double h = cfg.amplitude_half_width;
  SchurProblem pr;
  pr.abs_kernel = [&op, &variant](double x, double y) { return std::abs(op.amplitude(variant, x, y)); };
  pr.x_lo = pr.y_lo = -h;
  pr.x_hi = pr.y_hi = h;
  pr.singular_diagonal = variant.has_singular_diagonal();
  pr.mu = cfg.kernel.mu();
  pr.singular_bound = cfg.kernel.bound();
  pr.breakpoints = {-0.5 * h, 0.5 * h};
  if (variant.kind != VariantKind::Full) {
    const double r = 1.0 / op.cutoff_scale();
    pr.offsets = {-r, -0.5 * r, 0.5 * r, r};
  }
  if (variant.kind == VariantKind::Piece || variant.kind == VariantKind::Group ||
      variant.kind == VariantKind::Damped) {
    for (int l = 0; l <= cfg.j_max + 1; ++l) {
      pr.breakpoints.push_back(std::ldexp(1.0, -l));
      pr.breakpoints.push_back(-std::ldexp(1.0, -l));
    }
  }
  pr.tol = cfg.quad_tol;
  pr.samples = samples;
  return schur_bounds(pr);
}

}  // namespace osclab
