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

#include "osclab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "osclab/errors.hpp"
#include "osclab/parallel.hpp"

namespace osclab {

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double gradient_bound(const HomogeneousPhase& phase, double h) {
  return std::max({phase.y_gradient_bound(h), phase.x_gradient_bound(h), 1e-300});
}

std::vector<Eigen::VectorXcd> sampled_family(double h, std::span<const double> nodes) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& nf : dyadic_test_family(h)) out.push_back(sample(nf.f, nodes));
  return out;
}

OperatorConfig at_lambda(const OperatorConfig& base, double lambda) {
  OperatorConfig c = base;
  c.lambda = lambda;
  return c;
}

void check_lambdas(const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw InvalidArgument("lambda sweep is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw InvalidArgument("lambda values must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw InvalidArgument("lambda values must increase");
  }
}

}  // namespace

DecayFit fit_loglog(const std::vector<double>& lambdas, const std::vector<double>& norms) {
  const std::size_t n = lambdas.size();
  if (n < 4) throw InvalidArgument("a decay fit needs at least 4 lambda samples");
  if (norms.size() != n) throw InvalidArgument("lambda and norm lists differ in length");
  const double ratio = lambdas[1] / lambdas[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (!(norms[i] > 0.0)) throw InvalidArgument("norms must be positive to fit a log-log slope");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw InvalidArgument("lambdas must be strictly increasing");
    if (i > 0 && std::abs(lambdas[i] / lambdas[i - 1] - ratio) > 1e-9 * ratio) {
      throw InvalidArgument("lambdas must form a geometric sequence");
    }
  }
  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::log2(lambdas[i]);
    v[i] = std::log2(norms[i]);
  }
  const double mu_u = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double mu_v = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double suu = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu_u) * (u[i] - mu_u);
    suv += (u[i] - mu_u) * (v[i] - mu_v);
  }
  DecayFit fit;
  fit.lambdas = lambdas;
  fit.norms = norms;
  fit.slope = suv / suu;
  fit.intercept = mu_v - fit.slope * mu_u;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = v[i] - (fit.intercept + fit.slope * u[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.slope_stderr = std::sqrt(ss / (n - 2) / suu);
  return fit;
}

std::string RangeReport::to_string() const {
  return "[" + fixed3(theorem_range.lo) + ", " + fixed3(theorem_range.hi) + "] ⊂ [" +
         fixed3(necessary_range.lo) + ", " + fixed3(necessary_range.hi) + "]";
}

RangeReport p_ranges(int n, double mu) {
  if (n < 3) throw InvalidArgument("p ranges need n >= 3");
  if (!(mu > 0.0 && mu < 1.0)) throw InvalidArgument("p ranges need 0 < mu < 1");
  RangeReport r;
  r.n = n;
  r.mu = mu;
  r.theorem_range = {(n - 2.0 * mu) / (n - 1.0 - mu), (n - 2.0 * mu) / (1.0 - mu)};
  r.necessary_range = {n / (n - 1.0 + mu), n / (1.0 - mu)};
  r.lower_gap = {r.necessary_range.lo, r.theorem_range.lo};
  r.upper_gap = {r.theorem_range.hi, r.necessary_range.hi};
  if (!r.necessary_range.contains(r.theorem_range)) {
    throw Error("theorem range escapes the necessary range for n=" + std::to_string(n));
  }
  return r;
}

std::vector<double> LambdaSweep::values() const {
  if (!(start > 0.0) || !(ratio > 1.0) || count < 1) {
    throw InvalidArgument("lambda sweep needs start > 0, ratio > 1 and count >= 1");
  }
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(start * std::pow(ratio, i));
  return out;
}

int GridPolicy::size_for(const HomogeneousPhase& phase, double lambda, double half_width) const {
  const double waves = lambda * gradient_bound(phase, half_width) * 2.0 * half_width / kTwoPi;
  const double want = std::ceil(points_per_wave * waves);
  int n = want > max_size ? max_size : static_cast<int>(want);
  n = std::max(n, min_size);
  if (align > 1) n = (n + align - 1) / align * align;
  return std::min(n, std::max(max_size, min_size));
}

double GridPolicy::spacing_for(const HomogeneousPhase& phase, double lambda, double half_width) const {
  return kTwoPi / (points_per_wave * lambda * gradient_bound(phase, half_width));
}

std::uint64_t lambda_seed(std::uint64_t seed, double lambda) {
  // splitmix64 of the seed mixed with the bits of lambda
  std::uint64_t z = seed ^ std::bit_cast<std::uint64_t>(lambda);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<NamedFunction> dyadic_test_family(double h, int scales) {
  std::vector<NamedFunction> out;
  for (int j = 1; j <= scales; ++j) {
    const double c = 1.5 * std::ldexp(h, -j);
    const double r = 0.5 * std::ldexp(h, -j);
    out.push_back({"bump+" + std::to_string(j), TestFunction::bump(c, r)});
    out.push_back({"bump-" + std::to_string(j), TestFunction::bump(-c, r)});
  }
  out.push_back({"indicator+", TestFunction::indicator(0.5 * h, h)});
  out.push_back({"indicator-", TestFunction::indicator(-h, -0.5 * h)});
  return out;
}

double expected_slope(const OperatorConfig& cfg, const Variant& v) {
  const double n = cfg.phase.degree();
  const double mu = cfg.kernel.mu();
  if (v.kind == VariantKind::Damped) return mu / n - 0.5;
  return -(1.0 - mu) / n;
}

DecayReport decay_fit(const ExperimentSettings& s, const Variant& v, double p, const std::vector<double>& lambdas) {
  check_lambdas(lambdas);
  const double h = s.base.amplitude_half_width;
  DecayReport rep;
  rep.rows.resize(lambdas.size());

  parallel_for(lambdas.size(), s.threads, [&](std::size_t i) {
    const double lam = lambdas[i];
    const OscillatoryOperator op(at_lambda(s.base, lam));
    const int n = s.grid.size_for(s.base.phase, lam, h);
    const auto grid = GridSpec::uniform(n, -h, h, p);
    const auto A = discretize(op, v, grid, s.rule);
    const std::uint64_t seed = lambda_seed(s.seed, lam);

    SweepRow row;
    row.lambda = lam;
    row.variant = v.name();
    row.p = p;
    row.grid_size = n;
    row.error_budget = A.diagonal_budget;

    double two_norm = 0.0;
    if (p == 2.0) {
      two_norm = row.lower_norm = opnorm2(A, 1e-10, 10000, seed).value;
    } else {
      row.lower_norm = opnorm_p_lower(A, p, s.restarts, sampled_family(h, grid.y_nodes), seed, 200).value;
    }
    if (s.resolution_check && lam <= s.resolution_lambda_max) {
      if (p != 2.0) two_norm = opnorm2(A, 1e-10, 10000, seed).value;
      const auto fine = discretize(op, v, GridSpec::uniform(2 * n - 1, -h, h), s.rule);
      const double refined = opnorm2(fine, 1e-10, 10000, seed).value;
      const double change = std::abs(refined - two_norm) / std::max(refined, 1e-300);
      if (change > s.resolution_tol) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s at lambda=%g: opnorm2 changes by %.2f%% from N=%d to N=%d",
                      v.name().c_str(), lam, 100.0 * change, n, 2 * n - 1);
        throw ResolutionInadequate(buf);
      }
    }
    row.schur_upper = schur_bounds(op, v, s.schur_samples).bound(p);
    row.bracket_ok = row.lower_norm <= row.schur_upper * (1.0 + 1e-6) + row.error_budget;
    rep.rows[i] = row;
  });

  std::vector<double> lower, upper;
  for (const auto& r : rep.rows) {
    lower.push_back(r.lower_norm);
    upper.push_back(r.schur_upper);
    rep.brackets_ok = rep.brackets_ok && r.bracket_ok;
  }
  rep.expected_slope = expected_slope(s.base, v);
  if (lambdas.size() >= 4) {
    rep.lower_fit = fit_loglog(lambdas, lower);
    rep.upper_fit = fit_loglog(lambdas, upper);
  }
  return rep;
}

SchurDecayReport schur_decay(const ExperimentSettings& s, const Variant& v, const std::vector<double>& lambdas) {
  check_lambdas(lambdas);
  SchurDecayReport rep;
  rep.rows.resize(lambdas.size());
  parallel_for(lambdas.size(), s.threads, [&](std::size_t i) {
    const OscillatoryOperator op(at_lambda(s.base, lambdas[i]));
    const auto b = schur_bounds(op, v, s.schur_samples);
    rep.rows[i] = {lambdas[i], b.row_sup, b.col_sup};
  });
  std::vector<double> rows, cols;
  for (const auto& r : rep.rows) {
    rows.push_back(r.row_sup);
    cols.push_back(r.col_sup);
  }
  rep.row_fit = fit_loglog(lambdas, rows);
  rep.col_fit = fit_loglog(lambdas, cols);
  rep.expected_slope = -(1.0 - s.base.kernel.mu()) / s.base.phase.degree();
  return rep;
}

double max_forward_ratio(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double best = 0.0;
  double running_min = v[0];
  for (std::size_t j = 1; j < v.size(); ++j) {
    best = std::max(best, v[j] / running_min);
    running_min = std::min(running_min, v[j]);
  }
  return best;
}

DampedReport damped_l2_sweep(const ExperimentSettings& s, Region region, std::complex<double> z,
                             const std::vector<double>& lambdas) {
  const int n = s.base.phase.degree();
  if (n < 3) throw InvalidArgument("damped sweeps need n >= 3");
  const Variant v = Variant::damped(region, z);
  DampedReport rep;
  rep.z = z;
  rep.region = region;
  rep.decay = decay_fit(s, v, 2.0, lambdas);
  const double e = s.base.kernel.mu() / n - 0.5;
  for (const auto& r : rep.decay.rows) {
    rep.log_normalized.push_back(r.lower_norm / (std::pow(r.lambda, e) * std::log2(r.lambda)));
  }
  rep.log_growth = max_forward_ratio(rep.log_normalized);
  return rep;
}

double weak_l1(const Eigen::VectorXcd& values, std::span<const double> weights) {
  if (static_cast<std::size_t>(values.size()) != weights.size()) {
    throw InvalidArgument("weak_l1: values and weights differ in length");
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values(static_cast<Eigen::Index>(a))) > std::abs(values(static_cast<Eigen::Index>(b)));
  });
  // t |{|g| > t}| is maximized as t approaches one of the values from below
  double best = 0.0, measure = 0.0;
  for (std::size_t i : order) {
    measure += weights[i];
    best = std::max(best, std::abs(values(static_cast<Eigen::Index>(i))) * measure);
  }
  return best;
}

EndpointReport endpoint_l1_check(const ExperimentSettings& s, Region region, const std::vector<double>& lambdas) {
  check_lambdas(lambdas);
  const int n = s.base.phase.degree();
  if (n < 3) throw InvalidArgument("endpoint checks need n >= 3");
  const double mu = s.base.kernel.mu();
  const double h = s.base.amplitude_half_width;
  EndpointReport rep;
  rep.region = region;
  rep.z = {-(1.0 - mu) / (n - 2.0), 0.0};
  const Variant v = Variant::damped(region, rep.z);
  const auto family = dyadic_test_family(h);
  rep.rows.resize(lambdas.size());

  parallel_for(lambdas.size(), s.threads, [&](std::size_t i) {
    const double lam = lambdas[i];
    const OscillatoryOperator op(at_lambda(s.base, lam));
    const auto grid = GridSpec::graded(h, 14, 16, s.grid.spacing_for(s.base.phase, lam, h), 1.0);
    const auto A = discretize(op, v, grid, DiagonalRule::Excise);
    EndpointRow row;
    row.lambda = lam;
    row.grid_size = static_cast<int>(grid.x_nodes.size());
    for (const auto& nf : family) {
      const Eigen::VectorXcd f = sample(nf.f, grid.y_nodes);
      const double nf1 = lp_norm(f, grid.y_weights, 1.0);
      const Eigen::VectorXcd g = A.apply(f);
      const double out = region == Region::Y ? lp_norm(g, grid.x_weights, 1.0) : weak_l1(g, grid.x_weights);
      const double ratio = out / nf1;
      if (ratio > row.value) {
        row.value = ratio;
        row.argmax = nf.name;
      }
    }
    rep.rows[i] = row;
  });
  std::vector<double> vals;
  for (const auto& r : rep.rows) vals.push_back(r.value);
  rep.growth = max_forward_ratio(vals);
  return rep;
}

CounterexampleReport counterexample(const ExperimentSettings& s, int n, double mu, double p,
                                    const std::vector<double>& lambdas, bool swapped, int samples) {
  check_lambdas(lambdas);
  if (n < 3) throw InvalidArgument("the counterexample needs n >= 3");
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidArgument("the counterexample needs finite p >= 1");
  if (samples < 2) throw InvalidArgument("the counterexample needs at least 2 samples");
  OperatorConfig base = s.base;
  base.phase = HomogeneousPhase::extreme_pair(n);
  base.kernel = SingularKernel::pure_power(mu, 1.0, 1.0);
  const double h = base.amplitude_half_width;
  const auto f = TestFunction::indicator(0.5 * h, h);

  CounterexampleReport rep;
  rep.n = n;
  rep.mu = mu;
  rep.p = p;
  rep.swapped = swapped;
  rep.rows.resize(lambdas.size());

  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lam = lambdas[i];
    const OscillatoryOperator op(at_lambda(base, lam));
    auto eval = [&](double t) {
      return swapped ? op.adjoint_apply(Variant::full(), f, t).value : op.apply(Variant::full(), f, t).value;
    };
    const double width = 1.0 / (100.0 * lam);
    std::vector<double> small(static_cast<std::size_t>(samples));
    parallel_for(small.size(), s.threads, [&](std::size_t k) {
      small[k] = std::abs(eval(width * static_cast<double>(k) / (samples - 1)));
    });
    // trapezoid rule for int_0^width |Tf|^p
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < small.size(); ++k) {
      acc += 0.5 * (std::pow(small[k], p) + std::pow(small[k + 1], p));
    }
    acc *= width / (samples - 1);

    const auto grid = GridSpec::graded(h, 16, 16, s.grid.spacing_for(base.phase, lam, h), p);
    Eigen::VectorXcd values(static_cast<Eigen::Index>(grid.x_nodes.size()));
    parallel_for(grid.x_nodes.size(), s.threads,
                 [&](std::size_t k) { values(static_cast<Eigen::Index>(k)) = eval(grid.x_nodes[k]); });

    CounterexampleRow row;
    row.lambda = lam;
    row.min_abs = *std::min_element(small.begin(), small.end());
    row.implied_lower = 0.1 * std::pow(width, 1.0 / p);
    row.measured_norm = std::pow(acc, 1.0 / p);
    row.full_norm = lp_norm(values, grid.x_weights, p);
    row.normalized = row.measured_norm * std::pow(lam, (1.0 - mu) / n);
    rep.rows[i] = row;
  }

  // fewer samples than a decay fit requires are allowed here
  const std::size_t m = lambdas.size();
  if (m >= 2) {
    std::vector<double> u, w;
    for (const auto& r : rep.rows) {
      u.push_back(std::log2(r.lambda));
      w.push_back(std::log2(r.measured_norm));
    }
    const double mu_u = std::accumulate(u.begin(), u.end(), 0.0) / m;
    const double mu_w = std::accumulate(w.begin(), w.end(), 0.0) / m;
    double suu = 0.0, suw = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      suu += (u[i] - mu_u) * (u[i] - mu_u);
      suw += (u[i] - mu_u) * (w[i] - mu_w);
    }
    rep.norm_fit.lambdas = lambdas;
    for (const auto& r : rep.rows) rep.norm_fit.norms.push_back(r.measured_norm);
    rep.norm_fit.slope = suw / suu;
    rep.norm_fit.intercept = mu_w - rep.norm_fit.slope * mu_u;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = w[i] - (rep.norm_fit.intercept + rep.norm_fit.slope * u[i]);
      ss += r * r;
    }
    rep.norm_fit.residual = std::sqrt(ss / m);
    rep.norm_fit.slope_stderr = m > 2 ? std::sqrt(ss / (m - 2) / suu) : 0.0;
    rep.growth = rep.rows.back().normalized / rep.rows.front().normalized;
  }
  return rep;
}

AuditReport decomposition_audit(const OperatorConfig& cfg, const TestFunction& f, const std::vector<double>& xs,
                                unsigned threads) {
  const OscillatoryOperator op(cfg);
  AuditReport rep;
  rep.rows.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const double x = xs[i];
    AuditRow r;
    r.x = x;
    r.t = op.apply(Variant::full(), f, x).value;
    r.t1 = op.apply(Variant::near_diagonal(), f, x).value;
    r.t2 = op.apply(Variant::far_diagonal(), f, x).value;
    r.tx = op.apply(Variant::group(Region::X), f, x).value;
    r.tdelta = op.apply(Variant::group(Region::Delta), f, x).value;
    r.ty = op.apply(Variant::group(Region::Y), f, x).value;
    r.split_error = std::abs(r.t - r.t1 - r.t2);
    r.group_error = std::abs(r.t2 - r.tx - r.tdelta - r.ty);
    r.budget = op.truncation_budget(f, x);
    rep.rows[i] = r;
  });
  rep.tolerance = 5.0 * cfg.quad_tol;
  rep.pass = true;
  for (const auto& r : rep.rows) {
    rep.max_split_error = std::max(rep.max_split_error, r.split_error);
    rep.max_group_error = std::max(rep.max_group_error, r.group_error);
    rep.max_budget = std::max(rep.max_budget, r.budget);
    rep.pass = rep.pass && r.split_error <= rep.tolerance && r.group_error <= rep.tolerance + r.budget;
  }
  return rep;
}

}  // namespace osclab
