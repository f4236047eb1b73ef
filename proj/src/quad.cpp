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

#include "osclab/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "osclab/errors.hpp"

namespace osclab {

namespace {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kMinGradedWidth = 1e-14;
constexpr double kRelativeGradedWidth = 1e-6;

struct Panel {
  double a;
  double b;
  Complex value;
  double error;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

class Evaluator {
public:
  explicit Evaluator(const IntegrandSpec& s) : spec_(s) {}

  Complex operator()(double y) const {
    const Complex amp = spec_.amplitude(y);
    if (!spec_.phase || amp == Complex{0.0, 0.0}) return amp;
    const double ph = spec_.phase(y);
    return amp * Complex(std::cos(ph), std::sin(ph));
  }

  Panel gauss_kronrod(double a, double b) const {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex fc = (*this)(c);
    Complex kron = fc * kWgk[7];
    Complex gauss = fc * kWg[3];
    for (int i = 0; i < 7; ++i) {
      const double dx = h * kXgk[static_cast<std::size_t>(i)];
      const Complex f = (*this)(c - dx) + (*this)(c + dx);
      kron += kWgk[static_cast<std::size_t>(i)] * f;
      if (i % 2 == 1) gauss += kWg[static_cast<std::size_t>(i / 2)] * f;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
  }

private:
  const IntegrandSpec& spec_;
};

bool contains(const std::vector<double>& pts, double v) {
  return std::find(pts.begin(), pts.end(), v) != pts.end();
}

// Panels of [lo,hi] no wider than max_width.
void push_uniform(const Evaluator& ev, double lo, double hi, double max_width, std::vector<Panel>& out) {
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
  for (int i = 0; i < n; ++i) {
    const double a = lo + (hi - lo) * i / n;
    const double b = (i + 1 == n) ? hi : lo + (hi - lo) * (i + 1) / n;
    out.push_back(ev.gauss_kronrod(a, b));
  }
}

struct Tail {
  Complex value{0.0, 0.0};
  double error = 0.0;
};

// Geometric panels on the segment with a singular endpoint `s` and regular
// endpoint `r`. The innermost piece of width w is accounted for by the tail.
Tail push_graded(const Evaluator& ev, const IntegrandSpec& spec, double s, double r, double tol,
                 double max_width, std::vector<Panel>& out) {
  const double len = std::abs(r - s);
  const double dir = r > s ? 1.0 : -1.0;
  const double mu = spec.singular_exponent;

  std::vector<Complex> ring_values;  // graded panel values, outermost first
  double w = len;
  for (;;) {
    const double next = 0.5 * w;
    const double inner = s + dir * next;
    const double outer = s + dir * w;
    const std::size_t before = out.size();
    push_uniform(ev, std::min(inner, outer), std::max(inner, outer), max_width, out);
    Complex ring{0.0, 0.0};
    for (std::size_t i = before; i < out.size(); ++i) ring += out[i].value;
    ring_values.push_back(ring);
    w = next;

    // rounding of y - s makes the rings noisy (relative eps |s| / w), so
    // grading stops well above that
    const bool tiny = w <= std::max(kMinGradedWidth, kRelativeGradedWidth * std::abs(s));
    bool negligible = false;
    if (mu > 0.0) negligible = spec.singular_bound * std::pow(w, 1.0 - mu) / (1.0 - mu) < tol / 10.0;
    if ((tiny || negligible) && ring_values.size() >= 3) break;
  }

  Tail tail;
  if (mu > 0.0) {
    // Rings of t^{-mu} (g0 + g1 t + ...) shrink by r1 = 2^{mu-1} and r2 = 2^{mu-2};
    // fit both from two consecutive rings and sum the geometric remainders.
    const double r1 = std::pow(2.0, mu - 1.0);
    const double r2 = std::pow(2.0, mu - 2.0);
    auto remainder = [&](Complex prev, Complex last) {
      const Complex b = (last - r1 * prev) / (1.0 - r1 / r2);
      const Complex a = last - b;
      return a * r1 / (1.0 - r1) + b * r2 / (1.0 - r2);
    };
    const std::size_t n = ring_values.size();
    const Complex t1 = remainder(ring_values[n - 2], ring_values[n - 1]);
    const Complex t2 = remainder(ring_values[n - 3], ring_values[n - 2]) - ring_values[n - 1];
    tail.value = t1;
    tail.error = std::abs(t1 - t2) + 1e-15 * std::abs(t1);
  } else {
    const double inner = s + dir * w;
    const Panel p = ev.gauss_kronrod(std::min(s, inner), std::max(s, inner));
    tail.value = p.value;
    tail.error = p.error + std::abs(p.value);
  }
  return tail;
}

// Sum of Simpson's rule over n (even) intervals of g on [0,1].
template <class G>
Complex simpson(const G& g, int n) {
  const double h = 1.0 / n;
  Complex acc = g(0.0) + g(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * g(i * h);
  return acc * (h / 3.0);
}

}  // namespace

QuadResult integrate(const IntegrandSpec& spec, double tol, int max_panels) {
  if (!(spec.a < spec.b)) throw InvalidArgument("integration interval must satisfy a < b");
  if (!(tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
  if (!spec.amplitude) throw InvalidArgument("integrand has no amplitude");

  std::vector<double> pts = {spec.a, spec.b};
  std::vector<double> singular;
  for (double s : spec.singular_points) {
    if (s >= spec.a && s <= spec.b) {
      pts.push_back(s);
      singular.push_back(s);
    }
  }
  for (double p : spec.breakpoints) {
    if (p > spec.a && p < spec.b) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const Evaluator ev(spec);
  const double max_width = std::min(spec.b - spec.a, 2.0 * std::numbers::pi / (1.0 + spec.osc_scale));

  std::vector<Panel> initial;
  std::vector<Tail> tails;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double u = pts[i];
    const double v = pts[i + 1];
    const bool su = contains(singular, u);
    const bool sv = contains(singular, v);
    if (su && sv) {
      const double m = 0.5 * (u + v);
      tails.push_back(push_graded(ev, spec, u, m, tol, max_width, initial));
      tails.push_back(push_graded(ev, spec, v, m, tol, max_width, initial));
    } else if (su) {
      tails.push_back(push_graded(ev, spec, u, v, tol, max_width, initial));
    } else if (sv) {
      tails.push_back(push_graded(ev, spec, v, u, tol, max_width, initial));
    } else {
      push_uniform(ev, u, v, max_width, initial);
    }
  }

  double tail_error = 0.0;
  for (const auto& t : tails) tail_error += t.error;

  std::priority_queue<Panel, std::vector<Panel>, ByError> pool(ByError{}, std::move(initial));
  std::vector<Panel> frozen;
  auto total_error = [&] {
    double e = tail_error;
    auto copy = pool;
    while (!copy.empty()) {
      e += copy.top().error;
      copy.pop();
    }
    for (const auto& p : frozen) e += p.error;
    return e;
  };

  double err = total_error();
  int panels = static_cast<int>(pool.size() + frozen.size());
  int refresh = 0;
  while (err > tol && panels < max_panels && !pool.empty()) {
    Panel worst = pool.top();
    pool.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-15 * (1.0 + std::abs(mid))) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = ev.gauss_kronrod(worst.a, mid);
    Panel right = ev.gauss_kronrod(mid, worst.b);
    err += left.error + right.error - worst.error;
    pool.push(left);
    pool.push(right);
    ++panels;
    if (++refresh % 256 == 0) err = total_error();
  }

  QuadResult res;
  Complex sum{0.0, 0.0};
  double e = tail_error;
  while (!pool.empty()) {
    sum += pool.top().value;
    e += pool.top().error;
    pool.pop();
  }
  for (const auto& p : frozen) {
    sum += p.value;
    e += p.error;
  }
  for (const auto& t : tails) sum += t.value;
  res.value = sum;
  res.abs_error_estimate = e;
  res.panels_used = std::max(1, panels);
  res.converged = e <= tol;
  return res;
}

Complex oracle_integrate(const IntegrandSpec& spec, int levels) {
  if (levels < 3) throw InvalidArgument("oracle_integrate needs levels >= 3");
  if (!(spec.a < spec.b)) throw InvalidArgument("integration interval must satisfy a < b");

  std::vector<double> pts = {spec.a, spec.b};
  std::vector<double> singular;
  for (double s : spec.singular_points) {
    if (s >= spec.a && s <= spec.b) {
      pts.push_back(s);
      singular.push_back(s);
    }
  }
  for (double p : spec.breakpoints) {
    if (p > spec.a && p < spec.b) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto f = [&](double y) {
    const Complex amp = spec.amplitude(y);
    if (!spec.phase) return amp;
    const double ph = spec.phase(y);
    return amp * Complex(std::cos(ph), std::sin(ph));
  };

  const double mu = spec.singular_exponent;
  const double q = mu > 0.0 ? 2.0 / (1.0 - mu) : 4.0;

  // integral over u in [0,1] of the segment from s (singular) to r
  auto graded_piece = [&](double s, double r) {
    const double len = r - s;
    return [=, &f](double u) -> Complex {
      if (u == 0.0) return Complex{0.0, 0.0};
      const double uq = std::pow(u, q);
      const double t = len * uq;
      // s + t rounds to a grid of spacing ~eps |s|; rescale the |y - s|^{-mu}
      // factor from the rounded offset back to t
      double y = s + t;
      if (y == s) y = std::nextafter(s, r);
      const double factor = mu > 0.0 ? std::pow(std::abs((y - s) / t), mu) : 1.0;
      return f(y) * (factor * len * q * uq / u);
    };
  };
  auto plain_piece = [&](double lo, double hi) {
    return [=, &f](double u) -> Complex { return f(lo + (hi - lo) * u) * (hi - lo); };
  };
  auto richardson = [&](const auto& g) {
    const int n = 1 << levels;
    const Complex s1 = simpson(g, n);
    const Complex s2 = simpson(g, 2 * n);
    const Complex s3 = simpson(g, 4 * n);
    const Complex r1 = s2 + (s2 - s1) / 15.0;
    const Complex r2 = s3 + (s3 - s2) / 15.0;
    return r2 + (r2 - r1) / 63.0;
  };

  Complex total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double u = pts[i];
    const double v = pts[i + 1];
    const bool su = contains(singular, u);
    const bool sv = contains(singular, v);
    if (su && sv) {
      const double m = 0.5 * (u + v);
      total += richardson(graded_piece(u, m));
      total += -richardson(graded_piece(v, m));
    } else if (su) {
      total += richardson(graded_piece(u, v));
    } else if (sv) {
      total += -richardson(graded_piece(v, u));
    } else {
      total += richardson(plain_piece(u, v));
    }
  }
  return total;
}

}  // namespace osclab
