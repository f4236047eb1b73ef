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

#include "osclab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "osclab/errors.hpp"

namespace osclab {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slope_detail(const DecayFit& fit, double expected) {
  return "slope=" + fmt("%.4f", fit.slope) + "±" + fmt("%.4f", fit.slope_stderr) + ", expected " +
         fmt("%.4f", expected);
}

Verdict judge(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

double tolerance_or(const RunConfig& c, double fallback) {
  return c.slope_tolerance >= 0.0 ? c.slope_tolerance : fallback;
}

OperatorConfig at_first_lambda(const RunConfig& c) {
  OperatorConfig op = c.op;
  op.lambda = c.lambdas.front();
  return op;
}

void run_decay(const RunConfig& c, RunOutput& out) {
  std::ostringstream csv;
  csv << "lambda,variant,p,lower_norm,schur_upper,grid_size,error_budget\n";
  const double tol = tolerance_or(c, 0.08);
  for (const auto& name : c.variants) {
    const Variant v = variant_from_string(name, c.z);
    for (double p : c.ps) {
      const auto rep = decay_fit(c.settings(), v, p, c.lambdas);
      for (const auto& r : rep.rows) {
        csv << csv_number(r.lambda) << ',' << r.variant << ',' << csv_number(r.p) << ',' << csv_number(r.lower_norm)
            << ',' << csv_number(r.schur_upper) << ',' << r.grid_size << ',' << csv_number(r.error_budget) << '\n';
      }
      VerdictLine line{"decay " + v.name() + " p=" + fmt("%g", p), Verdict::Inconclusive, ""};
      if (c.lambdas.size() < 4) {
        line.detail = "fewer than 4 lambda samples";
      } else {
        line.detail = slope_detail(rep.lower_fit, rep.expected_slope) + ", tolerance " + fmt("%.3f", tol);
        if (!rep.brackets_ok) line.detail += ", lower bound exceeds Schur bound";
        line.verdict = judge(std::abs(rep.lower_fit.slope - rep.expected_slope) <= tol && rep.brackets_ok);
      }
      out.verdicts.push_back(line);
    }
  }
  out.csv = csv.str();
}

void run_schur(const RunConfig& c, RunOutput& out) {
  std::ostringstream csv;
  csv << "lambda,variant,row_sup,col_sup\n";
  const double tol = tolerance_or(c, 0.05);
  for (const auto& name : c.variants) {
    const Variant v = variant_from_string(name, c.z);
    const auto rep = schur_decay(c.settings(), v, c.lambdas);
    for (const auto& r : rep.rows) {
      csv << csv_number(r.lambda) << ',' << v.name() << ',' << csv_number(r.row_sup) << ','
          << csv_number(r.col_sup) << '\n';
    }
    out.verdicts.push_back({"schur rows " + v.name(),
                            judge(std::abs(rep.row_fit.slope - rep.expected_slope) <= tol),
                            slope_detail(rep.row_fit, rep.expected_slope)});
    out.verdicts.push_back({"schur columns " + v.name(),
                            judge(std::abs(rep.col_fit.slope - rep.expected_slope) <= tol),
                            slope_detail(rep.col_fit, rep.expected_slope)});
  }
  out.csv = csv.str();
}

void run_damped(const RunConfig& c, RunOutput& out) {
  const auto rep = damped_l2_sweep(c.settings(), c.region, c.z, c.lambdas);
  std::ostringstream csv;
  csv << "lambda,variant,p,lower_norm,schur_upper,grid_size,error_budget,log_normalized\n";
  for (std::size_t i = 0; i < rep.decay.rows.size(); ++i) {
    const auto& r = rep.decay.rows[i];
    csv << csv_number(r.lambda) << ',' << r.variant << ',' << csv_number(r.p) << ',' << csv_number(r.lower_norm)
        << ',' << csv_number(r.schur_upper) << ',' << r.grid_size << ',' << csv_number(r.error_budget) << ','
        << csv_number(rep.log_normalized[i]) << '\n';
  }
  out.csv = csv.str();
  const double tol = tolerance_or(c, 0.1);
  const std::string name = std::string("damped ") + to_string(c.region);
  if (c.lambdas.size() < 4) {
    out.verdicts.push_back({name + " slope", Verdict::Inconclusive, "fewer than 4 lambda samples"});
  } else {
    const auto& fit = rep.decay.lower_fit;
    out.verdicts.push_back({name + " slope", judge(std::abs(fit.slope - rep.decay.expected_slope) <= tol),
                            slope_detail(fit, rep.decay.expected_slope) + ", tolerance " + fmt("%.3f", tol)});
  }
  out.verdicts.push_back({name + " log-normalized", judge(rep.log_growth <= c.growth_limit),
                          "growth=" + fmt("%.4f", rep.log_growth) + ", limit " + fmt("%.2f", c.growth_limit)});
}

void run_endpoint(const RunConfig& c, RunOutput& out) {
  const auto rep = endpoint_l1_check(c.settings(), c.region, c.lambdas);
  std::ostringstream csv;
  csv << "lambda,region,z,value,argmax,grid_size\n";
  for (const auto& r : rep.rows) {
    csv << csv_number(r.lambda) << ',' << to_string(rep.region) << ',' << csv_number(rep.z.real()) << ','
        << csv_number(r.value) << ',' << r.argmax << ',' << r.grid_size << '\n';
  }
  out.csv = csv.str();
  out.verdicts.push_back({std::string("endpoint ") + to_string(c.region) +
                              (c.region == Region::Y ? " L1" : " weak-L1"),
                          judge(rep.growth <= c.growth_limit),
                          "growth=" + fmt("%.4f", rep.growth) + ", limit " + fmt("%.2f", c.growth_limit)});
}

void run_counterexample(const RunConfig& c, RunOutput& out) {
  const int n = c.op.phase.degree();
  const double mu = c.op.kernel.mu();
  const double p = c.ps.front();
  const auto rep = counterexample(c.settings(), n, mu, p, c.lambdas, c.swapped, c.samples);
  std::ostringstream csv;
  csv << "lambda,p,min_abs,implied_lower,measured_norm,full_norm,normalized\n";
  bool pointwise = true;
  double worst = INFINITY;
  for (const auto& r : rep.rows) {
    csv << csv_number(r.lambda) << ',' << csv_number(p) << ',' << csv_number(r.min_abs) << ','
        << csv_number(r.implied_lower) << ',' << csv_number(r.measured_norm) << ',' << csv_number(r.full_norm)
        << ',' << csv_number(r.normalized) << '\n';
    pointwise = pointwise && r.min_abs >= 0.1;
    worst = std::min(worst, r.min_abs);
  }
  out.csv = csv.str();
  const std::string name = c.swapped ? "counterexample (adjoint)" : "counterexample";
  out.verdicts.push_back({name + " pointwise", judge(pointwise), "min |Tf|=" + fmt("%.4f", worst) + ", bound 0.1"});
  if (c.lambdas.size() < 2) {
    out.verdicts.push_back({name + " slope", Verdict::Inconclusive, "fewer than 2 lambda samples"});
    return;
  }
  const double tol = tolerance_or(c, 0.05);
  out.verdicts.push_back({name + " slope", judge(rep.norm_fit.slope >= -1.0 / p - tol),
                          "slope=" + fmt("%.4f", rep.norm_fit.slope) + ", bound " + fmt("%.4f", -1.0 / p - tol)});
  VerdictLine growth{name + " growth", Verdict::Inconclusive,
                     "normalized growth=" + fmt("%.4f", rep.growth)};
  if (p > n / (1.0 - mu)) {
    growth.verdict = judge(rep.growth > 1.0);
  } else {
    growth.detail += ", p inside the necessary range";
  }
  out.verdicts.push_back(growth);
}

void run_audit(const RunConfig& c, RunOutput& out) {
  std::vector<double> xs = c.xs;
  if (xs.empty()) {
    for (int i = 0; i < 20; ++i) xs.push_back(-0.45 + 0.9 * i / 19.0);
  }
  const auto rep = decomposition_audit(at_first_lambda(c), c.f, xs, c.threads);
  std::ostringstream csv;
  csv << "x,re_T,im_T,split_error,group_error,budget\n";
  for (const auto& r : rep.rows) {
    csv << csv_number(r.x) << ',' << csv_number(r.t.real()) << ',' << csv_number(r.t.imag()) << ','
        << csv_number(r.split_error) << ',' << csv_number(r.group_error) << ',' << csv_number(r.budget) << '\n';
  }
  out.csv = csv.str();
  out.verdicts.push_back({"audit", judge(rep.pass),
                          "split=" + fmt("%.3e", rep.max_split_error) + ", group=" + fmt("%.3e", rep.max_group_error) +
                              ", tolerance " + fmt("%.3e", rep.tolerance) + " + budget " +
                              fmt("%.3e", rep.max_budget)});
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool RunOutput::any_fail() const {
  for (const auto& v : verdicts) {
    if (v.verdict == Verdict::Fail) return true;
  }
  return false;
}

std::string RunOutput::summary() const {
  std::string s;
  for (const auto& v : verdicts) s += v.name + ": " + v.detail + ", " + to_string(v.verdict) + "\n";
  return s;
}

std::string csv_number(double v) { return fmt("%.10e", v); }

RunOutput run_experiment(const RunConfig& cfg) {
  RunOutput out;
  switch (cfg.experiment) {
    case ExperimentKind::Decay:
      run_decay(cfg, out);
      break;
    case ExperimentKind::Schur:
      run_schur(cfg, out);
      break;
    case ExperimentKind::Damped:
      run_damped(cfg, out);
      break;
    case ExperimentKind::Endpoint:
      run_endpoint(cfg, out);
      break;
    case ExperimentKind::Counterexample:
      run_counterexample(cfg, out);
      break;
    case ExperimentKind::Audit:
      run_audit(cfg, out);
      break;
  }
  return out;
}

RunOutput run_apply(const RunConfig& cfg) {
  const OscillatoryOperator op(at_first_lambda(cfg));
  std::vector<double> xs = cfg.xs;
  if (xs.empty()) xs = {0.0};
  std::ostringstream csv;
  csv << "x,variant,re,im,err\n";
  for (double x : xs) {
    for (const auto& name : cfg.variants) {
      const Variant v = variant_from_string(name, cfg.z);
      const auto a = op.apply(v, cfg.f, x);
      csv << csv_number(x) << ',' << v.name() << ',' << csv_number(a.value.real()) << ','
          << csv_number(a.value.imag()) << ',' << csv_number(a.error + a.truncation_budget) << '\n';
    }
  }
  RunOutput out;
  out.csv = csv.str();
  return out;
}

}  // namespace osclab
