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

#include "osclab/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "osclab/errors.hpp"

namespace osclab {

namespace {

using json = nlohmann::json;

class Reader {
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(source_ + ": field '" + path + "': " + what);
  }

  const json* find(const json& obj, const std::string& key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  long long integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long long>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [k, _] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        fail(path.empty() ? k : path + "." + k, "unknown field");
      }
    }
  }

  const std::string& source() const { return source_; }

private:
  std::string source_;
};

std::complex<double> parse_complex(const Reader& r, const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array()) {
    const auto xs = r.numbers(v, path);
    if (xs.size() != 2) r.fail(path, "expected [re, im]");
    return {xs[0], xs[1]};
  }
  if (v.is_object()) {
    r.only_keys(v, path, {"re", "im"});
    const json* re = r.find(v, "re");
    const json* im = r.find(v, "im");
    return {re ? r.number(*re, path + ".re") : 0.0, im ? r.number(*im, path + ".im") : 0.0};
  }
  r.fail(path, "expected a number, [re, im] or {re, im}");
}

TestFunction parse_function(const Reader& r, const json& v, const std::string& path) {
  if (v.is_array()) {
    TestFunction sum;
    for (std::size_t i = 0; i < v.size(); ++i) sum = sum + parse_function(r, v[i], path + "[" + std::to_string(i) + "]");
    return sum;
  }
  r.only_keys(v, path, {"indicator", "bump", "exponential", "zero", "coef"});
  std::complex<double> coef{1.0, 0.0};
  if (const json* c = r.find(v, "coef")) coef = parse_complex(r, *c, path + ".coef");
  TestFunction f;
  int shapes = 0;
  try {
    if (const json* s = r.find(v, "indicator")) {
      const auto b = r.numbers(*s, path + ".indicator");
      if (b.size() != 2) r.fail(path + ".indicator", "expected [lo, hi]");
      f = TestFunction::indicator(b[0], b[1]);
      ++shapes;
    }
    if (const json* s = r.find(v, "bump")) {
      const auto b = r.numbers(*s, path + ".bump");
      if (b.size() != 2) r.fail(path + ".bump", "expected [center, radius]");
      f = TestFunction::bump(b[0], b[1]);
      ++shapes;
    }
    if (const json* s = r.find(v, "exponential")) {
      f = TestFunction::exponential(r.number(*s, path + ".exponential"));
      ++shapes;
    }
  } catch (const InvalidArgument& e) {
    r.fail(path, e.what());
  }
  if (const json* s = r.find(v, "zero")) {
    if (!s->is_boolean()) r.fail(path + ".zero", "expected true or false");
    ++shapes;
  }
  if (shapes != 1) r.fail(path, "expected exactly one of indicator, bump, exponential, zero");
  return f * coef;
}

Region parse_region(const Reader& r, const json& v, const std::string& path) {
  const std::string s = r.string(v, path);
  if (s == "X") return Region::X;
  if (s == "Y") return Region::Y;
  if (s == "Delta") return Region::Delta;
  r.fail(path, "expected \"X\", \"Delta\" or \"Y\"");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

json function_echo(const json& v) { return v.is_null() ? json{{"indicator", {0.25, 0.5}}} : v; }

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Decay:
      return "decay";
    case ExperimentKind::Schur:
      return "schur";
    case ExperimentKind::Damped:
      return "damped";
    case ExperimentKind::Endpoint:
      return "endpoint";
    case ExperimentKind::Counterexample:
      return "counterexample";
    case ExperimentKind::Audit:
      return "audit";
  }
  return "?";
}

ExperimentSettings RunConfig::settings() const {
  ExperimentSettings s{.base = op, .grid = grid, .rule = rule, .threads = threads, .seed = seed, .restarts = restarts};
  return s;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // translate the byte offset into line and column
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + at, '\n'));
    const std::size_t nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const std::size_t col = nl == std::string::npos ? at + 1 : at - nl;
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  const Reader r(source);
  r.only_keys(doc, "", {"experiment", "phase", "kernel", "variant", "p", "z", "region", "lambda", "grid", "quad",
                        "amplitude", "restarts", "seed", "threads", "f", "x", "samples", "swapped", "tolerance",
                        "growth_limit", "output"});
  RunConfig c;
  json echo;

  if (const json* v = r.find(doc, "experiment")) {
    const std::string e = r.string(*v, "experiment");
    bool found = false;
    for (auto k : {ExperimentKind::Decay, ExperimentKind::Schur, ExperimentKind::Damped, ExperimentKind::Endpoint,
                   ExperimentKind::Counterexample, ExperimentKind::Audit}) {
      if (to_string(k) == e) {
        c.experiment = k;
        found = true;
      }
    }
    if (!found) r.fail("experiment", "expected decay, schur, damped, endpoint, counterexample or audit");
  }
  echo["experiment"] = to_string(c.experiment);

  if (const json* v = r.find(doc, "phase")) {
    r.only_keys(*v, "phase", {"degree", "coeffs"});
    const json* d = r.find(*v, "degree");
    const json* a = r.find(*v, "coeffs");
    if (!d || !a) r.fail("phase", "needs both degree and coeffs");
    const auto n = r.integer(*d, "phase.degree");
    auto coeffs = r.numbers(*a, "phase.coeffs");
    try {
      c.op.phase = HomogeneousPhase(static_cast<int>(n), std::move(coeffs));
    } catch (const InvalidArgument& e) {
      throw DegenerateHessian(source + ": field 'phase': " + e.what());
    }
  }
  echo["phase"] = {{"degree", c.op.phase.degree()},
                   {"coeffs", std::vector<double>(c.op.phase.coeffs().begin(), c.op.phase.coeffs().end())}};

  if (const json* v = r.find(doc, "kernel")) {
    r.only_keys(*v, "kernel", {"family", "mu", "E", "sign", "g"});
    std::string family = "pure_power";
    if (const json* f = r.find(*v, "family")) family = r.string(*f, "kernel.family");
    double mu = 0.5, E = 1.0;
    if (const json* m = r.find(*v, "mu")) mu = r.number(*m, "kernel.mu");
    if (const json* m = r.find(*v, "E")) E = r.number(*m, "kernel.E");
    try {
      if (family == "pure_power") {
        int sign = 1;
        if (const json* s = r.find(*v, "sign")) sign = static_cast<int>(r.integer(*s, "kernel.sign"));
        c.op.kernel = SingularKernel::pure_power(mu, E, sign);
      } else if (family == "modulated") {
        std::string g = "cos_sum";
        if (const json* s = r.find(*v, "g")) g = r.string(*s, "kernel.g");
        c.op.kernel = SingularKernel::modulated(mu, E, modulation_from_string(g));
      } else {
        r.fail("kernel.family", "expected \"pure_power\" or \"modulated\"");
      }
    } catch (const InvalidArgument& e) {
      r.fail("kernel", e.what());
    }
  }
  echo["kernel"] = {{"family", c.op.kernel.is_pure_power() ? "pure_power" : "modulated"},
                    {"mu", c.op.kernel.mu()},
                    {"E", c.op.kernel.bound()}};
  if (c.op.kernel.is_pure_power()) {
    echo["kernel"]["sign"] = c.op.kernel.sign();
  } else {
    echo["kernel"]["g"] = to_string(c.op.kernel.modulation());
  }

  if (const json* v = r.find(doc, "variant")) {
    if (v->is_string()) {
      c.variants = split_list(v->get<std::string>());
    } else if (v->is_array()) {
      c.variants.clear();
      for (std::size_t i = 0; i < v->size(); ++i) c.variants.push_back(r.string((*v)[i], "variant"));
    } else {
      r.fail("variant", "expected a string or an array of strings");
    }
    if (c.variants.empty()) r.fail("variant", "no variant given");
  }
  echo["variant"] = c.variants;

  if (const json* v = r.find(doc, "p")) c.ps = v->is_array() ? r.numbers(*v, "p") : std::vector{r.number(*v, "p")};
  for (double p : c.ps) {
    if (!(p >= 1.0)) r.fail("p", "every p must be >= 1");
  }
  echo["p"] = c.ps;

  if (const json* v = r.find(doc, "z")) c.z = parse_complex(r, *v, "z");
  echo["z"] = {c.z.real(), c.z.imag()};
  if (const json* v = r.find(doc, "region")) c.region = parse_region(r, *v, "region");
  echo["region"] = to_string(c.region);

  if (const json* v = r.find(doc, "lambda")) {
    if (v->is_array()) {
      c.lambdas = r.numbers(*v, "lambda");
    } else {
      r.only_keys(*v, "lambda", {"start", "ratio", "count"});
      LambdaSweep s;
      if (const json* a = r.find(*v, "start")) s.start = r.number(*a, "lambda.start");
      if (const json* a = r.find(*v, "ratio")) s.ratio = r.number(*a, "lambda.ratio");
      if (const json* a = r.find(*v, "count")) s.count = static_cast<int>(r.integer(*a, "lambda.count"));
      try {
        c.lambdas = s.values();
      } catch (const InvalidArgument& e) {
        r.fail("lambda", e.what());
      }
    }
    for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
      if (!(c.lambdas[i] > 0.0) || (i > 0 && !(c.lambdas[i] > c.lambdas[i - 1]))) {
        r.fail("lambda", "values must be positive and increasing");
      }
    }
    if (c.lambdas.empty()) r.fail("lambda", "no lambda values");
  }
  echo["lambda"] = c.lambdas;

  if (const json* v = r.find(doc, "grid")) {
    r.only_keys(*v, "grid", {"points_per_wave", "min_size", "max_size", "align", "size", "rule"});
    if (const json* a = r.find(*v, "points_per_wave")) c.grid.points_per_wave = r.number(*a, "grid.points_per_wave");
    if (const json* a = r.find(*v, "min_size")) c.grid.min_size = static_cast<int>(r.integer(*a, "grid.min_size"));
    if (const json* a = r.find(*v, "max_size")) c.grid.max_size = static_cast<int>(r.integer(*a, "grid.max_size"));
    if (const json* a = r.find(*v, "align")) c.grid.align = static_cast<int>(r.integer(*a, "grid.align"));
    if (const json* a = r.find(*v, "size")) {
      // fixed size for every lambda
      c.grid.min_size = c.grid.max_size = static_cast<int>(r.integer(*a, "grid.size"));
      c.grid.align = 1;
    }
    if (const json* a = r.find(*v, "rule")) {
      const std::string rule = r.string(*a, "grid.rule");
      if (rule == "zeta") {
        c.rule = DiagonalRule::ZetaCorrected;
      } else if (rule == "excise") {
        c.rule = DiagonalRule::Excise;
      } else {
        r.fail("grid.rule", "expected \"zeta\" or \"excise\"");
      }
    }
    if (!(c.grid.points_per_wave > 0.0) || c.grid.min_size < 2 || c.grid.max_size < 2 || c.grid.align < 1) {
      r.fail("grid", "sizes must be >= 2, align >= 1 and points_per_wave > 0");
    }
  }
  echo["grid"] = {{"points_per_wave", c.grid.points_per_wave},
                  {"min_size", c.grid.min_size},
                  {"max_size", c.grid.max_size},
                  {"align", c.grid.align},
                  {"rule", to_string(c.rule)}};

  if (const json* v = r.find(doc, "quad")) {
    r.only_keys(*v, "quad", {"tol", "max_panels"});
    if (const json* a = r.find(*v, "tol")) c.op.quad_tol = r.number(*a, "quad.tol");
    if (const json* a = r.find(*v, "max_panels")) c.op.max_panels = static_cast<int>(r.integer(*a, "quad.max_panels"));
  }
  echo["quad"] = {{"tol", c.op.quad_tol}, {"max_panels", c.op.max_panels}};

  if (const json* v = r.find(doc, "amplitude")) {
    r.only_keys(*v, "amplitude", {"half_width", "j_max", "quadrants"});
    if (const json* a = r.find(*v, "half_width")) c.op.amplitude_half_width = r.number(*a, "amplitude.half_width");
    if (const json* a = r.find(*v, "j_max")) c.op.j_max = static_cast<int>(r.integer(*a, "amplitude.j_max"));
    if (const json* a = r.find(*v, "quadrants")) {
      if (!a->is_array()) r.fail("amplitude.quadrants", "expected an array like [\"++\", \"-+\"]");
      c.op.quadrants = {false, false, false, false};
      for (const auto& q : *a) {
        const std::string s = r.string(q, "amplitude.quadrants");
        if (s.size() != 2 || (s[0] != '+' && s[0] != '-') || (s[1] != '+' && s[1] != '-')) {
          r.fail("amplitude.quadrants", "entries must be \"++\", \"+-\", \"-+\" or \"--\"");
        }
        c.op.quadrants[quadrant_index(s[0] == '+' ? 1 : -1, s[1] == '+' ? 1 : -1)] = true;
      }
    }
  }
  {
    std::vector<std::string> qs;
    for (const char* q : {"++", "+-", "-+", "--"}) {
      if (c.op.quadrants[quadrant_index(q[0] == '+' ? 1 : -1, q[1] == '+' ? 1 : -1)]) qs.emplace_back(q);
    }
    echo["amplitude"] = {{"half_width", c.op.amplitude_half_width}, {"j_max", c.op.j_max}, {"quadrants", qs}};
  }

  try {
    c.op.validate();
  } catch (const InvalidArgument& e) {
    r.fail("quad/amplitude", e.what());
  }

  if (const json* v = r.find(doc, "restarts")) c.restarts = static_cast<int>(r.integer(*v, "restarts"));
  if (c.restarts < 0) r.fail("restarts", "must be >= 0");
  echo["restarts"] = c.restarts;
  if (const json* v = r.find(doc, "seed")) {
    const auto s = r.integer(*v, "seed");
    if (s < 0) r.fail("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  }
  echo["seed"] = c.seed;
  if (const json* v = r.find(doc, "threads")) {
    const auto t = r.integer(*v, "threads");
    if (t < 0) r.fail("threads", "must be >= 0");
    c.threads = static_cast<unsigned>(t);
  }
  echo["threads"] = c.threads;

  const json* fdoc = r.find(doc, "f");
  if (fdoc) c.f = parse_function(r, *fdoc, "f");
  echo["f"] = function_echo(fdoc ? *fdoc : json());

  if (const json* v = r.find(doc, "x")) {
    if (v->is_array()) {
      c.xs = r.numbers(*v, "x");
    } else {
      r.only_keys(*v, "x", {"start", "stop", "count"});
      const json* a = r.find(*v, "start");
      const json* b = r.find(*v, "stop");
      const json* n = r.find(*v, "count");
      if (!a || !b || !n) r.fail("x", "needs start, stop and count");
      const double lo = r.number(*a, "x.start");
      const double hi = r.number(*b, "x.stop");
      const auto cnt = r.integer(*n, "x.count");
      if (cnt < 1) r.fail("x.count", "must be >= 1");
      for (long long i = 0; i < cnt; ++i) c.xs.push_back(cnt == 1 ? lo : lo + (hi - lo) * i / (cnt - 1));
    }
  }
  echo["x"] = c.xs;

  if (const json* v = r.find(doc, "samples")) c.samples = static_cast<int>(r.integer(*v, "samples"));
  if (c.samples < 2) r.fail("samples", "must be >= 2");
  echo["samples"] = c.samples;
  if (const json* v = r.find(doc, "swapped")) {
    if (!v->is_boolean()) r.fail("swapped", "expected true or false");
    c.swapped = v->get<bool>();
  }
  echo["swapped"] = c.swapped;
  if (const json* v = r.find(doc, "tolerance")) c.slope_tolerance = r.number(*v, "tolerance");
  if (c.slope_tolerance >= 0.0) echo["tolerance"] = c.slope_tolerance;
  if (const json* v = r.find(doc, "growth_limit")) c.growth_limit = r.number(*v, "growth_limit");
  echo["growth_limit"] = c.growth_limit;
  if (const json* v = r.find(doc, "output")) c.output = r.string(*v, "output");
  echo["output"] = c.output;

  // variants are validated once all fields are known
  for (const auto& name : c.variants) {
    try {
      (void)variant_from_string(name, c.z);
    } catch (const InvalidArgument& e) {
      r.fail("variant", e.what());
    }
  }

  c.echo = echo.dump(2);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace osclab
