#include "sdwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "sdwave/error.hpp"

namespace sdwave {

namespace pt = boost::property_tree;

Mode parse_mode(std::string_view name) {
  if (name == "simulate") return Mode::simulate;
  if (name == "mms") return Mode::mms;
  if (name == "check-weight") return Mode::check_weight;
  if (name == "check-gn") return Mode::check_gn;
  if (name == "fit-decay") return Mode::fit_decay;
  if (name == "sweep") return Mode::sweep;
  throw ConfigError(fmt::format(
      "run.mode must be one of simulate, mms, check-weight, check-gn, fit-decay, sweep; got '{}'",
      name));
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::simulate:
      return "simulate";
    case Mode::mms:
      return "mms";
    case Mode::check_weight:
      return "check-weight";
    case Mode::check_gn:
      return "check-gn";
    case Mode::fit_decay:
      return "fit-decay";
    case Mode::sweep:
      return "sweep";
  }
  return "simulate";
}

namespace {

MmsStudy parse_study(const std::string& s) {
  if (s == "combined") return MmsStudy::combined;
  if (s == "space") return MmsStudy::space;
  if (s == "time") return MmsStudy::time;
  throw ConfigError("mms.study must be one of combined, space, time; got '" + s + "'");
}

std::string_view study_name(MmsStudy s) {
  switch (s) {
    case MmsStudy::combined:
      return "combined";
    case MmsStudy::space:
      return "space";
    case MmsStudy::time:
      return "time";
  }
  return "combined";
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"r_inner", "r_outer", "nr", "ntheta", "B"}},
      {"time",
       {"dt", "t_end", "theta", "stride", "linear_solve_tol", "max_linear_iters",
        "preconditioner"}},
      {"weight", {"rho", "eps"}},
      {"nonlinearity", {"a", "b", "p", "q"}},
      {"init", {"u0_amplitude", "u0_support", "u1_amplitude", "u1_support"}},
      {"constants", {"C0"}},
      {"output", {"path", "format"}},
      {"run", {"mode"}},
      {"mms", {"study", "levels", "k", "rate", "dt_factor", "fine_dt"}},
      {"gn", {"m", "samples", "refinements", "seed", "sigma", "t"}},
      {"check_weight", {"t_max", "r_max", "t_points", "r_points"}},
      {"fit", {"columns", "t_a", "t_b", "input"}},
      {"sweep", {"p", "q", "rho", "u0_amplitude"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& name, const std::string& raw) {
  const std::string s = trim(raw);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw ConfigError(fmt::format("{}: expected a finite number, got '{}'", name, raw));
  }
  return x;
}

long long to_integer(const std::string& name, const std::string& raw) {
  const std::string s = trim(raw);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", name, raw));
  }
  return x;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& sec, const std::string& key) const {
    const auto s = tree_.get_child_optional(sec);
    if (!s) return std::nullopt;
    const auto v = s->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return v->data();
  }

  std::string require(const std::string& sec, const std::string& key) const {
    auto v = raw(sec, key);
    if (!v) throw ConfigError(fmt::format("{}.{}: required key is missing", sec, key));
    return *v;
  }

  void number(const std::string& sec, const std::string& key, double& out) const {
    if (auto v = raw(sec, key)) out = to_double(sec + "." + key, *v);
  }
  void required_number(const std::string& sec, const std::string& key, double& out) const {
    out = to_double(sec + "." + key, require(sec, key));
  }
  void integer(const std::string& sec, const std::string& key, int& out) const {
    if (auto v = raw(sec, key)) out = static_cast<int>(to_integer(sec + "." + key, *v));
  }
  void required_integer(const std::string& sec, const std::string& key, int& out) const {
    out = static_cast<int>(to_integer(sec + "." + key, require(sec, key)));
  }
  void optional_number(const std::string& sec, const std::string& key,
                       std::optional<double>& out) const {
    if (auto v = raw(sec, key)) out = to_double(sec + "." + key, *v);
  }
  void number_list(const std::string& sec, const std::string& key,
                   std::vector<double>& out) const {
    auto v = raw(sec, key);
    if (!v) return;
    out.clear();
    for (const auto& item : split_list(*v)) out.push_back(to_double(sec + "." + key, item));
    if (out.empty()) throw ConfigError(fmt::format("{}.{}: empty list", sec, key));
  }
  void support(const std::string& sec, const std::string& key, double& r1, double& r2) const {
    auto v = raw(sec, key);
    if (!v) return;
    const auto items = split_list(*v);
    if (items.size() != 2) {
      throw ConfigError(fmt::format("{}.{}: expected 'r1, r2', got '{}'", sec, key, *v));
    }
    r1 = to_double(sec + "." + key, items[0]);
    r2 = to_double(sec + "." + key, items[1]);
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  const auto& known = known_keys();
  for (const auto& [sec, body] : tree) {
    if (body.empty()) {
      if (known.count(sec) && body.data().empty()) continue;  // empty section
      throw ConfigError(fmt::format("{}: key outside of any section", sec));
    }
    const auto it = known.find(sec);
    if (it == known.end()) throw ConfigError(fmt::format("[{}]: unknown section", sec));
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(fmt::format("{}.{}: unknown key", sec, key));
      if (!value.empty()) throw ConfigError(fmt::format("{}.{}: nested value", sec, key));
    }
  }
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(xs[i]);
  }
  return s;
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) throw ConfigError(fmt::format("{} must be positive, got {}", name, x));
}

}  // namespace

WeightParams SimConfig::weight_params() const {
  return WeightParams(weight.rho, weight.eps, weight.eps.has_value());
}

void validate(const SimConfig& c) {
  const auto& d = c.domain;
  require_positive(d.r_inner, "domain.r_inner");
  if (!(d.r_outer > d.r_inner)) throw ConfigError("domain.r_outer must exceed domain.r_inner");
  if (d.nr < 4) throw ConfigError("domain.nr must be at least 4");
  if (d.ntheta < 8 || d.ntheta % 2 != 0) {
    throw ConfigError("domain.ntheta must be even and at least 8");
  }
  if (d.B && !(*d.B * d.r_inner >= 2.0)) {
    throw ConfigError("domain.B must satisfy B * r_inner >= 2");
  }

  c.time.scheme.validate();
  require_positive(c.time.t_end, "time.t_end");
  if (c.time.stride < 1) throw ConfigError("time.stride must be at least 1");

  require_positive(c.weight.rho, "weight.rho");
  if (c.weight.eps) {
    const auto win = epsilon_window(c.weight.rho);
    if (!win) {
      throw ConfigError(fmt::format(
          "weight.eps given but the eps window is empty for rho = {} (rho <= rho0 = {})",
          c.weight.rho, rho0_constant()));
    }
    if (!win->contains(*c.weight.eps)) {
      throw ConfigError(fmt::format("weight.eps must lie in [{}, 1) for rho = {}, got {}",
                                    win->lo, c.weight.rho, *c.weight.eps));
    }
  }

  c.nonlinearity.validate();

  const auto check_support = [&](double r1, double r2, const char* name) {
    if (!(d.r_inner < r1 && r1 < r2 && r2 < d.r_outer)) {
      throw ConfigError(
          fmt::format("{} must satisfy r_inner < r1 < r2 < r_outer, got ({}, {})", name, r1, r2));
    }
  };
  check_support(c.init.u0_r1, c.init.u0_r2, "init.u0_support");
  check_support(c.init.u1_r1, c.init.u1_r2, "init.u1_support");

  require_positive(c.C0, "constants.C0");
  if (c.output.format != "csv") throw ConfigError("output.format must be 'csv'");
  if (c.output.path.empty()) throw ConfigError("output.path must not be empty");

  if (c.mms.levels < 2) throw ConfigError("mms.levels must be at least 2");
  if (c.mms.k < 0) throw ConfigError("mms.k must be non-negative");
  require_positive(c.mms.rate, "mms.rate");
  require_positive(c.mms.dt_factor, "mms.dt_factor");
  require_positive(c.mms.fine_dt, "mms.fine_dt");

  if (c.gn.m.empty()) throw ConfigError("gn.m must not be empty");
  for (double m : c.gn.m) {
    if (!(m >= 2.0)) throw ConfigError("gn.m entries must be at least 2");
  }
  if (c.gn.samples < 1) throw ConfigError("gn.samples must be at least 1");
  if (c.gn.refinements < 0) throw ConfigError("gn.refinements must be non-negative");
  if (!(c.gn.sigma > 0.0 && c.gn.sigma <= 1.0)) throw ConfigError("gn.sigma must lie in (0, 1]");
  if (!(c.gn.t >= 0.0)) throw ConfigError("gn.t must be non-negative");

  require_positive(c.check_weight.t_max, "check_weight.t_max");
  require_positive(c.check_weight.r_max, "check_weight.r_max");
  if (c.check_weight.t_points < 2 || c.check_weight.r_points < 2) {
    throw ConfigError("check_weight.t_points and check_weight.r_points must be at least 2");
  }

  static const std::set<std::string> columns{"E_classical", "E_higher", "L2_u", "Wfirst",
                                             "Wsecond",     "W",        "sup_u", "sup_v"};
  if (c.fit.columns.empty()) throw ConfigError("fit.columns must not be empty");
  for (const auto& col : c.fit.columns) {
    if (!columns.count(col)) throw ConfigError("fit.columns: unknown column '" + col + "'");
  }
  if (c.fit.t_a && c.fit.t_b && !(*c.fit.t_a < *c.fit.t_b)) {
    throw ConfigError("fit.t_a must be smaller than fit.t_b");
  }

  for (double p : c.sweep.p) {
    if (!(p > 1.0)) throw ConfigError("sweep.p entries must exceed 1");
  }
  for (double q : c.sweep.q) {
    if (!(q > 1.0)) throw ConfigError("sweep.q entries must exceed 1");
  }
  for (double r : c.sweep.rho) {
    if (!(r > 0.0)) throw ConfigError("sweep.rho entries must be positive");
  }
  for (double a : c.sweep.u0_amplitude) {
    if (!(a >= 0.0)) throw ConfigError("sweep.u0_amplitude entries must be non-negative");
  }
}

SimConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
  }
  check_keys(tree);
  const Reader r(tree);

  SimConfig c;
  r.required_number("domain", "r_inner", c.domain.r_inner);
  r.required_number("domain", "r_outer", c.domain.r_outer);
  r.required_integer("domain", "nr", c.domain.nr);
  r.required_integer("domain", "ntheta", c.domain.ntheta);
  r.optional_number("domain", "B", c.domain.B);

  r.required_number("time", "dt", c.time.scheme.dt);
  r.required_number("time", "t_end", c.time.t_end);
  r.number("time", "theta", c.time.scheme.theta);
  r.integer("time", "stride", c.time.stride);
  r.number("time", "linear_solve_tol", c.time.scheme.linear_solve_tol);
  r.integer("time", "max_linear_iters", c.time.scheme.max_linear_iters);
  if (auto v = r.raw("time", "preconditioner")) {
    c.time.scheme.preconditioner = parse_preconditioner(trim(*v));
  }

  r.required_number("weight", "rho", c.weight.rho);
  r.optional_number("weight", "eps", c.weight.eps);

  r.number("nonlinearity", "a", c.nonlinearity.a);
  r.number("nonlinearity", "b", c.nonlinearity.b);
  r.number("nonlinearity", "p", c.nonlinearity.p);
  r.number("nonlinearity", "q", c.nonlinearity.q);

  // Default supports sit in the inner third of the annulus.
  {
    const double L = c.domain.r_outer - c.domain.r_inner;
    if (L > 0.0) {
      c.init.u0_r1 = c.init.u1_r1 = c.domain.r_inner + L / 7.0;
      c.init.u0_r2 = c.init.u1_r2 = c.domain.r_inner + 3.0 * L / 7.0;
    }
  }
  r.number("init", "u0_amplitude", c.init.u0_amplitude);
  r.support("init", "u0_support", c.init.u0_r1, c.init.u0_r2);
  r.number("init", "u1_amplitude", c.init.u1_amplitude);
  r.support("init", "u1_support", c.init.u1_r1, c.init.u1_r2);

  r.number("constants", "C0", c.C0);

  if (auto v = r.raw("output", "path")) c.output.path = trim(*v);
  if (auto v = r.raw("output", "format")) c.output.format = trim(*v);
  if (auto v = r.raw("run", "mode")) c.mode = parse_mode(trim(*v));

  if (auto v = r.raw("mms", "study")) c.mms.study = parse_study(trim(*v));
  r.integer("mms", "levels", c.mms.levels);
  r.integer("mms", "k", c.mms.k);
  r.number("mms", "rate", c.mms.rate);
  r.number("mms", "dt_factor", c.mms.dt_factor);
  r.number("mms", "fine_dt", c.mms.fine_dt);

  r.number_list("gn", "m", c.gn.m);
  r.integer("gn", "samples", c.gn.samples);
  r.integer("gn", "refinements", c.gn.refinements);
  if (auto v = r.raw("gn", "seed")) {
    const auto s = to_integer("gn.seed", *v);
    if (s < 0) throw ConfigError("gn.seed must be non-negative");
    c.gn.seed = static_cast<std::uint64_t>(s);
  }
  r.number("gn", "sigma", c.gn.sigma);
  r.number("gn", "t", c.gn.t);

  r.number("check_weight", "t_max", c.check_weight.t_max);
  r.number("check_weight", "r_max", c.check_weight.r_max);
  r.integer("check_weight", "t_points", c.check_weight.t_points);
  r.integer("check_weight", "r_points", c.check_weight.r_points);

  if (auto v = r.raw("fit", "columns")) c.fit.columns = split_list(*v);
  r.optional_number("fit", "t_a", c.fit.t_a);
  r.optional_number("fit", "t_b", c.fit.t_b);
  if (auto v = r.raw("fit", "input")) c.fit.input = trim(*v);

  r.number_list("sweep", "p", c.sweep.p);
  r.number_list("sweep", "q", c.sweep.q);
  r.number_list("sweep", "rho", c.sweep.rho);
  r.number_list("sweep", "u0_amplitude", c.sweep.u0_amplitude);

  if (!(c.weight.rho > 0.0)) throw ConfigError("weight.rho must be positive");
  if (!c.weight.eps) {
    if (const auto win = epsilon_window(c.weight.rho)) c.weight.eps = win->midpoint();
  }
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const SimConfig& c) {
  std::string s;
  auto line = [&s](std::string_view key, const std::string& value) {
    s += fmt::format("{} = {}\n", key, value);
  };
  s += "[domain]\n";
  line("r_inner", fmt_double(c.domain.r_inner));
  line("r_outer", fmt_double(c.domain.r_outer));
  line("nr", std::to_string(c.domain.nr));
  line("ntheta", std::to_string(c.domain.ntheta));
  if (c.domain.B) line("B", fmt_double(*c.domain.B));

  s += "\n[time]\n";
  line("dt", fmt_double(c.time.scheme.dt));
  line("t_end", fmt_double(c.time.t_end));
  line("theta", fmt_double(c.time.scheme.theta));
  line("stride", std::to_string(c.time.stride));
  line("linear_solve_tol", fmt_double(c.time.scheme.linear_solve_tol));
  line("max_linear_iters", std::to_string(c.time.scheme.max_linear_iters));
  line("preconditioner", std::string(to_string(c.time.scheme.preconditioner)));

  s += "\n[weight]\n";
  line("rho", fmt_double(c.weight.rho));
  if (c.weight.eps) line("eps", fmt_double(*c.weight.eps));

  s += "\n[nonlinearity]\n";
  line("a", fmt_double(c.nonlinearity.a));
  line("b", fmt_double(c.nonlinearity.b));
  line("p", fmt_double(c.nonlinearity.p));
  line("q", fmt_double(c.nonlinearity.q));

  s += "\n[init]\n";
  line("u0_amplitude", fmt_double(c.init.u0_amplitude));
  line("u0_support", fmt_double(c.init.u0_r1) + ", " + fmt_double(c.init.u0_r2));
  line("u1_amplitude", fmt_double(c.init.u1_amplitude));
  line("u1_support", fmt_double(c.init.u1_r1) + ", " + fmt_double(c.init.u1_r2));

  s += "\n[constants]\n";
  line("C0", fmt_double(c.C0));

  s += "\n[output]\n";
  line("path", c.output.path);
  line("format", c.output.format);

  s += "\n[run]\n";
  line("mode", std::string(to_string(c.mode)));

  s += "\n[mms]\n";
  line("study", std::string(study_name(c.mms.study)));
  line("levels", std::to_string(c.mms.levels));
  line("k", std::to_string(c.mms.k));
  line("rate", fmt_double(c.mms.rate));
  line("dt_factor", fmt_double(c.mms.dt_factor));
  line("fine_dt", fmt_double(c.mms.fine_dt));

  s += "\n[gn]\n";
  line("m", join(c.gn.m));
  line("samples", std::to_string(c.gn.samples));
  line("refinements", std::to_string(c.gn.refinements));
  line("seed", std::to_string(c.gn.seed));
  line("sigma", fmt_double(c.gn.sigma));
  line("t", fmt_double(c.gn.t));

  s += "\n[check_weight]\n";
  line("t_max", fmt_double(c.check_weight.t_max));
  line("r_max", fmt_double(c.check_weight.r_max));
  line("t_points", std::to_string(c.check_weight.t_points));
  line("r_points", std::to_string(c.check_weight.r_points));

  s += "\n[fit]\n";
  {
    std::string cols;
    for (std::size_t i = 0; i < c.fit.columns.size(); ++i) {
      if (i) cols += ", ";
      cols += c.fit.columns[i];
    }
    line("columns", cols);
  }
  if (c.fit.t_a) line("t_a", fmt_double(*c.fit.t_a));
  if (c.fit.t_b) line("t_b", fmt_double(*c.fit.t_b));
  if (!c.fit.input.empty()) line("input", c.fit.input);

  const bool any_sweep = !c.sweep.p.empty() || !c.sweep.q.empty() || !c.sweep.rho.empty() ||
                         !c.sweep.u0_amplitude.empty();
  if (any_sweep) {
    s += "\n[sweep]\n";
    if (!c.sweep.p.empty()) line("p", join(c.sweep.p));
    if (!c.sweep.q.empty()) line("q", join(c.sweep.q));
    if (!c.sweep.rho.empty()) line("rho", join(c.sweep.rho));
    if (!c.sweep.u0_amplitude.empty()) line("u0_amplitude", join(c.sweep.u0_amplitude));
  }
  return s;
}

GridPtr make_grid(const SimConfig& c) {
  return PolarGrid::build_annulus(c.domain.r_inner, c.domain.r_outer,
                                  static_cast<std::size_t>(c.domain.nr),
                                  static_cast<std::size_t>(c.domain.ntheta), c.domain.B);
}

State initial_state(const SimConfig& c, const GridPtr& grid) {
  State s;
  s.t = 0.0;
  s.u = initial_bump(grid, c.init.u0_amplitude, c.init.u0_r1, c.init.u0_r2);
  s.v = initial_bump(grid, c.init.u1_amplitude, c.init.u1_r1, c.init.u1_r2);
  return s;
}

RunSpec make_run_spec(const SimConfig& c, const GridPtr& grid) {
  RunSpec spec;
  spec.grid = grid;
  spec.scheme = c.time.scheme;
  spec.np = c.nonlinearity;
  spec.weight = c.weight_params();
  spec.initial = initial_state(c, grid);
  spec.t_end = c.time.t_end;
  spec.stride = c.time.stride;
  return spec;
}

}  // namespace sdwave
