#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expr.hpp"
#include "lwb/ce/complex.hpp"
#include "lwb/circle/diff_circle.hpp"
#include "lwb/error.hpp"
#include "lwb/flux/period_flux.hpp"
#include "lwb/group/finite.hpp"
#include "lwb/lie/lie_algebra.hpp"
#include "lwb/witt/witt.hpp"

#ifndef LWB_VERSION
#define LWB_VERSION "dev"
#endif

using nlohmann::json;
using namespace lwb;

namespace {

constexpr const char* kSchema = "lwb-report/1";

struct Globals {
  std::string format = "text";
  double tol = 0;  // 0: per-command default
  std::size_t grid = 256;
  double eps = 1e-3;
  long window = 16;
  long inner = 12;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t p = 2;
  std::vector<std::string> lambdas;
};

struct Report {
  std::string command;
  json config = json::object();
  json result = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> text;
  int exit_code = 0;
};

std::string fmt(double v) {
  if (v == 0) v = 0;  // no "-0"
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}
std::string yes(bool b) { return b ? "true" : "false"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

json envelope(const Report& r, const Globals& g) {
  json j;
  j["schema"] = kSchema;
  j["version"] = LWB_VERSION;
  j["command"] = r.command;
  j["seed"] = g.seed;
  j["config"] = r.config;
  j["result"] = r.result;
  j["exit_code"] = r.exit_code;
  return j;
}

std::string render(const Report& r, const Globals& g) {
  std::ostringstream o;
  if (g.format == "json") {
    o << envelope(r, g).dump(2) << "\n";
  } else if (g.format == "csv") {
    o << "# lwb " << LWB_VERSION << " " << r.command << " seed=" << g.seed << "\n";
    o << "# config " << r.config.dump() << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) o << (i ? "," : "") << csv_field(r.columns[i]);
    o << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << csv_field(row[i]);
      o << "\n";
    }
  } else {
    o << "lwb " << LWB_VERSION << " " << r.command << " (seed " << g.seed << ")\n";
    for (const auto& line : r.text) o << line << "\n";
    o << (r.exit_code == 0 ? "status: ok" : "status: MISMATCH") << "\n";
  }
  return o.str();
}

void emit(const std::string& text, const Globals& g) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw Error("io_error", "cannot write " + g.out);
  f << text;
}

json base_config(const Globals& g) {
  return {{"format", g.format}, {"tol", g.tol}, {"grid", g.grid}, {"eps", g.eps}, {"window", g.window},
          {"inner_window", g.inner}, {"lambda", g.lambdas}, {"p", g.p}};
}

std::vector<exact::Rational> lambdas_or(const Globals& g, bool given, std::vector<long> fallback) {
  std::vector<exact::Rational> out;
  if (given) {
    for (const auto& s : g.lambdas)
      if (!s.empty()) out.push_back(exact::parse_rational(s));
  } else {
    for (long l : fallback) out.push_back(exact::make_rational(l));
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  const auto b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string underscored(std::string s) {
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

// "a,b;c,d" -> rows of rationals
std::vector<exact::Vector> parse_matrix(const std::string& s) {
  std::vector<exact::Vector> rows;
  for (const auto& r : split(s, ';')) {
    exact::Vector row;
    for (const auto& x : split(r, ',')) row.push_back(exact::parse_rational(trim(x)));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_real(const std::string& s) {
  const auto t = trim(s);
  if (t.find('/') != std::string::npos) return exact::parse_rational(t).get_d();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw Error("parse_error", "not a number: '" + t + "'");
  return v;
}

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> p;
  for (const auto& x : split(s, ',')) p.push_back(parse_real(x));
  return p;
}

std::vector<std::size_t> parse_indices(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& x : split(s, ',')) {
    const auto t = trim(x);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw Error("config_error", "expected a list of non-negative integers, got \"" + s + "\"");
    out.push_back(std::stoul(t));
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("io_error", "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error("parse_error", path + ": " + e.what());
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------
// Finite group specs

std::vector<std::size_t> cyclic_orders(const std::string& spec) {
  std::vector<std::size_t> orders;
  for (const auto& part : split(spec, 'x')) {
    const auto t = trim(part);
    if (t.size() < 2 || t[0] != 'Z' || t.find_first_not_of("0123456789", 1) != std::string::npos)
      throw Error("config_error", "cannot parse cyclic factor \"" + t + "\" in \"" + spec + "\"");
    orders.push_back(std::stoul(t.substr(1)));
  }
  return orders;
}

group::FiniteGroup parse_group(const std::string& spec) {
  if (ends_with(spec, ".json")) return group::group_from_json(read_json_file(spec));
  if (spec == "S3") return group::symmetric3();
  if (spec == "1" || spec == "trivial") return group::trivial_group();
  group::FiniteGroup g = group::trivial_group();
  bool first = true;
  for (std::size_t n : cyclic_orders(spec)) {
    g = first ? group::cyclic(n) : group::direct_product(g, group::cyclic(n));
    first = false;
  }
  return g;
}

std::size_t element_order(const group::FiniteGroup& g, group::Elem x) {
  std::size_t k = 1;
  for (group::Elem y = x; y != g.identity(); y = g.mul(y, x)) ++k;
  return k;
}

// "0,2" lists elements; "Zk" is the cyclic subgroup of the lowest element of
// order k; "G" and "1" are the obvious ones.
group::Subgroup parse_subgroup(const group::FiniteGroup& g, const std::string& spec) {
  std::vector<group::Elem> elems;
  if (spec == "G") {
    for (std::size_t i = 0; i < g.order(); ++i) elems.push_back(i);
  } else if (spec == "1") {
    elems.push_back(g.identity());
  } else if (!spec.empty() && spec[0] == 'Z') {
    const auto orders = cyclic_orders(spec);
    if (orders.size() != 1) throw Error("config_error", "subgroup spec must be a single Zk or an element list");
    std::optional<group::Elem> gen;
    for (std::size_t x = 0; x < g.order() && !gen; ++x)
      if (element_order(g, x) == orders[0]) gen = x;
    if (!gen) throw Error("config_error", "no element of order " + std::to_string(orders[0]));
    group::Elem y = g.identity();
    do {
      elems.push_back(y);
      y = g.mul(y, *gen);
    } while (y != g.identity());
  } else {
    for (auto i : parse_indices(spec)) elems.push_back(i);
  }
  return group::make_subgroup(g, elems);
}

// "Z2", "Z2xZ3" (trivial action) or a JSON file {"orders": [...], "action": [[perm of A] per g]}.
group::FiniteModule parse_module(const group::FiniteGroup& g, const std::string& spec) {
  if (ends_with(spec, ".json")) {
    const auto j = read_json_file(spec);
    const auto orders = j.at("orders").get<std::vector<std::size_t>>();
    if (!j.contains("action")) return group::FiniteModule::trivial(g, orders);
    return group::FiniteModule::with_action(g, orders, j.at("action").get<group::Table>());
  }
  return group::FiniteModule::trivial(g, cyclic_orders(spec));
}

// ---------------------------------------------------------------------------
// Commands

std::optional<std::size_t> expected_witt(const exact::Rational& l, std::size_t p) {
  static const std::size_t h1[] = {2, 1, 1, 0, 0, 0, 0, 0};
  static const std::size_t h2[] = {2, 2, 2, 0, 0, 1, 0, 1};
  if (l.get_den() != 1 || l < 0 || l > 7 || (p != 1 && p != 2)) return std::nullopt;
  const long i = l.get_num().get_si();
  return p == 1 ? h1[i] : h2[i];
}

Report cmd_witt_table(const Globals& g, bool lambda_given) {
  Report r{"witt-table"};
  r.config = base_config(g);
  const auto ls = lambdas_or(g, lambda_given, {0, 1, 2, 3, 4, 5, 6, 7});
  std::vector<std::future<witt::WindowCohomology>> jobs;
  for (const auto& l : ls)
    jobs.push_back(std::async(std::launch::async, [&g, l] {
      return witt::homogeneous_cohomology(l, g.p, g.window, g.inner);
    }));
  r.columns = {"lambda", "p", "outer", "inner", "dim_cocycles", "dim_coboundaries", "dimH", "expected", "stabilized",
               "match"};
  json rows = json::array();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const auto c = jobs[i].get();
    const auto want = expected_witt(ls[i], g.p);
    const bool match = !want || *want == c.dim_cohomology;
    if (!match) r.exit_code = 1;
    json row = witt::to_json(c);
    row["expected"] = want ? json(*want) : json(nullptr);
    row["match"] = match;
    rows.push_back(row);
    const std::string l = exact::to_string(ls[i]);
    r.rows.push_back({l, std::to_string(g.p), std::to_string(g.window), std::to_string(g.inner),
                      std::to_string(c.dim_cocycles), std::to_string(c.dim_coboundaries),
                      std::to_string(c.dim_cohomology), want ? std::to_string(*want) : "", yes(c.stabilized),
                      yes(match)});
    r.text.push_back("lambda=" + l + "  dim H^" + std::to_string(g.p) + " = " + std::to_string(c.dim_cohomology) +
                     (want ? "  (expected " + std::to_string(*want) + ")" : "") +
                     (c.stabilized ? "  stable" : "  not stabilized"));
  }
  r.result["rows"] = rows;
  return r;
}

Report cmd_sl2_table(const Globals& g, bool lambda_given, bool p_given) {
  Report r{"sl2-table"};
  r.config = base_config(g);
  const auto ls = lambdas_or(g, lambda_given, {0, 1, 2, 3});
  const std::vector<std::size_t> degrees = p_given ? std::vector<std::size_t>{g.p} : std::vector<std::size_t>{1, 2};
  static const std::size_t h1[] = {2, 1, 0, 0};
  static const std::size_t h2[] = {1, 2, 0, 0};
  r.columns = {"lambda", "p", "dim_cocycles", "dim_coboundaries", "dimH", "expected", "match"};
  json rows = json::array();
  for (const auto& l : ls) {
    for (std::size_t p : degrees) {
      const auto c = witt::sl2_slice_cohomology(l, p);
      std::optional<std::size_t> want;
      if (l.get_den() == 1 && l >= 0 && l <= 3 && (p == 1 || p == 2))
        want = (p == 1 ? h1 : h2)[l.get_num().get_si()];
      const bool match = !want || *want == c.dim_cohomology;
      if (!match) r.exit_code = 1;
      const std::string ls_ = exact::to_string(l);
      rows.push_back({{"lambda", ls_}, {"p", p}, {"dim_cocycles", c.dim_cocycles},
                      {"dim_coboundaries", c.dim_coboundaries}, {"dimH", c.dim_cohomology},
                      {"expected", want ? json(*want) : json(nullptr)}, {"match", match}});
      r.rows.push_back({ls_, std::to_string(p), std::to_string(c.dim_cocycles), std::to_string(c.dim_coboundaries),
                        std::to_string(c.dim_cohomology), want ? std::to_string(*want) : "", yes(match)});
      r.text.push_back("lambda=" + ls_ + "  dim H^" + std::to_string(p) + "(sl2, F_lambda) = " +
                       std::to_string(c.dim_cohomology) + (want ? "  (expected " + std::to_string(*want) + ")" : ""));
    }
  }
  r.result["rows"] = rows;
  return r;
}

std::vector<circle::PeriodicFunction> directions_from(const Globals& g, const std::vector<std::string>& exprs,
                                                      std::size_t random_count) {
  std::vector<circle::PeriodicFunction> dirs;
  if (exprs.empty() && random_count == 0) return circle::standard_directions(g.grid);
  for (const auto& e : exprs) dirs.push_back(circle::PeriodicFunction::from_function(g.grid, cli::parse_expression(e)));
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t i = 0; i < random_count; ++i) {
    double a[4][2];
    for (auto& m : a)
      for (double& c : m) c = u(rng);
    dirs.push_back(circle::PeriodicFunction::from_function(g.grid, [a](double t) {
      double v = 0;
      for (int m = 0; m < 4; ++m)
        v += a[m][0] * std::cos(2 * std::numbers::pi * m * t) + a[m][1] * std::sin(2 * std::numbers::pi * (m + 1) * t);
      return v;
    }));
  }
  return dirs;
}

Report cmd_derive_check(const Globals& g, std::vector<std::string> cochains, const std::vector<std::string>& exprs,
                        std::size_t random_count, bool no_richardson) {
  Report r{"derive-check"};
  const double tol = g.tol > 0 ? g.tol : 1e-4;
  r.config = base_config(g);
  r.config["tol"] = tol;
  r.config["directions"] = exprs.empty() && random_count == 0 ? json("standard") : json(exprs);
  r.config["random_directions"] = random_count;
  r.config["richardson"] = !no_richardson;
  if (cochains.empty()) cochains = {"theta", "dtheta", "schwarzian", "bott"};
  r.config["cochains"] = cochains;
  const auto dirs = directions_from(g, exprs, random_count);
  circle::DeriveOptions opt{g.eps, !no_richardson};
  r.columns = {"cochain", "target", "directions", "max_rel_error", "pass"};
  json checks = json::array();
  for (const auto& name : cochains) {
    const auto f = circle::cochain_by_name(name);
    const auto target = circle::derivation_target(name);
    std::vector<std::vector<std::size_t>> combos;
    if (f.degree == 1) {
      for (std::size_t i = 0; i < dirs.size(); ++i) combos.push_back({i});
    } else {
      for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j) combos.push_back({i, j});
    }
    double worst = 0;
    for (const auto& c : combos) {
      std::vector<circle::PeriodicFunction> args;
      for (auto i : c) args.push_back(dirs[i]);
      const auto got = circle::derive(f, args, opt);
      const auto want = circle::evaluate_lie_cocycle(target, args);
      // A vanishing target has no relative error; measure against the size of the inputs instead.
      double scale = 1;
      for (const auto& x : args) scale *= x.max_abs() + x.derivative(1).max_abs() + x.derivative(3).max_abs();
      const double ref = want.max_abs() > 1e-9 * scale ? want.max_abs() : scale;
      const double err = (got - want).max_abs() / ref;
      worst = std::max(worst, err);
      const bool pass = err <= tol;
      if (!pass) r.exit_code = 1;
      std::string idx;
      for (auto i : c) idx += (idx.empty() ? "" : ";") + std::to_string(i);
      checks.push_back({{"cochain", name}, {"target", target}, {"directions", c}, {"max_rel_error", err},
                        {"pass", pass}});
      r.rows.push_back({name, target, idx, fmt(err), yes(pass)});
    }
    r.text.push_back("D" + std::to_string(f.degree) + " " + name + " vs " + target +
                     ": max relative error " + fmt(worst) + (worst <= tol ? "  ok" : "  FAIL"));
  }
  r.result["checks"] = checks;
  return r;
}

Report cmd_cup_check(const Globals& g, bool lambda_given) {
  Report r{"cup-check"};
  r.config = base_config(g);
  const auto ls = lambdas_or(g, lambda_given, {1, 2});
  r.columns = {"lambda", "window", "pairs_checked", "omega_bar_identity", "omega_identity", "pass"};
  json rows = json::array();
  for (const auto& l : ls) {
    const auto c = witt::cup_identity_check(l, g.window);
    if (!c.holds()) r.exit_code = 1;
    const auto s = exact::to_string(l);
    rows.push_back({{"lambda", s}, {"window", c.window}, {"pairs_checked", c.pairs_checked},
                    {"omega_bar_identity", c.omega_bar_identity}, {"omega_identity", c.omega_identity}});
    r.rows.push_back({s, std::to_string(c.window), std::to_string(c.pairs_checked), yes(c.omega_bar_identity),
                      yes(c.omega_identity), yes(c.holds())});
    r.text.push_back("lambda=" + s + "  omega_bar = alpha_0^alpha_{l+1}: " + yes(c.omega_bar_identity) +
                     "  omega = alpha_1^alpha_{l+1}: " + yes(c.omega_identity) + "  (" +
                     std::to_string(c.pairs_checked) + " pairs)");
  }
  r.result["rows"] = rows;
  return r;
}

flux::LoopInGroup make_loop(const std::string& kind, std::size_t grid, std::size_t nodes) {
  if (kind == "rotation") return flux::LoopInGroup::rotation(grid, nodes);
  if (kind == "constant") return flux::LoopInGroup::constant(circle::CircleDiffeo::identity(grid), nodes);
  if (kind == "bent") {
    // Closed loop homotopic to the rotation loop.
    return flux::LoopInGroup::from_function(nodes, [grid](double t) {
      const double tau = 2 * std::numbers::pi;
      return circle::CircleDiffeo(circle::PeriodicFunction::from_function(grid, [=](double x) {
        return t + 0.02 * std::sin(tau * t) * std::sin(tau * x) + 0.01 * (1 - std::cos(tau * t)) * std::cos(2 * tau * x);
      }));
    });
  }
  throw Error("config_error", "unknown loop \"" + kind + "\" (rotation, constant, bent)");
}

std::vector<std::string> h1_basis(double lambda) {
  if (lambda == 0) return {"alpha_0", "alpha_1"};
  if (lambda == 1) return {"alpha_2"};
  if (lambda == 2) return {"alpha_3"};
  return {};
}

Report cmd_flux(const Globals& g, const std::string& cocycle, const std::string& loop_kind, const std::string& dir,
                std::size_t nodes) {
  Report r{"flux"};
  const double tol = g.tol > 0 ? g.tol : 1e-6;
  r.config = base_config(g);
  r.config["tol"] = tol;
  r.config["cocycle"] = cocycle;
  r.config["loop"] = loop_kind;
  r.config["direction"] = dir;
  r.config["nodes"] = nodes;
  const auto w = flux::lie_two_cocycle(underscored(cocycle));
  const auto loop = make_loop(loop_kind, g.grid, nodes);
  const auto eta = circle::PeriodicFunction::from_function(g.grid, cli::parse_expression(dir));
  const auto i = flux::flux_line_integral(w, loop, eta);
  r.result["I_gamma"] = circle::to_json(i);
  r.result["flux"] = circle::to_json(i.scaled(-1));
  std::optional<double> err;
  if (loop_kind == "rotation" || loop_kind == "constant") {
    circle::PeriodicFunction want = circle::PeriodicFunction::constant(g.grid, 0);
    const std::string n = underscored(cocycle);
    if (loop_kind == "rotation" && n.rfind("omega_bar_", 0) == 0)
      want = eta.derivative(unsigned(std::stoul(n.substr(10)) + 1)).scaled(-1);
    err = (i - want).max_abs();
    r.result["prediction_error"] = *err;
    if (*err > tol) r.exit_code = 1;
  }
  const auto basis = h1_basis(w.lambda);
  const auto cls = flux::flux_class(w, loop, basis);
  flux::IntegrabilityData data;
  data.flux_values = {cls.coordinates};
  data.tol = 1e-9;
  const auto verdict = flux::integrability_decision(data, flux::Lattice::zero(1));
  r.result["class"] = {{"basis", cls.basis}, {"coordinates", cls.coordinates},
                       {"relative_residual", cls.relative_residual}};
  r.result["verdict"] = flux::to_json(verdict);
  std::string coords;
  for (double c : cls.coordinates) coords += (coords.empty() ? "" : ";") + fmt(c);
  r.columns = {"cocycle", "loop", "direction", "max_abs_I", "prediction_error", "class_coordinates", "verdict"};
  r.rows.push_back({cocycle, loop_kind, dir, fmt(i.max_abs()), err ? fmt(*err) : "", coords,
                    flux::to_string(verdict.verdict)});
  r.text.push_back("I_gamma max |.| = " + fmt(i.max_abs()) + (err ? "  prediction error " + fmt(*err) : ""));
  r.text.push_back("flux class on {" + [&] {
    std::string b;
    for (const auto& x : basis) b += (b.empty() ? "" : ", ") + x;
    return b;
  }() + "}: [" + coords + "]  verdict " + flux::to_string(verdict.verdict));
  return r;
}

Report cmd_period(const Globals& g, const std::string& cocycle, const std::string& loop_kind, std::size_t nodes,
                  const std::string& torus_form, const std::string& torus_lattice, const std::string& value_lattice) {
  Report r{"period"};
  r.config = base_config(g);
  if (!torus_form.empty()) {
    const double tol = g.tol > 0 ? g.tol : 1e-9;
    r.config["tol"] = tol;
    r.config["torus_form"] = torus_form;
    r.config["torus_lattice"] = torus_lattice;
    r.config["value_lattice"] = value_lattice;
    const auto w = parse_matrix(torus_form);
    const auto gt = torus_lattice.empty() ? flux::Lattice::integers(w.size()) : flux::Lattice::exact(parse_matrix(torus_lattice));
    const auto gz = value_lattice.empty() ? flux::Lattice::integers(1) : flux::Lattice::exact(parse_matrix(value_lattice));
    const auto p = flux::torus_commutator_pairing({w}, gt, gz, tol);
    json values = json::array();
    r.columns = {"i", "j", "value", "exact_value"};
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < p.values.size(); ++j) {
        row.push_back(p.values[i][j][0]);
        const std::string ev = p.exact_values ? exact::to_string((*p.exact_values)[i][j][0]) : "";
        r.rows.push_back({std::to_string(i), std::to_string(j), fmt(p.values[i][j][0]), ev});
      }
      values.push_back(row);
    }
    r.result["pairings"] = values;
    r.result["contained"] = p.contained;
    r.result["exact_verdict"] = p.exact_verdict;
    r.result["max_quadrature_error"] = p.max_quadrature_error;
    r.result["witness"] = p.witness ? json{p.witness->first, p.witness->second} : json(nullptr);
    r.text.push_back(std::string("omega(Gamma_T, Gamma_T) in Gamma_Z: ") + yes(p.contained) +
                     (p.exact_verdict ? " (exact)" : " (float)") +
                     (p.witness ? "  witness (" + std::to_string(p.witness->first) + "," +
                                      std::to_string(p.witness->second) + ")"
                                : ""));
    return r;
  }
  const double tol = g.tol > 0 ? g.tol : 1e-9;
  r.config["tol"] = tol;
  r.config["cocycle"] = cocycle;
  r.config["loop"] = loop_kind;
  r.config["nodes"] = nodes;
  const std::string name = underscored(cocycle);
  const auto a = flux::lie_one_cocycle(name);
  const auto loop = make_loop(loop_kind, g.grid, nodes);
  const auto per = flux::loop_period_1cocycle(a, loop);
  std::optional<double> want;
  if (loop_kind == "rotation") want = name == "alpha_0" ? 1.0 : 0.0;
  if (loop_kind == "constant") want = 0.0;
  double err = 0;
  if (want) {
    err = (per - circle::PeriodicFunction::constant(g.grid, *want)).max_abs();
    if (err > tol) r.exit_code = 1;
  }
  r.result["period"] = circle::to_json(per);
  r.result["mean"] = per.integral();
  r.result["expected"] = want ? json(*want) : json(nullptr);
  r.result["error"] = want ? json(err) : json(nullptr);
  r.columns = {"cocycle", "loop", "mean", "expected", "error"};
  r.rows.push_back({cocycle, loop_kind, fmt(per.integral()), want ? fmt(*want) : "", want ? fmt(err) : ""});
  r.text.push_back("per_" + name + "(" + loop_kind + ") = " + fmt(per.integral()) +
                   (want ? "  expected " + fmt(*want) + ", error " + fmt(err) : ""));
  return r;
}

Report cmd_five_term(const Globals& g, const std::string& gs, const std::string& ns, const std::string& as) {
  Report r{"five-term"};
  r.config = base_config(g);
  r.config["group"] = gs;
  r.config["normal"] = ns;
  r.config["module"] = as;
  const auto grp = parse_group(gs);
  const auto n = parse_subgroup(grp, ns);
  const auto a = parse_module(grp, as);
  const auto rep = group::five_term_check(grp, a, n);
  r.result = group::to_json(rep);
  if (rep.status() == "not_exact") r.exit_code = 1;
  r.columns = {"h1_quotient",        "h1_group", "h1_normal_invariant", "h2_quotient", "h2_group",
               "inflation1_injective", "exact_at_h1_group", "exact_at_h1_normal", "exact_at_h2_quotient",
               "status"};
  r.rows.push_back({std::to_string(rep.h1_quotient), std::to_string(rep.h1_group),
                    std::to_string(rep.h1_normal_invariant), std::to_string(rep.h2_quotient),
                    std::to_string(rep.h2_group), yes(rep.inflation1_injective), yes(rep.exact_at_h1_group),
                    yes(rep.exact_at_h1_normal), yes(rep.exact_at_h2_quotient), rep.status()});
  r.text.push_back("|H1(G/N,A^N)|=" + std::to_string(rep.h1_quotient) + " |H1(G,A)|=" + std::to_string(rep.h1_group) +
                   " |H1(N,A)^G|=" + std::to_string(rep.h1_normal_invariant) +
                   " |H2(G/N,A^N)|=" + std::to_string(rep.h2_quotient) + " |H2(G,A)|=" + std::to_string(rep.h2_group));
  r.text.push_back("five-term sequence: " + rep.status());
  return r;
}

group::GroupCochain cochain_from_values(const group::FiniteGroup& grp, const group::FiniteModule& a,
                                        const std::string& values) {
  group::GroupCochain f(2, grp.order());
  const auto v = parse_indices(values);
  if (v.size() != f.values().size())
    throw Error("config_error", "a 2-cochain on a group of order " + std::to_string(grp.order()) + " needs " +
                                    std::to_string(f.values().size()) + " values");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= a.order()) throw Error("config_error", "cochain value out of range of the module");
    f.values()[i] = v[i];
  }
  return f;
}

Report cmd_extension(const Globals& g, const std::string& gs, const std::string& as, const std::string& values,
                     const std::string& compare) {
  Report r{"extension"};
  r.config = base_config(g);
  r.config["group"] = gs;
  r.config["module"] = as;
  r.config["values"] = values;
  r.config["compare"] = compare;
  const auto grp = parse_group(gs);
  const auto a = parse_module(grp, as);
  const auto f = cochain_from_values(grp, a, values);
  const bool normalized = f.is_normalized(grp.identity());
  const bool cocycle = group::is_cocycle(grp, a, f);
  const auto witness = group::associativity_witness(group::extension_table(grp, a, f));
  const bool associative = !witness.has_value();
  r.result["normalized"] = normalized;
  r.result["cocycle"] = cocycle;
  r.result["associative"] = associative;
  r.result["witness"] = witness ? json(*witness) : json(nullptr);
  if (normalized && associative) r.result["extension"] = group::to_json(group::build_extension(grp, a, f).group);
  if (cocycle != associative) r.exit_code = 1;
  std::string eq;
  if (!compare.empty()) {
    const auto f2 = cochain_from_values(grp, a, compare);
    const auto e = group::extensions_equivalent(grp, a, f, f2);
    eq = e.status == group::SearchStatus::found       ? "equivalent"
         : e.status == group::SearchStatus::not_found ? "inequivalent"
                                                      : "undecided_capped";
    r.result["equivalence"] = eq;
    if (e.h) r.result["h"] = e.h->values();
  }
  r.columns = {"order", "normalized", "cocycle", "associative", "equivalence"};
  r.rows.push_back({std::to_string(grp.order() * a.order()), yes(normalized), yes(cocycle), yes(associative), eq});
  r.text.push_back("A x_f G of order " + std::to_string(grp.order() * a.order()) + ": cocycle " + yes(cocycle) +
                   ", associative " + yes(associative) + (eq.empty() ? "" : ", " + eq));
  return r;
}

Report cmd_simplex(const Globals& g, const std::string& chart_name, const std::string& omega_s, const std::string& xs,
                   const std::string& ys) {
  Report r{"simplex"};
  const double tol = g.tol > 0 ? g.tol : 1e-10;
  r.config = base_config(g);
  r.config["tol"] = tol;
  r.config["chart"] = chart_name;
  r.config["omega"] = omega_s;
  r.config["x"] = xs;
  r.config["y"] = ys;
  std::vector<std::vector<double>> w;
  for (const auto& row : split(omega_s, ';')) w.push_back(parse_point(row));
  const std::size_t n = w.size();
  Eigen::MatrixXd om(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i].size() != n) throw Error("dimension_mismatch", "omega must be square");
    for (std::size_t j = 0; j < n; ++j) om(Eigen::Index(i), Eigen::Index(j)) = w[i][j];
  }
  const auto chart = chart_name == "abelian"      ? flux::abelian_chart(n)
                     : chart_name == "heisenberg" ? flux::heisenberg_chart()
                                                  : throw Error("config_error", "unknown chart " + chart_name);
  if (chart.dim != n) throw Error("config_error", "omega does not match the chart dimension");
  const auto x = parse_point(xs), y = parse_point(ys);
  auto f = [&](const flux::Point& a, const flux::Point& b) { return flux::simplex_cocycle(chart, om, a, b); };
  const double fv = f(x, y);
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), Eigen::Index(n)), yv(y.data(), Eigen::Index(n));
  const double omega_xy = xv.dot(om * yv);
  const double alt = flux::alternated_second_derivative(f, x, y);
  const double alt_err = std::abs(alt - omega_xy);
  r.result = {{"f_V", fv}, {"omega_xy", omega_xy}, {"alternated_second_derivative", alt},
              {"alternation_error", alt_err}};
  std::optional<double> half_err;
  if (chart_name == "abelian") {
    half_err = std::abs(fv - 0.5 * omega_xy);
    r.result["half_omega_error"] = *half_err;
    if (*half_err > tol) r.exit_code = 1;
  }
  if (alt_err > 1e-6 * std::max(1.0, std::abs(omega_xy))) r.exit_code = 1;
  r.columns = {"chart", "f_V", "omega_xy", "alternated", "half_omega_error", "alternation_error"};
  r.rows.push_back({chart_name, fmt(fv), fmt(omega_xy), fmt(alt), half_err ? fmt(*half_err) : "", fmt(alt_err)});
  r.text.push_back("f_V(x,y) = " + fmt(fv) + "  Omega(x,y) = " + fmt(omega_xy) + "  alternated d2 f = " + fmt(alt));
  return r;
}

lie::LieAlgebra parse_algebra(const std::string& spec) {
  if (ends_with(spec, ".json")) return lie::algebra_from_json(read_json_file(spec));
  if (spec == "sl2-circle") return lie::sl2_circle();
  if (spec == "sl2-witt") return lie::sl2_witt();
  if (spec == "heisenberg") return lie::heisenberg();
  if (spec.rfind("abelian:", 0) == 0) return lie::abelian(std::stoul(spec.substr(8)));
  throw Error("config_error", "unknown algebra \"" + spec + "\"");
}

lie::LieModule parse_lie_module(const lie::LieAlgebra& a, const std::string& spec) {
  if (ends_with(spec, ".json")) return lie::module_from_json(a, read_json_file(spec));
  if (spec == "adjoint") return lie::adjoint_module(a);
  if (spec.rfind("trivial:", 0) == 0) return lie::trivial_module(a, std::stoul(spec.substr(8)));
  throw Error("config_error", "unknown module \"" + spec + "\"");
}

Report cmd_ce(const Globals& g, const std::string& alg, const std::string& mod, bool p_given) {
  Report r{"ce-cohomology"};
  r.config = base_config(g);
  r.config["algebra"] = alg;
  r.config["module"] = mod;
  const auto a = parse_algebra(alg);
  const auto m = parse_lie_module(a, mod);
  std::vector<std::size_t> degrees;
  if (p_given) degrees = {g.p};
  else
    for (std::size_t p = 0; p <= a.dim(); ++p) degrees.push_back(p);
  r.columns = {"p", "dim_cocycles", "dim_coboundaries", "dimH"};
  json rows = json::array();
  for (std::size_t p : degrees) {
    const auto c = ce::cohomology(a, m, p);
    json reps = json::array();
    for (const auto& rep : c.representatives) reps.push_back(ce::to_json(rep));
    rows.push_back({{"p", p}, {"dim_cocycles", c.dim_cocycles}, {"dim_coboundaries", c.dim_coboundaries},
                    {"dimH", c.dim_cohomology}, {"representatives", reps}});
    r.rows.push_back({std::to_string(p), std::to_string(c.dim_cocycles), std::to_string(c.dim_coboundaries),
                      std::to_string(c.dim_cohomology)});
    r.text.push_back("dim H^" + std::to_string(p) + " = " + std::to_string(c.dim_cohomology));
  }
  r.result["rows"] = rows;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie algebra and group cohomology workbench"};
  app.set_version_flag("--version", LWB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--tol", g.tol, "tolerance (command default when unset)")->check(CLI::PositiveNumber);
  app.add_option("--grid", g.grid, "circle grid size K (power of two, >= 16)");
  app.add_option("--eps", g.eps, "finite-difference step for derive-check");
  app.add_option("--window", g.window, "outer window N");
  app.add_option("--inner-window", g.inner, "inner window M");
  app.add_option("--seed", g.seed, "seed for randomized inputs");
  app.add_option("--out", g.out, "write the report to FILE");
  auto* p_opt = app.add_option("--p", g.p, "cochain degree");
  auto* l_opt = app.add_option("--lambda", g.lambdas, "density weights (comma separated rationals)")
                    ->delimiter(',')
                    ->expected(0, CLI::detail::expected_max_vector_size);

  auto* witt_cmd = app.add_subcommand("witt-table", "window cohomology of the Witt algebra in F_lambda");
  auto* sl2_cmd = app.add_subcommand("sl2-table", "cohomology of the sl2 slice in F_lambda");

  auto* derive_cmd = app.add_subcommand("derive-check", "derivation identities D f = Lie cocycle");
  std::vector<std::string> cochains, exprs;
  std::size_t random_count = 0;
  bool no_richardson = false;
  derive_cmd->add_option("--cochain,--cocycle", cochains, "group cochains (theta, dtheta, schwarzian, L, bott, a.b)")
      ->delimiter(',');
  derive_cmd->add_option("--direction", exprs, "direction expression in t (repeatable)");
  derive_cmd->add_option("--random-directions", random_count, "extra seeded random directions");
  derive_cmd->add_flag("--no-richardson", no_richardson, "plain central differences");

  auto* cup_cmd = app.add_subcommand("cup-check", "exact cup identities in the graded complex");

  auto* flux_cmd = app.add_subcommand("flux", "flux line integral along a loop in Diff(S^1)");
  std::string flux_cocycle = "omega-bar-1", loop_kind = "rotation", direction = "sin(2*pi*t)";
  std::size_t nodes = 64;
  flux_cmd->add_option("--cocycle", flux_cocycle, "Lie 2-cocycle (omega-l, omega-0, omega-bar-l)");
  flux_cmd->add_option("--loop", loop_kind, "rotation, constant or bent");
  flux_cmd->add_option("--direction", direction, "test vector field as an expression in t");
  flux_cmd->add_option("--nodes", nodes, "loop intervals (power of two, >= 64)");

  auto* period_cmd = app.add_subcommand("period", "period of a Lie 1-cocycle along a loop, or torus pairings");
  std::string period_cocycle = "alpha-0", torus_form, torus_lattice, value_lattice;
  period_cmd->add_option("--cocycle", period_cocycle, "Lie 1-cocycle alpha-n");
  period_cmd->add_option("--loop", loop_kind, "rotation, constant or bent");
  period_cmd->add_option("--nodes", nodes, "loop intervals");
  period_cmd->add_option("--torus-form", torus_form, "alternating rational matrix \"a,b;c,d\"");
  period_cmd->add_option("--torus-lattice", torus_lattice, "generators of Gamma_T as rows (default Z^n)");
  period_cmd->add_option("--value-lattice", value_lattice, "generators of Gamma_Z as rows (default Z)");

  auto* five_cmd = app.add_subcommand("five-term", "inflation-restriction sequence for finite groups");
  std::string gs = "Z4", ns = "Z2", as = "Z2";
  five_cmd->add_option("--group", gs, "Zn, ZmxZn.., S3 or a .json table");
  five_cmd->add_option("--normal", ns, "Zk, G, 1 or an element list \"0,2\"");
  five_cmd->add_option("--module", as, "Zk, ZkxZl.. (trivial action) or a .json module");

  auto* ext_cmd = app.add_subcommand("extension", "abelian extension A x_f G from a 2-cochain");
  std::string values, compare;
  ext_cmd->add_option("--group", gs, "Zn, ZmxZn.., S3 or a .json table");
  ext_cmd->add_option("--module", as, "Zk (trivial action) or a .json module");
  ext_cmd->add_option("--values", values, "f(g,h) for g,h in index order, comma separated")->required();
  ext_cmd->add_option("--compare", compare, "second cochain to test for equivalence");

  auto* simplex_cmd = app.add_subcommand("simplex", "simplex 2-cocycle f_V in a local chart");
  std::string chart = "abelian", omega_s = "0,1;-1,0", xs = "0.7,-0.2", ys = "0.1,1.3";
  simplex_cmd->add_option("--chart", chart, "abelian or heisenberg");
  simplex_cmd->add_option("--omega", omega_s, "alternating matrix \"a,b;c,d\"");
  simplex_cmd->add_option("--x", xs, "first point");
  simplex_cmd->add_option("--y", ys, "second point");

  auto* ce_cmd = app.add_subcommand("ce-cohomology", "Chevalley-Eilenberg cohomology of a finite-dimensional algebra");
  std::string alg = "sl2-witt", lmod = "adjoint";
  ce_cmd->add_option("--algebra", alg, "sl2-circle, sl2-witt, heisenberg, abelian:n or a .lie.json file");
  ce_cmd->add_option("--module", lmod, "adjoint, trivial:k or a .json module");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Report r;
    const bool lg = l_opt->count() > 0, pg = p_opt->count() > 0;
    if (*witt_cmd) r = cmd_witt_table(g, lg);
    else if (*sl2_cmd) r = cmd_sl2_table(g, lg, pg);
    else if (*derive_cmd) r = cmd_derive_check(g, cochains, exprs, random_count, no_richardson);
    else if (*cup_cmd) r = cmd_cup_check(g, lg);
    else if (*flux_cmd) r = cmd_flux(g, flux_cocycle, loop_kind, direction, nodes);
    else if (*period_cmd) r = cmd_period(g, period_cocycle, loop_kind, nodes, torus_form, torus_lattice, value_lattice);
    else if (*five_cmd) r = cmd_five_term(g, gs, ns, as);
    else if (*ext_cmd) r = cmd_extension(g, gs, as, values, compare);
    else if (*simplex_cmd) r = cmd_simplex(g, chart, omega_s, xs, ys);
    else if (*ce_cmd) r = cmd_ce(g, alg, lmod, pg);
    emit(render(r, g), g);
    return r.exit_code;
  } catch (const Error& e) {
    if (g.format == "json") {
      std::cout << json{{"schema", kSchema}, {"version", LWB_VERSION}, {"error", e.code()}, {"message", e.what()},
                        {"exit_code", 2}}
                       .dump(2)
                << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
  }
}
