#include "lenselast/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lenselast/boundary_integrals.hpp"

namespace lens::cli {

namespace {

using nlohmann::json;

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Check {
  std::string name;
  std::string ref;
  std::string status;  // "pass", "fail" or "info"
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};

Check hard_check(std::string name, std::string ref, double measured, double expected,
                 double tolerance) {
  Check c{std::move(name), std::move(ref), "", measured, expected, tolerance};
  c.status = (std::abs(measured - expected) <= tolerance) ? "pass" : "fail";
  return c;
}

Check info_check(std::string name, std::string ref, double measured, double expected) {
  return {std::move(name), std::move(ref), "info", measured, expected, 0.0};
}

json to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const Check& c : checks)
    arr.push_back({{"name", c.name},
                   {"ref", c.ref},
                   {"status", c.status},
                   {"measured", c.measured},
                   {"expected", c.expected},
                   {"tolerance", c.tolerance}});
  return arr;
}

bool any_failed(const std::vector<Check>& checks) {
  return std::any_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.status == "fail"; });
}

// Writes the report to cfg.out or stdout; returns 0 or 3 (I/O error).
int emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file: " << cfg.out << "\n";
    return 3;
  }
  f << text;
  if (!f) {
    std::cerr << "error: write failed: " << cfg.out << "\n";
    return 3;
  }
  return 0;
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

bool validate_common(const RunConfig& cfg, std::string& message) {
  if (!(cfg.R > 1.0)) {
    message = "R must exceed 1";
    return false;
  }
  if (!(cfg.k >= 0.0)) {
    message = "k must be nonnegative";
    return false;
  }
  if (cfg.grid < 2) {
    message = "grid must be at least 2";
    return false;
  }
  if (cfg.format != "json" && cfg.format != "csv") {
    message = "format must be json or csv";
    return false;
  }
  return true;
}

json config_json(const RunConfig& cfg, const std::string& command) {
  json j{{"command", command}, {"R", cfg.R}, {"k", cfg.k},
         {"grid", cfg.grid},   {"format", cfg.format}};
  if (!cfg.out.empty()) j["out"] = cfg.out;
  if (command == "sample") {
    j["field"] = cfg.field;
    j["param_space"] = cfg.param_space;
  }
  if (command == "integrals") {
    if (cfg.a) j["a"] = *cfg.a;
    if (!cfg.a_seq.empty()) j["a_seq"] = cfg.a_seq;
  }
  return j;
}

// Interior lens points for randomized suites; the circles foliate the lens,
// so every (c, theta) with 1 < c < R maps to an interior point.
std::vector<geometry::Point2> random_interior_points(const RunConfig& cfg, int count,
                                                     unsigned seed, double min_r) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uc(1.0 + 1e-6, cfg.R - 1e-6);
  std::uniform_real_distribution<double> ut(-kHalfPi + 1e-3, kHalfPi - 1e-3);
  std::vector<geometry::Point2> pts;
  pts.reserve(count);
  while (int(pts.size()) < count) {
    const geometry::Point2 p = geometry::circle_point({uc(rng)}, ut(rng));
    if (std::hypot(p.x1, p.x2) > min_r) pts.push_back(p);
  }
  return pts;
}

// ---------------------------------------------------------------- sample --

struct FieldSpec {
  std::vector<std::string> columns;
  // Values at a point, or empty on singular evaluation.
  std::function<std::vector<std::optional<double>>(const geometry::Point2&, double k)> eval;
};

std::optional<FieldSpec> field_spec(const std::string& name) {
  using fields::Point2;
  if (name == "displacement")
    return FieldSpec{{"u1", "u2"}, [](const Point2& p, double) {
                       const auto u = fields::displacement(p);
                       return std::vector<std::optional<double>>{u.u1, u.u2};
                     }};
  if (name == "strain")
    return FieldSpec{{"e11", "e12", "e22"}, [](const Point2& p, double) {
                       const auto e = fields::strain(p);
                       return std::vector<std::optional<double>>{e.t11, e.t12, e.t22};
                     }};
  if (name == "stress")
    return FieldSpec{{"s11", "s12", "s22"}, [](const Point2& p, double k) {
                       const auto s = elasticity::stress({p, k});
                       return std::vector<std::optional<double>>{s.t11, s.t12, s.t22};
                     }};
  if (name == "lame")
    return FieldSpec{{"mu", "lambda", "lambda_plus_2mu", "poisson"},
                     [](const Point2& p, double k) {
                       const auto lm = elasticity::lame({p, k});
                       std::vector<std::optional<double>> v{lm.mu, lm.lambda, lm.lambda_plus_2mu,
                                                            std::nullopt};
                       if (lm.poisson) v[3] = *lm.poisson;
                       return v;
                     }};
  if (name == "energy-density")
    return FieldSpec{{"w"}, [](const Point2& p, double k) {
                       const auto s = elasticity::stress({p, k});
                       const auto e = fields::strain(p);
                       const double w =
                           0.5 * (s.t11 * e.t11 + s.t22 * e.t22 + 2.0 * s.t12 * e.t12);
                       return std::vector<std::optional<double>>{w};
                     }};
  return std::nullopt;
}

struct SampleRow {
  geometry::Point2 p;
  std::optional<double> c, theta;
  std::vector<std::optional<double>> values;
  std::string flag;  // "ok", "singular" or "exterior"
};

SampleRow evaluate_row(const RunConfig& cfg, const FieldSpec& spec, const geometry::Point2& p,
                       bool check_domain) {
  SampleRow row;
  row.p = p;
  row.flag = "ok";
  if (check_domain) {
    const geometry::PointClass cls = geometry::classify({cfg.R, cfg.k}, p);
    if (cls == geometry::PointClass::Cusp) {
      row.flag = "singular";
      return row;
    }
    if (cls == geometry::PointClass::Exterior) {
      row.flag = "exterior";
      return row;
    }
  }
  try {
    const auto [polar, offset] = geometry::polar_maps(p);
    row.c = offset.rho;
    row.theta = polar.theta;
    row.values = spec.eval(p, cfg.k);
  } catch (const lens::SingularPointError&) {
    row.flag = "singular";
    row.values.clear();
  } catch (const std::domain_error&) {
    row.flag = "singular";
    row.values.clear();
  }
  return row;
}

std::string render_sample(const RunConfig& cfg, const FieldSpec& spec,
                          const std::vector<SampleRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    return v ? json(*v) : json("singular");
  };
  if (cfg.format == "json") {
    json results = json::array();
    for (const SampleRow& row : rows) {
      json r{{"x1", row.p.x1}, {"x2", row.p.x2}, {"c", cell(row.c)},
             {"theta", cell(row.theta)}, {"flag", row.flag}};
      for (std::size_t i = 0; i < spec.columns.size(); ++i)
        r[spec.columns[i]] = (i < row.values.size()) ? cell(row.values[i]) : json("singular");
      results.push_back(std::move(r));
    }
    json doc{{"config", config_json(cfg, "sample")},
             {"results", results},
             {"checks", json::array()},
             {"warnings", json::array()}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "x1,x2,c,theta";
  for (const std::string& col : spec.columns) os << "," << col;
  os << ",flag\n";
  auto csv_cell = [&](const std::optional<double>& v) {
    os << ",";
    if (v) os << fmt17(*v);
  };
  for (const SampleRow& row : rows) {
    os << fmt17(row.p.x1) << "," << fmt17(row.p.x2);
    csv_cell(row.c);
    csv_cell(row.theta);
    for (std::size_t i = 0; i < spec.columns.size(); ++i)
      csv_cell(i < row.values.size() ? row.values[i] : std::nullopt);
    os << "," << row.flag << "\n";
  }
  return os.str();
}

}  // namespace

std::vector<double> parse_a_sequence(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("a-seq must have the form START:COUNT");
  std::size_t used = 0;
  double start = 0.0;
  int count = 0;
  try {
    start = std::stod(spec.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("");
    count = std::stoi(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("a-seq must have the form START:COUNT");
  }
  if (!(start > 0.0 && start < 2.0)) throw std::invalid_argument("a-seq start must be in (0, 2)");
  if (count < 1) throw std::invalid_argument("a-seq count must be positive");
  std::vector<double> seq(count);
  double a = start;
  for (int i = 0; i < count; ++i, a *= 0.5) seq[i] = a;
  return seq;
}

bool load_config_file(const std::string& path, RunConfig& cfg, std::string& error) {
  std::ifstream f(path);
  if (!f) {
    error = "cannot open config file: " + path;
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      error = path + ":" + std::to_string(lineno) + ": expected key=value";
      return false;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "R") cfg.R = std::stod(value);
      else if (key == "k") cfg.k = std::stod(value);
      else if (key == "grid") cfg.grid = std::stoi(value);
      else if (key == "format") cfg.format = value;
      else if (key == "out") cfg.out = value;
      else if (key == "field") cfg.field = value;
      else if (key == "param_space") cfg.param_space = value;
      else if (key == "a") cfg.a = std::stod(value);
      else if (key == "a_seq") cfg.a_seq = value;
      else {
        error = path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'";
        return false;
      }
    } catch (const std::exception&) {
      error = path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'";
      return false;
    }
  }
  return true;
}

int cmd_sample(const RunConfig& cfg) {
  std::string message;
  if (!validate_common(cfg, message)) return usage_error(message);
  const std::optional<FieldSpec> spec = field_spec(cfg.field);
  if (!spec) return usage_error("unknown field '" + cfg.field + "'");
  if (cfg.param_space != "cartesian" && cfg.param_space != "circle")
    return usage_error("param-space must be cartesian or circle");

  std::vector<SampleRow> rows;
  rows.reserve(std::size_t(cfg.grid) * cfg.grid);
  if (cfg.param_space == "cartesian") {
    for (int i = 0; i < cfg.grid; ++i) {
      const double x1 = 2.0 * cfg.R * double(i) / double(cfg.grid - 1);
      for (int j = 0; j < cfg.grid; ++j) {
        const double x2 = -cfg.R + 2.0 * cfg.R * double(j) / double(cfg.grid - 1);
        rows.push_back(evaluate_row(cfg, *spec, {x1, x2}, true));
      }
    }
  } else {
    for (int i = 0; i < cfg.grid; ++i) {
      const double c = 1.0 + (cfg.R - 1.0) * double(i) / double(cfg.grid - 1);
      for (int j = 0; j < cfg.grid; ++j) {
        const double theta = -kHalfPi + kPi * double(j + 1) / double(cfg.grid + 1);
        rows.push_back(evaluate_row(cfg, *spec, geometry::circle_point({c}, theta), false));
      }
    }
  }
  return emit(cfg, render_sample(cfg, *spec, rows));
}

int cmd_verify(const RunConfig& cfg) {
  std::string message;
  if (!validate_common(cfg, message)) return usage_error(message);

  std::vector<Check> checks;
  const std::vector<double> ks = {0.0, 1.0, 5.0};

  {  // |u| = c and u = c t on the circle family.
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double c = 1.0 + (cfg.R - 1.0) * double(i) / 49.0;
      for (int j = 0; j < 50; ++j) {
        const double theta = -kHalfPi + kPi * double(j + 1) / 51.0;
        const geometry::Point2 p = geometry::circle_point({c}, theta);
        const auto u = fields::displacement_on_circle(c, theta);
        const auto t = geometry::unit_tangent({c}, p);
        worst = std::max(worst, std::abs(std::hypot(u.u1, u.u2) - c));
        worst = std::max(worst, std::abs(u.u1 - c * t.x1));
        worst = std::max(worst, std::abs(u.u2 - c * t.x2));
      }
    }
    checks.push_back(hard_check("tangency", "displacement-circle-identity", worst, 0.0, 1e-10));
  }

  {  // dilatation along each circle vanishes.
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double c = 1.0 + (cfg.R - 1.0) * double(i) / 99.0;
      for (int j = 0; j < 100; ++j) {
        const double theta = (-kHalfPi + 1e-3) + (kPi - 2e-3) * double(j) / 99.0;
        worst = std::max(worst, std::abs(fields::circle_dilatation(c, theta)));
      }
    }
    checks.push_back(hard_check("isochoricity", "circle-dilatation", worst, 0.0, 1e-10));
  }

  {  // stress recovered from the potential, analytic and finite-difference.
    const auto pts = random_interior_points(cfg, 300, 20240801u, 0.0);
    double worst_an = 0.0;
    for (double k : ks)
      for (const auto& p : pts) {
        const auto s = elasticity::stress({p, k});
        const auto a = elasticity::airy({p, k});
        worst_an = std::max({worst_an, std::abs(s.t11 + a.hessian.t22),
                             std::abs(s.t22 + a.hessian.t11), std::abs(s.t12 - a.hessian.t12)});
      }
    checks.push_back(hard_check("airy-analytic", "stress-from-potential", worst_an, 0.0, 1e-10));

    const numerics::DiffConfig fd{1e-3, 3};
    double worst_fd = 0.0;
    int used = 0;
    for (double k : ks)
      for (const auto& p : pts) {
        if (used >= 60) break;
        if (p.x1 < 0.05) continue;
        ++used;
        const auto s = elasticity::stress({p, k});
        auto phi = [k](double x1, double x2) {
          return elasticity::airy({{x1, x2}, k}).value;
        };
        const double p11 =
            numerics::derivative([&](double x) { return phi(x, p.x2); }, p.x1, 2, fd);
        const double p22 =
            numerics::derivative([&](double y) { return phi(p.x1, y); }, p.x2, 2, fd);
        const double p12 = numerics::derivative(
            [&](double x) {
              return numerics::derivative([&](double y) { return phi(x, y); }, p.x2, 1, fd);
            },
            p.x1, 1, fd);
        const double scale =
            std::abs(s.t11) + std::abs(s.t12) + std::abs(s.t22) + 1.0;
        worst_fd = std::max({worst_fd, std::abs(s.t11 + p22) / scale,
                             std::abs(s.t22 + p11) / scale, std::abs(s.t12 - p12) / scale});
      }
    checks.push_back(
        hard_check("airy-fd", "stress-from-potential-fd", worst_fd, 0.0, 1e-6));
  }

  {  // div sigma = 0, relative to the local stress scale.
    const auto pts = random_interior_points(cfg, 300, 20240802u, 0.05);
    double worst = 0.0;
    for (double k : ks)
      for (const auto& p : pts) {
        if (p.x1 < 1e-3) continue;
        const auto s = elasticity::stress({p, k});
        const auto r = elasticity::equilibrium_residual({p, k});
        const double scale =
            std::abs(s.t11) + std::abs(s.t12) + std::abs(s.t22) + 1.0;
        worst = std::max({worst, std::abs(r.x1) / scale, std::abs(r.x2) / scale});
      }
    checks.push_back(hard_check("equilibrium", "stress-divergence", worst, 0.0, 1e-6));
  }

  {  // sigma = lambda tr(e) I + 2 mu e, and the modulus ratio identities.
    double worst = 0.0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 40; ++i) {
      const double c = 1.0 + (cfg.R - 1.0) * double(i) / 39.0;
      for (int j = 0; j < 40; ++j) {
        const double theta = -kHalfPi + kPi * double(j + 1) / 41.0;
        const geometry::Point2 p = geometry::circle_point({c}, theta);
        const elasticity::MaterialPoint mp{p, cfg.k};
        const auto res = elasticity::constitutive_residual(mp);
        worst = std::max(
            {worst, std::abs(res.t11), std::abs(res.t12), std::abs(res.t22)});
        const auto lm = elasticity::lame(mp);
        const auto ratios =
            elasticity::lame_from_ratios(elasticity::stress(mp), fields::strain(p));
        const auto e = fields::strain(p);
        if (std::abs(e.t12) > 1e-8 && ratios.mu)
          worst_ratio = std::max(worst_ratio, std::abs(*ratios.mu - lm.mu));
        if (std::abs(e.t11 + e.t22) > 1e-8 && ratios.lambda_plus_mu)
          worst_ratio =
              std::max(worst_ratio, std::abs(*ratios.lambda_plus_mu - (lm.lambda + lm.mu)));
        if (std::abs(e.t11 * e.t11 - e.t22 * e.t22) > 1e-8 && ratios.lambda)
          worst_ratio = std::max(worst_ratio, std::abs(*ratios.lambda - lm.lambda));
      }
    }
    checks.push_back(hard_check("constitutive", "isotropic-closure", worst, 0.0, 1e-10));
    checks.push_back(hard_check("ratio-identities", "modulus-ratios", worst_ratio, 0.0, 1e-10));
  }

  {  // Lambda from the strain ratio, and the potential PDE residual.
    const auto pts = random_interior_points(cfg, 200, 20240803u, 0.0);
    double worst = 0.0;
    for (const auto& p : pts) {
      const auto e = fields::strain(p);
      if (std::abs(e.t12) < 1e-8) continue;
      const double lam = elasticity::lambda_coefficient(p);
      worst = std::max(worst, std::abs((e.t11 - e.t22) / e.t12 - lam));
      worst = std::max(worst, std::abs(elasticity::airy_pde_residual({p, cfg.k})));
    }
    checks.push_back(
        hard_check("lambda-duality", "strain-ratio-coefficient", worst, 0.0, 1e-10));
  }

  {  // traction closed forms vs sigma . n assembly on the outer circle arcs.
    double worst = 0.0;
    for (double k : ks)
      for (double c : {1.0, 0.5 * (1.0 + cfg.R), cfg.R})
        for (int j = 0; j < 60; ++j) {
          const double theta = -kHalfPi + kPi * double(j + 1) / 61.0;
          const auto f = integrals::traction(c, theta, k);
          const geometry::BoundaryArc arc{geometry::ArcKind::OuterCircle, c, -kHalfPi, kHalfPi};
          const geometry::Point2 p = geometry::arc_point(arc, theta);
          const auto s = elasticity::stress({p, k});
          const auto n = geometry::outward_normal(arc, theta);
          worst = std::max(worst, std::abs(f.F1 - (s.t11 * n.x1 + s.t12 * n.x2)));
          worst = std::max(worst, std::abs(f.F2 - (s.t12 * n.x1 + s.t22 * n.x2)));
        }
    checks.push_back(hard_check("traction-closed-form", "traction-assembly", worst, 0.0, 1e-10));
  }

  {  // Informational: strong-ellipticity margin at the configured k.
    const auto scan = elasticity::ellipticity_scan({cfg.R, cfg.k}, std::max(cfg.grid, 32));
    checks.push_back(info_check("ellipticity-margin", "strong-ellipticity", scan.min_margin, 0.0));
  }

  json warnings = json::array();
  for (const Check& c : checks)
    if (c.status == "fail")
      warnings.push_back("check failed: " + c.name);

  std::string text;
  if (cfg.format == "json") {
    json doc{{"config", config_json(cfg, "verify")},
             {"results", json::object()},
             {"checks", to_json(checks)},
             {"warnings", warnings}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "name,ref,status,measured,expected,tolerance\n";
    for (const Check& c : checks)
      os << c.name << "," << c.ref << "," << c.status << "," << fmt17(c.measured) << ","
         << fmt17(c.expected) << "," << fmt17(c.tolerance) << "\n";
    text = os.str();
  }
  const int io = emit(cfg, text);
  if (io != 0) return io;
  if (any_failed(checks)) {
    for (const Check& c : checks)
      if (c.status == "fail")
        std::cerr << "failed: " << c.name << " measured=" << c.measured
                  << " tolerance=" << c.tolerance << "\n";
    return 1;
  }
  return 0;
}

int cmd_integrals(const RunConfig& cfg) {
  std::string message;
  if (!validate_common(cfg, message)) return usage_error(message);

  std::vector<double> a_values;
  try {
    if (cfg.a && !cfg.a_seq.empty()) return usage_error("--a and --a-seq are exclusive");
    if (cfg.a) a_values = {*cfg.a};
    else if (!cfg.a_seq.empty()) a_values = parse_a_sequence(cfg.a_seq);
    else a_values = integrals::default_a_sequence();
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }
  for (double a : a_values)
    if (!(a > 0.0 && a < 2.0)) return usage_error("a must lie in (0, 2)");

  const geometry::LensDomain domain{cfg.R, cfg.k};
  std::vector<Check> checks;
  json rows = json::array();

  for (double a : a_values) {
    const auto force = integrals::total_force(domain, a);
    const auto moment = integrals::total_moment(domain, a);
    const auto energy = integrals::boundary_energy(domain, a);
    const double v1_cf = integrals::energy_closed_form_V1(domain, a);
    const double v2_cf = integrals::energy_closed_form_V2(domain, a);

    rows.push_back({{"a", a},
                    {"T1", force.T1.quadrature_value},
                    {"T2a", force.T2.quadrature_value},
                    {"T2a_closed", *force.T2.closed_form_value},
                    {"Gamma_outer", moment.outer_arc.quadrature_value},
                    {"Gamma_outer_closed", *moment.outer_arc.closed_form_value},
                    {"Gamma_inner", moment.inner_arc.quadrature_value},
                    {"Gamma_inner_closed", *moment.inner_arc.closed_form_value},
                    {"Gamma_a", moment.total.quadrature_value},
                    {"Gamma_a_closed", *moment.total.closed_form_value},
                    {"V1", energy.V1},
                    {"V1_closed", v1_cf},
                    {"V2", energy.V2},
                    {"V2_closed", v2_cf},
                    {"W1", energy.W1},
                    {"W2", energy.W2},
                    {"E", energy.energy()}});

    const std::string at = "@a=" + fmt17(a);
    checks.push_back(hard_check("force-closed-form" + at, "force-resultant",
                                force.T2.abs_difference, 0.0, 1e-8));
    checks.push_back(hard_check("t1-zero" + at, "force-oddness", force.T1.quadrature_value, 0.0,
                                1e-10));
    checks.push_back(hard_check("moment-outer-closed-form" + at, "moment-arcs",
                                moment.outer_arc.abs_difference, 0.0, 1e-8));
    checks.push_back(hard_check("moment-inner-closed-form" + at, "moment-arcs",
                                moment.inner_arc.abs_difference, 0.0, 1e-8));
    checks.push_back(
        hard_check("energy-V1-closed-form" + at, "energy-arcs", energy.V1, v1_cf, 1e-8));
    checks.push_back(
        hard_check("energy-V2-closed-form" + at, "energy-arcs", energy.V2, v2_cf, 1e-8));
  }

  json results{{"rows", rows}};
  json warnings = json::array();
  if (a_values.size() >= 3) {
    const auto rep = integrals::limit_report(domain, a_values);
    results["limits"] = {{"T1", rep.T1_limit},
                         {"T2", rep.T2_limit},
                         {"energy_singular_coeff", rep.energy_singular_coeff},
                         {"energy_constant", rep.energy_constant},
                         {"couple_limit", rep.couple_limit},
                         {"couple_limit_nominal", rep.couple_limit_nominal},
                         {"couple_limit_difference", rep.couple_limit_gap}};
    checks.push_back(info_check("couple-limit-disclosure", "couple-limit", rep.couple_limit,
                                rep.couple_limit_nominal));
    warnings.push_back(
        "The a->0 couple extrapolated from quadrature is " + fmt17(rep.couple_limit) +
        "; the nominal reference value 4(R^2-1)*pi is " + fmt17(rep.couple_limit_nominal) +
        "; their difference is " + fmt17(rep.couple_limit_gap) +
        ". The two do not agree and the comparison is reported as informational only.");
  }

  std::string text;
  if (cfg.format == "json") {
    json doc{{"config", config_json(cfg, "integrals")},
             {"results", results},
             {"checks", to_json(checks)},
             {"warnings", warnings}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "a,T1,T2a,T2a_closed,Gamma_a,Gamma_a_closed,V1,V1_closed,V2,V2_closed,W1,W2,E\n";
    for (const auto& r : rows)
      os << fmt17(r["a"]) << "," << fmt17(r["T1"]) << "," << fmt17(r["T2a"]) << ","
         << fmt17(r["T2a_closed"]) << "," << fmt17(r["Gamma_a"]) << ","
         << fmt17(r["Gamma_a_closed"]) << "," << fmt17(r["V1"]) << "," << fmt17(r["V1_closed"])
         << "," << fmt17(r["V2"]) << "," << fmt17(r["V2_closed"]) << "," << fmt17(r["W1"]) << ","
         << fmt17(r["W2"]) << "," << fmt17(r["E"]) << "\n";
    text = os.str();
  }
  const int io = emit(cfg, text);
  if (io != 0) return io;
  return any_failed(checks) ? 1 : 0;
}

int cmd_ellipticity(const RunConfig& cfg) {
  std::string message;
  if (!validate_common(cfg, message)) return usage_error(message);
  if (cfg.grid < 32) return usage_error("ellipticity requires grid >= 32");

  auto scan_min = [&](double k) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.grid; ++i) {
      const double c = 1.0 + (cfg.R - 1.0) * double(i) / double(cfg.grid - 1);
      for (int j = 0; j < cfg.grid; ++j) {
        const double theta = -kHalfPi + kPi * double(j + 1) / double(cfg.grid + 1);
        best = std::min(best, elasticity::ellipticity_margin(c, theta, k));
      }
    }
    return best;
  };

  const auto scan = elasticity::ellipticity_scan({cfg.R, cfg.k}, cfg.grid);

  std::vector<double> table_ks = {0.0, 1.0, 2.0, 4.0, 8.0, cfg.k, scan.k_threshold};
  std::sort(table_ks.begin(), table_ks.end());
  table_ks.erase(std::unique(table_ks.begin(), table_ks.end()), table_ks.end());

  json rows = json::array();
  for (double k : table_ks) rows.push_back({{"k", k}, {"min_margin", scan_min(k)}});

  std::vector<Check> checks;
  checks.push_back(info_check("min-margin", "strong-ellipticity", scan.min_margin, 0.0));
  const double above = scan_min(scan.k_threshold + 0.01);
  Check positive{"threshold-positive-margin", "strong-ellipticity", "", above, 0.0, 0.0};
  positive.status = (above > 0.0) ? "pass" : "fail";
  checks.push_back(positive);

  std::string text;
  if (cfg.format == "json") {
    json doc{{"config", config_json(cfg, "ellipticity")},
             {"results",
              {{"table", rows},
               {"min_margin", scan.min_margin},
               {"argmin", {{"c", scan.argmin_c}, {"theta", scan.argmin_theta}}},
               {"k_threshold", scan.k_threshold}}},
             {"checks", to_json(checks)},
             {"warnings", json::array()}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "k,min_margin\n";
    for (const auto& r : rows) os << fmt17(r["k"]) << "," << fmt17(r["min_margin"]) << "\n";
    text = os.str();
  }
  const int io = emit(cfg, text);
  if (io != 0) return io;
  return any_failed(checks) ? 1 : 0;
}

int run(int argc, const char* const* argv) {
  RunConfig cfg;

  // Config file first, so flags parsed afterwards take precedence.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::string error;
      if (!load_config_file(argv[i + 1], cfg, error)) return usage_error(error);
    }
  }

  CLI::App app{"Closed-form plane elastostatics on a lens of tangent circles"};
  app.require_subcommand(1);
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--R", cfg.R, "outer circle parameter (> 1)");
    sub->add_option("--k", cfg.k, "material constant (>= 0)");
    sub->add_option("--grid", cfg.grid, "grid resolution");
    sub->add_option("--format", cfg.format, "output format: json or csv");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--config", config_path, "flat key=value config file");
  };

  CLI::App* sample = app.add_subcommand("sample", "sample a field on a grid");
  add_common(sample);
  sample->add_option("--field", cfg.field,
                     "displacement, strain, stress, lame or energy-density");
  sample->add_option("--param-space", cfg.param_space, "cartesian or circle");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
  add_common(verify);

  CLI::App* integrals_cmd = app.add_subcommand("integrals", "resultants, couples and energy");
  add_common(integrals_cmd);
  double a_flag = 0.0;
  CLI::Option* a_opt = integrals_cmd->add_option("--a", a_flag, "single puncture radius");
  integrals_cmd->add_option("--a-seq", cfg.a_seq, "geometric sequence START:COUNT");

  CLI::App* ellipticity = app.add_subcommand("ellipticity", "strong-ellipticity scan");
  add_common(ellipticity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (a_opt->count() > 0) cfg.a = a_flag;

  try {
    if (sample->parsed()) return cmd_sample(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (integrals_cmd->parsed()) return cmd_integrals(cfg);
    if (ellipticity->parsed()) return cmd_ellipticity(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace lens::cli
