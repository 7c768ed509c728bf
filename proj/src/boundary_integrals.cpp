#include "lenselast/boundary_integrals.hpp"

#include <cmath>
#include <stdexcept>

#include "lenselast/fields.hpp"
#include "lenselast/numerics.hpp"

namespace lens::integrals {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;

struct Cut {
  double theta_A;  // outer-circle intersection angle, upper half
  double theta_D;  // inner-circle intersection angle, upper half
};

Cut cut_angles(const LensDomain& domain, double a) {
  if (!(domain.R > 1.0)) throw std::invalid_argument("R must exceed 1");
  const geometry::IntersectionSet pts = geometry::intersection_points(domain.R, 1.0, a);
  return {pts.theta_A, pts.theta_D};
}

// Signed integral of f(theta) along a circle arc using ds = c d(2theta),
// traversed from theta_start to theta_end.
double circle_arc_integral(const std::function<double(double)>& f, double c,
                           double theta_start, double theta_end) {
  const double lo = std::min(theta_start, theta_end);
  const double hi = std::max(theta_start, theta_end);
  const double sign = (theta_end >= theta_start) ? 1.0 : -1.0;
  const double value =
      numerics::integrate_1d([&](double t) { return f(t) * 2.0 * c; }, lo, hi);
  return sign * value;
}

// sigma . n on a boundary arc at parameter theta, n outward for the
// punctured lens.
geometry::Vec2 surface_traction(const geometry::BoundaryArc& arc, double theta, double k) {
  const Point2 p = geometry::arc_point(arc, theta);
  const fields::SymTensor2 s = elasticity::stress({p, k});
  const geometry::Vec2 n = geometry::outward_normal(arc, theta);
  return {s.t11 * n.x1 + s.t12 * n.x2, s.t12 * n.x1 + s.t22 * n.x2};
}

// u . sigma . n, the boundary strain-energy density.
double energy_density(const geometry::BoundaryArc& arc, double theta, double k) {
  const Point2 p = geometry::arc_point(arc, theta);
  const fields::DisplacementSample u = fields::displacement(p);
  const geometry::Vec2 t = surface_traction(arc, theta, k);
  return u.u1 * t.x1 + u.u2 * t.x2;
}

// Positive-ds integral of the energy density over an arc.
double arc_energy(const geometry::BoundaryArc& arc, double k) {
  const double lo = std::min(arc.theta_start, arc.theta_end);
  const double hi = std::max(arc.theta_start, arc.theta_end);
  const double measure =
      (arc.kind == geometry::ArcKind::OuterCircle || arc.kind == geometry::ArcKind::InnerCircle)
          ? 2.0 * arc.radius
          : arc.radius;
  return numerics::integrate_1d(
      [&](double t) { return energy_density(arc, t, k) * measure; }, lo, hi);
}

IntegralReport make_report(double quad, double closed) {
  return {quad, closed, std::abs(quad - closed)};
}

}  // namespace

TractionSample traction(double c, double theta, double k) {
  if (!(c > 0.0)) throw std::invalid_argument("traction: c must be positive");
  if (std::abs(theta) >= kHalfPi)
    throw lens::SingularPointError("traction: r = 0 at theta = +-pi/2");
  const double r = 2.0 * c * std::cos(theta);
  TractionSample out;
  out.F1 = -4.0 * theta * std::cos(2.0 * theta);
  out.F2 = -4.0 * theta * std::sin(2.0 * theta) + 2.0 * (1.0 + k / (r * r));
  return out;
}

double moment_density(double c, double theta, double k) {
  if (!(c > 0.0)) throw std::invalid_argument("moment_density: c must be positive");
  if (std::abs(theta) >= kHalfPi)
    throw lens::SingularPointError("moment_density: r = 0 at theta = +-pi/2");
  return -4.0 * c * theta * std::sin(2.0 * theta) + 2.0 * c * (1.0 + std::cos(2.0 * theta)) +
         k / c;
}

double force_closed_form_outer(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tD;
  const double c1 = domain.R;
  return -8.0 * c1 * tA * std::cos(2.0 * tA) + 4.0 * c1 * std::sin(2.0 * tA) - 8.0 * c1 * tA -
         2.0 * (domain.k / c1) * std::tan(tA);
}

double force_closed_form_inner(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tA;
  const double c2 = 1.0;
  return 8.0 * c2 * tD * std::cos(2.0 * tD) - 4.0 * c2 * std::sin(2.0 * tD) + 8.0 * c2 * tD +
         2.0 * (domain.k / c2) * std::tan(tD);
}

double force_closed_form(const LensDomain& domain, double a) {
  return -(force_closed_form_outer(domain, a) + force_closed_form_inner(domain, a));
}

double moment_closed_form_outer(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tD;
  const double c1 = domain.R;
  return -8.0 * c1 * c1 * tA * std::cos(2.0 * tA) - 4.0 * (domain.k + 2.0 * c1 * c1) * tA;
}

double moment_closed_form_inner(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tA;
  const double c2 = 1.0;
  return 8.0 * c2 * c2 * tD * std::cos(2.0 * tD) + 4.0 * (domain.k + 2.0 * c2 * c2) * tD;
}

double moment_closed_form(const LensDomain& domain, double a) {
  return -(moment_closed_form_outer(domain, a) + moment_closed_form_inner(domain, a));
}

double energy_closed_form_V1(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tD;
  const double c1 = domain.R;
  return -4.0 * c1 * c1 * std::sin(2.0 * tA) - 4.0 * domain.k * tA +
         2.0 * domain.k * std::tan(tA);
}

double energy_closed_form_V2(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tA;
  const double c2 = 1.0;
  return 4.0 * c2 * c2 * std::sin(2.0 * tD) + 4.0 * domain.k * tD -
         2.0 * domain.k * std::tan(tD);
}

double energy_closed_form_V1_alt(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tD;
  const double c1 = domain.R;
  return 4.0 * c1 * c1 * std::sin(2.0 * tA) - 4.0 * domain.k * tA +
         2.0 * domain.k * std::tan(tA);
}

double energy_closed_form_V2_alt(const LensDomain& domain, double a) {
  const auto [tA, tD] = cut_angles(domain, a);
  (void)tA;
  const double c2 = 1.0;
  return -4.0 * c2 * c2 * std::sin(2.0 * tD) + 4.0 * domain.k * tD -
         2.0 * domain.k * std::tan(tD);
}

double couple_limit_nominal(double R) { return 4.0 * (R * R - 1.0) * kPi; }

ForceReport total_force(const LensDomain& domain, double a) {
  const auto arcs = geometry::punctured_boundary(domain, a);
  const geometry::BoundaryArc& outer = arcs[0];
  const geometry::BoundaryArc& inner = arcs[1];
  const double k = domain.k;

  auto f2 = [&](double c) {
    return [c, k](double t) { return traction(c, t, k).F2; };
  };
  auto f1 = [&](double c) {
    return [c, k](double t) { return traction(c, t, k).F1; };
  };

  ForceReport out;
  out.outer_arc = circle_arc_integral(f2(outer.radius), outer.radius, outer.theta_start,
                                      outer.theta_end);
  out.inner_arc = circle_arc_integral(f2(inner.radius), inner.radius, inner.theta_start,
                                      inner.theta_end);
  out.T2 = make_report(-(out.outer_arc + out.inner_arc), force_closed_form(domain, a));

  const double t1_outer = circle_arc_integral(f1(outer.radius), outer.radius, outer.theta_start,
                                              outer.theta_end);
  const double t1_inner = circle_arc_integral(f1(inner.radius), inner.radius, inner.theta_start,
                                              inner.theta_end);
  out.T1 = make_report(-(t1_outer + t1_inner), 0.0);

  double ball = 0.0;
  for (int i = 2; i < 4; ++i) {
    const geometry::BoundaryArc& arc = arcs[i];
    ball += numerics::integrate_1d(
        [&](double t) { return surface_traction(arc, t, k).x2 * arc.radius; },
        std::min(arc.theta_start, arc.theta_end), std::max(arc.theta_start, arc.theta_end));
  }
  // surface_traction uses the normal pointing out of the punctured lens; the
  // resultant convention counts the ball arcs with the opposite normal.
  out.ball_quadrature = -ball;
  return out;
}

MomentReport total_moment(const LensDomain& domain, double a) {
  const auto arcs = geometry::punctured_boundary(domain, a);
  const geometry::BoundaryArc& outer = arcs[0];
  const geometry::BoundaryArc& inner = arcs[1];
  const double k = domain.k;

  auto density = [k](double c) {
    return [c, k](double t) { return moment_density(c, t, k); };
  };

  MomentReport out;
  out.outer_arc = make_report(
      circle_arc_integral(density(outer.radius), outer.radius, outer.theta_start, outer.theta_end),
      moment_closed_form_outer(domain, a));
  out.inner_arc = make_report(
      circle_arc_integral(density(inner.radius), inner.radius, inner.theta_start, inner.theta_end),
      moment_closed_form_inner(domain, a));
  out.total = make_report(-(out.outer_arc.quadrature_value + out.inner_arc.quadrature_value),
                          moment_closed_form(domain, a));

  double ball = 0.0;
  for (int i = 2; i < 4; ++i) {
    const geometry::BoundaryArc& arc = arcs[i];
    ball += numerics::integrate_1d(
        [&](double t) {
          const Point2 p = geometry::arc_point(arc, t);
          const geometry::Vec2 f = surface_traction(arc, t, k);
          return (p.x1 * f.x2 - p.x2 * f.x1) * arc.radius;
        },
        std::min(arc.theta_start, arc.theta_end), std::max(arc.theta_start, arc.theta_end));
  }
  out.ball_quadrature = -ball;  // same normal convention as in total_force
  return out;
}

EnergyDecomposition boundary_energy(const LensDomain& domain, double a) {
  const auto arcs = geometry::punctured_boundary(domain, a);
  EnergyDecomposition out;
  out.V1 = arc_energy(arcs[0], domain.k);
  out.V2 = arc_energy(arcs[1], domain.k);
  out.W1 = arc_energy(arcs[2], domain.k);
  out.W2 = arc_energy(arcs[3], domain.k);
  out.total = out.V1 + out.V2 + out.W1 + out.W2;
  return out;
}

double area_energy(const LensDomain& domain, double a) {
  if (!(domain.R > 1.0)) throw std::invalid_argument("area_energy: R must exceed 1");
  if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("area_energy: requires 0 < a < 2");
  const double R = domain.R;
  const double k = domain.k;

  // sigma : e = sigma22 e22 + 2 sigma12 e12 (e11 = 0); even in x2, so the
  // upper half-slice integral equals half the sigma : e integral, i.e. E_a.
  auto density = [&](double x1, double x2) {
    const fields::SymTensor2 s = elasticity::stress({{x1, x2}, k});
    const fields::SymTensor2 e = fields::strain({x1, x2});
    return s.t22 * e.t22 + 2.0 * s.t12 * e.t12;
  };

  numerics::QuadConfig outer_cfg;
  outer_cfg.abs_tol = 1e-9;
  outer_cfg.rel_tol = 1e-9;
  numerics::QuadConfig inner_cfg;

  auto column = [&](double x1) {
    // Slice limits: outer circle above, inner circle or puncture below.
    const double hi2 = 2.0 * R * x1 - x1 * x1;
    const double lo2 = std::max({0.0, 2.0 * x1 - x1 * x1, a * a - x1 * x1});
    if (hi2 <= lo2) return 0.0;
    const double lo = std::sqrt(lo2);
    const double hi = std::sqrt(hi2);
    return numerics::integrate_1d([&](double x2) { return density(x1, x2); }, lo, hi, inner_cfg);
  };

  return numerics::integrate_1d(column, a * a / (2.0 * R), 2.0 * R, outer_cfg);
}

std::vector<double> default_a_sequence(int count) {
  if (count < 3) throw std::invalid_argument("default_a_sequence: count must be >= 3");
  std::vector<double> seq(count);
  double a = 0.4;
  for (int i = 0; i < count; ++i, a *= 0.5) seq[i] = a;
  return seq;
}

LimitReport limit_report(const LensDomain& domain, const std::vector<double>& a_sequence) {
  if (a_sequence.size() < 3)
    throw std::invalid_argument("limit_report: need at least 3 values of a");
  for (std::size_t i = 0; i < a_sequence.size(); ++i) {
    if (!(a_sequence[i] > 1e-6))
      throw std::invalid_argument("limit_report: a must exceed 1e-6");
    if (i > 0 && !(a_sequence[i] < a_sequence[i - 1]))
      throw std::invalid_argument("limit_report: a must be strictly decreasing");
  }

  LimitReport out;
  out.rows.reserve(a_sequence.size());
  for (double a : a_sequence) {
    const ForceReport force = total_force(domain, a);
    const MomentReport moment = total_moment(domain, a);
    const EnergyDecomposition energy = boundary_energy(domain, a);
    const auto [tA, tD] = cut_angles(domain, a);
    (void)tD;
    LimitRow row;
    row.a = a;
    row.T1a = force.T1.quadrature_value;
    row.T2a = force.T2.quadrature_value;
    row.Gamma_a = moment.total.quadrature_value;
    row.Ea = energy.energy();
    row.tan_gap = std::tan(tA) - 2.0 * domain.R / a;
    out.rows.push_back(row);
  }

  auto column = [&](double LimitRow::* member) {
    std::vector<std::pair<double, double>> samples;
    samples.reserve(out.rows.size());
    for (const LimitRow& row : out.rows) samples.emplace_back(row.a, row.*member);
    return samples;
  };

  // The smooth corrections of these quantities go well beyond A/a + B at the
  // tolerances of interest, so fit a longer power series when the sequence
  // allows it; coefficient order matches `powers`.
  const std::vector<int> powers = {-1, 0, 1, 2, 3, 4};
  const bool extended = out.rows.size() >= powers.size() + 1;

  auto fitted = [&](double LimitRow::* member, double* singular, double* constant) {
    if (extended) {
      const std::vector<double> c = numerics::fit_power_series(column(member), powers);
      if (singular) *singular = c[0];
      if (constant) *constant = c[1];
    } else {
      const numerics::LimitEstimate est = numerics::fit_singular_limit(column(member));
      if (singular) *singular = est.singular_coeff;
      if (constant) *constant = est.constant_term;
    }
  };

  {
    const numerics::LimitEstimate est = numerics::fit_singular_limit(column(&LimitRow::T1a));
    out.T1_limit = est.constant_term;
  }
  fitted(&LimitRow::T2a, nullptr, &out.T2_limit);
  fitted(&LimitRow::Ea, &out.energy_singular_coeff, &out.energy_constant);
  fitted(&LimitRow::Gamma_a, nullptr, &out.couple_limit);

  out.couple_limit_nominal = couple_limit_nominal(domain.R);
  out.couple_limit_gap = std::abs(out.couple_limit - out.couple_limit_nominal);
  return out;
}

}  // namespace lens::integrals
