#include "lenselast/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace lens::geometry {

namespace {
constexpr double kHalfPi = 1.5707963267948966;

bool is_cusp(const Point2& p) { return p.x1 == 0.0 && p.x2 == 0.0; }
}  // namespace

double psi(double c, const Point2& p) {
  if (!(c > 0.0)) throw std::invalid_argument("psi: circle parameter must be positive");
  const double dx = p.x1 - c;
  return (dx * dx + p.x2 * p.x2) / (c * c);
}

Point2 circle_point(const CircleId& id, double theta) {
  if (!(id.c > 0.0)) throw std::invalid_argument("circle_point: c must be positive");
  const double ct = std::cos(theta);
  return {2.0 * id.c * ct * ct + id.d, id.c * std::sin(2.0 * theta)};
}

double circle_of_point(const Point2& p) {
  if (!(p.x1 > 0.0))
    throw std::domain_error("circle_of_point: requires x1 > 0 (family meets the axis only at the cusp)");
  return (p.x1 * p.x1 + p.x2 * p.x2) / (2.0 * p.x1);
}

PointClass classify(const LensDomain& domain, const Point2& p) {
  if (!(domain.R > 1.0)) throw std::invalid_argument("classify: R must exceed 1");
  if (is_cusp(p)) return PointClass::Cusp;
  if (p.x1 <= 0.0) return PointClass::Exterior;
  const double c = circle_of_point(p);
  if (std::abs(c - 1.0) <= kBoundaryTol) return PointClass::InnerBoundary;
  if (std::abs(c - domain.R) <= kBoundaryTol) return PointClass::OuterBoundary;
  if (c > 1.0 && c < domain.R) return PointClass::Interior;
  return PointClass::Exterior;
}

std::pair<PolarPoint, OffsetPolar> polar_maps(const Point2& p) {
  if (!(p.x1 > 0.0)) throw std::domain_error("polar_maps: requires x1 > 0");
  PolarPoint polar;
  polar.r = std::hypot(p.x1, p.x2);
  polar.theta = std::atan2(p.x2, p.x1);
  const double c = circle_of_point(p);
  return {polar, OffsetPolar{c, 2.0 * polar.theta}};
}

IntersectionSet intersection_points(double c1, double c2, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("intersection_points: a must be positive");
  if (!(c2 <= c1)) throw std::invalid_argument("intersection_points: requires c2 <= c1");
  if (a > 2.0 * c2)
    throw std::invalid_argument("intersection_points: ball of radius a swallows the inner arc (a > 2 c2)");

  auto upper = [&](double c) {
    // Simultaneous solution of x1^2 + x2^2 = a^2 and psi_c = 1.
    const double x1 = a * a / (2.0 * c);
    const double x2 = (a / (2.0 * c)) * std::sqrt(4.0 * c * c - a * a);
    return Point2{x1, x2};
  };

  IntersectionSet set;
  set.A = upper(c1);
  set.D = upper(c2);
  set.B = {set.A.x1, -set.A.x2};
  set.C = {set.D.x1, -set.D.x2};
  set.theta_A = std::atan2(set.A.x2, set.A.x1);
  set.theta_D = std::atan2(set.D.x2, set.D.x1);
  set.theta_B = -set.theta_A;
  set.theta_C = -set.theta_D;
  return set;
}

Vec2 unit_tangent(const CircleId& id, const Point2& p) {
  if (!(id.c > 0.0)) throw std::invalid_argument("unit_tangent: c must be positive");
  const double value = ((p.x1 - id.c - id.d) * (p.x1 - id.c - id.d) + p.x2 * p.x2) / (id.c * id.c);
  if (std::abs(value - 1.0) > 1e-8)
    throw std::invalid_argument("unit_tangent: point is not on the circle");
  return {p.x2 / id.c, (id.c + id.d - p.x1) / id.c};
}

Point2 arc_point(const BoundaryArc& arc, double theta) {
  switch (arc.kind) {
    case ArcKind::OuterCircle:
    case ArcKind::InnerCircle:
      return circle_point(CircleId{arc.radius}, theta);
    case ArcKind::BallUpper:
    case ArcKind::BallLower:
      return {arc.radius * std::cos(theta), arc.radius * std::sin(theta)};
  }
  throw std::logic_error("arc_point: unknown arc kind");
}

Vec2 outward_normal(const BoundaryArc& arc, double theta) {
  const double lo = std::min(arc.theta_start, arc.theta_end);
  const double hi = std::max(arc.theta_start, arc.theta_end);
  if (theta < lo - 1e-12 || theta > hi + 1e-12)
    throw std::invalid_argument("outward_normal: theta outside arc range");

  const Point2 p = arc_point(arc, theta);
  const double c = arc.radius;
  switch (arc.kind) {
    case ArcKind::OuterCircle:
      return {(p.x1 - c) / c, p.x2 / c};
    case ArcKind::InnerCircle:
      return {-(p.x1 - c) / c, -p.x2 / c};
    case ArcKind::BallUpper:
    case ArcKind::BallLower:
      return {-std::cos(theta), -std::sin(theta)};
  }
  throw std::logic_error("outward_normal: unknown arc kind");
}

std::array<BoundaryArc, 4> punctured_boundary(const LensDomain& domain, double a) {
  if (!(domain.R > 1.0)) throw std::invalid_argument("punctured_boundary: R must exceed 1");
  if (!(a > 0.0 && a < 2.0))
    throw std::invalid_argument("punctured_boundary: requires 0 < a < 2");

  const IntersectionSet pts = intersection_points(domain.R, 1.0, a);
  return {BoundaryArc{ArcKind::OuterCircle, domain.R, pts.theta_A, pts.theta_B},
          BoundaryArc{ArcKind::InnerCircle, 1.0, pts.theta_C, pts.theta_D},
          BoundaryArc{ArcKind::BallUpper, a, pts.theta_D, pts.theta_A},
          BoundaryArc{ArcKind::BallLower, a, pts.theta_B, pts.theta_C}};
}

}  // namespace lens::geometry
