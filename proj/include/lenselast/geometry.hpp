#pragma once

#include <array>
#include <utility>

#include "lenselast/errors.hpp"

namespace lens::geometry {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Polar coordinates (r, theta) about the origin, theta in [-pi/2, pi/2].
struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
};

/// Polar coordinates (rho, phi) about the centre of the circle through the
/// point; on the circle of parameter c these reduce to rho = c, phi = 2 theta.
struct OffsetPolar {
  double rho = 0.0;
  double phi = 0.0;
};

/// Member of the tangent-circle family: centre (c + d, 0), radius c.
/// d = 0 is the lens family; d > 0 is supported only by unit_tangent.
struct CircleId {
  double c = 1.0;
  double d = 0.0;
};

/// Problem instance: lens between the circles with parameters 1 and R,
/// with material constant k.
struct LensDomain {
  double R = 2.0;
  double k = 0.0;
};

enum class PointClass { Interior, InnerBoundary, OuterBoundary, Exterior, Cusp };

enum class ArcKind { OuterCircle, InnerCircle, BallUpper, BallLower };

/// Oriented boundary arc of the punctured lens. radius is the circle
/// parameter c for circle arcs and the puncture radius a for ball arcs.
/// Traversal runs from theta_start to theta_end; the outward normal of the
/// punctured region is supplied by outward_normal().
struct BoundaryArc {
  ArcKind kind;
  double radius;
  double theta_start;
  double theta_end;
};

/// Intersections of the ball of radius a with the circles c1 (A, B) and
/// c2 (D, C), upper half first. theta_A = -theta_B, theta_D = -theta_C.
struct IntersectionSet {
  Point2 A, B, C, D;
  double theta_A, theta_B, theta_C, theta_D;
};

/// psi_c(x) = ((x1 - c)^2 + x2^2) / c^2; the circle is the level set 1.
double psi(double c, const Point2& p);

/// Point of the circle at polar angle theta; theta = +-pi/2 with d = 0 is the
/// cusp (0, 0).
Point2 circle_point(const CircleId& id, double theta);

/// The unique c with psi_c(p) = 1, i.e. (x1^2 + x2^2) / (2 x1).
/// Requires p.x1 > 0.
double circle_of_point(const Point2& p);

PointClass classify(const LensDomain& domain, const Point2& p);

/// (r, theta) about the origin and (rho, phi) = (c, 2 theta) about the
/// centre of the circle through p. Requires p.x1 > 0.
std::pair<PolarPoint, OffsetPolar> polar_maps(const Point2& p);

/// Requires 0 < a <= 2 c2 <= 2 c1.
IntersectionSet intersection_points(double c1, double c2, double a);

/// Unit tangent (x2/c, (c + d - x1)/c); p must lie on the circle.
Vec2 unit_tangent(const CircleId& id, const Point2& p);

/// Unit outward normal of the punctured region along the arc.
Vec2 outward_normal(const BoundaryArc& arc, double theta);

/// Cartesian point of the arc at parameter theta.
Point2 arc_point(const BoundaryArc& arc, double theta);

/// The four arcs bounding Omega_a(1, R): outer circle (clockwise,
/// theta_A -> theta_B), inner circle (anticlockwise, theta_C -> theta_D),
/// and the two ball arcs (anticlockwise). Requires 0 < a < 2.
std::array<BoundaryArc, 4> punctured_boundary(const LensDomain& domain, double a);

/// Absolute tolerance on psi_c - 1 for boundary membership.
inline constexpr double kBoundaryTol = 1e-10;

}  // namespace lens::geometry
