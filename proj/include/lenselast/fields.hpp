#pragma once

#include "lenselast/geometry.hpp"

namespace lens::fields {

using geometry::Point2;
using geometry::Vec2;

struct DisplacementSample {
  double u1 = 0.0;
  double u2 = 0.0;
};

/// Symmetric 2x2 tensor (strain or stress).
struct SymTensor2 {
  double t11 = 0.0;
  double t12 = 0.0;
  double t22 = 0.0;
};

struct GradientSample {
  double du1_dx1 = 0.0;
  double du1_dx2 = 0.0;
  double du2_dx1 = 0.0;
  double du2_dx2 = 0.0;
};

struct PolarComponents {
  double u_rho = 0.0;    // radial about the circle centre
  double u_phi = 0.0;    // tangential about the circle centre
  double u_r = 0.0;      // radial about the origin
  double u_theta = 0.0;  // transverse about the origin
};

struct RigidDecomposition {
  Vec2 translation;
  Vec2 rotation_part;
};

/// Free-point form u = (x2, (x2^2 - x1^2) / (2 x1)); throws at x1 = 0 where
/// the expression is indeterminate.
DisplacementSample displacement(const Point2& p);

/// On-circle form (c sin 2theta, -c cos 2theta); total in theta, carries the
/// cusp limit u2 -> c at theta = +-pi/2.
DisplacementSample displacement_on_circle(double c, double theta);

GradientSample gradient(const Point2& p);

SymTensor2 strain(const Point2& p);

/// (u_rho, u_phi) = (0, -c) and (u_r, u_theta) = (c sin theta, -r + c cos theta)
/// with r = 2 c cos theta.
PolarComponents polar_components(double c, double theta);

/// Splits u into the translation (0, c) plus the clockwise unit rotation
/// (x2, -x1); the sum reproduces displacement(p).
RigidDecomposition rigid_decomposition(const Point2& p);

/// Limit of u2 along the circle of parameter c as the cusp is approached.
double cusp_limit(double c);

/// Jump c1 - c2 between cusp limits taken along two different circles.
double cusp_jump(double c1, double c2);

/// Dilatation along the circle of parameter c held fixed:
/// du_r/dr + u_r/r + (1/r) du_theta/dtheta, identically zero.
double circle_dilatation(double c, double theta);

}  // namespace lens::fields
