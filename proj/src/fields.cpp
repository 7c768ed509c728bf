#include "lenselast/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace lens::fields {

namespace {
constexpr double kHalfPi = 1.5707963267948966;

void require_off_axis(const Point2& p, const char* who) {
  if (p.x1 == 0.0)
    throw lens::SingularPointError(std::string(who) + ": indeterminate at x1 = 0");
}
}  // namespace

DisplacementSample displacement(const Point2& p) {
  require_off_axis(p, "displacement");
  return {p.x2, (p.x2 * p.x2 - p.x1 * p.x1) / (2.0 * p.x1)};
}

DisplacementSample displacement_on_circle(double c, double theta) {
  if (!(c > 0.0)) throw std::invalid_argument("displacement_on_circle: c must be positive");
  return {c * std::sin(2.0 * theta), -c * std::cos(2.0 * theta)};
}

GradientSample gradient(const Point2& p) {
  require_off_axis(p, "gradient");
  GradientSample g;
  g.du1_dx1 = 0.0;
  g.du1_dx2 = 1.0;
  g.du2_dx1 = -(p.x1 * p.x1 + p.x2 * p.x2) / (2.0 * p.x1 * p.x1);
  g.du2_dx2 = p.x2 / p.x1;
  return g;
}

SymTensor2 strain(const Point2& p) {
  require_off_axis(p, "strain");
  SymTensor2 e;
  e.t11 = 0.0;
  e.t12 = (p.x1 * p.x1 - p.x2 * p.x2) / (4.0 * p.x1 * p.x1);
  e.t22 = p.x2 / p.x1;
  return e;
}

PolarComponents polar_components(double c, double theta) {
  if (!(c > 0.0)) throw std::invalid_argument("polar_components: c must be positive");
  PolarComponents pc;
  pc.u_rho = 0.0;
  pc.u_phi = -c;
  const double r = 2.0 * c * std::cos(theta);
  pc.u_r = c * std::sin(theta);
  pc.u_theta = -r + c * std::cos(theta);
  return pc;
}

RigidDecomposition rigid_decomposition(const Point2& p) {
  require_off_axis(p, "rigid_decomposition");
  const double c = geometry::circle_of_point(p);
  return {Vec2{0.0, c}, Vec2{p.x2, -p.x1}};
}

double cusp_limit(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("cusp_limit: c must be positive");
  return c;
}

double cusp_jump(double c1, double c2) { return c1 - c2; }

double circle_dilatation(double c, double theta) {
  if (!(c > 0.0)) throw std::invalid_argument("circle_dilatation: c must be positive");
  if (std::abs(theta) >= kHalfPi)
    throw lens::SingularPointError("circle_dilatation: r = 0 at theta = +-pi/2");
  const double r = 2.0 * c * std::cos(theta);
  const double du_r_dr = 0.0;  // u_r = c sin(theta) does not depend on r
  const double du_theta_dtheta = -c * std::sin(theta);
  return du_r_dr + c * std::sin(theta) / r + du_theta_dtheta / r;
}

}  // namespace lens::fields
