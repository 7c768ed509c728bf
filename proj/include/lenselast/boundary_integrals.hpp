#pragma once

#include <optional>
#include <vector>

#include "lenselast/elasticity.hpp"

namespace lens::integrals {

using elasticity::MaterialPoint;
using geometry::LensDomain;
using geometry::Point2;

/// Traction across the circle of parameter c at polar angle theta.
struct TractionSample {
  double F1 = 0.0;
  double F2 = 0.0;
};

/// Quadrature value of one integral next to its antiderivative evaluation,
/// when one is available.
struct IntegralReport {
  double quadrature_value = 0.0;
  std::optional<double> closed_form_value;
  double abs_difference = 0.0;
};

/// Resultant force on the ball arcs of the punctured lens. The per-component
/// reports carry the circle-arc quadrature assembled through the equilibrium
/// identity; ball_quadrature is the same resultant integrated directly over
/// the ball arcs as a cross-check.
struct ForceReport {
  IntegralReport T1;
  IntegralReport T2;
  double outer_arc = 0.0;  // signed circle-arc integrals of F2
  double inner_arc = 0.0;
  double ball_quadrature = 0.0;
};

struct MomentReport {
  IntegralReport outer_arc;  // Gamma^{c1}_a, clockwise
  IntegralReport inner_arc;  // Gamma^{c2}_a, anticlockwise
  IntegralReport total;      // Gamma_a from the equilibrium identity
  double ball_quadrature = 0.0;
};

/// Boundary strain-energy split over the four arcs; total = V1 + V2 + W1 + W2
/// equals twice the stored energy.
struct EnergyDecomposition {
  double V1 = 0.0;
  double V2 = 0.0;
  double W1 = 0.0;
  double W2 = 0.0;
  double total = 0.0;
  double energy() const { return 0.5 * total; }
};

struct LimitRow {
  double a = 0.0;
  double T1a = 0.0;
  double T2a = 0.0;
  double Gamma_a = 0.0;
  double Ea = 0.0;
  double tan_gap = 0.0;  // tan(theta_A) - 2 c1 / a
};

struct LimitReport {
  std::vector<LimitRow> rows;  // ordered by decreasing a
  double T1_limit = 0.0;
  double T2_limit = 0.0;
  double energy_singular_coeff = 0.0;  // A in E_a ~ A/a + ...
  double energy_constant = 0.0;
  double couple_limit = 0.0;          // extrapolated limit of Gamma_a
  double couple_limit_nominal = 0.0;  // 4 (R^2 - 1) pi
  double couple_limit_gap = 0.0;
};

/// F1 = -4 theta cos 2theta, F2 = -4 theta sin 2theta + 2 (1 + k/r^2) with
/// r = 2 c cos theta; throws at theta = +-pi/2.
TractionSample traction(double c, double theta, double k);

/// Anticlockwise moment x1 F2 - x2 F1 of the traction about the origin:
/// -4 c theta sin 2theta + 2 c (1 + cos 2theta) + k/c.
double moment_density(double c, double theta, double k);

ForceReport total_force(const LensDomain& domain, double a);

MomentReport total_moment(const LensDomain& domain, double a);

EnergyDecomposition boundary_energy(const LensDomain& domain, double a);

/// Half the integral of sigma : e over the punctured lens; the
/// divergence-theorem counterpart of boundary_energy().energy().
double area_energy(const LensDomain& domain, double a);

/// Signed circle-arc integrals of F2, outer arc clockwise and inner arc
/// anticlockwise; the resultant on the ball arcs is minus their sum.
double force_closed_form_outer(const LensDomain& domain, double a);
double force_closed_form_inner(const LensDomain& domain, double a);
double force_closed_form(const LensDomain& domain, double a);

double moment_closed_form_outer(const LensDomain& domain, double a);
double moment_closed_form_inner(const LensDomain& domain, double a);
double moment_closed_form(const LensDomain& domain, double a);

/// Antiderivative values of the V integrals. The *_alt variants evaluate the
/// published expressions, which differ from the quadrature in the sign of the
/// geometric sin 2theta term; the primary forms are the ones the library
/// trusts (they agree with direct quadrature and with the area integral).
double energy_closed_form_V1(const LensDomain& domain, double a);
double energy_closed_form_V2(const LensDomain& domain, double a);
double energy_closed_form_V1_alt(const LensDomain& domain, double a);
double energy_closed_form_V2_alt(const LensDomain& domain, double a);

/// Nominal a->0 couple 4 (R^2 - 1) pi, reported for comparison only.
double couple_limit_nominal(double R);

/// Default geometric sequence a_n = 0.4 * 2^-n.
std::vector<double> default_a_sequence(int count = 9);

LimitReport limit_report(const LensDomain& domain, const std::vector<double>& a_sequence);

}  // namespace lens::integrals
