#pragma once

#include <optional>

#include "lenselast/fields.hpp"
#include "lenselast/numerics.hpp"

namespace lens::elasticity {

using fields::Point2;
using fields::SymTensor2;
using fields::Vec2;

/// Evaluation point together with the material constant k >= 0.
struct MaterialPoint {
  Point2 point;
  double k = 0.0;
};

struct LameSample {
  double mu = 0.0;
  double lambda = 0.0;
  double lambda_plus_2mu = 0.0;
  std::optional<double> poisson;  // defined iff lambda + mu != 0
};

/// Airy potential value and its analytic Hessian. The stored potential is the
/// real scalar Phi = 2 theta (r^2 - k); stress recovery uses
/// sigma_11 = -Phi,22, sigma_12 = Phi,12, sigma_22 = -Phi,11.
struct AirySample {
  double value = 0.0;
  SymTensor2 hessian;
};

/// Per-identity Lame recovery from stress/strain ratios; each identity is
/// defined only where its denominator is nonzero.
struct RatioLame {
  std::optional<double> mu;
  std::optional<double> lambda_plus_mu;
  std::optional<double> lambda_plus_2mu;
  std::optional<double> lambda;
};

struct EllipticityScan {
  double min_margin = 0.0;
  double argmin_c = 0.0;
  double argmin_theta = 0.0;
  Point2 argmin;
  double k_threshold = 0.0;
};

AirySample airy(const MaterialPoint& mp);

SymTensor2 stress(const MaterialPoint& mp);

LameSample lame(const MaterialPoint& mp);

/// Lambda = (e11 - e22)/e12 = -4 x1 x2 / (x1^2 - x2^2); undefined on |x1| = |x2|.
double lambda_coefficient(const Point2& p);

/// sigma - (lambda tr(e) I + 2 mu e); zero wherever the Lame fields exist.
SymTensor2 constitutive_residual(const MaterialPoint& mp);

RatioLame lame_from_ratios(const SymTensor2& stress, const SymTensor2& strain);

/// Finite-difference divergence of the stress field.
Vec2 equilibrium_residual(const MaterialPoint& mp, const numerics::DiffConfig& cfg = {});

/// Phi,11 - Phi,22 - Lambda Phi,12 from the analytic Hessian.
double airy_pde_residual(const MaterialPoint& mp);

/// lambda + 2 mu margin at the point (c, theta) of the family, written as
/// 4 theta cot(theta) (sin(2 theta)/(2 theta) - 1) + k / c^2.
double ellipticity_margin(double c, double theta, double k);

/// Grid scan of the margin over (c, theta) in [1, R] x (-pi/2, pi/2) and
/// bisection for the smallest k that makes the grid minimum positive.
EllipticityScan ellipticity_scan(const geometry::LensDomain& domain, int grid);

/// J = sum_{j=1..m} (r^2)^j / j! + k.
double general_J(const Point2& p, int m, double k);

/// Magnitude of the (m+1)-th derivative of J in z at fixed conjugate,
/// evaluated by high-order finite differences; zero up to roundoff.
double general_J_derivative_check(int m, double k, const numerics::DiffConfig& cfg = {});

}  // namespace lens::elasticity
