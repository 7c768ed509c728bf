#include "lenselast/elasticity.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace lens::elasticity {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;

struct Polar {
  double r2;
  double theta;
};

Polar polar_of(const Point2& p, const char* who) {
  const double r2 = p.x1 * p.x1 + p.x2 * p.x2;
  if (r2 == 0.0) throw lens::SingularPointError(std::string(who) + ": singular at r = 0");
  return {r2, std::atan2(p.x2, p.x1)};
}

// theta cot(theta), continued through the removable singularity at 0.
double theta_cot_theta(double theta) {
  if (std::abs(theta) < 1e-4) {
    const double t2 = theta * theta;
    return 1.0 - t2 / 3.0 - t2 * t2 / 45.0;
  }
  return theta * std::cos(theta) / std::sin(theta);
}

// sin(2 theta) / (2 theta), continued through 0.
double sinc_two_theta(double theta) {
  const double t = 2.0 * theta;
  if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

}  // namespace

SymTensor2 stress(const MaterialPoint& mp) {
  const auto [r2, theta] = polar_of(mp.point, "stress");
  const double s = (1.0 + mp.k / r2) * std::sin(2.0 * theta);
  const double c = (1.0 + mp.k / r2) * std::cos(2.0 * theta);
  SymTensor2 sigma;
  sigma.t11 = -2.0 * (2.0 * theta + s);
  sigma.t22 = 2.0 * (-2.0 * theta + s);
  sigma.t12 = 2.0 * c;
  return sigma;
}

AirySample airy(const MaterialPoint& mp) {
  const auto [r2, theta] = polar_of(mp.point, "airy");
  const double x1 = mp.point.x1;
  const double x2 = mp.point.x2;
  const double k = mp.k;
  AirySample out;
  out.value = 2.0 * theta * (r2 - k);
  const double r4 = r2 * r2;
  out.hessian.t11 = 4.0 * theta - 4.0 * x1 * x2 * (r2 + k) / r4;
  out.hessian.t22 = 4.0 * theta + 4.0 * x1 * x2 * (r2 + k) / r4;
  out.hessian.t12 = 2.0 * (x1 * x1 - x2 * x2) * (r2 + k) / r4;
  return out;
}

LameSample lame(const MaterialPoint& mp) {
  const auto [r2, theta] = polar_of(mp.point, "lame");
  if (std::abs(std::abs(theta) - kHalfPi) < 1e-14)
    throw lens::SingularPointError("lame: singular at theta = +-pi/2");
  const double ct = std::cos(theta);
  LameSample out;
  out.mu = 4.0 * (r2 + mp.k) / r2 * ct * ct;
  out.lambda = -4.0 * theta_cot_theta(theta) - out.mu;
  out.lambda_plus_2mu = out.lambda + 2.0 * out.mu;
  const double lam_plus_mu = out.lambda + out.mu;
  if (std::abs(lam_plus_mu) > 1e-12 * (std::abs(out.lambda) + out.mu + 1.0))
    out.poisson = 0.5 * out.lambda / lam_plus_mu;
  return out;
}

double lambda_coefficient(const Point2& p) {
  const double den = p.x1 * p.x1 - p.x2 * p.x2;
  if (std::abs(den) <= 1e-14 * (p.x1 * p.x1 + p.x2 * p.x2))
    throw std::domain_error("lambda_coefficient: e12 vanishes on |x1| = |x2|");
  return -4.0 * p.x1 * p.x2 / den;
}

SymTensor2 constitutive_residual(const MaterialPoint& mp) {
  const SymTensor2 sigma = stress(mp);
  const SymTensor2 e = fields::strain(mp.point);
  const LameSample lm = lame(mp);
  const double trace = e.t11 + e.t22;
  SymTensor2 res;
  res.t11 = sigma.t11 - (lm.lambda * trace + 2.0 * lm.mu * e.t11);
  res.t12 = sigma.t12 - 2.0 * lm.mu * e.t12;
  res.t22 = sigma.t22 - (lm.lambda * trace + 2.0 * lm.mu * e.t22);
  return res;
}

RatioLame lame_from_ratios(const SymTensor2& sigma, const SymTensor2& e) {
  constexpr double kDenTol = 1e-14;
  RatioLame out;
  if (std::abs(e.t12) > kDenTol) out.mu = 0.5 * sigma.t12 / e.t12;
  const double trace = e.t11 + e.t22;
  if (std::abs(trace) > kDenTol) out.lambda_plus_mu = 0.5 * (sigma.t11 + sigma.t22) / trace;
  const double sq = e.t11 * e.t11 - e.t22 * e.t22;
  if (std::abs(sq) > kDenTol) {
    out.lambda_plus_2mu = (sigma.t11 * e.t11 - sigma.t22 * e.t22) / sq;
    out.lambda = (sigma.t22 * e.t11 - sigma.t11 * e.t22) / sq;
  }
  return out;
}

Vec2 equilibrium_residual(const MaterialPoint& mp, const numerics::DiffConfig& cfg) {
  const double r = std::hypot(mp.point.x1, mp.point.x2);
  const double h_max = cfg.base_step * std::max(1.0, std::max(std::abs(mp.point.x1), std::abs(mp.point.x2)));
  if (r <= 0.01)
    throw lens::SingularPointError("equilibrium_residual: stencil too close to r = 0");
  if (mp.point.x1 <= 2.0 * h_max)
    throw EvaluationError("equilibrium_residual: stencil leaves the half-plane", mp.point.x1);

  const double k = mp.k;
  auto s = [k](double x1, double x2) { return stress({{x1, x2}, k}); };
  const Point2 p = mp.point;
  Vec2 res;
  res.x1 = numerics::derivative([&](double x) { return s(x, p.x2).t11; }, p.x1, 1, cfg) +
           numerics::derivative([&](double y) { return s(p.x1, y).t12; }, p.x2, 1, cfg);
  res.x2 = numerics::derivative([&](double x) { return s(x, p.x2).t12; }, p.x1, 1, cfg) +
           numerics::derivative([&](double y) { return s(p.x1, y).t22; }, p.x2, 1, cfg);
  return res;
}

double airy_pde_residual(const MaterialPoint& mp) {
  const AirySample a = airy(mp);
  const double lam = lambda_coefficient(mp.point);
  return a.hessian.t11 - a.hessian.t22 - lam * a.hessian.t12;
}

double ellipticity_margin(double c, double theta, double k) {
  if (!(c > 0.0)) throw std::invalid_argument("ellipticity_margin: c must be positive");
  return 4.0 * theta_cot_theta(theta) * (sinc_two_theta(theta) - 1.0) + k / (c * c);
}

EllipticityScan ellipticity_scan(const geometry::LensDomain& domain, int grid) {
  if (grid < 32) throw std::invalid_argument("ellipticity_scan: grid must be at least 32");
  if (!(domain.R > 1.0)) throw std::invalid_argument("ellipticity_scan: R must exceed 1");

  // Interior theta nodes only; the margin is undefined at theta = +-pi/2.
  auto scan_min = [&](double k, double* c_at = nullptr, double* theta_at = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
      const double c = 1.0 + (domain.R - 1.0) * double(i) / double(grid - 1);
      for (int j = 0; j < grid; ++j) {
        const double theta = -kHalfPi + kPi * double(j + 1) / double(grid + 1);
        const double margin = ellipticity_margin(c, theta, k);
        if (margin < best) {
          best = margin;
          if (c_at) *c_at = c;
          if (theta_at) *theta_at = theta;
        }
      }
    }
    return best;
  };

  EllipticityScan out;
  out.min_margin = scan_min(domain.k, &out.argmin_c, &out.argmin_theta);
  out.argmin = geometry::circle_point({out.argmin_c}, out.argmin_theta);

  // Smallest k with positive grid minimum, by bisection.
  double lo = 0.0, hi = 1.0;
  while (scan_min(hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (scan_min(mid) > 0.0 ? hi : lo) = mid;
  }
  out.k_threshold = hi;
  return out;
}

double general_J(const Point2& p, int m, double k) {
  if (m < 1) throw std::invalid_argument("general_J: m must be a positive integer");
  const double r2 = p.x1 * p.x1 + p.x2 * p.x2;
  double term = 1.0;
  double sum = k;
  for (int j = 1; j <= m; ++j) {
    term *= r2 / double(j);
    sum += term;
  }
  return sum;
}

double general_J_derivative_check(int m, double k, const numerics::DiffConfig& cfg) {
  if (m < 1) throw std::invalid_argument("general_J_derivative_check: m must be positive");
  using complexd = std::complex<double>;
  const int n = m + 1;
  const double h = std::max(0.25, cfg.base_step);

  const Point2 base_points[] = {{1.0, 1.0}, {2.0, 0.5}, {0.7, 1.3}};
  double worst = 0.0;
  for (const Point2& p : base_points) {
    const complexd z0(p.x1, p.x2);
    const complexd zbar = std::conj(z0);  // held fixed: z and its conjugate are independent here
    auto J = [&](const complexd& z) {
      complexd term = 1.0;
      complexd sum = k;
      for (int j = 1; j <= m; ++j) {
        term *= z * zbar / double(j);
        sum += term;
      }
      return sum;
    };
    // n-th central difference: the (n+1)-point stencil annihilates the
    // degree-m polynomial exactly, so the result is pure roundoff.
    complexd acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= n; ++i) {
      const double offset = 0.5 * n - double(i);
      acc += ((i % 2 == 0) ? binom : -binom) * J(z0 + offset * h);
      binom = binom * double(n - i) / double(i + 1);
    }
    worst = std::max(worst, std::abs(acc) / std::pow(h, n));
  }
  return worst;
}

}  // namespace lens::elasticity
