#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lenselast/errors.hpp"

namespace lens::numerics {

struct DiffConfig {
  double base_step = 1e-5;  // scaled by max(1, |x|)
  int richardson_levels = 3;
};

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

/// Result of a least-squares fit of v(a) ~ singular_coeff / a + constant_term.
struct LimitEstimate {
  double singular_coeff = 0.0;
  double constant_term = 0.0;
  double residual = 0.0;  // rms of fit residuals
};

/// Central-difference derivative of order 1 or 2, refined by Richardson
/// extrapolation. Throws EvaluationError if f is non-finite on the stencil.
double derivative(const std::function<double(double)>& f, double x, int order,
                  const DiffConfig& cfg = {});

/// Adaptive Gauss-Kronrod quadrature on [lo, hi]. Throws ConvergenceError
/// with the best estimate attached if the subdivision budget is exhausted.
double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    const QuadConfig& cfg = {});

/// Integration region: membership predicate plus bounding box.
struct Region2 {
  std::function<bool(double, double)> contains;
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
};

/// Tensor-product adaptive quadrature of f over the region predicate.
double integrate_2d(const std::function<double(double, double)>& f, const Region2& region,
                    const QuadConfig& cfg = {});

/// Ordinary least squares of value ~ A/a + B over (a, value) samples.
/// Requires at least 3 samples with strictly decreasing positive a.
LimitEstimate fit_singular_limit(const std::vector<std::pair<double, double>>& samples);

/// General least-squares fit in the basis {a^p : p in powers}; returns the
/// coefficients in the order of `powers`. Used for limits whose smooth
/// corrections go beyond the two-term A/a + B model.
std::vector<double> fit_power_series(const std::vector<std::pair<double, double>>& samples,
                                     const std::vector<int>& powers);

}  // namespace lens::numerics
