#include "lenselast/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace lens::numerics {

namespace {

// Gauss-Kronrod 15(7) pair on [-1, 1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kKronrodWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss weights for the embedded 7-point rule (odd Kronrod nodes).
constexpr double kGaussWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Interval {
  double lo, hi;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Interval& a, const Interval& b) const { return a.error < b.error; }
};

Interval evaluate(const std::function<double(double)>& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double x = mid + half * kKronrodNodes[i];
    const double y = f(x);
    if (!std::isfinite(y)) throw EvaluationError("integrand is non-finite", x);
    kronrod += kKronrodWeights[i] * y;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * y;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double derivative(const std::function<double(double)>& f, double x, int order,
                  const DiffConfig& cfg) {
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  if (!(cfg.base_step > 0.0)) throw std::invalid_argument("base_step must be positive");
  if (cfg.richardson_levels < 1) throw std::invalid_argument("richardson_levels must be >= 1");

  const double scale = std::max(1.0, std::abs(x));
  const double h0 = cfg.base_step * scale;
  const int levels = cfg.richardson_levels;

  auto sample = [&](double xs) {
    const double y = f(xs);
    if (!std::isfinite(y)) throw EvaluationError("function value is non-finite", xs);
    return y;
  };

  std::vector<double> row(levels);
  for (int i = 0; i < levels; ++i) {
    const double h = h0 / double(1 << i);
    double d;
    if (order == 1) {
      d = (sample(x + h) - sample(x - h)) / (2.0 * h);
    } else {
      d = (sample(x + h) - 2.0 * sample(x) + sample(x - h)) / (h * h);
    }
    // Richardson update in place; both stencils have even error expansions.
    double prev = row[0];
    row[0] = d;
    double factor = 4.0;
    for (int j = 1; j <= i; ++j) {
      const double tmp = row[j];
      row[j] = (factor * row[j - 1] - prev) / (factor - 1.0);
      prev = tmp;
      factor *= 4.0;
    }
  }
  return row[levels - 1];
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    const QuadConfig& cfg) {
  if (!(lo <= hi)) throw std::invalid_argument("integrate_1d requires lo <= hi");
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be positive");
  if (lo == hi) return 0.0;

  std::priority_queue<Interval, std::vector<Interval>, ByError> queue;
  queue.push(evaluate(f, lo, hi));
  double total = queue.top().value;
  double total_err = queue.top().error;
  int used = 1;

  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (used >= cfg.max_subdivisions) {
      throw ConvergenceError("integrate_1d: subdivision budget exhausted", total, total_err);
    }
    Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Interval left = evaluate(f, worst.lo, mid);
    Interval right = evaluate(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++used;
  }
  return total;
}

double integrate_2d(const std::function<double(double, double)>& f, const Region2& region,
                    const QuadConfig& cfg) {
  if (!region.contains) throw std::invalid_argument("integrate_2d requires a region predicate");
  if (!(region.x_lo <= region.x_hi) || !(region.y_lo <= region.y_hi))
    throw std::invalid_argument("integrate_2d requires a proper bounding box");

  QuadConfig inner = cfg;
  inner.abs_tol = 0.1 * cfg.abs_tol;
  inner.rel_tol = 0.1 * cfg.rel_tol;
  auto column = [&](double x) {
    return integrate_1d(
        [&](double y) { return region.contains(x, y) ? f(x, y) : 0.0; },
        region.y_lo, region.y_hi, inner);
  };
  return integrate_1d(column, region.x_lo, region.x_hi, cfg);
}

std::vector<double> fit_power_series(const std::vector<std::pair<double, double>>& samples,
                                     const std::vector<int>& powers) {
  const std::size_t n = samples.size();
  const std::size_t m = powers.size();
  if (n < m) throw std::invalid_argument("fit_power_series: more basis terms than samples");
  for (const auto& [a, v] : samples) {
    if (!(a > 0.0)) throw std::invalid_argument("fit_power_series: abscissae must be positive");
    (void)v;
  }

  // Design matrix with unit-norm columns: the geometric a-sequences used for
  // limit fits make the raw powers span many orders of magnitude.
  std::vector<std::vector<double>> A(n, std::vector<double>(m));
  std::vector<double> b(n);
  std::vector<double> col_scale(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      A[i][j] = std::pow(samples[i].first, powers[j]);
      col_scale[j] += A[i][j] * A[i][j];
    }
    b[i] = samples[i].second;
  }
  for (std::size_t j = 0; j < m; ++j) {
    col_scale[j] = std::sqrt(col_scale[j]);
    if (col_scale[j] == 0.0) throw std::runtime_error("fit_power_series: zero basis column");
    for (std::size_t i = 0; i < n; ++i) A[i][j] /= col_scale[j];
  }

  // Householder QR, applied to b as we go.
  for (std::size_t j = 0; j < m; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += A[i][j] * A[i][j];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::runtime_error("fit_power_series: rank-deficient basis");
    const double alpha = (A[j][j] > 0.0) ? -norm : norm;
    std::vector<double> v(n, 0.0);
    v[j] = A[j][j] - alpha;
    for (std::size_t i = j + 1; i < n; ++i) v[i] = A[i][j];
    double vtv = 0.0;
    for (std::size_t i = j; i < n; ++i) vtv += v[i] * v[i];
    if (vtv > 0.0) {
      for (std::size_t cc = j; cc < m; ++cc) {
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i] * A[i][cc];
        const double f = 2.0 * dot / vtv;
        for (std::size_t i = j; i < n; ++i) A[i][cc] -= f * v[i];
      }
      double dot = 0.0;
      for (std::size_t i = j; i < n; ++i) dot += v[i] * b[i];
      const double f = 2.0 * dot / vtv;
      for (std::size_t i = j; i < n; ++i) b[i] -= f * v[i];
    }
  }
  std::vector<double> coeff(m);
  for (std::size_t r = m; r-- > 0;) {
    double s = b[r];
    for (std::size_t cc = r + 1; cc < m; ++cc) s -= A[r][cc] * coeff[cc];
    coeff[r] = s / A[r][r];
  }
  for (std::size_t j = 0; j < m; ++j) coeff[j] /= col_scale[j];
  return coeff;
}

LimitEstimate fit_singular_limit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("fit_singular_limit needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 0.0))
      throw std::invalid_argument("fit_singular_limit: all a must be positive");
    if (i > 0 && !(samples[i].first < samples[i - 1].first))
      throw std::invalid_argument("fit_singular_limit: a must be strictly decreasing");
  }
  const std::vector<double> coeff = fit_power_series(samples, {-1, 0});
  LimitEstimate est;
  est.singular_coeff = coeff[0];
  est.constant_term = coeff[1];
  double ss = 0.0;
  for (const auto& [a, v] : samples) {
    const double r = v - (coeff[0] / a + coeff[1]);
    ss += r * r;
  }
  est.residual = std::sqrt(ss / double(samples.size()));
  return est;
}

}  // namespace lens::numerics
