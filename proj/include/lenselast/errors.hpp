#pragma once

#include <stdexcept>
#include <string>

namespace lens {

/// Field or geometry evaluated at a point where it is not defined
/// (the cusp, the x1 = 0 axis, theta = +-pi/2).
class SingularPointError : public std::domain_error {
public:
  explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical kernel hit a non-finite value; carries the offending abscissa.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, double abscissa)
      : std::runtime_error(what + " at abscissa " + std::to_string(abscissa)),
        abscissa_(abscissa) {}
  double abscissa() const { return abscissa_; }

private:
  double abscissa_;
};

/// Adaptive quadrature ran out of subdivisions; carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_(best_estimate), err_(error_estimate) {}
  double best_estimate() const { return best_; }
  double error_estimate() const { return err_; }

private:
  double best_;
  double err_;
};

}  // namespace lens
