#pragma once

#include <functional>
#include <stdexcept>

namespace wpvol {

// Raised when an adaptive quadrature misses its error target.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b] that throws ToleranceError when the
// error estimate exceeds abs_tol. b may be +infinity. Oscillatory
// integrands should pass an initial partition of about one piece per half period.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     int initial_pieces = 1);

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace wpvol
