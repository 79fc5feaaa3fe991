#pragma once

// Panel quadrature on the unit interval.
//
// Interior panels use a 20-point Gauss-Legendre rule checked against the
// 10-point rule, bisecting on failure. Panels touching t = 0 or t = 1 use the
// double-exponential (tanh-sinh) rule so that algebraic endpoint
// singularities are integrated without family-specific code. Integrands
// receive both t and u = 1 - t, with u computed from the distance to the
// right endpoint so that factors like (1 - t)^p stay accurate near t = 1.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace oscilla::quad {

/// Integrand g(t, u) with u == 1 - t.
using Integrand = std::function<double(double t, double u)>;

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

/// Raised when the subdivision budget is exhausted. Carries the estimate
/// accumulated so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial, double error)
      : std::runtime_error(what), partial_(partial), error_(error) {}
  double partial_estimate() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double partial_;
  double error_;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Integrates g over [0, 1], split at the sorted interior points in `cuts`.
/// `tol` is an absolute target for the whole integral.
Result integrate_unit(const Integrand& g, std::span<const double> cuts, double tol);

/// Double-exponential rule on [a, b] with 0 <= a < b <= 1.
Result tanh_sinh(const Integrand& g, double a, double b, double tol);

/// Adaptive Gauss-Legendre on [a, b] with 0 <= a < b <= 1.
Result gauss_legendre(const Integrand& g, double a, double b, double tol);

}  // namespace oscilla::quad
