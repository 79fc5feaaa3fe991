#pragma once

// Positive densities on (0, 1) together with the analytic shape metadata
// (monotonicity, convexity, endpoint limits) that zero-pattern predictions
// are keyed on.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oscilla {

enum class Family { beta, kuttner, power, gegenbauer, piecewise_constant, custom };

enum class Monotonicity { increasing, decreasing, constant, neither };

/// `linear` marks functions that are both convex and concave. Rules that need
/// f' in the general case must treat it as neither.
enum class Convexity { convex, concave, linear, neither };

std::string_view to_string(Family f);
std::string_view to_string(Monotonicity m);
std::string_view to_string(Convexity c);
Family family_from_string(std::string_view name);

struct ShapeReport {
  Monotonicity monotonicity = Monotonicity::neither;
  Convexity convexity = Convexity::neither;
  /// False only for step functions with rational breakpoints (and constants).
  bool general_case = true;
  /// lim f(t) as t -> 0+, possibly +inf.
  double f_at_0 = 0.0;
  /// lim f(t) as t -> 1-, possibly +inf (the constant M).
  double f_at_1 = 0.0;
  /// lim -f'(t) as t -> 0+ (the constant L). Empty when f is not
  /// non-increasing near 0, i.e. when -f'(0+) would be negative.
  std::optional<double> neg_deriv_at_0;
  /// Shape of -f'(t), when known.
  std::shared_ptr<const ShapeReport> deriv_shape;
  bool numerically_inferred = false;
  bool low_confidence = false;

  bool increasing() const { return monotonicity == Monotonicity::increasing; }
  bool decreasing() const { return monotonicity == Monotonicity::decreasing; }
  bool strictly_convex() const { return convexity == Convexity::convex; }
  bool strictly_concave() const { return convexity == Convexity::concave; }
  bool weakly_convex() const {
    return convexity == Convexity::convex || convexity == Convexity::linear;
  }
};

/// f(t, u) with u == 1 - t (accurate near t = 1).
using DensityKernel = std::function<double(double t, double u)>;

class DensityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonIntegrableError : public DensityError {
 public:
  using DensityError::DensityError;
};

class Density {
 public:
  double operator()(double t) const { return kernel_(t, 1.0 - t); }
  double at(double t, double u) const { return kernel_(t, u); }

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const ShapeReport& shape() const { return shape_; }
  bool reflected() const { return reflected_; }

  /// Interior jump points, used as quadrature cuts.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Coefficients c_n of f(t) = sum c_n t^n when f is one of the tabulated
  /// polynomial densities.
  const std::optional<std::vector<double>>& polynomial() const { return polynomial_; }

  /// "family:p1,p2,..." for named families, prefixed with "reflect:" when
  /// reflected.
  std::string describe() const;

  const DensityKernel& kernel() const { return kernel_; }

 private:
  friend class DensityBuilder;
  Density() = default;

  DensityKernel kernel_;
  Family family_ = Family::custom;
  std::vector<double> params_;
  ShapeReport shape_;
  bool reflected_ = false;
  std::vector<double> breakpoints_;
  std::optional<std::vector<double>> polynomial_;
  std::string name_;
};

/// beta: (alpha, beta), f = (1-t)^(alpha-1) t^(beta-1) / B(alpha, beta).
/// kuttner: (delta, lambda), f = (1 - t^delta)^lambda.
/// power: (a), f = t^(-a).
/// gegenbauer: (nu), f = (1 - t^2)^(nu - 1/2).
/// piecewise_constant: (b_0, ..., b_n, level_1, ..., level_n).
Density make_density(Family family, std::span<const double> params);
Density make_density(Family family, std::initializer_list<double> params);

/// Step density with floating breakpoints; always in the general case.
Density make_piecewise_constant(std::vector<double> breakpoints, std::vector<double> levels);

/// Step density with exact rational breakpoints (num, den); exceptional case.
Density make_piecewise_constant_rational(std::vector<std::pair<long, long>> breakpoints,
                                         std::vector<double> levels);

/// User-supplied density. `general_case` is declared by the caller; the shape
/// report is inferred numerically.
Density make_custom(DensityKernel kernel, bool general_case, std::string name = "custom");
Density make_custom(std::function<double(double)> f, bool general_case,
                    std::string name = "custom");

/// f(t) = a - b t^2 with 0 < b <= a.
Density make_quadratic(double a, double b);

/// t -> f(1 - t).
Density reflect(const Density& d);

ShapeReport shape_report(const Density& d);

/// Sampled finite-difference shape inference on `grid` interior points.
ShapeReport infer_shape(const std::function<double(double)>& f, int grid = 10000);

/// Parses "family:p1,p2,...". Piecewise densities use
/// "piecewise_constant:b0,...,bn;l1,...,ln"; breakpoints written as p/q are
/// taken as exact rationals.
Density parse_density_spec(std::string_view spec);

}  // namespace oscilla
